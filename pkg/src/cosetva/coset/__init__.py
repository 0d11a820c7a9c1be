from .core import *  # noqa: F401,F403
from .checks import *  # noqa: F401,F403
from .deform import *  # noqa: F401,F403
from .sigma import *  # noqa: F401,F403
from .quotient import *  # noqa: F401,F403
from .reconstruct import *  # noqa: F401,F403
from .psi import *  # noqa: F401,F403
