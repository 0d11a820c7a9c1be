"""Fock key kernels, compiled when the extension is available."""

import os

BACKEND = "python"

if os.environ.get("COSETVA_PURE_PYTHON") != "1":
    try:
        from ._fockc import colored_partitions, fock_annihilate, fock_create, fock_degree

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._fockpy import colored_partitions, fock_annihilate, fock_create, fock_degree

__all__ = ["BACKEND", "fock_create", "fock_annihilate", "fock_degree", "colored_partitions"]
