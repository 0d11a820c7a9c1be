import json
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva import _fockpy

fockc = pytest.importorskip("cosetva._fockc", reason="compiled extension not built")

parts = st.lists(st.tuples(st.integers(1, 4), st.integers(0, 2)), max_size=6)


def key_of(ps):
    return tuple(sorted(ps, key=lambda p: (-p[0], p[1])))


@given(parts, st.integers(1, 4), st.integers(0, 2))
def test_create_agrees(ps, n, i):
    key = key_of(ps)
    assert fockc.fock_create(key, n, i) == _fockpy.fock_create(key, n, i)


@given(parts, st.integers(1, 4))
def test_annihilate_and_degree_agree(ps, m):
    key = key_of(ps)
    assert list(fockc.fock_annihilate(key, m)) == _fockpy.fock_annihilate(key, m)
    assert fockc.fock_degree(key) == _fockpy.fock_degree(key)


@pytest.mark.parametrize("total,colors", [(0, 1), (5, 1), (4, 2), (3, 3)])
def test_partitions_agree(total, colors):
    assert list(fockc.colored_partitions(total, colors)) == _fockpy.colored_partitions(total, colors)


SCRIPT = """
import json
from cosetva._fock import BACKEND
from cosetva.latvoa import LatticeVOA
from cosetva.voacore import PlainView, check_jacobi
V = LatticeVOA.from_gram([[2, -1], [-1, 2]], 5)
r = check_jacobi(PlainView(V), V.e((1, 0)), V.e((0, -1)), V.e((-1, 1)), window=2)
print(json.dumps({"backend": BACKEND, "report": r.to_json()}, sort_keys=True))
"""


def test_end_to_end_reports_match():
    outs = []
    for pure in ("0", "1"):
        env = dict(os.environ, COSETVA_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
        outs.append(json.loads(res.stdout))
    assert [o["backend"] for o in outs] == ["cython", "python"]
    assert outs[0]["report"] == outs[1]["report"]
