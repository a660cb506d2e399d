import copy
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from affcell import _kernels_py as py

ck = pytest.importorskip("affcell._ckernels")

poly = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5).filter(bool), max_size=5)
helt = st.dictionaries(st.integers(0, 30), poly.filter(bool), max_size=6)


@settings(max_examples=80, deadline=None)
@given(poly, poly, st.integers(-3, 3), st.integers(-4, 4))
def test_padd_pmul(p, q, scale, shift):
    a, b = dict(p), dict(p)
    py.padd(a, q, scale, shift)
    ck.padd(b, q, scale, shift)
    assert a == b
    assert py.pmul(p, q) == ck.pmul(p, q)


@settings(max_examples=80, deadline=None)
@given(helt, poly, helt)
def test_axpy(dst, coeff, src):
    a, b = copy.deepcopy(dst), copy.deepcopy(dst)
    py.axpy(a, coeff, src)
    ck.axpy(b, coeff, src)
    assert a == b


def test_structural_kernels_agree():
    from affcell.coxeter import CoxeterSystem
    from affcell.klbasis import KLCache

    cache = KLCache(CoxeterSystem("b2", (3, 2, 1)), 7).build()
    b = cache.ball
    rng = __import__("random").Random(1)
    for _ in range(40):
        h = {rng.randrange(b.layer_start[6]): {rng.randint(-4, 4): rng.randint(-3, 3) or 1} for _ in range(4)}
        for s in range(3):
            assert py.gen_mult(h, b.lmul[s], b.length, 2) == ck.gen_mult(h, b.lmul[s], b.length, 2)
        assert py.t_to_c(h, cache.C) == ck.t_to_c(h, cache.C)
        hc = py.t_to_c(h, cache.C)
        assert py.c_to_t(hc, cache.C) == ck.c_to_t(hc, cache.C) == h


def test_selector_env():
    code = "from affcell import kernels; print(kernels.IMPLEMENTATION)"
    env = dict(os.environ, AFFCELL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("AFFCELL_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
