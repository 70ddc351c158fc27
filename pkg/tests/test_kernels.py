"""Both kernel backends must agree, and the env flag must select between them."""

import os
import subprocess
import sys

import numpy as np
import pytest

from definetti import kernels
from definetti.combinatorics import log_factorials
from definetti.families import generate, iid, point_mass, polya, random_dirichlet

NB = kernels.get("numba")
NP = kernels.get("numpy")
LF = log_factorials(600)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get("cuda")


@pytest.mark.parametrize("fam", [iid(0.3), point_mass(frac=0.5), polya(2, 5), random_dirichlet(9)],
                         ids=lambda f: f.label)
@pytest.mark.parametrize("n", [1, 7, 64, 300])
def test_weight_pmfs_agree(fam, n):
    mass = generate(fam, n).mass
    for k in sorted({1, max(1, n // 3), n}):
        a, b = NB.log_marginal(mass, k, LF), NP.log_marginal(mass, k, LF)
        np.testing.assert_array_equal(np.isinf(a), np.isinf(b))
        np.testing.assert_allclose(a[np.isfinite(a)], b[np.isfinite(b)], rtol=1e-12, atol=1e-12)
        a2, b2 = NB.log_mixture(mass, k), NP.log_mixture(mass, k)
        np.testing.assert_array_equal(np.isinf(a2), np.isinf(b2))
        np.testing.assert_allclose(a2[np.isfinite(a2)], b2[np.isfinite(b2)], rtol=1e-12, atol=1e-12)
        d1, t1 = NB.divergence_tv(a, a2, LF)
        d2, t2 = NP.divergence_tv(b, b2, LF)
        assert d1 == pytest.approx(d2, abs=1e-12)
        assert t1 == pytest.approx(t2, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 33, 90])
def test_tables_agree(n):
    np.testing.assert_allclose(NB.cmi_table(n, LF), NP.cmi_table(n, LF), rtol=0, atol=1e-13)
    np.testing.assert_allclose(NB.cond_div_table(n, LF), NP.cond_div_table(n, LF), rtol=0, atol=1e-13)


def test_scalars_agree():
    for n, ell, m in [(4, 2, 1), (100, 50, 9), (257, 3, 100), (10, 0, 3), (10, 10, 3)]:
        assert NB.cmi(n, ell, m, LF) == pytest.approx(NP.cmi(n, ell, m, LF), abs=1e-13)
        assert NB.cond_div(n, ell, m, LF) == pytest.approx(NP.cond_div(n, ell, m, LF), abs=1e-13)
    for p in (0.0, 1e-300, 0.3, 1.0):
        assert NB.binary_entropy(p) == pytest.approx(NP.binary_entropy(p), abs=1e-16)


def test_absolute_continuity_flag():
    logq = np.array([0.0, -np.inf])
    logm = np.array([-np.inf, 0.0])
    for mod in (NB, NP):
        d, _ = mod.divergence_tv(logq, logm, LF)
        assert d == np.inf


@pytest.mark.parametrize("value,expected", [("numpy", "numpy"), ("numba", "numba")])
def test_env_flag_selects_backend(value, expected):
    env = dict(os.environ, DEFINETTI_BACKEND=value)
    out = subprocess.run([sys.executable, "-c", "import definetti; print(definetti.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_env_flag_rejects_garbage():
    env = dict(os.environ, DEFINETTI_BACKEND="fortran")
    out = subprocess.run([sys.executable, "-c", "import definetti"], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0 and "DEFINETTI_BACKEND" in out.stderr
