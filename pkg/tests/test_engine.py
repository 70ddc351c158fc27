import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from definetti import engine
from definetti.families import generate, iid, point_mass, polya, random_dirichlet, uniform_counts
from definetti.info import AbsoluteContinuityViolation
from definetti.oracle import enumerate_joint, oracle_marginal
from definetti.types import MixingMeasure, make_count_pmf

LOG2 = math.log(2)


def delta(n, ell):
    mass = np.zeros(n + 1)
    mass[ell] = 1.0
    return make_count_pmf(n, mass)


def mp_binary_entropy(p):
    r = mp.mpf(0)
    if p > 0:
        r -= p * mp.log(p)
    if p < 1:
        r -= (1 - p) * mp.log(1 - p)
    return r


def mp_cmi(n, ell, m):
    """Closed form with exact integer binomials at 40 digits."""
    with mp.workdps(40):
        total = mp_binary_entropy(mp.mpf(ell) / n)
        denom = math.comb(n, m)
        for j in range(m + 1):
            num = math.comb(ell, j) * math.comb(n - ell, m - j)
            if num:
                total -= mp.mpf(num) / denom * mp_binary_entropy(mp.mpf(ell - j) / (n - m))
        return total


# ---------------------------------------------------------------- marginal / mixture

def test_marginal_single_one():
    w = engine.marginal_weight_pmf(delta(2, 1), 1)
    np.testing.assert_allclose(w.perseq, [0.5, 0.5], atol=1e-16)


def test_marginal_of_iid_is_iid():
    n, k, p = 16, 5, 0.3
    w = engine.marginal_weight_pmf(generate(iid(p), n), k)
    s = np.arange(k + 1)
    np.testing.assert_allclose(w.perseq, p ** s * (1 - p) ** (k - s), rtol=1e-12, atol=1e-12)


def test_marginal_delta2_matches_enumeration():
    pi = delta(4, 2)
    w = engine.marginal_weight_pmf(pi, 2)
    np.testing.assert_allclose(w.perseq, [1 / 6, 1 / 3, 1 / 6], atol=1e-15)
    q = oracle_marginal(enumerate_joint(pi), [1, 2])
    np.testing.assert_allclose(w.sequence_probs(), q, atol=1e-15)


def test_marginal_rejects_bad_k():
    with pytest.raises(ValueError):
        engine.marginal_weight_pmf(delta(4, 2), 5)
    with pytest.raises(ValueError):
        engine.marginal_weight_pmf(delta(4, 2), 0)


def test_mixing_measure_examples():
    mu = engine.mixing_measure(delta(5, 0))
    assert mu.atoms[0] == 1.0 and mu.grid[0] == 0.0
    mu = engine.mixing_measure(make_count_pmf(4, np.array([1, 4, 6, 4, 1]) / 16))
    np.testing.assert_array_equal(mu.grid, [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(mu.atoms, np.array([1, 4, 6, 4, 1]) / 16)
    mu = engine.mixing_measure(generate(uniform_counts(), 7))
    np.testing.assert_allclose(mu.atoms, 1 / 8)


@pytest.mark.parametrize("atoms,k,expected", [
    ([0, 1, 0], 2, [0.25, 0.25, 0.25]),
    ([1, 0, 0], 3, [1, 0, 0, 0]),
    ([0.5, 0, 0.5], 2, [0.5, 0, 0.5]),
])
def test_mixture_examples(atoms, k, expected):
    w = engine.mixture_weight_pmf(MixingMeasure(len(atoms) - 1, atoms), k)
    np.testing.assert_allclose(w.perseq, expected, atol=1e-15)


def test_mixture_allows_k_beyond_grid():
    w = engine.mixture_weight_pmf(MixingMeasure(2, [0, 1, 0]), 6)
    np.testing.assert_allclose(w.perseq, 0.5 ** 6, rtol=1e-14)


# ---------------------------------------------------------------- divergence / tv

BANK = [iid(0.3), iid(0.5), point_mass(frac=0.5), polya(1, 1), polya(2, 5), uniform_counts(),
        random_dirichlet(3)]


@pytest.mark.parametrize("fam", BANK, ids=lambda f: f.label)
@pytest.mark.parametrize("n", [2, 9, 40, 200])
def test_k1_divergence_vanishes(fam, n):
    assert engine.divergence_to_mixture(generate(fam, n), 1) <= 1e-12


@pytest.mark.parametrize("n", [3, 17, 100])
def test_degenerate_laws_have_zero_divergence(n):
    for ell in (0, n):
        for k in (1, 2, n):
            assert engine.divergence_to_mixture(delta(n, ell), k) == 0.0
            assert engine.tv_to_mixture(delta(n, ell), k) == 0.0


def test_single_one_pair():
    pi = delta(2, 1)
    assert engine.divergence_to_mixture(pi, 2) == pytest.approx(LOG2, abs=1e-15)
    assert engine.tv_to_mixture(pi, 2) == pytest.approx(1.0, abs=1e-15)


def test_mixture_support_contains_marginal_support():
    for n in (2, 5, 12, 64):
        for ell in range(n + 1):
            pi = delta(n, ell)
            for k in range(1, n + 1):
                q = engine.marginal_weight_pmf(pi, k).log_perseq
                m = engine.mixture_weight_pmf(engine.mixing_measure(pi), k).log_perseq
                assert np.all(m[q > -np.inf] > -np.inf)


def test_absolute_continuity_violation_surfaces(monkeypatch):
    monkeypatch.setattr(engine.kernels, "log_mixture",
                        lambda atoms, k: np.full(k + 1, -np.inf))
    with pytest.raises(AbsoluteContinuityViolation):
        engine.divergence_to_mixture(delta(4, 2), 2)


# ---------------------------------------------------------------- conditional MI

def test_cmi_examples():
    assert engine.conditional_mutual_information(4, 2, 1, 2) == pytest.approx(0.05663301226513249, abs=1e-14)
    for ell in (0, 9):
        assert engine.conditional_mutual_information(9, ell, 2, 7) == 0.0


def test_cmi_high_precision_reference():
    v = engine.conditional_mutual_information(100, 50, 1, 10)
    ref = mp_cmi(100, 50, 9)
    assert abs(v - float(ref)) <= 1e-10
    assert abs(v - 0.000499734826833358) <= 1e-10
    assert v <= engine.bound_values(100, 10).lemma_bound
    assert engine.bound_values(100, 10).lemma_bound == pytest.approx(2.558427881104495, abs=1e-12)


@given(st.integers(2, 300), st.data())
def test_cmi_matches_mp_reference(n, data):
    ell = data.draw(st.integers(0, n))
    k = data.draw(st.integers(2, n))
    i = data.draw(st.integers(1, k - 1))
    assert abs(engine.conditional_mutual_information(n, ell, i, k) - float(mp_cmi(n, ell, k - i))) <= 1e-12


def test_cmi_depends_on_block_length_only():
    t = engine.cmi_table(20)
    for ell in range(21):
        for i, k in [(1, 5), (3, 7), (10, 14)]:
            assert engine.conditional_mutual_information(20, ell, i, k) == pytest.approx(t[ell, 4], abs=1e-15)


@pytest.mark.parametrize("args", [(4, 5, 1, 2), (4, 2, 0, 2), (4, 2, 2, 2), (4, 2, 1, 5)])
def test_cmi_validation(args):
    with pytest.raises(ValueError):
        engine.conditional_mutual_information(*args)


# ---------------------------------------------------------------- conditional divergence

def test_conditional_divergence_examples():
    assert engine.conditional_divergence(7, 0, 3) == 0.0
    assert engine.conditional_divergence(4, 2, 2) == pytest.approx(0.05663301226513249, abs=1e-14)
    assert engine.conditional_divergence(2, 1, 2) == pytest.approx(LOG2, abs=1e-15)


def test_conditional_divergence_table_matches_scalar():
    t = engine.conditional_divergence_table(15)
    for ell in range(16):
        for k in range(1, 16):
            assert t[ell, k] == pytest.approx(engine.conditional_divergence(15, ell, k), abs=1e-15)


def test_conditional_divergence_is_divergence_of_point_mass():
    for n in (6, 30):
        for ell in range(n + 1):
            for k in (1, 2, n // 2, n):
                assert engine.conditional_divergence(n, ell, k) == pytest.approx(
                    engine.divergence_to_mixture(delta(n, ell), k), abs=1e-13)


# ---------------------------------------------------------------- bounds

def test_bound_values_examples():
    b = engine.bound_values(10, 2)
    assert b.theorem_bound == pytest.approx(5.756462732485114, abs=1e-12)
    assert b.theorem_bound == pytest.approx(5 * 4 * math.log(10) / 8, rel=1e-15)
    assert engine.bound_values(100, 10).lemma_bound == pytest.approx(5 * 10 * math.log(100) / 90, rel=1e-15)
    assert engine.bound_values(7, 7) == (math.inf, math.inf, math.inf)
    assert engine.bound_values(10, 2).pinsker_tv_bound == pytest.approx(2 * math.sqrt(10 * math.log(10) / 8))
    with pytest.raises(ValueError):
        engine.bound_values(1, 1)
    with pytest.raises(ValueError):
        engine.bound_values(5, 6)


def test_lemma_terms_example():
    t = engine.lemma_term_bounds(100, 50, 1, 10)
    assert t.interior_term == pytest.approx(0.4554563920208002, abs=1e-12)
    assert t.collision_term == pytest.approx(0.1, abs=1e-15)
    assert t.boundary_term == pytest.approx(1.023371152441798, abs=1e-12)
    assert t.total == pytest.approx(t.interior_term + t.collision_term + t.boundary_term, abs=1e-12)


@pytest.mark.parametrize("n,k", [(10, 2), (31, 7), (64, 32)])
def test_lemma_terms_smallest_interior(n, k):
    t = engine.lemma_term_bounds(n, 1, k - 1, k)
    assert t.interior_term == pytest.approx(2 * math.log(n) / (n * (n - 1)), rel=1e-14)


def test_lemma_terms_total_below_lemma_bound_exhaustive():
    for n in range(4, 257):
        for k in range(2, n // 2 + 1):
            lemma = engine.bound_values(n, k).lemma_bound
            # interior is increasing in ell and in k - i, so (n-1, i=1) is the worst case
            assert engine.lemma_term_bounds(n, n - 1, 1, k).total <= lemma
            assert engine.lemma_term_bounds(n, 1, k - 1, k).total <= lemma


def test_lemma_terms_validation():
    with pytest.raises(ValueError, match="k <= n/2"):
        engine.lemma_term_bounds(10, 3, 1, 6)
    with pytest.raises(ValueError):
        engine.lemma_term_bounds(10, 0, 1, 3)
    with pytest.raises(ValueError):
        engine.lemma_term_bounds(10, 3, 3, 3)


def test_bound_report_examples():
    r = engine.bound_report(delta(9, 0), 3)
    assert r.divergence_nats == 0.0 and r.ratio == 0.0
    r = engine.bound_report(delta(2, 1), 2)
    assert r.divergence_nats == pytest.approx(LOG2, abs=1e-15)
    assert r.theorem_bound == math.inf and r.ratio == 0.0 and r.holds
    r = engine.bound_report(generate(iid(0.3), 64), 8)
    assert r.theorem_bound == pytest.approx(23.76504619062670, abs=1e-11)
    assert r.divergence_nats <= r.theorem_bound and r.ratio < 1


def test_convexity_against_conditional_divergences():
    for n in (5, 20, 60):
        cdt = engine.conditional_divergence_table(n)
        for fam in BANK:
            pi = generate(fam, n)
            for k in range(1, n + 1):
                rhs = math.fsum(pi.mass * cdt[:, k])
                assert engine.divergence_to_mixture(pi, k) <= rhs + 1e-10
