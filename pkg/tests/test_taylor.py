import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from llzeta.errors import ConvergenceDomainError, DomainError
from llzeta.seqspace import PowerTail, TruncatedSeq, WeightFamily
from llzeta.series import eval_er_series
from llzeta.taylor import (dirichlet_eval, dirichlet_perturb_ok, domain_classify, falling_binomial, taylor_coefficient,
                           taylor_continue)

N = 40
n = np.arange(1, N + 1)
B = TruncatedSeq.from_tail(PowerTail(1.0), N, WeightFamily.ones())
Z = TruncatedSeq.from_tail(PowerTail(1.0, 1.0), N)

# sum_n (1/n - 0.1 e^-n)^s - n^-s, mpmath at 30 digits (the increments converge for every s)
SHIFT = {-0.5: 0.06601765301435665, 0.25: -0.02019369733341555, 2.0: -0.09016985264991972}


def e1(beta):
    return np.r_[beta, np.zeros(N - 1)]


def test_falling_binomial():
    assert falling_binomial(2.5, 0) == 1
    assert falling_binomial(5, 2) == 10
    assert falling_binomial(3, 4) == 0
    assert abs(falling_binomial(-0.5, 3) - (-0.5) * (-1.5) * (-2.5) / 6) < 1e-16
    # stays finite where s^m / m! alone would overflow
    assert math.isfinite(abs(falling_binomial(300.5, 400)))


def test_taylor_coefficient_examples():
    beta = 0.3
    assert taylor_coefficient(B, Z, 2, 1)(e1(beta)) == pytest.approx(2 * beta)
    assert taylor_coefficient(B, Z, 2.5, 3)(np.zeros(N)) == 0
    w = TruncatedSeq.from_tail(PowerTail(0.2, 1.0, 1.0), N)
    assert taylor_coefficient(B, Z, 3, 4)(w) == 0
    assert taylor_coefficient(B, Z, 3, 0)(w) == 0


def test_taylor_continue_examples():
    assert taylor_continue(B, Z, np.zeros(N), 0.5).value == 0
    beta = 0.3
    r = taylor_continue(B, Z, e1(beta), 2)
    assert abs(r.value - ((1 + beta) ** 2 - 1)) < 1e-14 and r.method == "taylor"


@pytest.mark.parametrize("s", sorted(SHIFT))
def test_taylor_continue_exponential_perturbation(s):
    w = TruncatedSeq.from_tail(PowerTail(-0.1, 0.0, 1.0), N)
    r = taylor_continue(B, Z, w, s, tol=1e-10)
    assert abs(r.value - SHIFT[s]) < 1e-10
    assert r.terms_used <= 200


def test_domain_examples():
    d = domain_classify(Z, TruncatedSeq.from_tail(PowerTail(0.5, 1.0, 1.0), N))
    assert d.kind == "entire" and d.beta == pytest.approx(0.5) and d.eta == 1.0 and d.halfplane == -math.inf
    d = domain_classify(Z, TruncatedSeq.from_tail(PowerTail(0.5, 2.0), N))
    assert d.kind == "polydisk" and d.eta == 1.0 and d.halfplane == 0.0
    d = domain_classify(Z, TruncatedSeq(2 * Z.entries, tail=PowerTail(2.0, 1.0)))
    assert not d and "dist_to_cross" in d.reason
    assert domain_classify(Z, TruncatedSeq.from_tail(PowerTail(0.5, 1.0), N)).kind == "ball"


def test_domain_gate():
    with pytest.raises(DomainError):
        taylor_continue(B, Z, 2 * Z.entries, 2)
    # polydisk with eta = 1 only reaches Re s > 0
    w = TruncatedSeq.from_tail(PowerTail(0.5, 2.0), N)
    with pytest.raises(DomainError):
        taylor_continue(B, Z, w, -0.5)


def test_dirichlet_perturb_examples():
    ln = np.log
    assert dirichlet_perturb_ok(ln, ln, 1.0, 1.0, 1000)
    assert dirichlet_perturb_ok(lambda k: Decimal(k).ln(), lambda k: Decimal(k).ln() + Decimal(-2 * k).exp(), 1, 2, 60)
    for beta, eta in ((1.0, 1.0), (10.0, 0.5), (100.0, 0.01)):
        assert not dirichlet_perturb_ok(ln, lambda m: np.log(m) / 2, beta, eta, 1000)
    with pytest.raises(ValueError):
        dirichlet_perturb_ok(ln, ln, 0, 1, 10)


def test_dirichlet_eval_examples():
    ones = lambda m: np.ones(m.size)
    # an algebraic tail: about 1/tol terms
    r = dirichlet_eval(ones, np.log, 2, tol=1e-7)
    assert abs(r.value - math.pi ** 2 / 6) < 1e-7
    alt = lambda m: np.where(m % 2 == 1, 1.0, -1.0)
    assert abs(dirichlet_eval(alt, np.log, 2, tol=1e-10).value - math.pi ** 2 / 12) < 1e-10
    lin = lambda m: m.astype(np.float64)
    assert abs(dirichlet_eval(ones, lin, 1, tol=1e-12).value - 1 / (math.e - 1)) < 1e-12
    with pytest.raises(ConvergenceDomainError):
        dirichlet_eval(ones, np.log, 0.9)


# ---------------------------------------------------------------- properties


@st.composite
def entire_w(draw, size=N):
    beta = draw(st.floats(0.05, 0.6))
    eta = draw(st.floats(0.3, 2.5))
    ph = np.array(draw(st.lists(st.floats(0, 2 * math.pi), min_size=size, max_size=size)))
    m = np.arange(1, size + 1)
    return beta * np.exp(-eta * m) / m * np.exp(1j * ph)


def _direct_increment(w, s):
    zv = Z.entries
    return complex(np.sum((zv + w) ** s - zv ** s))


@settings(max_examples=30, deadline=None)
@given(entire_w(), st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)))
def test_majorant_soundness(w, s):
    d = domain_classify(Z, TruncatedSeq(w))
    assert d.kind == "entire"
    r = taylor_continue(B, Z, w, s, tol=1e-12)
    # remainder bound over m > M' with ||z|| = 1: |binom(s, m)| beta^m sum_n e^-eta n n^-Re s
    inner = float(np.sum(np.exp(-d.eta * n) * n ** -s.real))
    bound, c, m = 0.0, falling_binomial(s, r.terms_used), r.terms_used
    for m in range(r.terms_used + 1, r.terms_used + 400):
        c *= (s - (m - 1)) / m
        bound += abs(c) * d.beta ** m * inner
    assert abs(_direct_increment(w, s) - r.value) <= bound + 1e-12


@settings(max_examples=20, deadline=None)
@given(entire_w(), st.builds(complex, st.floats(2.5, 4), st.floats(-3, 3)))
def test_consistency_with_series(w, s):
    tol = 1e-9
    zw = TruncatedSeq(Z.entries + w, tail=PowerTail(1.0, 1.0))
    ref = eval_er_series(B, zw, s, tol).value - eval_er_series(B, Z, s, tol).value
    assert abs(taylor_continue(B, Z, w, s, tol=tol).value - ref) < 3 * tol


@settings(max_examples=20, deadline=None)
@given(entire_w(), st.builds(complex, st.floats(-2, 3), st.floats(-3, 3)))
def test_degree_one_limit(w, s):
    p1 = taylor_coefficient(B, Z, s, 1)(w)
    defects = []
    for eps in (1e-2, 1e-3):
        inc = taylor_continue(B, Z, eps * w, s, tol=1e-15 * max(1.0, abs(p1))).value
        defects.append(abs(inc / eps - p1))
    # first-order remainder: the defect shrinks like eps
    assert defects[1] <= 0.2 * defects[0] + 1e-10


@settings(max_examples=30, deadline=None)
@given(entire_w())
def test_domain_nesting(w):
    d = domain_classify(Z, TruncatedSeq(w))
    assert np.all(np.abs(w) <= d.beta * np.exp(-d.eta * n) / n * (1 + 1e-12))
    for eta2 in (0.5 * d.eta, 0.9 * d.eta):
        beta2 = d.beta * float(np.max(n ** eta2 * np.exp(-d.eta * n)))
        assert np.all(np.abs(w) <= beta2 / n ** (1 + eta2) * (1 + 1e-12))
