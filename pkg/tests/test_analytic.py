import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from llzeta.analytic import (ZContinuation, commutator_monodromy, continue_along_path, continue_h0_integral,
                             lasso_loop, monodromy_a_formula, monodromy_a_numeric, monodromy_z_formula,
                             monodromy_z_numeric, path_monodromy, pole_of_power_weight, pole_of_power_weight_numeric,
                             residue_formula, residue_numeric, z_loop)
from llzeta.contour import eval_zeta_k
from llzeta.errors import ConventionError, ConvergenceDomainError, DomainError
from llzeta.seqspace import PowerTail, TruncatedSeq, WeightFamily, connect_path, path_from_function
from llzeta.series import PeriodicParams

TWO_PI_I = 2j * math.pi
ZETA2 = 1.6449340668482264
HURWITZ_2_15 = 0.9348022005446793


def test_residue_formula():
    assert residue_formula(PeriodicParams(1, [0], [0])) == 1
    assert residue_formula(PeriodicParams(2, ["1/2", "0.37"], [0, 0])) == pytest.approx(-0.5)
    assert residue_formula(PeriodicParams(3, [0.3 + 0.1j, math.sqrt(2), 0.77j], [0, 0, 0])) == 0


def test_residue_numeric():
    assert abs(residue_numeric(PeriodicParams(1, [0], [0])) - 1) < 1e-8
    p = PeriodicParams(2, [Fraction(1, 2), 0.37], [0.2, -0.4 + 0.1j])
    assert abs(residue_numeric(p) + 0.5) < 1e-7
    assert abs(residue_numeric(PeriodicParams(2, [0.3 + 0.1j, 0.77j], [0, 0.5]))) < 1e-8


def test_monodromy_z_formula_examples():
    p = PeriodicParams(1, [0], [-0.5])
    assert monodromy_z_formula(p, 3, 1, 0) == 0
    assert abs(monodromy_z_formula(p, 0.5, 1, 0) + 2 * math.sqrt(2)) < 1e-14
    with pytest.raises(DomainError):
        monodromy_z_formula(PeriodicParams(2, [0, 0], [0, -2]), 0.5, 2, 0)


def test_monodromy_z_numeric_generic():
    p = PeriodicParams(2, [0.2, 0.1j], [0, 0.3])
    s = 0.7 + 0.4j
    f = monodromy_z_formula(p, s, 2, 1)
    assert abs(monodromy_z_numeric(p, s, 2, 1).value - f) < 1e-6


def test_null_loop_has_no_monodromy():
    p = PeriodicParams(1, [0.3], [0.2])
    loop = lasso_loop(0.2, 1.5, 0.3)
    path = lambda t: loop(t)[:, None]
    assert abs(ZContinuation(p, 0.4 + 1j, path, 1e-12).monodromy().value) < 1e-10


def test_commutator_loop():
    p = PeriodicParams(2, [0.3, 0.1 + 0.05j], [0.1, 0.2])
    s = 0.6 + 0.5j
    loops = (z_loop(p, 1, 0), z_loop(p, 2, 1))
    assert abs(commutator_monodromy(p, s, loops).value) < 1e-6


def test_monodromy_a_formula():
    p = PeriodicParams(1, [0.02 - 0.05j], [0])
    d = 0.02 - 0.05j
    expect = 2 * math.pi * d * 1j * cmath.exp(-TWO_PI_I * d)
    assert abs(monodromy_a_formula(p, 2, 1, 0) - expect) < 1e-14
    assert abs(monodromy_a_formula(p, 1, 1, 0) - cmath.exp(-TWO_PI_I * d)) < 1e-14
    with pytest.raises(ConventionError):
        monodromy_a_formula(PeriodicParams(1, [0.02 + 0.05j], [0]), 2, 1, 0)


def test_a_monodromy_contour_difference():
    # the straight-minus-bumped difference is the residue times 2 pi i
    p = PeriodicParams(2, [0.02 - 0.3j, 0.4], [0.1, 0])
    for s in (1.0, 0.6 + 0.3j, 2.2 - 0.7j):
        n = monodromy_a_numeric(p, s, 1, 0)
        assert abs(n / TWO_PI_I - monodromy_a_formula(p, s, 1, 0)) < 1e-6


def _er_inputs(N=20):
    b = TruncatedSeq.from_tail(PowerTail(1.0), N, WeightFamily.ones())
    return b, PowerTail(1.0, 1.0)


def test_continue_constant_path():
    b, tail = _er_inputs()
    z = 1 / np.arange(1, 21)
    path = path_from_function(lambda t: np.broadcast_to(z, (np.size(t), 20)))
    r, rec = path_monodromy(b, path, 2.5, 1e-8, tail)
    assert abs(r.value) < 1e-12 and np.all(rec.windings == 0)


def test_loop_around_first_hyperplane():
    b, tail = _er_inputs()
    base = 1 / np.arange(1, 21)

    def loop(t):
        Z = np.broadcast_to(base, (np.size(t), 20)).astype(np.complex128)
        Z[:, 0] = np.exp(TWO_PI_I * np.asarray(t))
        return Z

    r, rec = path_monodromy(b, path_from_function(loop, samples=64), 2.5, 1e-8, tail)
    assert abs(r.value - (cmath.exp(5j * math.pi) - 1)) < 1e-7
    assert rec.windings[0] == pytest.approx(1.0) and np.all(rec.windings[1:] == 0)


def test_round_trip_is_identity():
    b, tail = _er_inputs()
    n = np.arange(1, 21)
    w = TruncatedSeq(1 / n)
    z = TruncatedSeq(1j / n)
    there = connect_path(w, z, 64)
    r, rec = path_monodromy(b, there.then(there.reversed()), 2.5, 1e-8, tail)
    assert abs(r.value) < 2e-8
    assert np.allclose(rec.args, rec.start_args)


def test_continue_along_path_needs_convergence():
    b, tail = _er_inputs()
    z = 1 / np.arange(1, 21)
    path = path_from_function(lambda t: np.broadcast_to(z, (np.size(t), 20)))
    with pytest.raises(ConvergenceDomainError):
        continue_along_path(b, path, 0.9, 1e-8, tail)


def test_h0_examples():
    assert continue_h0_integral([0], [0.3], [0.3], 0.5).value == 0
    r = continue_h0_integral([0], [0], [0.5], 2, tol=1e-10)
    assert abs(r.value - (HURWITZ_2_15 - ZETA2)) < 1e-10 and r.method == "integral"
    a, z0, z1 = [0.3 + 0.1j, 0.6], [0.1, 0.0], [0.4, 0.2 + 0.1j]
    r = continue_h0_integral(a, z0, z1, 0.3, tol=1e-8)
    c1 = eval_zeta_k(PeriodicParams(2, a, z1), 0.3, tol=1e-11).value
    c0 = eval_zeta_k(PeriodicParams(2, a, z0), 0.3, tol=1e-11).value
    assert abs(r.value - (c1 - c0)) < 1e-6


def test_h0_rejects():
    with pytest.raises(ConvergenceDomainError):
        continue_h0_integral([0], [0], [0.5], -0.2)
    with pytest.raises(DomainError):
        continue_h0_integral([0], [0], [-1.5], 0.5)


def test_pole_of_power_weight():
    assert pole_of_power_weight(1) == (1, 1)
    assert pole_of_power_weight(2) == (0.5, 0.5)
    assert abs(pole_of_power_weight_numeric(1.25) - 0.8) < 1e-6


# ---------------------------------------------------------------- properties


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 3), st.data())
def test_residue_agreement(k, data):
    rats = [Fraction(data.draw(st.integers(0, 2 * k)), k) if data.draw(st.booleans())
            else complex(data.draw(st.floats(0.05, 0.45)), data.draw(st.floats(0.0, 0.2))) for _ in range(k)]
    z = [complex(data.draw(st.floats(-0.4, 0.8)), data.draw(st.floats(-0.3, 0.3))) for _ in range(k)]
    p = PeriodicParams(k, rats, z)
    assert abs(residue_numeric(p) - residue_formula(p)) < 1e-7


@settings(max_examples=5, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(0.05, 0.9), st.builds(complex, st.floats(0.3, 2.5), st.floats(-1.5, 1.5)))
def test_commutator_abelian(a1, a2, s):
    p = PeriodicParams(2, [a1, a2], [0.1, 0.3])
    assert abs(commutator_monodromy(p, s, (z_loop(p, 1, 1), z_loop(p, 2, 0))).value) < 1e-6


@settings(max_examples=5, deadline=None)
@given(st.integers(-2, 3), st.integers(1, 2), st.integers(0, 1))
def test_integer_s_trivial_monodromy(m, j, pb):
    p = PeriodicParams(2, [0.3 + 0.05j, 0.6], [0.2, 0.1])
    scale = max(1.0, abs(eval_zeta_k(p, m + 0.5).value))
    assert abs(monodromy_z_numeric(p, m, j, pb).value) < 1e-9 * scale


@settings(max_examples=5, deadline=None)
@given(st.floats(-0.3, 0.6), st.floats(-0.3, 0.6), st.floats(-0.3, 0.6), st.floats(0.2, 1.5))
def test_h0_telescopes(x0, x1, y, s):
    a = [0.3, 0.7 + 0.02j]
    z0, z1 = np.array([x0, y]), np.array([x1, -y])
    mid = 0.5 * (z0 + z1)
    tol = 1e-9
    whole = continue_h0_integral(a, z0, z1, s, tol).value
    halves = continue_h0_integral(a, z0, mid, s, tol).value + continue_h0_integral(a, mid, z1, s, tol).value
    assert abs(whole - halves) < 2 * tol
