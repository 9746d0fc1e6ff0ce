import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from knotur import (DuplicateMode, NoConvergence, PeriodMismatch, ZeroMRL, ZeroState,
                    ParameterizationKind as PK, QuadratureConfig, WeightPreset,
                    combined_ur, embed, equal_superposition, expect_coordinate,
                    expect_Lz_power, make_superposition, mean_resultant_length, new_knot,
                    new_torus_from_scale, quadrature_integrate, robertson_pair,
                    standard_deviations)
from knotur.quantum import (Commutator, bandwidth_bound, parse_expr, rectangle_rule)

TREFOIL = new_knot(2, 3)
T10 = new_torus_from_scale(1.0, 10.0)
CHOICE_I = equal_superposition(2, [0, 2])
CHOICE_II = equal_superposition(2, [0, 5])
KNOTS = [(2, 3), (3, 4), (2, 5), (3, 5)]


def test_make_superposition():
    psi = make_superposition(2, [(0, 1), (2, 1)])
    np.testing.assert_allclose(psi.amplitudes, [1 / math.sqrt(2)] * 2, rtol=1e-15)
    single = make_superposition(3, [(1, 2j)])
    assert abs(single.amplitudes[0]) == pytest.approx(1.0)
    assert single.amplitudes[0] == pytest.approx(1j)
    with pytest.raises(DuplicateMode):
        make_superposition(2, [(0, 1), (0, 1)])
    with pytest.raises(ZeroState):
        make_superposition(2, [(0, 0), (1, 0)])
    with pytest.raises(ZeroState):
        make_superposition(2, [])


def test_quadrature_examples():
    cfg = QuadratureConfig(n_start=64)
    assert quadrature_integrate(lambda ph: np.ones_like(ph), 4 * math.pi, cfg) == pytest.approx(4 * math.pi)
    assert quadrature_integrate(lambda ph: np.cos(1.5 * ph) ** 2, 4 * math.pi, cfg) == pytest.approx(2 * math.pi, rel=1e-14)
    f = lambda ph: np.cos(ph) * np.cos(1.5 * ph) * np.cos(2.5 * ph)
    assert quadrature_integrate(f, 4 * math.pi, cfg) == pytest.approx(math.pi, rel=1e-14)


def test_quadrature_no_convergence():
    # a kink: rectangle rule converges only algebraically
    kink = lambda ph: np.abs(np.sin(ph / 2))
    with pytest.raises(NoConvergence):
        quadrature_integrate(kink, 2 * math.pi, QuadratureConfig(n_start=16, max_doublings=3))


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(n_start=8)
    with pytest.raises(ValueError):
        QuadratureConfig(tol=0.0)
    assert QuadratureConfig().start_points(3) == 768


def test_parse_expr():
    assert parse_expr("x2") == ("x", "x")
    assert parse_expr("zy") == ("z", "y")
    assert parse_expr(("z", "x")) == ("z", "x")
    assert parse_expr("1") == ()
    for bad in ("xyz", "w", "x3"):
        with pytest.raises(ValueError):
            parse_expr(bad)


def test_expect_coordinate_examples():
    assert expect_coordinate(CHOICE_I, T10, TREFOIL, "x") == pytest.approx(0.5, abs=1 / 100)
    assert abs(expect_coordinate(CHOICE_I, T10, TREFOIL, "y")) < 1e-12
    assert expect_coordinate(CHOICE_II, T10, TREFOIL, "x") == pytest.approx(0.025, abs=1 / 100)
    with pytest.raises(PeriodMismatch):
        expect_coordinate(equal_superposition(3, [0, 1]), T10, TREFOIL, "x")


def _scipy_expect(psi, t, k, axes, kind):
    def g(ph):
        pt = embed(t, k, ph, kind)
        v = psi.density(ph)
        for ax in axes:
            v = v * pt.component(ax)
        return float(v)
    val, _ = integrate.quad(g, 0, 2 * math.pi * k.p, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


@pytest.mark.parametrize("kind", [PK.EXACT, PK.THIN])
@pytest.mark.parametrize("expr", ["x", "y", "z", "xx", "yy", "zz", "zx", "zy"])
def test_expectations_against_adaptive_quadrature(kind, expr):
    psi = make_superposition(2, [(-1, 0.3 + 0.2j), (2, 1.0), (5, -0.4j)])
    t = new_torus_from_scale(1.7, 4.0)
    ours = expect_coordinate(psi, t, TREFOIL, expr, kind)
    assert ours == pytest.approx(_scipy_expect(psi, t, TREFOIL, expr, kind), abs=1e-10)


def test_lz_powers():
    assert expect_Lz_power(CHOICE_I, 1) == pytest.approx(0.5, abs=1e-15)
    assert expect_Lz_power(CHOICE_I, 2) == pytest.approx(0.5, abs=1e-15)
    single = equal_superposition(3, [4], hbar=2.0)
    assert expect_Lz_power(single, 2) - expect_Lz_power(single, 1) ** 2 == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        expect_Lz_power(CHOICE_I, 3)


def test_standard_deviations_choices():
    g = T10.gamma
    r = standard_deviations(CHOICE_I, T10, TREFOIL)
    assert r.sigma_x == pytest.approx(0.5, abs=5 / g ** 2)
    assert r.sigma_y == pytest.approx(1 / math.sqrt(2), abs=5 / g ** 2)
    assert r.sigma_z == pytest.approx(1 / (math.sqrt(2) * g), abs=5 / g ** 2)
    assert r.sigma_Lz == pytest.approx(0.5, abs=1e-14)
    r2 = standard_deviations(CHOICE_II, T10, TREFOIL)
    assert r2.sigma_x == pytest.approx(1 / math.sqrt(2), abs=5 / g ** 2)
    assert r2.sigma_Lz == pytest.approx(1.25, abs=1e-14)
    r3 = standard_deviations(equal_superposition(2, [3]), T10, TREFOIL)
    assert r3.sigma_Lz == 0.0


def test_robertson_examples():
    uy = robertson_pair(CHOICE_I, T10, TREFOIL, "y")
    assert uy.lhs == pytest.approx(1 / (2 * math.sqrt(2)), abs=2e-3)
    assert uy.rhs == pytest.approx(0.25, abs=1e-12)
    ux = robertson_pair(CHOICE_I, T10, TREFOIL, "x")
    assert ux.rhs < 1e-12 and ux.satisfied
    ux_thin = robertson_pair(CHOICE_I, T10, TREFOIL, "x", commutator=Commutator.THIN_CLOSED_FORM)
    assert ux_thin.rhs < 1e-12
    with pytest.raises(ValueError):
        robertson_pair(CHOICE_I, T10, TREFOIL, "x", PK.EXACT, commutator=Commutator.THIN_CLOSED_FORM)


def test_eigenstate_saturates_trivially():
    for p, q in KNOTS:
        k = new_knot(p, q)
        psi = equal_superposition(p, [5])
        for kind in PK:
            r = standard_deviations(psi, T10, k, kind)
            assert r.sigma_Lz == 0.0
            for c in "xyz":
                u = robertson_pair(psi, T10, k, c, kind, report=r)
                assert abs(u.lhs) < 1e-12 and abs(u.rhs) < 1e-12


def test_mrl_examples():
    assert mean_resultant_length(CHOICE_I, T10, TREFOIL, weight=11.0) == pytest.approx(0.5, abs=5e-2)
    assert mean_resultant_length(CHOICE_II, T10, TREFOIL, weight=11.0) == pytest.approx(0.025, abs=5e-2)
    assert mean_resultant_length(equal_superposition(2, [1]), T10, TREFOIL) < 1e-15
    with pytest.raises(ValueError):
        mean_resultant_length(CHOICE_I, T10, TREFOIL, weight=0.0)


def test_combined_examples():
    w = WeightPreset.INVERSE_GAMMA.value_at(10.0)
    assert w == pytest.approx(1.1)
    assert WeightPreset.MRL_GAMMA.value_at(10.0) == pytest.approx(11.0)
    u = combined_ur(CHOICE_I, T10, TREFOIL, weight=w)
    assert u.lhs == pytest.approx(math.sqrt(3) / 2, abs=1e-2)
    assert u.satisfied and u.lhs >= 0.5
    assert combined_ur(CHOICE_II, T10, TREFOIL, weight=w).satisfied
    with pytest.raises(ZeroMRL):
        combined_ur(equal_superposition(2, [3]), T10, TREFOIL)


states = st.integers(0, len(KNOTS) - 1).flatmap(lambda i: st.tuples(
    st.just(KNOTS[i]),
    st.lists(st.integers(-12, 12), min_size=2, max_size=5, unique=True),
    st.lists(st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
             min_size=5, max_size=5),
    st.sampled_from([5.0, 10.0, 50.0])))


def _build(sample):
    (p, q), ns, amps, gamma = sample
    amps = [c if abs(c) > 1e-3 else 1.0 for c in amps[:len(ns)]]
    return make_superposition(p, zip(ns, amps)), new_knot(p, q), new_torus_from_scale(1.0, gamma)


@settings(max_examples=60, deadline=None)
@given(states)
def test_normalization_and_hermiticity(sample):
    psi, k, t = _build(sample)
    norm = quadrature_integrate(psi.density, psi.period, n_start=bandwidth_bound(psi, k))
    assert abs(norm - 1) < 1e-12
    for expr in ("x", "zy", "yy"):
        val = quadrature_integrate(
            lambda ph: np.conj(psi(ph)) * np.prod([embed(t, k, ph, PK.EXACT).component(a) for a in expr], axis=0) * psi(ph),
            psi.period, n_start=512)
        assert abs(val.imag) < 1e-12


@settings(max_examples=60, deadline=None)
@given(states)
def test_robertson_property_exact(sample):
    psi, k, t = _build(sample)
    r = standard_deviations(psi, t, k, PK.EXACT)
    for c in "xyz":
        u = robertson_pair(psi, t, k, c, PK.EXACT, report=r)
        assert u.margin >= -1e-10 * psi.hbar * t.a
        assert u.satisfied


@settings(max_examples=60, deadline=None)
@given(states)
def test_variance_nonnegative(sample):
    psi, k, t = _build(sample)
    for kind in PK:
        r = standard_deviations(psi, t, k, kind)
        for ax in "xyz":
            assert getattr(r, f"mean_{ax}2") - getattr(r, f"mean_{ax}") ** 2 >= -1e-14


@settings(max_examples=40, deadline=None)
@given(states)
def test_spectral_exactness_thin(sample):
    psi, k, t = _build(sample)
    n = bandwidth_bound(psi, k)
    for expr in ("x", "yy", "zy"):
        axes = parse_expr(expr)
        f = lambda ph: psi.density(ph) * np.prod([embed(t, k, ph, PK.THIN).component(a) for a in axes], axis=0)
        v1, v2 = rectangle_rule(f, psi.period, n), rectangle_rule(f, psi.period, 2 * n)
        assert abs(v2 - v1) < 1e-12 * max(abs(v1), 1.0)
