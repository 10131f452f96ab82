import math

import numpy as np
import pytest
from scipy.integrate import quad

from lagstar import curves, specfun
from lagstar.errors import DomainError, IntegrationError, MissingPeriodError


def fd_check(curve, t, h=1e-5):
    """Relative error of analytic d1, d2 against central differences of pos and d1."""
    j = curve.eval(t)
    d1 = (curve(t + h) - curve(t - h)) / (2 * h)
    d2 = (curve.eval(t + h).d1 - curve.eval(t - h).d1) / (2 * h)
    d3 = (curve.eval(t + h).d2 - curve.eval(t - h).d2) / (2 * h)
    rel = lambda a, b: np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1.0)
    return rel(d1, j.d1), rel(d2, j.d2), rel(d3, j.d3)


CATALOG = {
    "line": (lambda: curves.line(0.7), np.linspace(-0.9, 0.9, 21)),
    "circle": (lambda: curves.circle(2.0, 0.5 - 0.3j, 0.5, 0.2), np.linspace(0, 12, 31)),
    "cornu": (lambda: curves.cornu(1.3), np.linspace(-1.9, 1.9, 31)),
    "cornu_neg": (lambda: curves.cornu(-0.7), np.linspace(-1.9, 1.9, 31)),
    "gerono": (curves.gerono, np.linspace(0, 6.2, 31)),
    "lissajous": (curves.lissajous, np.linspace(0, 6.2, 31)),
    "lemniscate": (curves.lemniscate, np.linspace(0.01, 5.2, 31)),
}


@pytest.mark.parametrize("name", list(CATALOG))
def test_catalog_jets_match_central_differences(name):
    make, t = CATALOG[name]
    errs = fd_check(make(), t)
    assert max(errs) < 1e-6


def test_line_is_straight_unit_speed():
    j = curves.line(2.0).eval(np.linspace(-1, 1, 11))
    assert np.all(j.kappa == 0) and np.all(j.speed == 1)


def test_circle_arclength_curvature():
    R = 3.0
    j = curves.circle(R, rate=1 / R).eval(np.linspace(0, 20, 51))
    assert np.allclose(j.speed, 1, atol=1e-15) and np.allclose(j.kappa, 1 / R, atol=1e-15)


def test_circle_clockwise_has_negative_curvature():
    assert np.allclose(curves.circle(1.0, rate=-1.0).eval(np.array([0.3])).kappa, -1)


def test_gerono_hand_values():
    j = curves.gerono().eval(np.array(math.pi / 2))
    assert abs(j.pos - 1) < 1e-15
    assert abs(j.d1 - (-2 - 2j)) < 1e-15


def test_curvature_formula_matches_definition():
    # kappa = Im(conj(d1) d2) / |d1|^3, and dkappa from d3 against FD of kappa
    c = curves.gerono()
    t = np.linspace(0.1, 6, 40)
    h = 1e-5
    fd = (c.eval(t + h).kappa - c.eval(t - h).kappa) / (2 * h)
    assert np.max(np.abs(fd - c.eval(t).dkappa)) < 1e-6


def test_lemniscate_curvature_is_three_r():
    t = np.linspace(0, specfun.lemniscate_period(), 101)
    j = curves.lemniscate().eval(t)
    assert np.max(np.abs(j.speed - 1)) < 1e-13
    assert np.max(np.abs(j.kappa - 3 * specfun.sn_imag_unit(t))) < 1e-12
    assert np.max(np.abs(j.kappa ** 2 - 9 * np.abs(j.pos) ** 2)) < 1e-12


def test_origin_crossing_flags():
    assert curves.lemniscate().origin_crossing
    assert curves.lissajous().origin_crossing
    assert curves.cornu(1.0).origin_crossing
    assert not curves.circle(1.0).origin_crossing
    assert not curves.gerono().origin_crossing


def test_out_of_domain():
    c = curves.curve_from_curvature(lambda t: 0 * t, span=(0, 1))
    with pytest.raises(DomainError):
        c.eval(np.array([1.5]))


def test_regularity():
    assert curves.gerono().is_regular()
    assert curves.lemniscate().min_speed() > 0.99


# -- ODE-backed curves ------------------------------------------------------


def test_zero_curvature_gives_line():
    a = 0.4
    c = curves.curve_from_curvature(lambda t: 0 * t, theta0=0.0, p0=1j * a, span=(-1, 1))
    t = np.linspace(-1, 1, 21)
    assert np.max(np.abs(c(t) - (t + 1j * a))) < 1e-12


def test_unit_curvature_gives_closed_circle():
    c = curves.curve_from_curvature(lambda t: 1 + 0 * t, theta0=math.pi / 2, p0=1.0, span=(0, 2 * math.pi + 0.1))
    assert abs(c(np.array(2 * math.pi)) - 1) < 1e-9
    t = np.linspace(0, 6, 31)
    assert np.max(np.abs(c(t) - np.exp(1j * t))) < 1e-10


def test_cornu_from_curvature_against_quadrature():
    c = curves.curve_from_curvature(lambda t: t, theta0=0.0, p0=0.0, span=(0, 5), dkappa=lambda t: 1 + 0 * t)
    for t in (0.5, 1.7, 3.2, 5.0):
        re, _ = quad(lambda x: math.cos(x * x / 2), 0, t, epsabs=1e-13, limit=200)
        im, _ = quad(lambda x: math.sin(x * x / 2), 0, t, epsabs=1e-13, limit=200)
        assert abs(c(np.array(t)) - complex(re, im)) < 1e-8


def test_curve_from_curvature_round_trip():
    kappa = lambda t: np.sin(2 * t) + 0.3
    c = curves.curve_from_curvature(kappa, span=(-2, 2))
    t = np.linspace(-2, 2, 81)
    j = c.eval(t)
    assert np.max(np.abs(j.speed - 1)) < 1e-10
    assert np.max(np.abs(j.kappa - kappa(t))) < 1e-8


def test_catalog_cornu_matches_ode_cornu():
    c1 = curves.cornu(1.0, window=(-3, 3))
    c2 = curves.curve_from_curvature(lambda t: t, theta0=0.0, p0=0.0, span=(-3, 3))
    t = np.linspace(-3, 3, 41)
    assert np.max(np.abs(c1(t) - c2(t))) < 1e-9


def test_curve_step_validation():
    with pytest.raises(DomainError):
        curves.curve_from_curvature(lambda t: t, step=0.0)


def test_cmc_radial_reproduces_sn_imag_unit():
    # rho = 3, lambda = mu = 0: start just off the origin on the radial solution r = sn(t, i)
    t_start = 0.05
    r0 = specfun.sn_imag_unit(t_start)
    P = specfun.lemniscate_period()
    c = curves.cmc_radial_curve(3.0, 0.0, 0.0, r0, span=(0.0, P))
    t = np.linspace(0, P - t_start, 401)
    r = np.abs(c(t))
    assert np.max(np.abs(r - np.abs(specfun.sn_imag_unit(t + t_start)))) < 1e-8


@pytest.mark.parametrize("lam", [-0.5, 0.5])
def test_cmc_radial_curvature_relation_and_first_integral(lam):
    rho, mu = 2.0, 0.3
    # for lam > 0 the curve only exists until the curvature reaches zero (t ~ 2.127)
    c = curves.cmc_radial_curve(rho, lam, mu, 0.8, span=(0, 3 if lam < 0 else 2))
    t = np.linspace(*c.domain, 301)
    j = c.eval(t)
    assert np.max(np.abs(j.kappa ** 2 - (rho ** 2 * np.abs(j.pos) ** 2 - lam))) < 1e-7
    assert np.max(curves.cmc_first_integral_drift(c, t)) < 1e-8


def test_cmc_radial_constant_radius_circle():
    # r* with kappa = 1/r*: lambda = rho^2 r*^2 - 1/r*^2, mu = 3 r* - kappa^3/rho^2
    rho, rs = 1.5, 0.9
    lam = rho ** 2 * rs ** 2 - 1 / rs ** 2
    mu = 3 * rs - (1 / rs) ** 3 / rho ** 2
    c = curves.cmc_radial_curve(rho, lam, mu, rs, span=(0, 2 * math.pi * rs))
    t = np.linspace(0, 2 * math.pi * rs, 101)
    # the circle is a neutral equilibrium of the radial flow, so errors grow slowly
    assert np.max(np.abs(np.abs(c(t)) - rs)) < 1e-7
    assert np.max(np.abs(c.eval(t).kappa - 1 / rs)) < 1e-7


def test_cmc_radial_turning_radius_reported():
    with pytest.raises(IntegrationError, match=r"r = 0\.35355.*t = 2\.12"):
        curves.cmc_radial_curve(2.0, 0.5, 0.3, 0.8, span=(0, 3))


def test_cmc_radial_rejects_bad_data():
    with pytest.raises(DomainError):
        curves.cmc_radial_curve(-1.0, 0, 0, 0.5)
    with pytest.raises(DomainError):
        curves.cmc_radial_curve(1.0, 5.0, 0, 0.5)


def test_elastica_zero_is_line():
    c = curves.elastica_curve(0.0, 0.0, 0.0, span=(-2, 2), p0=0.0, theta0=0.0)
    t = np.linspace(-2, 2, 21)
    assert np.max(np.abs(c(t) - t)) < 1e-12


def test_elastica_constant_curvature_is_circle():
    k0 = 2.0
    c = curves.elastica_curve(k0 ** 2, k0, 0.0, span=(0, 4), p0=0.5, theta0=math.pi / 2)
    t = np.linspace(0, 4, 81)
    assert np.max(np.abs(c.eval(t).kappa - k0)) < 1e-10
    assert np.max(np.abs(np.abs(c(t)) - 0.5)) < 1e-9


def test_elastica_euler_lagrange_residual():
    c = curves.elastica_curve(0.0, 1.0, 0.0, span=(-3, 3))
    t = np.linspace(-2.9, 2.9, 201)
    assert np.max(curves.elastica_residual(c, t)) < 1e-7


def test_elastica_first_integral():
    c = curves.elastica_curve(1.5, 1.0, 0.4, span=(-3, 3))
    e = curves.elastica_energy_level(c, np.linspace(-3, 3, 201))
    assert np.ptp(e) < 1e-8


def test_translating_curve_satisfies_its_equation():
    for sign in (1, -1):
        c = curves.translating_curve(1.3, 0.4, sign=sign, span=(-2, 2))
        t = np.linspace(-2, 2, 81)
        j = c.eval(t)
        rhs = sign * 1.3 * np.imag(np.exp(-0.4j) * j.d1 * np.conj(j.pos))
        assert np.max(np.abs(j.kappa - rhs)) < 1e-12
        h = 1e-5
        fd = (c.eval(t[1:-1] + h).kappa - c.eval(t[1:-1] - h).kappa) / (2 * h)
        assert np.max(np.abs(fd - j.dkappa[1:-1])) < 1e-6


# -- closure ------------------------------------------------------------------


def test_closure_circle():
    R = 1.7
    rep = curves.closure_report(curves.circle(R, rate=1 / R))
    assert abs(rep.closure_integral - 2 * math.pi * R ** 2) < 1e-10
    assert rep.position_gap < 1e-12


@pytest.mark.parametrize("make", [curves.gerono, curves.lissajous, curves.lemniscate])
def test_closure_figure_eights(make):
    rep = curves.closure_report(make())
    assert abs(rep.closure_integral) < 1e-10
    assert rep.position_gap < 1e-10


def test_closure_requires_period():
    with pytest.raises(MissingPeriodError):
        curves.closure_report(curves.line(0.0))


def test_arclength_gerono_against_quad():
    c = curves.gerono()
    ref, _ = quad(lambda t: abs(c.eval(np.array(t)).d1), 0, 2 * math.pi, epsabs=1e-13, limit=200)
    assert abs(curves.arclength(c, 0, 2 * math.pi) - ref) < 1e-10
    assert curves.arclength(c, 1.0, 0.0) == pytest.approx(-curves.arclength(c, 0.0, 1.0))


def test_reparametrize_by_arclength_is_unit_speed():
    c = curves.reparametrize_by_arclength(curves.gerono())
    sig = np.linspace(c.domain[0] + 1e-3, c.domain[1] - 1e-3, 101)
    j = c.eval(sig)
    assert np.max(np.abs(j.speed - 1)) < 1e-10
    h = 1e-5
    fd = (c(sig[1:-1] + h) - c(sig[1:-1] - h)) / (2 * h)
    assert np.max(np.abs(fd - j.d1[1:-1])) < 1e-8
    assert c.period == pytest.approx(curves.arclength(curves.gerono(), 0, 2 * math.pi))
