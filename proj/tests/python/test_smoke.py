import cmath
import math

import pytest

import hmlab


@pytest.fixture(scope="module")
def model():
    m = hmlab.build_model(3, r_max=12.0, grid_size=512)
    hmlab.calibrate(m, lambda_max=40.0, num_nodes=768)
    return m


def test_model_basics(model):
    assert model.dimension == 3
    assert model.rho == pytest.approx(1.0)
    assert model.calibrated
    r = model.grid_nodes
    assert len(r) == 512
    assert model.density(1.0) == pytest.approx(4.0 * math.pi * math.sinh(1.0) ** 2)


def test_eigenfunction_closed_form(model):
    for lam in (0.5, 2.0, 1.0 + 0.4j):
        for r in (0.5, 1.0, 3.0):
            want = cmath.sin(lam * r) / (lam * math.sinh(r))
            assert hmlab.eigenfunction_value(model, lam, r) == pytest.approx(
                want, abs=1e-8
            )
    assert hmlab.ode_residual(model, 1.0) < 1e-7


def test_transform_roundtrip(model):
    r = model.grid_nodes
    f = hmlab.make_radial(model, [math.exp(-x * x) for x in r])
    spec = hmlab.transform(model, f)
    back = hmlab.inverse_transform(model, spec)
    worst = max(abs(a - b) for a, b in zip(back.values, f.values))
    assert worst < 1e-3
    assert hmlab.plancherel_weight(model, 2.0) == pytest.approx(
        4.0 / (2.0 * math.pi**2), rel=1e-4
    )


def test_transform_errors(model):
    uncal = hmlab.build_model(3, grid_size=128)
    f = hmlab.gaussian_bump(uncal, 1.0)
    with pytest.raises(RuntimeError):
        hmlab.transform(uncal, f)
    with pytest.raises(ValueError):
        hmlab.make_radial(model, [1.0, 2.0])


def test_convolution(model):
    f = hmlab.gaussian_bump(model, 1.0, normalized=False)
    g = hmlab.gaussian_bump(model, 1.5, normalized=False)
    conv = hmlab.convolve(model, f, g)
    r = model.grid_nodes
    idx = [min(range(len(r)), key=lambda k: abs(r[k] - x)) for x in (1.0, 2.0)]
    direct = hmlab.convolve_direct(model, f, g, [r[i] for i in idx])
    for i, d in zip(idx, direct):
        assert abs(conv.values[i] - d) < 1e-3 * abs(d)


def test_heat_multiplier(model):
    mult = hmlab.heat_multiplier(1.0)
    assert hmlab.symbol_eval(model, mult, 0.5) == pytest.approx(
        math.exp(-1.25), rel=1e-12
    )
    h = hmlab.heat_kernel_profile(model, 1.0)
    closed = (
        (4.0 * math.pi) ** -1.5
        * math.exp(-1.0)
        * (1.0 / math.sinh(1.0))
        * math.exp(-0.25)
    )
    r = model.grid_nodes
    i = min(range(len(r)), key=lambda k: abs(r[k] - 1.0))
    ref = (
        (4.0 * math.pi) ** -1.5
        * math.exp(-1.0)
        * (r[i] / math.sinh(r[i]))
        * math.exp(-r[i] * r[i] / 4.0)
    )
    assert abs(h.values[i] - ref) < 1e-3 * closed


def test_chaos_pipeline(model):
    nu = math.exp(-1.25)
    assert hmlab.chaos_threshold(model, 4.0) == 0.75
    lam = hmlab.solve_strip_parameter(model, 4.0, 1.0)
    assert lam == pytest.approx(0.4 + 0.4j, abs=1e-12)

    mult = hmlab.heat_multiplier(1.0)
    cert = hmlab.certify_mixing(model, mult, nu, 0.5, 4.0)
    assert cert.verdict == "mixing_certified"
    assert cert.u_plus and cert.u_minus

    rots = [hmlab.Rotation(0, 1), hmlab.Rotation(1, 24)]
    roots = hmlab.find_unimodular_roots(model, mult, nu, 0.5, rots, 4.0)
    assert all(r.found for r in roots)
    analytic = cmath.sqrt(0.25 - 2.0j * math.pi / 24.0)
    assert roots[1].lam == pytest.approx(analytic, abs=1e-6)
    hmlab.attach_roots(cert, roots)
    assert cert.verdict == "chaotic_certified"
    assert '"verdict"' in cert.to_json()

    point = hmlab.build_periodic_point([roots[1]], [0.0], [1.0])
    assert point.period == 24
    assert hmlab.diagonal_defect(model, mult, nu, point) < 1e-9


def test_orbit(model):
    nu = math.exp(-1.25)
    state = hmlab.make_state([0.5], [1.0])
    rec = hmlab.simulate_orbit(model, hmlab.heat_multiplier(1.0), nu, state, 10, p=4.0)
    assert len(rec.norms) == 11
    assert rec.component_moduli[0] == pytest.approx(1.0, abs=1e-12)
    for n in rec.norms:
        assert n == pytest.approx(rec.norms[0], rel=1e-2)


def test_error_mapping(model):
    with pytest.raises(ValueError):
        hmlab.chaos_threshold(model, 2.0)
    with pytest.raises(ValueError):
        hmlab.build_model(1)
