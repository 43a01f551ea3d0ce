import math

import numpy as np
import pytest
from scipy import integrate

from relayasym import channels
from relayasym.channels import FadingModel, PoleSpec
from relayasym.errors import ModelValidationError, PoleAtArgumentError
from relayasym.montecarlo import RandomStream

F = FadingModel

PARAM_GRID = (
    [F.nakagami(m) for m in (0.6, 1.0, 1.8, 2.2)]
    + [F.weibull(m) for m in (0.6, 1.0, 1.8, 2.2)]
    + [F.rician(k) for k in (0.0, 1.0, 5.0)]
    + [F.hoyt(q) for q in (0.25, 0.5, 1.0)]
)


def _quad_density(model, f):
    # integrable singularity at 0 for shape < 1: let quad know about the edge
    val, err = integrate.quad(
        f, 0.0, np.inf, points=None, limit=300, epsabs=1e-10, epsrel=1e-10
    )
    return val


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def test_validate_accepts_supported_grid():
    for model in PARAM_GRID:
        channels.validate_model(model)
    channels.validate_model(F.nakagami(2.2, theta=1.0))


@pytest.mark.parametrize(
    "model",
    [
        F.nakagami(0.0),
        F.nakagami(-1.0),
        F.weibull(0.0),
        F.rician(-0.5),
        F.hoyt(1.2),
        F.hoyt(0.0),
        F.hoyt(5e-4),  # below the 2F1 stability floor
        F.nakagami(1.0, theta=0.0),
        F.nakagami(1.0, theta=-2.0),
        F.nakagami(math.inf),
        FadingModel("lognormal", 1.0, 1.0),
    ],
)
def test_validate_rejects(model):
    with pytest.raises(ModelValidationError):
        channels.validate_model(model)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


def test_pdf_point_values():
    assert channels.pdf(F.nakagami(1.0), 0.0) == pytest.approx(1.0)
    assert channels.pdf(F.nakagami(2.0), 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    # K = 0 collapses to an exponential since I0(0) = 1
    assert channels.pdf(F.rician(0.0), 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert channels.pdf(F.nakagami(1.0), -1.0) == 0.0


def test_pdf_normalization_grid():
    for model in PARAM_GRID:
        total = _quad_density(model, lambda x: channels.pdf(model, x))
        assert total == pytest.approx(1.0, abs=1e-6), model


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def test_moment_at_zero_is_one():
    for model in PARAM_GRID:
        assert channels.moment(model, 0.0) == pytest.approx(1.0, abs=1e-12), model


def test_moment_closed_forms():
    assert channels.moment(F.nakagami(2.0), 1.0).real == pytest.approx(2.0, rel=1e-12)
    assert channels.moment(F.weibull(2.0), 1.0).real == pytest.approx(
        0.8862269254527580, rel=1e-12
    )
    assert channels.moment(F.rician(1.0), 1.0).real == pytest.approx(1.0, rel=1e-12)
    assert channels.moment(F.hoyt(0.5), 1.0).real == pytest.approx(1.0, rel=1e-12)
    # exact second moments: Rician K=1 and Hoyt q=1/2, theta=1
    assert channels.moment(F.rician(1.0), 2.0).real == pytest.approx(1.75, rel=1e-12)
    assert channels.moment(F.hoyt(0.5), 2.0).real == pytest.approx(2.36, rel=1e-12)


def test_moment_pdf_consistency():
    for model in PARAM_GRID:
        for s in (0.5, 1.0, 2.0, 2.7):
            via_quad = _quad_density(model, lambda x: x**s * channels.pdf(model, x))
            via_formula = channels.moment(model, s).real
            assert via_quad == pytest.approx(via_formula, rel=1e-6), (model, s)


def test_moment_schwarz_symmetry():
    rng = np.random.default_rng(11)
    for model in (F.nakagami(1.8), F.weibull(2.2), F.rician(3.0), F.hoyt(0.5)):
        for _ in range(20):
            s = complex(rng.uniform(-0.9, 3.0), rng.uniform(0.1, 5.0))
            a = channels.moment(model, s.conjugate())
            b = channels.moment(model, s).conjugate()
            assert abs(a - b) <= 1e-12 * abs(b)


def test_moment_reduction_chains():
    # Rician K=0, Hoyt q=1 and Weibull m=1 all equal Nakagami m=1 moments
    base = F.nakagami(1.0, theta=1.3)
    equivalents = [F.rician(0.0, theta=1.3), F.hoyt(1.0, theta=1.3), F.weibull(1.0, theta=1.3)]
    for s in (0.5, 1.0, 2.3, complex(1.0, 0.7)):
        want = channels.moment(base, s)
        for model in equivalents:
            got = channels.moment(model, s)
            assert abs(got - want) <= 1e-10 * abs(want), (model, s)


def test_moment_pole_raises():
    with pytest.raises(PoleAtArgumentError):
        channels.moment(F.nakagami(1.8), -1.8)
    with pytest.raises(PoleAtArgumentError):
        channels.moment(F.rician(2.0), -3.0 + 1e-12j)


# ---------------------------------------------------------------------------
# pole lattices
# ---------------------------------------------------------------------------


def test_mellin_poles_examples():
    naka = channels.mellin_poles(F.nakagami(1.8), -4.0)
    assert [(p.location.real, p.order) for p in naka] == [(-1.8, 1), (-2.8, 1), (-3.8, 1)]
    wei = channels.mellin_poles(F.weibull(1.8), -4.0)
    assert [(p.location.real, p.order) for p in wei] == [(-1.8, 1), (-3.6, 1)]
    ric = channels.mellin_poles(F.rician(3.0), -2.5)
    assert [(p.location.real, p.order) for p in ric] == [(-1.0, 1), (-2.0, 1)]


def test_pole_blowup():
    for model in (F.nakagami(1.8), F.weibull(1.8), F.rician(3.0), F.hoyt(0.5)):
        for pole in channels.mellin_poles(model, -3.0):
            value = channels.moment(model, pole.location + 1e-7)
            assert abs(value) > 1e6, (model, pole)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_sample_means():
    stream = RandomStream(seed=2026, stream_index=0)
    x = channels.sample(F.nakagami(2.0), stream, size=10**6)
    assert 1.99 <= float(np.mean(x)) <= 2.01
    x = channels.sample(F.hoyt(0.5), stream, size=10**6)
    assert 0.99 <= float(np.mean(x)) <= 1.01


def test_sample_rician_second_moment():
    stream = RandomStream(seed=31, stream_index=0)
    x = channels.sample(F.rician(1.0), stream, size=10**6)
    m2_hat = float(np.mean(x * x))
    m2 = channels.moment(F.rician(1.0), 2.0).real
    assert abs(m2_hat - m2) <= 0.01 * m2


def test_sample_two_sample_moment_checks():
    # z-test of the sample mean of X^s against the analytic moment, s = 1, 2;
    # threshold 2.576 = 99% two-sided normal quantile
    n = 200_000
    for i, model in enumerate((F.nakagami(1.8), F.weibull(2.2), F.rician(3.0), F.hoyt(0.5))):
        stream = RandomStream(seed=500 + i, stream_index=0)
        x = channels.sample(model, stream, size=n)
        for s in (1.0, 2.0):
            xs = x**s
            want = channels.moment(model, s).real
            se = float(np.std(xs, ddof=1)) / math.sqrt(n)
            assert abs(float(np.mean(xs)) - want) <= 2.576 * se, (model, s)


def test_sample_determinism_and_position():
    a = RandomStream(seed=9, stream_index=4)
    b = RandomStream(seed=9, stream_index=4)
    xa = channels.sample(F.rician(2.0), a, size=1000)
    xb = channels.sample(F.rician(2.0), b, size=1000)
    np.testing.assert_array_equal(xa, xb)
    assert a.position == b.position == 2000  # two normals per draw
    c = RandomStream(seed=9, stream_index=5)
    xc = channels.sample(F.rician(2.0), c, size=1000)
    assert not np.array_equal(xa, xc)


def test_pole_spec_fields():
    p = PoleSpec(complex(-1.8), 2)
    assert p.location == -1.8 + 0j and p.order == 2
