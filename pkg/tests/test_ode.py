import math

import numpy as np
import pytest

from herdgrowth.errors import DomainError, NumericError
from herdgrowth.model import AdoptionParams, CatchUpParams, FrontierParams, eval_x, rhs_adoption, rhs_logistic_moving
from herdgrowth.ode import OdeProblem, integrate_rk4, richardson_error_estimate

GERMANY = FrontierParams(28.7205, 0.0381261)


def exp_problem(t1=1.0):
    return OdeProblem(lambda t, y: y, 1.0, (0.0, t1))


def test_zero_field_is_constant():
    traj = integrate_rk4(OdeProblem(lambda t, y: 0.0, 3.0, (0.0, 10.0)), 0.1)
    assert np.all(traj.values == 3.0)
    assert traj.times[0] == 0.0 and traj.times[-1] == 10.0


def test_exponential():
    assert integrate_rk4(exp_problem(), 0.01).final == pytest.approx(math.e, abs=1e-9)


def test_adoption_against_closed_form():
    p = AdoptionParams(0.5, 0.5)
    traj = integrate_rk4(OdeProblem(lambda t, x: rhs_adoption(p, x), 0.0, (0.0, 1.0)), 1e-3)
    assert abs(traj.final - 0.462118) < 1e-6
    assert traj.final == pytest.approx(eval_x(p, 1.0), abs=1e-8)


@pytest.mark.parametrize("span,step", [((0.0, 1.0), 0.3), ((2.0, 5.05), 0.1), ((0.0, 55.0), 1e-3), ((0.0, 0.7), 0.1)])
def test_endpoint_exact_and_grid(span, step):
    traj = integrate_rk4(OdeProblem(lambda t, y: -y, 1.0, span), step)
    assert traj.times[0] == span[0]
    assert traj.times[-1] == span[1]
    assert np.all(np.diff(traj.times) > 0)
    assert np.all(np.diff(traj.times) <= step * (1 + 1e-9))


def test_single_point_span():
    traj = integrate_rk4(OdeProblem(lambda t, y: y, 2.0, (1.0, 1.0)), 0.1)
    assert list(traj.values) == [2.0]


@pytest.mark.parametrize("step", [0.0, -0.1, float("nan"), 2.0])
def test_bad_step(step):
    with pytest.raises(DomainError):
        integrate_rk4(exp_problem(), step)


def test_unordered_span():
    with pytest.raises(DomainError):
        OdeProblem(lambda t, y: y, 1.0, (1.0, 0.0))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blowup_reported():
    with pytest.raises(NumericError):
        integrate_rk4(OdeProblem(lambda t, y: y * y, 1.0, (0.0, 2.0)), 0.01)


def test_deterministic():
    p = OdeProblem(lambda t, y: math.sin(t) * y, 1.0, (0.0, 3.0))
    a, b = integrate_rk4(p, 0.01), integrate_rk4(p, 0.01)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.times, b.times)


def test_richardson_exact_on_cubic():
    p = OdeProblem(lambda t, y: 3 * t * t - 2 * t + 1, 0.5, (0.0, 2.0))
    assert richardson_error_estimate(p, 0.1) < 1e-13


def test_richardson_linear_field():
    assert richardson_error_estimate(OdeProblem(lambda t, y: 2.5, 0.0, (0.0, 4.0)), 0.2) < 1e-13


@pytest.mark.parametrize("step", [0.1, 0.05, 0.02])
def test_order_four(step):
    ratio = richardson_error_estimate(exp_problem(), step) / richardson_error_estimate(exp_problem(), step / 2)
    assert 12 <= ratio <= 20


def test_richardson_logistic_moving():
    c = CatchUpParams(3.25365, 0.148995)
    p = OdeProblem(lambda t, a: rhs_logistic_moving(GERMANY, c.gamma, a, t), c.a0, (0.0, 55.0))
    assert richardson_error_estimate(p, 0.01) < 1e-8
