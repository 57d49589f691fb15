import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_params
from twofluid.eos import (
    ConvergenceError,
    EosParams,
    InadmissibleStateError,
    State,
    density_from_pressure,
    dP_dR,
    from_RS,
    pressure_from_densities,
    pressure_RS,
    reduced_isentropic_coeffs,
    sound_speed,
    to_RS,
)

P22 = EosParams(alpha=2.0, gamma=2.0, A=1.0)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            EosParams(alpha=0.5, gamma=2.0, A=1.0)
        with pytest.raises(ValueError):
            EosParams(alpha=1.0, gamma=0.9, A=1.0)
        with pytest.raises(ValueError):
            EosParams(alpha=1.0, gamma=1.0, A=0.0)
        with pytest.raises(ValueError):
            EosParams(alpha=np.inf, gamma=1.0, A=1.0)

    def test_gamma_one_flagged(self):
        assert EosParams(alpha=2.0, gamma=1.0, A=1.0).nonstrict_convexity
        assert not P22.nonstrict_convexity


class TestPressure:
    def test_examples(self):
        assert pressure_from_densities(1.0, 1.0, P22) == 2.0
        assert pressure_from_densities(0.0, 2.0, EosParams(3.0, 2.0, 1.0)) == 4.0
        assert pressure_from_densities(1.0, 1.0, EosParams(1.0, 1.0, 1.0)) == 2.0

    def test_errors(self):
        with pytest.raises(InadmissibleStateError):
            pressure_from_densities(1.0, 0.0, P22)
        with pytest.raises(InadmissibleStateError):
            pressure_from_densities(-0.1, 1.0, P22)


class TestVariableChange:
    def test_to_RS_examples(self):
        assert to_RS(1.0, 1.0) == (2.0, 1.0)
        assert to_RS(0.0, 3.0) == (3.0, 0.0)
        assert to_RS(2.0, 1.0) == (3.0, 2.0)

    def test_from_RS_examples(self):
        assert from_RS(2.0, 1.0) == (1.0, 1.0)
        assert from_RS(3.0, 0.0) == (0.0, 3.0)
        rho, n = from_RS(3.0, 2.0)
        assert (rho, n) == pytest.approx((2.0, 1.0), rel=1e-15)

    @given(
        rho=st.floats(0.0, 1e3),
        n=st.floats(1e-6, 1e3),
    )
    @settings(max_examples=200)
    def test_round_trip(self, rho, n):
        R, S = to_RS(rho, n)
        rho2, n2 = from_RS(R, S)
        assert rho2 == pytest.approx(rho, rel=1e-12, abs=1e-12)
        assert n2 == pytest.approx(n, rel=1e-12)

    def test_errors(self):
        with pytest.raises(InadmissibleStateError):
            to_RS(1.0, 0.0)
        with pytest.raises(InadmissibleStateError):
            from_RS(0.0, 1.0)
        with pytest.raises(InadmissibleStateError):
            from_RS(1.0, -0.1)


class TestPressureRS:
    def test_examples(self):
        assert pressure_RS(2.0, 1.0, P22) == pytest.approx(2.0, rel=1e-15)
        assert pressure_RS(3.0, 0.0, P22) == pytest.approx(9.0, rel=1e-15)

    def test_matches_density_form(self, rng):
        for _ in range(100):
            params = random_params(rng)
            R, S = rng.uniform(0.1, 5.0), rng.uniform(0.0, 4.0)
            rho, n = from_RS(R, S)
            assert pressure_RS(R, S, params) == pytest.approx(
                pressure_from_densities(rho, n, params), rel=1e-14
            )

    def test_monotone_in_R(self, rng):
        for _ in range(50):
            params = random_params(rng)
            S = rng.uniform(0.0, 4.0)
            Rs = np.sort(rng.uniform(0.1, 5.0, 10))
            Ps = [pressure_RS(R, S, params) for R in Rs]
            assert np.all(np.diff(Ps) > 0)


class TestDerivative:
    def test_examples(self):
        assert dP_dR(2.0, 1.0, P22) == pytest.approx(2.0, rel=1e-15)
        assert dP_dR(3.0, 0.0, P22) == pytest.approx(6.0, rel=1e-15)

    def test_finite_difference_second_order(self, rng):
        params = EosParams(alpha=2.4, gamma=1.6, A=0.7)
        R, S = 1.7, 0.8
        exact = dP_dR(R, S, params)
        errors = []
        for h in (1e-2, 5e-3, 2.5e-3):
            fd = (pressure_RS(R + h, S, params) - pressure_RS(R - h, S, params)) / (2 * h)
            errors.append(abs(fd - exact))
        rates = [np.log2(errors[i] / errors[i + 1]) for i in range(2)]
        assert all(rate > 1.9 for rate in rates)

    def test_equal_exponent_identity(self, rng):
        for _ in range(100):
            gamma = rng.uniform(1.0, 3.0)
            params = EosParams(alpha=gamma, gamma=gamma, A=rng.uniform(0.3, 2.0))
            R, S = rng.uniform(0.1, 5.0), rng.uniform(0.0, 4.0)
            assert R * dP_dR(R, S, params) == pytest.approx(
                gamma * pressure_RS(R, S, params), rel=1e-12
            )

    def test_sound_speed(self, rng):
        assert sound_speed(2.0, 1.0, P22) == pytest.approx(np.sqrt(2.0), rel=1e-15)
        assert sound_speed(3.0, 0.0, P22) == pytest.approx(np.sqrt(6.0), rel=1e-15)
        for _ in range(20):
            params = random_params(rng)
            R, S = rng.uniform(0.1, 5.0), rng.uniform(0.0, 4.0)
            assert sound_speed(R, S, params) ** 2 == pytest.approx(
                dP_dR(R, S, params), rel=1e-14
            )


class TestInversion:
    def test_round_trip_examples(self):
        assert density_from_pressure(2.0, 1.0, P22) == pytest.approx(2.0, rel=1e-12)
        assert density_from_pressure(9.0, 0.0, P22) == pytest.approx(3.0, rel=1e-12)

    def test_closed_form_equal_exponents(self, rng):
        for _ in range(50):
            gamma = rng.uniform(1.0, 3.0)
            params = EosParams(alpha=gamma, gamma=gamma, A=rng.uniform(0.3, 2.0))
            S = rng.uniform(0.0, 4.0)
            P = rng.uniform(0.1, 20.0)
            closed = (S + 1.0) * (P / (S**gamma + params.A)) ** (1.0 / gamma)
            assert density_from_pressure(P, S, params) == pytest.approx(closed, rel=1e-11)

    def test_random_round_trips(self, rng):
        for _ in range(100):
            params = random_params(rng)
            R, S = rng.uniform(1e-3, 50.0), rng.uniform(0.0, 4.0)
            P = pressure_RS(R, S, params)
            assert density_from_pressure(P, S, params) == pytest.approx(R, rel=1e-11)

    def test_errors(self):
        with pytest.raises(ValueError):
            density_from_pressure(0.0, 1.0, P22)
        with pytest.raises(ValueError):
            density_from_pressure(-1.0, 1.0, P22)


class TestReducedCoeffs:
    def test_examples(self):
        assert reduced_isentropic_coeffs(1.0, P22) == pytest.approx((0.25, 0.25))
        c1, c2 = reduced_isentropic_coeffs(0.0, EosParams(2.5, 1.5, 0.7))
        assert c1 == 0.0 and c2 == 0.7

    def test_reconstructs_pressure(self, rng):
        for _ in range(100):
            params = random_params(rng)
            S = rng.uniform(0.0, 4.0)
            c1, c2 = reduced_isentropic_coeffs(S, params)
            assert c1 >= 0.0 and c2 > 0.0
            R = rng.uniform(0.1, 5.0)
            assert c1 * R**params.alpha + c2 * R**params.gamma == pytest.approx(
                pressure_RS(R, S, params), rel=1e-13
            )


class TestState:
    def test_derived_quantities(self):
        state = State(n=1.0, rho=1.0, u=[1, 2, 3], H=[0, 1, 0])
        assert state.R == 2.0
        assert state.S == 1.0
        assert state.pressure(P22) == 2.0
        assert state.total_pressure(P22) == 2.5
        assert state.sound_speed(P22) == pytest.approx(np.sqrt(2.0))

    def test_admissibility(self):
        bad = State(n=-1.0, rho=1.0)
        assert not bad.is_admissible
        with pytest.raises(InadmissibleStateError):
            bad.require_admissible()
        with pytest.raises(ValueError):
            State(n=np.nan, rho=1.0)

    def test_vector_round_trip(self, rng):
        for _ in range(50):
            params = random_params(rng)
            state = State(
                n=rng.uniform(0.2, 3.0), rho=rng.uniform(0.0, 3.0),
                u=rng.uniform(-2, 2, 3), H=rng.uniform(-2, 2, 3),
            )
            back = State.from_vector(state.to_vector(params), params)
            assert back.n == pytest.approx(state.n, rel=1e-10)
            assert back.rho == pytest.approx(state.rho, rel=1e-10, abs=1e-12)
            np.testing.assert_allclose(back.u, state.u)
            np.testing.assert_allclose(back.H, state.H)
