import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finpow import (
    LatticeModelParams,
    BoundarySpec,
    DivergentSeriesError,
    DriverLimits,
    InvalidBoundaryError,
    NotConvergedError,
    SingularOperatorError,
    SpectralEnvelope,
    Window,
    approximate_element,
    banded_spec,
    convergence_table,
    dispersion_integral_element,
    evaluate_window,
    lattice_spec,
    local_solve,
    periodic_policy,
    truncate,
    zero_boundary,
)

from oracles import mp_abs_binom_tail


def free_laplacian_spec():
    """Tridiagonal (-1, 2, -1): spectrum [0, 4], so c = 0 genuinely."""
    return banded_spec([-1, 0, 1], [-1.0, 2.0, -1.0], SpectralEnvelope(0.0, 4.0, 0.0))


def double_identity_spec():
    return banded_spec([0], [2.0], SpectralEnvelope(2.0, 2.0, 0.0))


class TestApproximateElement:
    def test_alpha_one_first_window(self, unit_lattice):
        _, spec, policy = unit_lattice
        for m, n in [(0, 0), (0, 1), (3, 2), (-2, -2)]:
            cert = approximate_element(spec, policy, 1.0, m, n, 1e-12)
            assert cert.bound == 0.0
            assert cert.window.P == max(abs(m), abs(n)) + 2
            assert abs(cert.value - spec.entry(m, n)) <= 1e-12

    def test_alpha_zero_is_delta(self, unit_lattice):
        _, spec, policy = unit_lattice
        for m, n in [(0, 0), (0, 1), (-1, 2)]:
            cert = approximate_element(spec, policy, 0.0, m, n, 1e-12)
            assert cert.bound == 0.0
            assert abs(cert.value - (1.0 if m == n else 0.0)) <= 1e-12

    def test_lattice_inverse_sqrt_converges(self, unit_lattice):
        params, spec, policy = unit_lattice
        tol = 1e-6
        cert = approximate_element(spec, policy, -0.5, 0, 0, tol)
        assert cert.bound <= tol
        # predict the stopping window independently: first doubling margin g
        # whose certified tail (depth g for this stencil) meets tol
        margin = 2
        while 2.0 * 5.0**-0.5 * float(mp_abs_binom_tail(-0.5, 0.8, margin)) > tol:
            margin *= 2
        assert cert.window == Window(margin, margin)
        reference = dispersion_integral_element(params, -0.5, 0, 0)
        assert abs(cert.value.real - reference) <= cert.bound

    def test_negative_alpha_with_zero_c_rejected(self):
        spec = free_laplacian_spec()
        with pytest.raises(DivergentSeriesError):
            approximate_element(spec, zero_boundary, -0.5, 0, 0, 1e-6)

    def test_nonnegative_alpha_with_zero_c_allowed(self):
        spec = free_laplacian_spec()
        cert = approximate_element(spec, zero_boundary, 1.0, 0, 1, 1e-9)
        assert abs(cert.value - -1.0) <= 1e-12

    def test_not_converged_carries_best(self, unit_lattice):
        _, spec, policy = unit_lattice
        with pytest.raises(NotConvergedError) as err:
            approximate_element(spec, policy, -0.5, 0, 0, 1e-30, DriverLimits(max_dim=65))
        best = err.value.best_certificate
        assert best is not None
        assert best.window == Window(32, 32)
        assert best.bound > 1e-30

    def test_deterministic_reruns(self, unit_lattice):
        _, spec, policy = unit_lattice
        first = approximate_element(spec, policy, -0.5, 0, 1, 1e-5)
        second = approximate_element(spec, policy, -0.5, 0, 1, 1e-5)
        assert first == second

    def test_value_matches_one_shot_evaluation(self, unit_lattice):
        _, spec, policy = unit_lattice
        cert = approximate_element(spec, policy, 0.5, 1, 0, 1e-4)
        one_shot = evaluate_window(spec, policy, 0.5, 1, 0, cert.window)
        assert cert == one_shot

    def test_bounds_nonincreasing_and_cauchy(self, unit_lattice):
        _, spec, policy = unit_lattice
        windows = [Window(g, g) for g in (2, 4, 8, 16, 32)]
        rows = convergence_table(spec, policy, -0.5, 0, 0, windows)
        bounds = [row.bound for row in rows]
        assert all(late <= early for early, late in zip(bounds, bounds[1:]))
        values = [row.value for row in rows]
        for i in range(len(values) - 1):
            assert abs(values[i + 1] - values[i]) <= bounds[i]

    @given(
        a=st.floats(0.1, 3.0),
        b=st.floats(0.1, 3.0),
        alpha=st.sampled_from([-1.0, -0.5, 0.5, 1.5]),
        margin=st.integers(3, 10),
        m=st.integers(-2, 2),
        n=st.integers(-2, 2),
    )
    @settings(max_examples=40, deadline=None)
    def test_certificate_sound_on_lattice_family(self, a, b, alpha, margin, m, n):
        params = LatticeModelParams(a, b)
        spec = lattice_spec(params)
        policy = periodic_policy(params)
        window = Window(margin, margin)
        cert = evaluate_window(spec, policy, alpha, m, n, window)
        ambient = evaluate_window(
            spec, policy, alpha, m, n, Window(8 * margin, 8 * margin)
        )
        assert abs(cert.value - ambient.value) <= cert.bound

    def test_validation_failure_raises_invalid_boundary(self, unit_lattice):
        _, spec, _ = unit_lattice

        def inflating(window):
            # large positive corner shift pushes the top eigenvalue past w
            return BoundarySpec({(-window.P, -window.P): 50.0})

        with pytest.raises(InvalidBoundaryError):
            approximate_element(spec, inflating, 0.5, 0, 0, 1e-3)


class TestConvergenceTable:
    def test_alpha_one_value_constant(self, unit_lattice):
        _, spec, policy = unit_lattice
        windows = [Window(g, g) for g in (2, 4, 8)]
        rows = convergence_table(spec, policy, 1.0, 0, 1, windows)
        for row in rows:
            assert row.value == pytest.approx(-1.0, abs=1e-12)

    def test_bound_strictly_decreasing_for_half_power(self, unit_lattice):
        _, spec, policy = unit_lattice
        windows = [Window(g, g) for g in (4, 8, 16, 32)]
        rows = convergence_table(spec, policy, 0.5, 0, 0, windows)
        bounds = [row.bound for row in rows]
        assert all(late < early for early, late in zip(bounds, bounds[1:]))

    def test_empty_window_list(self, unit_lattice):
        _, spec, policy = unit_lattice
        assert convergence_table(spec, policy, 0.5, 0, 0, []) == []

    def test_errors_recorded_per_row(self):
        spec = free_laplacian_spec()
        windows = [Window(4, 4), Window(8, 8)]
        rows = convergence_table(spec, zero_boundary, -1.0, 0, 0, windows)
        assert all(row.error is not None for row in rows)
        assert all(row.value is None for row in rows)
        assert [row.P for row in rows] == [4, 8]


class TestLocalSolve:
    def test_scaled_identity(self):
        spec = double_identity_spec()
        result = local_solve(spec, zero_boundary, {0: 1.0}, [0], 1e-10)
        value, bound = result[0]
        assert value == pytest.approx(0.5, abs=1e-12)
        assert bound <= 1e-10

    def test_lattice_against_dense_solve(self, unit_lattice):
        _, spec, policy = unit_lattice
        tol = 1e-8
        result = local_solve(spec, policy, {0: 1.0}, [0, 1, 2], tol)
        # dense oracle: direct solve on a very large plain section
        big = Window(500, 500)
        dense = truncate(spec, big).to_array()
        rhs = np.zeros(big.dim)
        rhs[big.offset(0)] = 1.0
        oracle = np.linalg.solve(dense, rhs)
        for idx in (0, 1, 2):
            value, bound = result[idx]
            assert bound <= tol
            assert abs(value - oracle[big.offset(idx)]) <= bound + 1e-12

    def test_linearity(self, unit_lattice):
        _, spec, policy = unit_lattice
        tol = 1e-7
        f1 = {-1: 0.75}
        f2 = {1: -0.25}
        combined = {-1: 0.75, 1: -0.25}
        s1 = local_solve(spec, policy, f1, [0, 2], tol)
        s2 = local_solve(spec, policy, f2, [0, 2], tol)
        s12 = local_solve(spec, policy, combined, [0, 2], tol)
        for idx in (0, 2):
            lhs = s12[idx][0]
            rhs = s1[idx][0] + s2[idx][0]
            assert abs(lhs - rhs) <= s12[idx][1] + s1[idx][1] + s2[idx][1]

    def test_total_bound_respects_tolerance(self, unit_lattice):
        _, spec, policy = unit_lattice
        tol = 1e-6
        result = local_solve(spec, policy, {-1: 2.0, 1: 1.0 + 1.0j}, [0], tol)
        _, bound = result[0]
        assert bound <= tol

    def test_zero_c_rejected(self):
        spec = free_laplacian_spec()
        with pytest.raises(SingularOperatorError):
            local_solve(spec, zero_boundary, {0: 1.0}, [0], 1e-6)

    def test_zero_rhs(self, unit_lattice):
        _, spec, policy = unit_lattice
        result = local_solve(spec, policy, {0: 0.0}, [0, 1], 1e-6)
        assert result == {0: (0.0 + 0.0j, 0.0), 1: (0.0 + 0.0j, 0.0)}
