import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from lfequad import (
    LocalExpansion,
    WindowConfig,
    build_reference,
    evaluate_expansion,
    integrate_expansion,
    load_factors,
    mode_weights,
    save_factors,
    solve_coefficients,
)
from lfequad.errors import ConfigError, DimensionMismatchError, InvalidInputError

LAM = np.pi / 3  # sampled reference interval for T=6


class TestWindowConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0),
            dict(T=1.0),
            dict(T=0.5),
            dict(epsilon=0.0),
            dict(epsilon=-1e-15),
            dict(n=10, m=20),
        ],
    )
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ConfigError):
            WindowConfig(**kwargs)

    def test_defaults(self, config):
        assert (config.n, config.m, config.T, config.epsilon) == (10, 21, 6.0, 1e-15)
        assert config.L == 120.0


class TestBuildReference:
    def test_small_matrix_entries(self):
        cfg = WindowConfig(n=1, m=3, T=6.0)
        ref = build_reference(cfg)
        t = ref.nodes
        np.testing.assert_allclose(t, [0.0, np.pi / 6, np.pi / 3], atol=1e-15)
        # column order is l = -1, 0, 1; L = T*(m-1) = 12
        expected = np.exp(1j * np.pi / 3) / np.sqrt(12.0)
        assert ref.matrix[2, 2] == pytest.approx(expected, abs=1e-15)

    def test_default_matrix_is_severely_ill_conditioned(self, factors):
        s = factors.svd.sigma
        assert s[0] > 1e-1
        assert s[-1] < 1e-8

    def test_rebuild_is_bitwise_identical(self, config):
        a = build_reference(config)
        b = build_reference(WindowConfig())
        assert np.array_equal(a.matrix, b.matrix)
        assert np.array_equal(a.svd.u, b.svd.u)
        assert np.array_equal(a.svd.sigma, b.svd.sigma)
        assert np.array_equal(a.svd.v, b.svd.v)

    def test_cache_roundtrip(self, factors, tmp_path):
        path = tmp_path / "ref.bin"
        save_factors(factors, path)
        back = load_factors(path)
        assert back.config.n == factors.config.n
        assert back.config.m == factors.config.m
        assert back.config.T == factors.config.T
        np.testing.assert_array_equal(back.svd.u, factors.svd.u)
        np.testing.assert_array_equal(back.svd.sigma, factors.svd.sigma)
        np.testing.assert_array_equal(back.svd.v, factors.svd.v)
        np.testing.assert_allclose(back.matrix, factors.matrix, atol=1e-16)

    def test_cache_rejects_garbage(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"not a cache at all")
        with pytest.raises(InvalidInputError):
            load_factors(path)


class TestModeWeights:
    def test_zero_mode_full_range(self, config):
        w = mode_weights(config, 0.0)
        assert w.weights[config.n] == pytest.approx(LAM, abs=1e-15)

    def test_first_mode_full_range(self, config):
        w = mode_weights(config, 0.0)
        expected = np.sqrt(3) / 2 + 0.5j  # (exp(i*pi/3) - 1) / i
        assert w.weights[config.n + 1] == pytest.approx(expected, abs=1e-15)

    def test_truncated_zero_mode(self, config):
        w = mode_weights(config, np.pi / 6)
        assert w.weights[config.n] == pytest.approx(np.pi / 6, abs=1e-15)

    def test_range_additivity(self, config):
        full = mode_weights(config, 0.0).weights
        first = mode_weights(config, 0.0, np.pi / 6).weights
        second = mode_weights(config, np.pi / 6).weights
        np.testing.assert_allclose(full, first + second, atol=1e-15)

    def test_conjugate_symmetry(self, config):
        w = mode_weights(config, 0.1).weights
        np.testing.assert_allclose(w, np.conj(w[::-1]), atol=1e-16)

    def test_out_of_range_rejected(self, config):
        with pytest.raises(InvalidInputError):
            mode_weights(config, -0.1)
        with pytest.raises(InvalidInputError):
            mode_weights(config, LAM)

    @pytest.mark.parametrize("t_lo,t_hi", [(0.0, LAM), (0.2, 0.9), (0.0, 0.3), (0.5, LAM)])
    def test_matches_adaptive_quadrature(self, config, t_lo, t_hi):
        w = mode_weights(config, t_lo, t_hi).weights
        for idx, ell in enumerate(config.modes):
            re, _ = quad(lambda t: np.cos(ell * t), t_lo, t_hi, epsabs=1e-15)
            im, _ = quad(lambda t: np.sin(ell * t), t_lo, t_hi, epsabs=1e-15)
            assert abs(w[idx] - (re + 1j * im)) <= 1e-13

    @given(t_mid=st.floats(min_value=1e-6, max_value=LAM - 1e-6))
    def test_additivity_any_interior_split(self, t_mid):
        cfg = WindowConfig()
        full = mode_weights(cfg, 0.0).weights
        a = mode_weights(cfg, 0.0, t_mid).weights
        b = mode_weights(cfg, t_mid).weights
        assert np.max(np.abs(full - (a + b))) <= 1e-15


class TestSolveCoefficients:
    def test_zero_samples_give_zero_coefficients(self, factors):
        c = solve_coefficients(factors, np.zeros(21))
        assert np.all(c == 0)

    def test_linearity(self, factors, rng):
        g1 = rng.normal(size=21)
        g2 = rng.normal(size=21)
        c1 = solve_coefficients(factors, g1)
        c2 = solve_coefficients(factors, g2)
        c12 = solve_coefficients(factors, g1 + g2)
        assert np.linalg.norm(c12 - (c1 + c2)) <= 1e-13 * np.linalg.norm(c12)

    def test_in_span_target_reconstructs_at_nodes(self, factors):
        g = np.exp(1j * factors.nodes)
        c = solve_coefficients(factors, g)
        recon = factors.matrix @ c
        assert np.max(np.abs(recon - g)) <= 1e-12

    def test_wrong_length_rejected(self, factors):
        with pytest.raises(DimensionMismatchError):
            solve_coefficients(factors, np.zeros(20))

    def test_nonfinite_rejected(self, factors):
        g = np.zeros(21)
        g[3] = np.inf
        with pytest.raises(InvalidInputError):
            solve_coefficients(factors, g)

    def test_regularization_monotonicity(self, factors, rng):
        g = rng.normal(size=21)
        loose = np.linalg.norm(solve_coefficients(factors, g, 1e-8))
        tight = np.linalg.norm(solve_coefficients(factors, g, 1e-15))
        assert tight >= loose


def _expansion_from_samples(factors, samples, origin=0.4, h=0.01):
    cfg = factors.config
    scale = (cfg.T / (2 * np.pi)) * (cfg.m - 1) * h
    c = solve_coefficients(factors, np.asarray(samples, dtype=complex))
    return LocalExpansion(coefficients=c, scale=scale, origin=origin, L=factors.L)


class TestIntegrateExpansion:
    def test_constant_window_integrates_to_length(self, factors, config):
        h = 0.01
        exp = _expansion_from_samples(factors, np.ones(21), h=h)
        q = integrate_expansion(exp, mode_weights(config, 0.0))
        length = (config.m - 1) * h
        assert abs(q.real - length) <= 1e-13 * length

    def test_zero_coefficients_integrate_to_zero(self, factors, config):
        exp = LocalExpansion(np.zeros(21, dtype=complex), 0.1, 0.0, factors.L)
        assert integrate_expansion(exp, mode_weights(config, 0.0)) == 0

    @pytest.mark.parametrize("t_star", [0.05, 0.22, 0.5, 0.9])
    def test_splitting_additivity(self, factors, config, t_star):
        # engine-style data (a short physical window of a smooth function):
        # rough samples would drive the near-null coefficients to ~1e16 and
        # the weighted sums would lose relative accuracy to cancellation
        h = 0.01
        x = 0.4 + np.arange(21) * h
        g = 3 * x**2 - np.exp(-x) - 2 * np.sin(2 * x)
        exp = _expansion_from_samples(factors, g, origin=0.4, h=h)
        whole = integrate_expansion(exp, mode_weights(config, 0.0))
        left = integrate_expansion(exp, mode_weights(config, 0.0, t_star))
        right = integrate_expansion(exp, mode_weights(config, t_star))
        assert abs(whole - (left + right)) <= 1e-14 * max(abs(whole), 1.0)

    def test_dimension_mismatch(self, factors, config):
        exp = LocalExpansion(np.zeros(5, dtype=complex), 0.1, 0.0, factors.L)
        with pytest.raises(DimensionMismatchError):
            integrate_expansion(exp, mode_weights(config, 0.0))

    def test_cubic_polynomial_window(self, factors, config, rng):
        # solved expansion of a low-degree polynomial integrates near-exactly
        coef = rng.normal(size=4)
        h = 0.015
        origin = 0.3
        x = origin + np.arange(21) * h

        def p(t):
            return coef[0] + coef[1] * t + coef[2] * t**2 + coef[3] * t**3

        def P(t):
            return coef[0] * t + coef[1] * t**2 / 2 + coef[2] * t**3 / 3 + coef[3] * t**4 / 4

        exp = _expansion_from_samples(factors, p(x), origin=origin, h=h)
        q = integrate_expansion(exp, mode_weights(config, 0.0)).real
        exact = P(x[-1]) - P(origin)
        assert abs(q - exact) <= 1e-10 * abs(exact)

    def test_real_samples_leave_tiny_imaginary_part(self, factors, config):
        h = 0.012
        x = 0.7 + np.arange(21) * h
        g = np.cos(2 * x) + x**2
        exp = _expansion_from_samples(factors, g, origin=0.7, h=h)
        q = integrate_expansion(exp, mode_weights(config, 0.0))
        assert abs(q.imag) <= 1e-12 * (1.0 + abs(q.real))


class TestEvaluateExpansion:
    def test_zero_coefficients(self, factors):
        exp = LocalExpansion(np.zeros(21, dtype=complex), 0.1, 0.0, factors.L)
        assert evaluate_expansion(exp, 0.05) == 0

    def test_constant_mode(self, factors):
        c = np.zeros(21, dtype=complex)
        c[10] = np.sqrt(factors.L)
        exp = LocalExpansion(c, 0.1, 0.0, factors.L)
        for x in (0.0, 0.03, 0.11):
            assert evaluate_expansion(exp, x) == pytest.approx(1.0, abs=1e-14)

    def test_matches_naive_term_sum(self, factors, rng):
        c = rng.normal(size=21) + 1j * rng.normal(size=21)
        exp = LocalExpansion(c, 0.07, 0.2, factors.L)
        x = 0.233
        t = (x - exp.origin) / exp.scale
        naive = sum(
            c[k] * np.exp(1j * ell * t) for k, ell in enumerate(range(-10, 11))
        ) / np.sqrt(factors.L)
        assert abs(evaluate_expansion(exp, x) - naive) <= 1e-15 * abs(naive)

    def test_vectorized_evaluation(self, factors, rng):
        c = rng.normal(size=21) + 1j * rng.normal(size=21)
        exp = LocalExpansion(c, 0.07, 0.2, factors.L)
        xs = np.array([0.2, 0.21, 0.25])
        vals = evaluate_expansion(exp, xs)
        assert vals.shape == (3,)
        for x, v in zip(xs, vals):
            assert evaluate_expansion(exp, x) == pytest.approx(v, abs=1e-15)
