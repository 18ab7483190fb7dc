import math

import numpy as np
import pytest

from wvsim import (
    CouplingWeights,
    InvalidParameterError,
    PostselectionError,
    ProtocolParams,
    build_rho_alpha,
    coupling_weights,
    expectation_sigma_sum,
    final_amplitudes,
    pointer_std,
    postselect_probability,
    second_moment,
    sweep_beta,
    wv_single,
    wv_single_trace,
    wv_sum,
)

from conftest import draw_angles, single_denominator


class TestProtocolParams:
    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidParameterError):
            ProtocolParams(n=0, alpha=0.0, beta=0.0, delta=1.0)
        with pytest.raises(InvalidParameterError):
            ProtocolParams(n=61, alpha=0.0, beta=0.0, delta=1.0)
        with pytest.raises(InvalidParameterError):
            ProtocolParams(n=7, alpha=0.0, beta=0.0, delta=0.0)
        with pytest.raises(InvalidParameterError):
            ProtocolParams(n=7, alpha=math.inf, beta=0.0, delta=1.0)

    def test_spectrum(self):
        p = ProtocolParams(n=7, alpha=0.0, beta=0.0, delta=1.0)
        assert p.spectrum().tolist() == [-7, -5, -3, -1, 1, 3, 5, 7]


class TestCouplingWeights:
    def test_aligned_states(self):
        w = coupling_weights(ProtocolParams(n=1, alpha=0.0, beta=0.0, delta=1.0))
        assert w.mu == 1.0 and w.nu == 0.0

    def test_symmetric_point(self):
        w = coupling_weights(ProtocolParams(n=1, alpha=math.pi / 4, beta=math.pi / 4, delta=1.0))
        assert w.mu == pytest.approx(0.5, abs=1e-15)
        assert w.nu == pytest.approx(0.5, abs=1e-15)

    def test_direct_evaluation(self):
        w = coupling_weights(ProtocolParams(n=7, alpha=0.62, beta=2.53, delta=5.84))
        assert w.mu == math.cos(0.62) * math.cos(2.53)
        assert w.nu == math.sin(0.62) * math.sin(2.53)

    def test_contraction_bound(self):
        # Cauchy-Schwarz: |mu| + |nu| <= 1, so one block never gains weight.
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a, b = draw_angles(rng)
            w = coupling_weights(ProtocolParams(n=1, alpha=a, beta=b, delta=1.0))
            assert abs(w.mu) + abs(w.nu) <= 1.0 + 1e-12

    def test_validates_range(self):
        with pytest.raises(InvalidParameterError):
            CouplingWeights(mu=1.5, nu=0.0)


class TestRhoAlpha:
    def test_pure_h(self):
        rho = build_rho_alpha(0.0, 1.0).entries
        assert np.allclose(rho, np.diag([1.0, 0.0]), atol=1e-15)

    def test_no_decoherence_limit(self):
        rho = build_rho_alpha(math.pi / 4, 1e9).entries
        assert np.allclose(rho, np.full((2, 2), 0.5), atol=1e-12)

    def test_off_diagonal_value(self):
        # 0.5 * exp(-0.5) at alpha = pi/4, delta = 1
        rho = build_rho_alpha(math.pi / 4, 1.0).entries
        assert rho[0, 1].real == pytest.approx(0.30326532985631671, abs=1e-15)

    def test_rejects_nonpositive_width(self):
        with pytest.raises(InvalidParameterError):
            build_rho_alpha(0.3, -1.0)

    def test_density_matrix_invariants(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, _ = draw_angles(rng)
            delta = float(rng.uniform(0.05, 30.0))
            rho = build_rho_alpha(a, delta).entries
            assert np.allclose(rho, rho.conj().T, atol=1e-12)
            assert abs(np.trace(rho) - 1.0) <= 1e-12
            assert np.linalg.eigvalsh(rho).min() >= -1e-12


class TestWvSingle:
    def test_eigenstate(self):
        assert wv_single(0.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_symmetric_point_vanishes(self):
        assert wv_single(math.pi / 4, math.pi / 4, 3.0) == pytest.approx(0.0, abs=1e-15)

    def test_orthogonal_postselection_raises(self):
        with pytest.raises(PostselectionError):
            wv_single(math.pi / 2, 0.0, 1.0)

    def test_trace_form_consistency(self):
        # Eq-level cross-validation: closed form vs density-matrix trace form.
        rng = np.random.default_rng(23)
        checked = 0
        while checked < 1000:
            a, b = draw_angles(rng)
            delta = float(rng.uniform(0.1, 20.0))
            if single_denominator(a, b, delta) <= 1e-2:
                continue
            checked += 1
            assert abs(wv_single(a, b, delta) - wv_single_trace(a, b, delta)) < 1e-12

    def test_reduction_to_sum(self):
        p = ProtocolParams(n=1, alpha=0.62, beta=2.53, delta=5.84)
        assert wv_sum(p) == wv_single(0.62, 2.53, 5.84)


class TestWvSum:
    def test_reduction_identity_random(self):
        # n = 1 double sum must collapse to the single-coupling closed form.
        rng = np.random.default_rng(31)
        worst = 0.0
        checked = 0
        while checked < 1000:
            a, b = draw_angles(rng)
            delta = float(rng.uniform(0.1, 20.0))
            if single_denominator(a, b, delta) <= 1e-6:
                continue
            checked += 1
            p = ProtocolParams(n=1, alpha=a, beta=b, delta=delta)
            worst = max(worst, abs(wv_sum(p) - wv_single(a, b, delta)))
        assert worst < 1e-12

    def test_alpha_beta_symmetry(self):
        rng = np.random.default_rng(37)
        for _ in range(200):
            a, b = draw_angles(rng)
            delta = float(rng.uniform(0.3, 10.0))
            try:
                lhs = wv_sum(ProtocolParams(n=5, alpha=a, beta=b, delta=delta))
                rhs = wv_sum(ProtocolParams(n=5, alpha=b, beta=a, delta=delta))
            except PostselectionError:
                continue
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_sign_flip_swapped_weights(self):
        # Exchanging the two coupling weights flips the sign of the mean.
        from wvsim.analytic import _double_sums_weights

        rng = np.random.default_rng(41)
        for _ in range(200):
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 9))
            delta = float(rng.uniform(0.3, 10.0))
            mu = math.cos(a) * math.cos(b)
            nu = math.sin(a) * math.sin(b)
            num, _, den = _double_sums_weights(n, mu, nu, delta)
            num_swap, _, den_swap = _double_sums_weights(n, nu, mu, delta)
            if den <= 1e-6:
                continue
            assert num / den == pytest.approx(-num_swap / den_swap, abs=1e-12)

    def test_sign_flip_angle_mapping(self):
        # (alpha, beta) -> (pi/2 - alpha, pi/2 - beta) swaps mu and nu up to
        # trig roundoff; near-orthogonal settings amplify that ulp-level
        # input difference, so stay above a conditioning floor.
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 200:
            a, b = draw_angles(rng)
            delta = float(rng.uniform(0.3, 10.0))
            p = ProtocolParams(n=4, alpha=a, beta=b, delta=delta)
            try:
                if postselect_probability(p) <= 1e-3:
                    continue
                lhs = wv_sum(p)
                rhs = wv_sum(
                    ProtocolParams(n=4, alpha=math.pi / 2 - a, beta=math.pi / 2 - b, delta=delta)
                )
            except PostselectionError:
                continue
            checked += 1
            assert lhs == pytest.approx(-rhs, abs=1e-9 * (1 + abs(lhs)))

    def test_weak_coupling_limit(self):
        # Huge pointer width: the weak value approaches n (mu - nu)/(mu + nu).
        rng = np.random.default_rng(43)
        checked = 0
        while checked < 200:
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 8))
            mu = math.cos(a) * math.cos(b)
            nu = math.sin(a) * math.sin(b)
            if abs(mu + nu) <= 0.01:
                continue
            p = ProtocolParams(n=n, alpha=a, beta=b, delta=1e6)
            try:
                if postselect_probability(p) <= 1e-6:
                    continue
                value = wv_sum(p)
            except PostselectionError:
                continue
            checked += 1
            assert abs(value - n * (mu - nu) / (mu + nu)) < 1e-5

    def test_strong_coupling_limit(self):
        # Tiny pointer width decoheres the blocks; the conditional mean must
        # stay inside the eigenvalue range.
        rng = np.random.default_rng(47)
        checked = 0
        while checked < 200:
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 8))
            p = ProtocolParams(n=n, alpha=a, beta=b, delta=1e-3)
            try:
                value = wv_sum(p)
            except PostselectionError:
                continue
            checked += 1
            assert abs(value) <= n + 1e-6


class TestMoments:
    def test_single_shifted_gaussian(self):
        p = ProtocolParams(n=1, alpha=0.0, beta=0.0, delta=2.0)
        assert second_moment(p) == pytest.approx(5.0, abs=1e-12)
        assert pointer_std(p) == pytest.approx(2.0, abs=1e-12)

    def test_variance_nonnegative_random(self):
        rng = np.random.default_rng(53)
        for _ in range(300):
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 9))
            delta = float(rng.uniform(0.2, 10.0))
            p = ProtocolParams(n=n, alpha=a, beta=b, delta=delta)
            try:
                x2 = second_moment(p)
                mean = wv_sum(p)
            except PostselectionError:
                continue
            assert x2 - mean * mean >= -1e-9
            pointer_std(p)  # must not raise

    def test_narrowing_below_initial_width(self):
        # The strongly anomalous preset ends up narrower than it started.
        p = ProtocolParams(n=7, alpha=0.62, beta=2.53, delta=5.84)
        assert pointer_std(p) < p.delta


class TestFinalAmplitudes:
    def test_single_block_symmetric(self):
        sup = final_amplitudes(ProtocolParams(n=1, alpha=math.pi / 4, beta=math.pi / 4, delta=1.0))
        assert sup.shifts.tolist() == [-1, 1]
        assert sup.amplitudes == pytest.approx([0.5, 0.5], abs=1e-15)

    def test_pure_h_two_blocks(self):
        sup = final_amplitudes(ProtocolParams(n=2, alpha=0.0, beta=0.0, delta=1.0))
        assert sup.shifts.tolist() == [-2, 0, 2]
        assert sup.amplitudes == pytest.approx([0.0, 0.0, 1.0], abs=1e-15)

    def test_term_count(self):
        sup = final_amplitudes(ProtocolParams(n=7, alpha=0.62, beta=2.53, delta=5.84))
        assert sup.shifts.size == 8
        assert sup.shifts[0] == -7 and sup.shifts[-1] == 7

    def test_norm_equals_probability(self):
        rng = np.random.default_rng(59)
        for _ in range(200):
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 9))
            delta = float(rng.uniform(0.2, 10.0))
            p = ProtocolParams(n=n, alpha=a, beta=b, delta=delta)
            try:
                prob = postselect_probability(p)
            except PostselectionError:
                continue
            assert abs(final_amplitudes(p).squared_norm() - prob) < 1e-12
            assert 0.0 < prob <= 1.0

    def test_moment_consistency(self):
        # Gaussian pair integrals over the superposition must reproduce the
        # direct double sums.  Both routes carry independently rounded
        # products, so near-vanishing pass probabilities (which amplify any
        # term-level roundoff) are excluded.
        rng = np.random.default_rng(61)
        checked = 0
        while checked < 200:
            a, b = draw_angles(rng)
            n = int(rng.integers(1, 9))
            delta = float(rng.uniform(0.2, 10.0))
            p = ProtocolParams(n=n, alpha=a, beta=b, delta=delta)
            try:
                if postselect_probability(p) <= 1e-6:
                    continue
                mean = wv_sum(p)
            except PostselectionError:
                continue
            checked += 1
            sup = final_amplitudes(p)
            assert abs(sup.mean() - mean) < 1e-10 * (1 + abs(mean))
            assert abs(sup.second_moment() - second_moment(p)) < 1e-10 * (1 + second_moment(p))


class TestExpectation:
    def test_preselected_baseline(self):
        assert expectation_sigma_sum(7, 0.62) == pytest.approx(2.2735739910714337, abs=1e-12)

    def test_balanced_superposition(self):
        assert expectation_sigma_sum(7, math.pi / 4) == pytest.approx(0.0, abs=1e-12)

    def test_eigenstate(self):
        assert expectation_sigma_sum(7, 0.0) == 7.0

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidParameterError):
            expectation_sigma_sum(0, 0.3)


class TestSweepBeta:
    def test_symmetric_point_zero(self):
        rows = sweep_beta(7, math.pi / 4, 3.0, [math.pi / 4])
        assert rows[0].weak_value == pytest.approx(0.0, abs=1e-12)

    def test_undefined_points_are_nan_rows(self):
        # alpha = pi/2 with beta = 0 makes the block transmission vanish.
        rows = sweep_beta(3, math.pi / 2, 2.0, [0.0, 1.0])
        assert math.isnan(rows[0].weak_value) and math.isnan(rows[0].std)
        assert not math.isnan(rows[1].weak_value)

    def test_row_per_grid_point(self):
        grid = np.linspace(0.5, 2.5, 11)
        rows = sweep_beta(7, 0.62, 5.8, grid)
        assert len(rows) == 11
        assert [r.beta for r in rows] == pytest.approx(list(grid))
