import numpy as np
import pytest

from evtmodes import (
    DegenerateDenominator,
    InputError,
    InterexceedanceTimes,
    TooFewExceedances,
    autocorrelation,
    ferro_segers,
    interexceedance,
    sample_interexceedance,
)

# Exceedance tick positions of the two schematic clustering panels: the
# unclustered series and its pairwise-clustered variant.
UNCLUSTERED_TIMES = [4, 9, 10, 15, 24, 27, 29, 45, 48, 53, 55, 60, 62, 69, 76, 82, 98]
PAIR_CLUSTERED_TIMES = [4, 5, 11, 15, 16, 29, 30, 53, 54, 55, 56, 62, 63, 76, 77, 82, 83, 98, 99]


class TestInterexceedance:
    def test_schematic_head(self):
        it = interexceedance([4, 9, 10, 15])
        assert list(it.tau) == [5, 1, 5]
        assert it.n_exceedances == 4

    def test_two_points(self):
        assert list(interexceedance([1, 2]).tau) == [1]

    def test_equal_spacing(self):
        assert list(interexceedance([0, 10, 20, 30]).tau) == [10, 10, 10]

    def test_too_few(self):
        with pytest.raises(TooFewExceedances):
            interexceedance([7])

    def test_not_increasing(self):
        with pytest.raises(InputError):
            interexceedance([3, 3, 5])


class TestFerroSegers:
    def test_pair_clustered_panel(self):
        theta = ferro_segers(interexceedance(PAIR_CLUSTERED_TIMES))
        assert theta == pytest.approx(0.68, abs=0.005)

    def test_unclustered_panel_capped(self):
        # raw moment ratio is ~1.25 for these gaps; the cap engages
        theta = ferro_segers(interexceedance(UNCLUSTERED_TIMES))
        assert theta == 1.0

    def test_hand_evaluated_repeating_gaps(self):
        it = InterexceedanceTimes(tau=np.array([1, 1, 100] * 5), n_exceedances=16)
        assert ferro_segers(it) == pytest.approx(33.0 / 49.0, rel=1e-12)

    def test_small_gap_branch(self):
        # max tau <= 2 uses plain moments: 2*(1.5)^2/2.5 = 1.8, capped
        it = InterexceedanceTimes(tau=np.array([1, 2, 1, 2]), n_exceedances=5)
        assert ferro_segers(it) == 1.0

    def test_time_shift_invariance(self):
        times = np.array(PAIR_CLUSTERED_TIMES)
        a = ferro_segers(interexceedance(times))
        b = ferro_segers(interexceedance(times + 12345))
        assert a == b

    def test_always_in_unit_interval(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            gaps = rng.integers(1, 30, size=rng.integers(1, 40))
            it = InterexceedanceTimes(tau=gaps, n_exceedances=gaps.size + 1)
            theta = ferro_segers(it)
            assert 0.0 < theta <= 1.0

    def test_degenerate_denominator_guard(self):
        # unreachable for valid integer gaps; exercised via the guard itself
        it = InterexceedanceTimes(tau=np.array([1.0, 1.0]), n_exceedances=3)
        object.__setattr__(it, "tau", np.array([0.0, 0.0]))
        with pytest.raises(DegenerateDenominator):
            ferro_segers(it)

    def test_empty(self):
        it = InterexceedanceTimes(tau=np.array([], dtype=int), n_exceedances=1)
        with pytest.raises(TooFewExceedances):
            ferro_segers(it)


class TestSampler:
    def test_poisson_mean_gap(self):
        zeta = 0.01
        times = sample_interexceedance(1.0, zeta, seed=3, n=100_000)
        gaps = np.diff(times)
        se = gaps.std() / np.sqrt(gaps.size)
        assert abs(gaps.mean() - 1.0 / zeta) < 3.0 * se + 0.5  # +0.5 ceil bias

    @pytest.mark.parametrize("theta", [0.5, 0.25])
    def test_estimator_recovers_theta(self, theta):
        times = sample_interexceedance(theta, 0.001, seed=11, n=100_000)
        est = ferro_segers(interexceedance(times))
        assert est == pytest.approx(theta, abs=0.03)

    def test_deterministic(self):
        a = sample_interexceedance(0.5, 0.01, seed=9, n=1000)
        b = sample_interexceedance(0.5, 0.01, seed=9, n=1000)
        assert np.array_equal(a, b)

    def test_validation(self):
        with pytest.raises(InputError):
            sample_interexceedance(0.0, 0.01, seed=1, n=10)
        with pytest.raises(InputError):
            sample_interexceedance(0.5, 0.01, seed=1, n=1)

    @pytest.mark.parametrize("theta", [0.25, 0.5, 0.75, 1.0])
    def test_mean_absolute_error_small(self, theta):
        errs = [
            ferro_segers(interexceedance(sample_interexceedance(theta, 0.001, seed=s, n=20_000))) - theta
            for s in range(5)
        ]
        assert np.mean(np.abs(errs)) <= 0.03


class TestAutocorrelation:
    def test_alternating_series(self):
        x = np.tile([1.0, -1.0], 500)
        assert autocorrelation(x, 1)[0] == pytest.approx(-1.0, abs=1e-12)

    def test_white_noise_band(self):
        n = 100_000
        x = np.random.default_rng(2).standard_normal(n)
        acf = autocorrelation(x, 50)
        inside = np.abs(acf) < 4.0 / np.sqrt(n)
        assert inside.mean() >= 0.95

    def test_ar1_closed_form(self):
        phi, n = 0.8, 1_000_000
        rng = np.random.default_rng(7)
        eps = rng.standard_normal(n)
        x = np.empty(n)
        x[0] = eps[0] / np.sqrt(1 - phi**2)
        for t in range(1, n):
            x[t] = phi * x[t - 1] + eps[t]
        acf = autocorrelation(x, 20)
        expected = phi ** np.arange(1, 21)
        assert np.max(np.abs(acf - expected)) < 0.02

    def test_requires_length(self):
        with pytest.raises(InputError):
            autocorrelation([1.0, 2.0], 5)
