import math

import numpy as np
import pytest
from scipy.integrate import quad

from evtmodes import (
    GevParams,
    GpdParams,
    gev_cdf,
    gev_pdf,
    gev_quantile,
    gev_support,
    gpd_cdf,
    gpd_pdf,
    gpd_quantile,
    gpd_sample,
    gpd_support,
)

GAMMAS = [-0.9, -0.5, 0.0, 0.5, 0.9]
SCALES = [0.5, 1.0, 5.0]


class TestGevCdf:
    def test_gumbel_at_location(self):
        assert gev_cdf(GevParams(0.0, 0.0, 1.0), 0.0) == pytest.approx(math.exp(-1.0))

    def test_upper_endpoint_bounded_tail(self):
        # upper endpoint b + a/|gamma| = 2
        assert gev_cdf(GevParams(-0.5, 0.0, 1.0), 2.0) == 1.0
        assert gev_cdf(GevParams(-0.5, 0.0, 1.0), 5.0) == 1.0

    def test_heavy_tail_closed_form(self):
        # (1 + 0.5*2)**(-2) = 1/4 inside the outer exponential
        assert gev_cdf(GevParams(0.5, 0.0, 1.0), 2.0) == pytest.approx(math.exp(-0.25), rel=1e-12)

    def test_below_lower_support_bound(self):
        assert gev_cdf(GevParams(0.5, 0.0, 1.0), -3.0) == 0.0

    def test_monotone_nondecreasing(self):
        for g in GAMMAS:
            p = GevParams(g, 0.3, 2.0)
            x = np.linspace(-30.0, 30.0, 2001)
            c = gev_cdf(p, x)
            assert np.all(np.diff(c) >= 0.0)
            assert np.all((c >= 0.0) & (c <= 1.0))


class TestGevPdf:
    def test_gumbel_at_mode(self):
        assert gev_pdf(GevParams(0.0, 0.0, 1.0), 0.0) == pytest.approx(math.exp(-1.0))

    def test_outside_support(self):
        assert gev_pdf(GevParams(-0.5, 0.0, 1.0), 3.0) == 0.0
        assert gev_pdf(GevParams(0.5, 0.0, 1.0), -2.5) == 0.0

    def test_heavy_tail_at_origin(self):
        # (1+0)**(-3) * exp(-1) = e^{-1}
        assert gev_pdf(GevParams(0.5, 0.0, 1.0), 0.0) == pytest.approx(math.exp(-1.0), rel=1e-12)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("scale", SCALES)
    def test_matches_cdf_derivative(self, gamma, scale):
        p = GevParams(gamma, 0.1, scale)
        lo, hi = gev_support(p)
        lo = lo if np.isfinite(lo) else p.loc - 8.0 * scale
        hi = hi if np.isfinite(hi) else p.loc + 8.0 * scale
        xs = np.linspace(lo, hi, 22)[1:-1]
        h = 1e-6 * scale
        num = (gev_cdf(p, xs + h) - gev_cdf(p, xs - h)) / (2.0 * h)
        assert np.max(np.abs(num - gev_pdf(p, xs))) < 1e-6

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("scale", SCALES)
    def test_integrates_to_one(self, gamma, scale):
        p = GevParams(gamma, 0.0, scale)
        lo, hi = gev_support(p)
        lo = lo if np.isfinite(lo) else gev_quantile(p, 1e-12)
        if np.isfinite(hi):
            breaks = [lo, hi]
        else:
            # geometric split keeps the quadrature honest on heavy tails
            breaks = [lo] + [gev_quantile(p, 1.0 - 10.0**-j) for j in range(1, 11)]
        total = sum(
            quad(lambda x: gev_pdf(p, x), a, b, limit=200)[0]
            for a, b in zip(breaks[:-1], breaks[1:])
        )
        assert total == pytest.approx(1.0, abs=1e-6)


class TestGpdCdf:
    def test_lower_endpoint(self):
        assert gpd_cdf(GpdParams(0.0, 1.0), 0.0) == 0.0

    def test_heavy_tail_closed_form(self):
        # 1 - (1 + 0.5*2)**(-2) = 0.75
        assert gpd_cdf(GpdParams(0.5, 1.0), 2.0) == pytest.approx(0.75, rel=1e-12)

    def test_heavy_tail_matches_pdf_integral(self):
        p = GpdParams(0.5, 1.0)
        total, _ = quad(lambda x: gpd_pdf(p, x), 0.0, 2.0, limit=200)
        assert total == pytest.approx(gpd_cdf(p, 2.0), abs=1e-9)

    def test_upper_endpoint_bounded(self):
        assert gpd_cdf(GpdParams(-0.5, 1.0), 2.0) == 1.0
        assert gpd_cdf(GpdParams(-0.5, 1.0), 9.0) == 1.0

    def test_negative_x(self):
        assert gpd_cdf(GpdParams(0.5, 1.0), -1.0) == 0.0


class TestGpdPdf:
    def test_density_at_origin(self):
        assert gpd_pdf(GpdParams(0.5, 1.0), 0.0) == 1.0

    def test_exponential_case(self):
        assert gpd_pdf(GpdParams(0.0, 1.0), 1.0) == pytest.approx(math.exp(-1.0))

    def test_vanishes_at_finite_endpoint(self):
        # exponent -1/gamma - 1 = 1 at gamma = -1/2
        assert gpd_pdf(GpdParams(-0.5, 1.0), 2.0) == 0.0

    def test_endpoint_limits_documented(self):
        assert gpd_pdf(GpdParams(-1.0, 2.0), 2.0) == pytest.approx(0.5)
        assert gpd_pdf(GpdParams(-2.0, 1.0), 0.5) == np.inf

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("sigma", SCALES)
    def test_integrates_to_one(self, gamma, sigma):
        p = GpdParams(gamma, sigma)
        lo, hi = gpd_support(p)
        if np.isfinite(hi):
            breaks = [lo, hi]
        else:
            breaks = [lo] + [gpd_quantile(p, 1.0 - 10.0**-j) for j in range(1, 11)]
        total = sum(
            quad(lambda x: gpd_pdf(p, x), a, b, limit=200)[0]
            for a, b in zip(breaks[:-1], breaks[1:])
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_nonnegative(self, gamma):
        p = GpdParams(gamma, 1.0)
        x = np.linspace(-1.0, 20.0, 500)
        assert np.all(gpd_pdf(p, x) >= 0.0)


class TestGpdQuantile:
    def test_exponential_inverse(self):
        assert gpd_quantile(GpdParams(0.0, 1.0), 1.0 - math.exp(-1.0)) == pytest.approx(1.0, rel=1e-12)

    def test_inverse_of_cdf_example(self):
        assert gpd_quantile(GpdParams(0.5, 1.0), 0.75) == pytest.approx(2.0, rel=1e-12)

    def test_lower_endpoint(self):
        for g in GAMMAS:
            assert gpd_quantile(GpdParams(g, 3.0), 0.0) == 0.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            gpd_quantile(GpdParams(0.5, 1.0), 1.0)
        with pytest.raises(ValueError):
            gpd_quantile(GpdParams(0.5, 1.0), -0.1)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("sigma", SCALES)
    def test_roundtrip_with_cdf(self, gamma, sigma):
        p = GpdParams(gamma, sigma)
        q = np.linspace(0.01, 0.99, 25)
        x = gpd_quantile(p, q)
        assert np.max(np.abs(gpd_cdf(p, x) - q)) < 1e-12
        # interior x round-trip
        xi = np.linspace(0.05, 0.9, 20) * (gpd_support(p)[1] if gamma < 0 else 4.0 * sigma)
        back = gpd_quantile(p, gpd_cdf(p, xi))
        assert np.max(np.abs(back - xi) / xi) < 1e-10


class TestGevQuantile:
    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_roundtrip_with_cdf(self, gamma):
        p = GevParams(gamma, -0.4, 1.7)
        q = np.linspace(0.02, 0.98, 25)
        assert np.max(np.abs(gev_cdf(p, gev_quantile(p, q)) - q)) < 1e-10


class TestShapeContinuityAtZero:
    @pytest.mark.parametrize("gamma", [1e-8, -1e-8])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
    def test_gpd_branches_agree(self, gamma, x):
        near = GpdParams(gamma, 1.0)
        zero = GpdParams(0.0, 1.0)
        assert gpd_cdf(near, x) == pytest.approx(gpd_cdf(zero, x), abs=1e-6)
        assert gpd_pdf(near, x) == pytest.approx(gpd_pdf(zero, x), abs=1e-6)
        assert gpd_quantile(near, gpd_cdf(zero, x)) == pytest.approx(x, abs=1e-6)

    @pytest.mark.parametrize("gamma", [1e-8, -1e-8])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
    def test_gev_branches_agree(self, gamma, x):
        near = GevParams(gamma, 0.0, 1.0)
        zero = GevParams(0.0, 0.0, 1.0)
        assert gev_cdf(near, x) == pytest.approx(gev_cdf(zero, x), abs=1e-6)
        assert gev_pdf(near, x) == pytest.approx(gev_pdf(zero, x), abs=1e-6)


class TestGpdSample:
    def test_mean_exponential(self):
        # E[X] = sigma / (1 - gamma) = 1; 4 standard errors of n=1e5
        x = gpd_sample(GpdParams(0.0, 1.0), seed=1, n=100_000)
        assert 0.98 <= x.mean() <= 1.02

    def test_support_bound(self):
        x = gpd_sample(GpdParams(-0.5, 1.0), seed=42, n=10_000)
        assert x.min() >= 0.0 and x.max() <= 2.0

    def test_deterministic(self):
        a = gpd_sample(GpdParams(0.5, 1.0), seed=1, n=10)
        b = gpd_sample(GpdParams(0.5, 1.0), seed=1, n=10)
        assert np.array_equal(a, b)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            gpd_sample(GpdParams(0.5, 1.0), seed=1, n=0)


class TestParamValidation:
    def test_positive_scales_enforced(self):
        with pytest.raises(ValueError):
            GevParams(0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            GpdParams(0.0, -1.0)

    def test_support_bounds(self):
        assert gpd_support(GpdParams(-0.5, 1.0)) == (0.0, 2.0)
        assert gpd_support(GpdParams(0.5, 1.0))[1] == np.inf
        lo, hi = gev_support(GevParams(0.5, 0.0, 1.0))
        assert lo == -2.0 and hi == np.inf
