#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hyres/phantom.hpp"
#include "hyres/psf.hpp"

using namespace hyres;

TEST_CASE("simulate_observation is bit-reproducible and additive", "[psf]") {
    const ChannelImage obj = make_phantom(32, 32, 3, 1.0);
    const ObservationConfig cfg{1.5, 0.05, 77};
    const ChannelImage a = simulate_observation(obj, cfg);
    const ChannelImage b = simulate_observation(obj, cfg);
    CHECK(a.data() == b.data());
    const ChannelImage c = simulate_observation(obj, ObservationConfig{1.5, 0.05, 78});
    CHECK(a.data() != c.data());
    CHECK_THROWS_AS(simulate_observation(obj, ObservationConfig{-1.0, 0.0, 0}),
                    validation_error);
}

TEST_CASE("noise-free observation equals the periodic blur", "[psf]") {
    const ChannelImage obj = make_phantom(32, 32, 4, 0.5);
    const ChannelImage blurred = simulate_observation(obj, ObservationConfig{2.0, 0.0, 0});
    const ChannelImage direct = convolve_periodic(obj, gaussian_kernel(2.0, 13));
    for (std::size_t k = 0; k < obj.size(); ++k)
        REQUIRE_THAT(blurred.data()[k], Catch::Matchers::WithinAbs(direct.data()[k], 1e-12));
}

TEST_CASE("difference psf of identical images is a centered impulse", "[psf]") {
    // an impulse has |F| = 1 on every bin, so with a = b the ratio is the
    // exact constant 1/(1+eps); the offset subtraction must not fire, or the
    // recovered impulse would be erased
    ChannelImage x(32, 32, 0.0);
    x(7, 9) = 1.0;
    const DifferencePsf psf = difference_psf(x, x, 1e-8);
    CHECK_FALSE(psf.offset_subtracted);
    const int cy = 16, cx = 16;
    CHECK_THAT(psf.kernel(cy, cx), Catch::Matchers::WithinAbs(1.0, 1e-4));
    double off_center = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            if (i != cy || j != cx) off_center = std::max(off_center, std::abs(psf.kernel(i, j)));
    CHECK(off_center < 1e-6);
}

TEST_CASE("difference psf recovers the relative blur width", "[psf]") {
    // object blurred with sigma1 vs sigma2 < sigma1: difference kernel is a
    // Gaussian of width sqrt(sigma1^2 - sigma2^2)
    const ChannelImage obj = make_phantom(128, 128, 6, 0.0);
    const double s1 = 3.0, s2 = 2.0;
    const ChannelImage a = simulate_observation(obj, ObservationConfig{s1, 0.0, 0});
    const ChannelImage b = simulate_observation(obj, ObservationConfig{s2, 0.0, 0});
    const DifferencePsf psf = difference_psf(a, b, 1e-8);
    const GaussianFit fit = fit_radial_gaussian(psf);
    const double expect = std::sqrt(s1 * s1 - s2 * s2);
    CHECK_FALSE(fit.non_gaussian);
    CHECK_THAT(fit.sigma, Catch::Matchers::WithinRel(expect, 0.05));
    CHECK_THAT(fit.fwhm, Catch::Matchers::WithinRel(kFwhmPerSigma * fit.sigma, 1e-12));
}

TEST_CASE("difference psf validates inputs", "[psf]") {
    const ChannelImage x = make_phantom(16, 16, 7, 0.5);
    CHECK_THROWS_AS(difference_psf(x, make_phantom(16, 8, 7, 0.5)), validation_error);
    CHECK_THROWS_AS(difference_psf(x, ChannelImage(16, 16, 0.0)), validation_error);
}

TEST_CASE("radial gaussian fit recovers synthetic parameters", "[psf]") {
    // synthesize a noiseless radial Gaussian field directly
    const int n = 33;
    const double A = 0.8, sigma = 2.5, c = 0.05;
    DifferencePsf psf{ChannelImage(n, n), 0.0, 0.0, false};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double r2 = (i - n / 2) * (i - n / 2) + (j - n / 2) * (j - n / 2);
            psf.kernel(i, j) = A * std::exp(-r2 / (2.0 * sigma * sigma)) + c;
        }
    const GaussianFit fit = fit_radial_gaussian(psf);
    CHECK_THAT(fit.amplitude, Catch::Matchers::WithinRel(A, 1e-3));
    CHECK_THAT(fit.sigma, Catch::Matchers::WithinRel(sigma, 1e-3));
    CHECK_THAT(fit.offset, Catch::Matchers::WithinAbs(c, 1e-3));
    CHECK_THAT(fit.fwhm, Catch::Matchers::WithinRel(2.3548200450309493 * sigma, 1e-3));
    CHECK(fit.residual_rms < 1e-6);
    CHECK_FALSE(fit.non_gaussian);
}

TEST_CASE("a decidedly non-gaussian profile is flagged", "[psf]") {
    // ring-shaped profile: zero center, bright annulus
    const int n = 33;
    DifferencePsf psf{ChannelImage(n, n), 0.0, 0.0, false};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double r = std::hypot(i - n / 2, j - n / 2);
            psf.kernel(i, j) = (r > 6.0 && r < 9.0) ? 1.0 : 0.0;
        }
    const GaussianFit fit = fit_radial_gaussian(psf);
    CHECK(fit.non_gaussian);
}

TEST_CASE("fit rejects degenerate sample sets", "[psf]") {
    DifferencePsf psf{ChannelImage(2, 2, 0.5), 0.0, 0.0, false};
    CHECK_THROWS_AS(fit_radial_gaussian(psf), validation_error);
}

TEST_CASE("compare_deblur orders blur strengths correctly", "[psf]") {
    const ChannelImage obj = make_phantom(96, 96, 8, 0.0);
    const ChannelImage base = simulate_observation(obj, ObservationConfig{1.0, 0.0, 0});
    const ChannelImage mild = simulate_observation(obj, ObservationConfig{2.0, 0.0, 0});
    const ChannelImage strong = simulate_observation(obj, ObservationConfig{3.0, 0.0, 0});
    // candidate carries more blur relative to the baseline than the reference,
    // so its difference-PSF FWHM is larger
    const DeblurReport rep = compare_deblur(strong, mild, base);
    CHECK(rep.ratio > 1.0);
    CHECK(rep.fwhm_candidate > rep.fwhm_reference);
    CHECK_THAT(rep.ratio,
               Catch::Matchers::WithinRel(rep.fwhm_candidate / rep.fwhm_reference, 1e-12));
}

TEST_CASE("radial profile bins by rounded radius with correct counts", "[psf]") {
    const int n = 16;
    DifferencePsf psf{ChannelImage(n, n, 1.0), 0.0, 0.0, false};
    const RadialProfile p = radial_profile(psf);
    REQUIRE(p.rho.size() == 8); // rmax = 7
    CHECK(p.n[0] == 1);
    for (std::size_t r = 0; r < p.rho.size(); ++r) {
        CHECK(p.rho[r] == static_cast<double>(r));
        if (p.n[r]) CHECK_THAT(p.mean[r], Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}
