#ifndef HYRES_PSF_HPP
#define HYRES_PSF_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/fourier.hpp"
#include "hyres/image.hpp"
#include "hyres/rng.hpp"

namespace hyres {

/// Forward imaging model parameters: detected = object (x) PSF + noise.
struct ObservationConfig {
    double blur_sigma = 0.0;   // pixels
    double noise_sigma = 0.0;  // intensity units on the [0,1] scale
    std::uint64_t seed = 0;
};

/// Real-space kernel recovered from the regularized Fourier ratio of two
/// images, center-shifted. When the high-frequency rings of the ratio sit on a
/// flat noise floor, that floor is subtracted before the inverse transform.
struct DifferencePsf {
    ChannelImage kernel;
    double epsilon = 0.0;
    double constant_offset = 0.0; // high-frequency ratio mean (real part)
    bool offset_subtracted = false;
};

struct GaussianFit {
    double amplitude = 0.0;
    double sigma = 0.0;      // pixels
    double offset = 0.0;
    double fwhm = 0.0;       // 2*sqrt(2 ln 2) * sigma
    double residual_rms = 0.0;
    bool non_gaussian = false; // residual too large for the Gaussian hypothesis
};

struct DeblurReport {
    double fwhm_candidate = 0.0;
    double fwhm_reference = 0.0;
    double ratio = 0.0; // > 1: candidate deblurs more strongly than reference
    GaussianFit fit_candidate;
    GaussianFit fit_reference;
};

inline constexpr double kFwhmPerSigma = 2.3548200450309493; // 2*sqrt(2*ln 2)

/// Blur by a Gaussian PSF (periodic) then add seeded i.i.d. Gaussian noise.
/// Bit-reproducible per (seed, config, input). Values are not clamped; this
/// is the physical model, not the ingestion path.
inline ChannelImage simulate_observation(const ChannelImage& object,
                                         const ObservationConfig& config) {
    if (config.blur_sigma < 0.0 || config.noise_sigma < 0.0)
        throw validation_error("simulate_observation: negative sigma");
    ChannelImage out = object;
    if (config.blur_sigma > 0.0) {
        int size = static_cast<int>(std::ceil(6.0 * config.blur_sigma));
        if (size % 2 == 0) ++size;
        size = std::max(size, 3);
        const int cap = std::min(object.height(), object.width());
        if (size > cap) size = (cap % 2 == 0) ? cap - 1 : cap;
        out = convolve_periodic(out, gaussian_kernel(config.blur_sigma, size));
    }
    if (config.noise_sigma > 0.0) {
        for (std::size_t k = 0; k < out.size(); ++k)
            out.data()[k] += config.noise_sigma * rng::normal(config.seed, 0x0b5e7f00, k);
    }
    return out;
}

/// PSF_d = F^-1 of  A*conj(B) / (|B|^2 + eps*max|B|^2), center-shifted.
/// The white-noise constant is estimated from the top 10% highest-frequency
/// rings; it is subtracted only when it is distinguishable from the low-band
/// response (below half its magnitude), since for images with a shared band
/// limit the "floor" is the signal itself and removing it would erase the
/// kernel.
inline DifferencePsf difference_psf(const ChannelImage& a, const ChannelImage& b,
                                    double epsilon = 1e-6) {
    if (!a.same_dims(b)) throw validation_error("difference_psf: dimension mismatch");
    bool any = false;
    for (double v : b.data())
        if (v != 0.0) { any = true; break; }
    if (!any) throw validation_error("difference_psf: all-zero denominator image");

    const int h = a.height(), w = a.width();
    const ComplexField fa = dft2(a);
    const ComplexField fb = dft2(b);
    double max_pow = 0.0;
    for (const cplx& v : fb.data()) max_pow = std::max(max_pow, std::norm(v));

    ComplexField ratio(h, w);
    const double reg = epsilon * max_pow;
    for (std::size_t k = 0; k < ratio.size(); ++k)
        ratio.data()[k] = fa.data()[k] * std::conj(fb.data()[k]) / (std::norm(fb.data()[k]) + reg);

    const RingPartition part(h, w);
    const int R = part.ring_count();
    const int hi_start = std::max(1, static_cast<int>(std::ceil(0.9 * R)));
    const int lo_end = std::max(1, R / 10);
    cplx hi_sum(0.0, 0.0), lo_sum(0.0, 0.0);
    std::size_t hi_n = 0, lo_n = 0;
    for (std::size_t k = 0; k < ratio.size(); ++k) {
        const int r = part.index()[k];
        if (r >= hi_start && r <= R) { hi_sum += ratio.data()[k]; ++hi_n; }
        if (r >= 1 && r <= lo_end) { lo_sum += ratio.data()[k]; ++lo_n; }
    }
    const cplx hi_mean = hi_n ? hi_sum / static_cast<double>(hi_n) : cplx(0.0, 0.0);
    const cplx lo_mean = lo_n ? lo_sum / static_cast<double>(lo_n) : cplx(0.0, 0.0);

    DifferencePsf out{ChannelImage(h, w), epsilon, hi_mean.real(), false};
    if (std::abs(hi_mean) < 0.5 * std::abs(lo_mean)) {
        // subtract the real part so the field stays Hermitian
        for (cplx& v : ratio.data()) v -= hi_mean.real();
        out.offset_subtracted = true;
    }

    const ChannelImage raw = idft2(ratio);
    ChannelImage shifted(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            shifted((i + h / 2) % h, (j + w / 2) % w) = raw(i, j);
    out.kernel = std::move(shifted);
    return out;
}

namespace detail {

struct RadialSamples {
    std::vector<double> rho;
    std::vector<double> value;
};

inline RadialSamples radial_samples(const ChannelImage& kernel) {
    const int h = kernel.height(), w = kernel.width();
    const double cy = h / 2, cx = w / 2;
    const double rmax = std::min(h, w) / 2.0 - 1.0;
    RadialSamples s;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const double r = std::hypot(i - cy, j - cx);
            if (r <= rmax) {
                s.rho.push_back(r);
                s.value.push_back(kernel(i, j));
            }
        }
    return s;
}

// Closed-form least squares for (A, c) at fixed sigma; returns residual SS.
inline double solve_amp_offset(const RadialSamples& s, double sigma, double& A, double& c) {
    double see = 0.0, se = 0.0, sey = 0.0, sy = 0.0;
    const std::size_t n = s.rho.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::exp(-s.rho[k] * s.rho[k] / (2.0 * sigma * sigma));
        see += e * e;
        se += e;
        sey += e * s.value[k];
        sy += s.value[k];
    }
    const double nn = static_cast<double>(n);
    const double det = see * nn - se * se;
    if (std::abs(det) < 1e-300) { A = 0.0; c = sy / nn; }
    else {
        A = (sey * nn - se * sy) / det;
        c = (see * sy - se * sey) / det;
    }
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::exp(-s.rho[k] * s.rho[k] / (2.0 * sigma * sigma));
        const double resid = A * e + c - s.value[k];
        ss += resid * resid;
    }
    return ss;
}

} // namespace detail

/// Rotationally symmetric Gaussian fit g(rho) = A exp(-rho^2/(2 sigma^2)) + c
/// over all pixels within the inscribed radius. Sigma is scanned on a log
/// grid with A, c solved in closed form, then refined by golden section.
inline GaussianFit fit_radial_gaussian(const DifferencePsf& psf) {
    const auto samples = detail::radial_samples(psf.kernel);
    {
        std::vector<double> distinct = samples.rho;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() < 3)
            throw validation_error("fit_radial_gaussian: fewer than 3 radial bins");
    }
    const double lo = 0.25;
    const double hi = std::min(psf.kernel.height(), psf.kernel.width()) / 4.0;
    constexpr int grid_points = 200;

    double best_sigma = lo, best_ss = std::numeric_limits<double>::infinity();
    double A = 0.0, c = 0.0;
    for (int g = 0; g < grid_points; ++g) {
        const double sigma = lo * std::pow(hi / lo, g / static_cast<double>(grid_points - 1));
        double ga, gc;
        const double ss = detail::solve_amp_offset(samples, sigma, ga, gc);
        if (ss < best_ss) { best_ss = ss; best_sigma = sigma; }
    }

    // golden-section refinement around the best grid point
    const double step = std::pow(hi / lo, 1.0 / (grid_points - 1));
    double a = best_sigma / step, b = best_sigma * step;
    constexpr double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double ta, tc;
    double f1 = detail::solve_amp_offset(samples, x1, ta, tc);
    double f2 = detail::solve_amp_offset(samples, x2, ta, tc);
    while (b - a > 1e-4) {
        if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = detail::solve_amp_offset(samples, x1, ta, tc); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = detail::solve_amp_offset(samples, x2, ta, tc); }
    }
    best_sigma = 0.5 * (a + b);
    best_ss = detail::solve_amp_offset(samples, best_sigma, A, c);

    GaussianFit fit;
    fit.amplitude = A;
    fit.sigma = best_sigma;
    fit.offset = c;
    fit.fwhm = kFwhmPerSigma * best_sigma;
    const double n = static_cast<double>(samples.rho.size());
    fit.residual_rms = std::sqrt(best_ss / n);
    double data_ss = 0.0, mean = 0.0;
    for (double v : samples.value) mean += v;
    mean /= n;
    for (double v : samples.value) data_ss += (v - mean) * (v - mean);
    const double data_rms = std::sqrt(data_ss / n);
    fit.non_gaussian = fit.residual_rms > 0.5 * data_rms;
    return fit;
}

/// Fitted FWHM of the candidate's and reference's difference PSFs against a
/// shared baseline. ratio = fwhm_candidate / fwhm_reference; > 1 means the
/// candidate deblurs more strongly relative to the baseline.
inline DeblurReport compare_deblur(const ChannelImage& candidate, const ChannelImage& reference,
                                   const ChannelImage& baseline, double epsilon = 1e-6) {
    if (!candidate.same_dims(reference) || !candidate.same_dims(baseline))
        throw validation_error("compare_deblur: dimension mismatch");
    DeblurReport rep;
    rep.fit_candidate = fit_radial_gaussian(difference_psf(candidate, baseline, epsilon));
    rep.fit_reference = fit_radial_gaussian(difference_psf(reference, baseline, epsilon));
    rep.fwhm_candidate = rep.fit_candidate.fwhm;
    rep.fwhm_reference = rep.fit_reference.fwhm;
    rep.ratio = rep.fwhm_candidate / rep.fwhm_reference;
    return rep;
}

/// Radial profile of a difference-PSF kernel in 1-pixel bins, for CSV export.
struct RadialProfile {
    std::vector<double> rho;      // bin center radius in pixels
    std::vector<double> mean;     // mean kernel value in bin
    std::vector<std::size_t> n;
};

inline RadialProfile radial_profile(const DifferencePsf& psf) {
    const int h = psf.kernel.height(), w = psf.kernel.width();
    const double cy = h / 2, cx = w / 2;
    const int rmax = static_cast<int>(std::min(h, w) / 2.0 - 1.0);
    RadialProfile p;
    p.rho.assign(static_cast<std::size_t>(rmax) + 1, 0.0);
    p.mean.assign(static_cast<std::size_t>(rmax) + 1, 0.0);
    p.n.assign(static_cast<std::size_t>(rmax) + 1, 0);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const int r = static_cast<int>(std::lround(std::hypot(i - cy, j - cx)));
            if (r <= rmax) {
                p.mean[static_cast<std::size_t>(r)] += psf.kernel(i, j);
                ++p.n[static_cast<std::size_t>(r)];
            }
        }
    for (std::size_t r = 0; r < p.rho.size(); ++r) {
        p.rho[r] = static_cast<double>(r);
        if (p.n[r]) p.mean[r] /= static_cast<double>(p.n[r]);
    }
    return p;
}

} // namespace hyres

#endif
