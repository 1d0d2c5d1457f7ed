#ifndef HYRES_FRC_HPP
#define HYRES_FRC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/fourier.hpp"
#include "hyres/image.hpp"

namespace hyres {

/// Per-ring correlation curve. Rings run r = 1..R; ring 0 (DC) is excluded.
/// Rings where either image carries no spectral energy are undefined.
struct FrcCurve {
    std::vector<double> values;      // FRC(r), r = 1..R; meaningless where !defined
    std::vector<bool> defined;
    std::vector<double> frequencies; // r / min(H,W), cycles per pixel
    std::vector<std::size_t> samples;
    double pixel_size_um = 1.0;      // effective pixel size of the source images

    std::size_t ring_count() const { return values.size(); }
    std::size_t defined_count() const {
        return static_cast<std::size_t>(std::count(defined.begin(), defined.end(), true));
    }
};

struct ResolutionEstimate {
    double resolution_um = 0.0;
    double crossing_frequency = 0.5; // cycles per pixel
    double threshold = 0.0;
    bool nyquist_limited = false;
};

enum class FrcLossMode {
    ring_mean, // L = 1 - mean_r FRC(r), bounded in [0,2]
    ring_sum   // L = 1 - sum_r FRC(r), the literal published expression
};

namespace detail {

inline void check_pair(const ChannelImage& a, const ChannelImage& b) {
    if (!a.same_dims(b)) throw validation_error("frc: image dimension mismatch");
    auto all_zero = [](const ChannelImage& im) {
        for (double v : im.data())
            if (v != 0.0) return false;
        return true;
    };
    if (all_zero(a) || all_zero(b)) throw validation_error("frc: all-zero input image");
}

struct RingSums {
    std::vector<cplx> cross;  // sum F1 * conj(F2) per ring
    std::vector<double> p1;   // sum |F1|^2
    std::vector<double> p2;   // sum |F2|^2
};

inline RingSums ring_sums(const ComplexField& f1, const ComplexField& f2,
                          const RingPartition& part) {
    const int R = part.ring_count();
    RingSums s;
    s.cross.assign(static_cast<std::size_t>(R) + 1, cplx(0.0, 0.0));
    s.p1.assign(static_cast<std::size_t>(R) + 1, 0.0);
    s.p2.assign(static_cast<std::size_t>(R) + 1, 0.0);
    for (std::size_t k = 0; k < f1.size(); ++k) {
        const int r = part.index()[k];
        if (r < 0) continue;
        const cplx x = f1.data()[k];
        const cplx y = f2.data()[k];
        s.cross[static_cast<std::size_t>(r)] += x * std::conj(y);
        s.p1[static_cast<std::size_t>(r)] += std::norm(x);
        s.p2[static_cast<std::size_t>(r)] += std::norm(y);
    }
    return s;
}

inline FrcCurve curve_from_sums(const RingSums& s, const RingPartition& part,
                                double pixel_size_um) {
    const int R = part.ring_count();
    const double mn = static_cast<double>(std::min(part.height(), part.width()));
    FrcCurve c;
    c.pixel_size_um = pixel_size_um;
    c.values.resize(static_cast<std::size_t>(R));
    c.defined.resize(static_cast<std::size_t>(R));
    c.frequencies.resize(static_cast<std::size_t>(R));
    c.samples.resize(static_cast<std::size_t>(R));
    bool any = false;
    for (int r = 1; r <= R; ++r) {
        const std::size_t idx = static_cast<std::size_t>(r - 1);
        const double p = s.p1[static_cast<std::size_t>(r)];
        const double q = s.p2[static_cast<std::size_t>(r)];
        c.frequencies[idx] = static_cast<double>(r) / mn;
        c.samples[idx] = part.samples_in_ring(r);
        if (p > 0.0 && q > 0.0) {
            c.values[idx] = s.cross[static_cast<std::size_t>(r)].real() / std::sqrt(p * q);
            c.defined[idx] = true;
            any = true;
        } else {
            c.values[idx] = 0.0;
            c.defined[idx] = false;
        }
    }
    if (!any) throw validation_error("frc: no defined rings (degenerate spectra)");
    return c;
}

} // namespace detail

/// Two-image Fourier ring correlation.
inline FrcCurve frc_curve(const ChannelImage& a, const ChannelImage& b,
                          double pixel_size_um = 1.0) {
    detail::check_pair(a, b);
    const RingPartition part(a.height(), a.width());
    const auto sums = detail::ring_sums(dft2(a), dft2(b), part);
    return detail::curve_from_sums(sums, part, pixel_size_um);
}

/// Single-image FRC from two diagonally decimated sub-images (even-even vs
/// odd-odd pixels). The odd-odd sub-image sits half a sub-pixel away on both
/// axes, so a phase ramp exp(-i*pi*(fu+fv)) is applied to its spectrum before
/// correlating; without it the curve decays for purely geometric reasons and
/// the resolution estimate loses all contact with the two-image one.
/// Effective pixel size of the returned curve is twice the original.
inline FrcCurve single_image_frc(const ChannelImage& image, double pixel_size_um = 1.0) {
    const int h = image.height(), w = image.width();
    if (h < 8 || w < 8) throw validation_error("single_image_frc: image must be at least 8x8");
    const int sh = h / 2, sw = w / 2;
    ChannelImage a(sh, sw), b(sh, sw);
    for (int i = 0; i < sh; ++i)
        for (int j = 0; j < sw; ++j) {
            a(i, j) = image(2 * i, 2 * j);
            b(i, j) = image(2 * i + 1, 2 * j + 1);
        }
    detail::check_pair(a, b);
    const RingPartition part(sh, sw);
    ComplexField fa = dft2(a);
    ComplexField fb = dft2(b);
    for (int u = 0; u < sh; ++u) {
        const double fu = (u <= sh / 2 ? u : u - sh) / static_cast<double>(sh);
        for (int v = 0; v < sw; ++v) {
            const double fv = (v <= sw / 2 ? v : v - sw) / static_cast<double>(sw);
            const double ang = -std::numbers::pi * (fu + fv);
            fb(u, v) *= cplx(std::cos(ang), std::sin(ang));
        }
    }
    const auto sums = detail::ring_sums(fa, fb, part);
    return detail::curve_from_sums(sums, part, 2.0 * pixel_size_um);
}

/// Resolution from the first downward threshold crossing, linearly
/// interpolated; pixel_size_um is the effective pixel size of the curve's
/// source images. No crossing means the estimate is Nyquist-limited.
inline ResolutionEstimate resolution_from_curve(const FrcCurve& curve, double threshold,
                                                double pixel_size_um) {
    if (curve.ring_count() == 0) throw validation_error("resolution_from_curve: empty curve");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw validation_error("resolution_from_curve: threshold must be in (0,1)");
    ResolutionEstimate est;
    est.threshold = threshold;
    double prev_f = 0.0, prev_v = 1.0; // implicit DC point: perfect correlation
    bool crossed = false;
    for (std::size_t i = 0; i < curve.ring_count(); ++i) {
        if (!curve.defined[i]) continue;
        const double f = curve.frequencies[i];
        const double v = curve.values[i];
        if (prev_v >= threshold && v < threshold) {
            est.crossing_frequency = prev_f + (prev_v - threshold) / (prev_v - v) * (f - prev_f);
            crossed = true;
            break;
        }
        prev_f = f;
        prev_v = v;
    }
    if (!crossed) {
        est.crossing_frequency = 0.5;
        est.nyquist_limited = true;
    }
    est.resolution_um = pixel_size_um / est.crossing_frequency;
    return est;
}

/// Default fixed-threshold criterion.
inline constexpr double kFrcThreshold = 1.0 / 7.0;

namespace detail {

struct LossParts {
    double loss;
    RingSums sums;
    RingPartition part;
    std::size_t defined = 0;
};

inline LossParts loss_parts(const ComplexField& fp, const ComplexField& ft, FrcLossMode mode) {
    RingPartition part(fp.height(), fp.width());
    RingSums sums = ring_sums(fp, ft, part);
    double total = 0.0;
    std::size_t defined = 0;
    for (int r = 1; r <= part.ring_count(); ++r) {
        const double p = sums.p1[static_cast<std::size_t>(r)];
        const double q = sums.p2[static_cast<std::size_t>(r)];
        if (p > 0.0 && q > 0.0) {
            total += sums.cross[static_cast<std::size_t>(r)].real() / std::sqrt(p * q);
            ++defined;
        }
    }
    if (defined == 0) throw validation_error("frc_loss: all rings undefined");
    const double reduced = (mode == FrcLossMode::ring_mean)
                               ? total / static_cast<double>(defined)
                               : total;
    return LossParts{1.0 - reduced, std::move(sums), std::move(part), defined};
}

} // namespace detail

/// L = 1 - reduce_r FRC(r). Ring-mean reduction keeps the loss in [0,2];
/// ring_sum reproduces the literal published expression.
inline double frc_loss(const ChannelImage& pred, const ChannelImage& target,
                       FrcLossMode mode = FrcLossMode::ring_mean) {
    detail::check_pair(pred, target);
    return detail::loss_parts(dft2(pred), dft2(target), mode).loss;
}

/// Analytic dL/dpred via the chain rule through the DFT.
inline ChannelImage frc_loss_gradient(const ChannelImage& pred, const ChannelImage& target,
                                      FrcLossMode mode = FrcLossMode::ring_mean,
                                      double* loss_out = nullptr) {
    detail::check_pair(pred, target);
    const ComplexField fp = dft2(pred);
    const ComplexField ft = dft2(target);
    const auto parts = detail::loss_parts(fp, ft, mode);
    if (loss_out) *loss_out = parts.loss;

    const double ring_scale = (mode == FrcLossMode::ring_mean)
                                  ? 1.0 / static_cast<double>(parts.defined)
                                  : 1.0;

    // dFRC_r/dconj(X_k) = 0.5 * (Y_k / sqrt(P Q) - FRC_r * X_k / P); the loss
    // negates and scales it. Pixel gradient is 2 Re of the inverse transform.
    ComplexField d(fp.height(), fp.width());
    for (std::size_t k = 0; k < fp.size(); ++k) {
        const int r = parts.part.index()[k];
        if (r < 1) { d.data()[k] = cplx(0.0, 0.0); continue; }
        const double p = parts.sums.p1[static_cast<std::size_t>(r)];
        const double q = parts.sums.p2[static_cast<std::size_t>(r)];
        if (!(p > 0.0 && q > 0.0)) { d.data()[k] = cplx(0.0, 0.0); continue; }
        const double frc_r = parts.sums.cross[static_cast<std::size_t>(r)].real() / std::sqrt(p * q);
        const cplx term = ft.data()[k] / std::sqrt(p * q) - frc_r * fp.data()[k] / p;
        d.data()[k] = -ring_scale * 0.5 * term;
    }
    detail::fft2d(d, true); // unnormalized inverse: sum_k D_k exp(+i theta)
    std::vector<double> g(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) g[k] = 2.0 * d.data()[k].real();
    return ChannelImage(pred.height(), pred.width(), std::move(g));
}

} // namespace hyres

#endif
