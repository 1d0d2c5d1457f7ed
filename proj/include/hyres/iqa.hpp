#ifndef HYRES_IQA_HPP
#define HYRES_IQA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/image.hpp"

namespace hyres {

/// 10*log10(1/MSE) on the [0,1] range; +infinity for identical images.
inline double psnr(const ChannelImage& test, const ChannelImage& reference) {
    if (!test.same_dims(reference)) throw validation_error("psnr: dimension mismatch");
    double mse = 0.0;
    for (std::size_t k = 0; k < test.size(); ++k) {
        const double d = test.data()[k] - reference.data()[k];
        mse += d * d;
    }
    mse /= static_cast<double>(test.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace detail {

inline std::vector<double> gaussian_window_1d(int radius, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        const double v = std::exp(-0.5 * t * t / (sigma * sigma));
        w[static_cast<std::size_t>(t + radius)] = v;
        sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
}

// Separable Gaussian filter with replicated borders.
inline ChannelImage gaussian_filter_replicate(const ChannelImage& img, int radius, double sigma) {
    const auto w = gaussian_window_1d(radius, sigma);
    const int h = img.height(), wd = img.width();
    ChannelImage tmp(h, wd), out(h, wd);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < wd; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += w[static_cast<std::size_t>(t + radius)] *
                       img(i, std::clamp(j + t, 0, wd - 1));
            tmp(i, j) = acc;
        }
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < wd; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += w[static_cast<std::size_t>(t + radius)] *
                       tmp(std::clamp(i + t, 0, h - 1), j);
            out(i, j) = acc;
        }
    return out;
}

} // namespace detail

/// Mean local SSIM: 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2,
/// C2 = 0.03^2, averaged over valid (fully interior) window positions.
inline double ssim(const ChannelImage& test, const ChannelImage& reference) {
    if (!test.same_dims(reference)) throw validation_error("ssim: dimension mismatch");
    const int h = test.height(), w = test.width();
    constexpr int radius = 5;
    if (h < 2 * radius + 1 || w < 2 * radius + 1)
        throw validation_error("ssim: image smaller than the 11x11 window");
    const auto win = detail::gaussian_window_1d(radius, 1.5);
    constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (int ci = radius; ci < h - radius; ++ci)
        for (int cj = radius; cj < w - radius; ++cj) {
            double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
            for (int a = -radius; a <= radius; ++a)
                for (int b = -radius; b <= radius; ++b) {
                    const double g = win[static_cast<std::size_t>(a + radius)] *
                                     win[static_cast<std::size_t>(b + radius)];
                    const double x = test(ci + a, cj + b);
                    const double y = reference(ci + a, cj + b);
                    mx += g * x;
                    my += g * y;
                    xx += g * x * x;
                    yy += g * y * y;
                    xy += g * x * y;
                }
            const double vx = xx - mx * mx;
            const double vy = yy - my * my;
            const double cov = xy - mx * my;
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Natural-scene statistics (MSCN + generalized Gaussian fits)

namespace detail {

/// MSCN = (I - mu) / (sigma + C), local moments from a 7x7 Gaussian
/// (sigma = 7/6) with replicated borders, C = 1/255.
inline ChannelImage mscn_field(const ChannelImage& img) {
    constexpr int radius = 3;
    constexpr double sigma = 7.0 / 6.0;
    constexpr double C = 1.0 / 255.0;
    const ChannelImage mu = gaussian_filter_replicate(img, radius, sigma);
    ChannelImage sq(img.height(), img.width());
    for (std::size_t k = 0; k < img.size(); ++k)
        sq.data()[k] = img.data()[k] * img.data()[k];
    const ChannelImage musq = gaussian_filter_replicate(sq, radius, sigma);
    ChannelImage out(img.height(), img.width());
    for (std::size_t k = 0; k < img.size(); ++k) {
        const double var = std::max(0.0, musq.data()[k] - mu.data()[k] * mu.data()[k]);
        out.data()[k] = (img.data()[k] - mu.data()[k]) / (std::sqrt(var) + C);
    }
    return out;
}

// rho(alpha) = Gamma(2/a)^2 / (Gamma(1/a) Gamma(3/a)), the moment ratio used
// by both generalized-Gaussian estimators; evaluated through lgamma.
inline double ggd_rho(double alpha) {
    return std::exp(2.0 * std::lgamma(2.0 / alpha) - std::lgamma(1.0 / alpha) -
                    std::lgamma(3.0 / alpha));
}

inline double solve_shape(double target) {
    // rho is monotone increasing on [0.05, 30]; plain fine grid is plenty
    double best = 2.0, best_err = std::numeric_limits<double>::infinity();
    for (double a = 0.1; a <= 10.0; a += 0.001) {
        const double err = std::abs(ggd_rho(a) - target);
        if (err < best_err) {
            best_err = err;
            best = a;
        }
    }
    return best;
}

struct GgdFit {
    double shape = 2.0;
    double variance = 0.0;
};

inline GgdFit fit_ggd(const std::vector<double>& x) {
    double m_abs = 0.0, m_sq = 0.0;
    for (double v : x) {
        m_abs += std::abs(v);
        m_sq += v * v;
    }
    const double n = static_cast<double>(x.size());
    m_abs /= n;
    m_sq /= n;
    if (m_abs == 0.0 || m_sq == 0.0) return GgdFit{2.0, 0.0}; // degenerate flat field
    return GgdFit{solve_shape(m_abs * m_abs / m_sq), m_sq};
}

struct AggdFit {
    double shape = 2.0;
    double mean = 0.0;
    double var_left = 0.0;
    double var_right = 0.0;
};

inline AggdFit fit_aggd(const std::vector<double>& x) {
    double sq_left = 0.0, sq_right = 0.0, m_abs = 0.0, m_sq = 0.0;
    std::size_t n_left = 0, n_right = 0;
    for (double v : x) {
        m_abs += std::abs(v);
        m_sq += v * v;
        if (v < 0.0) {
            sq_left += v * v;
            ++n_left;
        } else if (v > 0.0) {
            sq_right += v * v;
            ++n_right;
        }
    }
    if (n_left == 0 || n_right == 0 || m_abs == 0.0)
        return AggdFit{2.0, 0.0, 0.0, 0.0}; // one-sided or flat: degenerate default
    const double n = static_cast<double>(x.size());
    const double sigma_l = std::sqrt(sq_left / static_cast<double>(n_left));
    const double sigma_r = std::sqrt(sq_right / static_cast<double>(n_right));
    const double gamma = sigma_l / sigma_r;
    const double r_hat = (m_abs / n) * (m_abs / n) / (m_sq / n);
    const double g2 = gamma * gamma;
    const double big_r = r_hat * (gamma * gamma * gamma + 1.0) * (gamma + 1.0) /
                         ((g2 + 1.0) * (g2 + 1.0));
    AggdFit fit;
    fit.shape = solve_shape(big_r);
    fit.var_left = sigma_l * sigma_l;
    fit.var_right = sigma_r * sigma_r;
    const double ratio = std::exp(std::lgamma(2.0 / fit.shape) - std::lgamma(1.0 / fit.shape));
    const double norm = std::sqrt(std::exp(std::lgamma(1.0 / fit.shape) -
                                           std::lgamma(3.0 / fit.shape)));
    fit.mean = (sigma_r - sigma_l) * ratio * norm;
    return fit;
}

// 2x2 box smoothing followed by 2x decimation (the BRISQUE scale pyramid).
inline ChannelImage half_scale(const ChannelImage& img) {
    const int h = img.height() / 2, w = img.width() / 2;
    ChannelImage out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            out(i, j) = 0.25 * (img(2 * i, 2 * j) + img(2 * i, 2 * j + 1) +
                                img(2 * i + 1, 2 * j) + img(2 * i + 1, 2 * j + 1));
    return out;
}

inline void scale_features(const ChannelImage& img, std::vector<double>& out) {
    const ChannelImage mscn = mscn_field(img);
    const GgdFit g = fit_ggd(mscn.data());
    out.push_back(g.shape);
    out.push_back(g.variance);
    const int h = mscn.height(), w = mscn.width();
    // shifts: horizontal, vertical, main diagonal, anti-diagonal
    constexpr std::array<std::array<int, 2>, 4> shifts{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
    for (const auto& sh : shifts) {
        std::vector<double> prod;
        prod.reserve(static_cast<std::size_t>(h) * w);
        for (int i = 0; i < h; ++i) {
            const int ii = i + sh[0];
            if (ii < 0 || ii >= h) continue;
            for (int j = 0; j < w; ++j) {
                const int jj = j + sh[1];
                if (jj < 0 || jj >= w) continue;
                prod.push_back(mscn(i, j) * mscn(ii, jj));
            }
        }
        const AggdFit a = fit_aggd(prod);
        out.push_back(a.shape);
        out.push_back(a.mean);
        out.push_back(a.var_left);
        out.push_back(a.var_right);
    }
}

} // namespace detail

/// 36 natural-scene-statistic features: GGD (shape, variance) of the MSCN
/// field plus AGGD (shape, mean, left/right variance) of its 4 directional
/// products, at full and half scale.
inline std::vector<double> brisque_features(const ChannelImage& image) {
    if (image.height() < 32 || image.width() < 32)
        throw validation_error("brisque_features: image must be at least 32x32");
    std::vector<double> f;
    f.reserve(36);
    detail::scale_features(image, f);
    detail::scale_features(detail::half_scale(image), f);
    return f;
}

struct BrisqueModel {
    std::vector<double> weights;  // 36
    double bias = 0.0;
    std::vector<double> feature_min; // 36, per-feature normalization
    std::vector<double> feature_max;
    std::string provenance;

    void validate() const {
        if (weights.size() != 36 || feature_min.size() != 36 || feature_max.size() != 36)
            throw validation_error("BrisqueModel: expected 36 weights and normalization bounds");
        for (std::size_t k = 0; k < 36; ++k)
            if (!(feature_min[k] < feature_max[k]))
                throw validation_error("BrisqueModel: feature_min must be < feature_max");
    }
};

/// Linear score on min-max-normalized features, clamped to [0,100];
/// lower = better quality.
inline double brisque_score(const std::vector<double>& features, const BrisqueModel& model) {
    model.validate();
    if (features.size() != 36) throw validation_error("brisque_score: expected 36 features");
    double z = model.bias;
    for (std::size_t k = 0; k < 36; ++k) {
        const double t = (features[k] - model.feature_min[k]) /
                         (model.feature_max[k] - model.feature_min[k]);
        z += model.weights[k] * t;
    }
    return std::clamp(z, 0.0, 100.0);
}

/// Training-free score on 16x16 MSCN blocks. A block is spatially active when
/// its mean |MSCN| exceeds 0.1; an active block counts as distorted when a
/// 6-pixel run along any of its four edges is near-flat (std < 0.1, a blockiness
/// artifact) or the whole block looks like pure noise (std > 0.45).
/// score = 100 * (distorted + 1) / (active + 1); constant images score 100.
inline double piqe_score(const ChannelImage& image) {
    if (image.height() < 32 || image.width() < 32)
        throw validation_error("piqe_score: image must be at least 32x32");
    const ChannelImage mscn = detail::mscn_field(image);
    constexpr int B = 16;
    constexpr double activity_threshold = 0.1;
    constexpr double segment_flat_std = 0.1;
    constexpr double noise_block_std = 0.45;
    const int by = image.height() / B, bx = image.width() / B;
    std::size_t active = 0, distorted = 0;
    std::vector<double> seg(6);
    for (int b0 = 0; b0 < by; ++b0)
        for (int b1 = 0; b1 < bx; ++b1) {
            double abs_sum = 0.0, sum = 0.0, sq = 0.0;
            for (int i = 0; i < B; ++i)
                for (int j = 0; j < B; ++j) {
                    const double v = mscn(b0 * B + i, b1 * B + j);
                    abs_sum += std::abs(v);
                    sum += v;
                    sq += v * v;
                }
            constexpr double npix = B * B;
            if (abs_sum / npix <= activity_threshold) continue;
            ++active;
            const double block_std = std::sqrt(std::max(0.0, sq / npix - (sum / npix) * (sum / npix)));
            bool is_distorted = block_std > noise_block_std;
            // edge-segment flatness scan: 6-px sliding runs along each border row/col
            auto seg_flat = [&](auto&& value_at) {
                for (int start = 0; start + 6 <= B; ++start) {
                    double s = 0.0, s2 = 0.0;
                    for (int t = 0; t < 6; ++t) {
                        const double v = value_at(start + t);
                        s += v;
                        s2 += v * v;
                    }
                    const double st = std::sqrt(std::max(0.0, s2 / 6.0 - (s / 6.0) * (s / 6.0)));
                    if (st < segment_flat_std) return true;
                }
                return false;
            };
            if (!is_distorted)
                is_distorted =
                    seg_flat([&](int t) { return mscn(b0 * B, b1 * B + t); }) ||
                    seg_flat([&](int t) { return mscn(b0 * B + B - 1, b1 * B + t); }) ||
                    seg_flat([&](int t) { return mscn(b0 * B + t, b1 * B); }) ||
                    seg_flat([&](int t) { return mscn(b0 * B + t, b1 * B + B - 1); });
            if (is_distorted) ++distorted;
        }
    return 100.0 * (static_cast<double>(distorted) + 1.0) / (static_cast<double>(active) + 1.0);
}

/// Combined no-reference score: scores normalized to [0,1], harmonic mean H
/// (H = 0 when either input is 0), result (1 - H) * 100. Higher = better.
inline double crisque(double brisque, double piqe) {
    if (!(brisque >= 0.0 && brisque <= 100.0) || !(piqe >= 0.0 && piqe <= 100.0))
        throw validation_error("crisque: inputs must be in [0,100]");
    const double b = brisque / 100.0, p = piqe / 100.0;
    const double h = (b == 0.0 || p == 0.0) ? 0.0 : 2.0 / (1.0 / b + 1.0 / p);
    return (1.0 - h) * 100.0;
}

struct IqaRow {
    std::size_t channel = 0;
    double mz = 0.0;
    double brisque = 0.0;
    double piqe = 0.0;
    double crisque = 0.0;
    bool has_reference = false;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

struct IqaReport {
    std::vector<IqaRow> rows;
    double median_brisque = 0.0;
    double median_piqe = 0.0;
    double median_crisque = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// Per-channel scores over a cube; reference enables PSNR/SSIM columns.
inline IqaReport score_cube(const SpectralCube& cube, const BrisqueModel& model,
                            const SpectralCube* reference = nullptr) {
    if (reference && (reference->channel_count() != cube.channel_count() ||
                      reference->height() != cube.height() ||
                      reference->width() != cube.width()))
        throw validation_error("score_cube: reference cube shape mismatch");
    IqaReport report;
    std::vector<double> bs, ps, cs;
    for (std::size_t c = 0; c < cube.channel_count(); ++c) {
        IqaRow row;
        row.channel = c;
        row.mz = cube.labels()[c];
        row.brisque = brisque_score(brisque_features(cube.channel(c)), model);
        row.piqe = piqe_score(cube.channel(c));
        row.crisque = crisque(row.brisque, row.piqe);
        if (reference) {
            row.has_reference = true;
            row.psnr_db = psnr(cube.channel(c), reference->channel(c));
            row.ssim = ssim(cube.channel(c), reference->channel(c));
        }
        bs.push_back(row.brisque);
        ps.push_back(row.piqe);
        cs.push_back(row.crisque);
        report.rows.push_back(row);
    }
    report.median_brisque = detail::median_of(bs);
    report.median_piqe = detail::median_of(ps);
    report.median_crisque = detail::median_of(cs);
    return report;
}

} // namespace hyres

#endif
