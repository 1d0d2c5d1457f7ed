#ifndef HYRES_DEGRADE_HPP
#define HYRES_DEGRADE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/image.hpp"
#include "hyres/rng.hpp"

namespace hyres {

struct DegradationConfig {
    int scale = 4;                 // integer downsampling factor s >= 2
    double noise_sigma = 0.02;     // Gaussian noise on the [0,1] scale
    double noisy_fraction = 0.0;   // share of channels also noised on background
    double snr_tau = 1e-6;         // MSE threshold for the low-SNR filter
    std::uint64_t seed = 0;

    void validate() const {
        if (scale < 2) throw validation_error("DegradationConfig: scale must be >= 2");
        if (noise_sigma < 0.0) throw validation_error("DegradationConfig: negative noise sigma");
        if (noisy_fraction < 0.0 || noisy_fraction > 1.0)
            throw validation_error("DegradationConfig: noisy_fraction outside [0,1]");
        if (snr_tau < 0.0) throw validation_error("DegradationConfig: negative snr_tau");
    }
};

struct TrainingConfig {
    int epochs = 100;
    int batch_size = 8;
    int patch_size = 50;           // LR-pixel patch side; HR patches are s x larger
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double alpha_frc = 1.0;        // FRC loss weight
    double beta_pixel = 0.1;       // mean-absolute pixel loss weight
    double adv_weight = 0.0;       // adversarial weight; 0 keeps the discriminator off
    int kernel_size = 9;
    std::uint64_t seed = 0;

    void validate() const {
        if (epochs < 0) throw validation_error("TrainingConfig: negative epochs");
        if (batch_size < 1) throw validation_error("TrainingConfig: batch size must be >= 1");
        if (patch_size < 16) throw validation_error("TrainingConfig: patch size must be >= 16");
        if (kernel_size < 1 || kernel_size % 2 == 0)
            throw validation_error("TrainingConfig: kernel size must be odd");
    }
};

/// Signal MSE against the all-zero background (Eq. reduces to mean of squares).
inline double mse_signal(const ChannelImage& image) {
    double sum = 0.0;
    for (double v : image.data()) sum += v * v;
    return sum / static_cast<double>(image.size());
}

struct FilterResult {
    SpectralCube cube;
    std::vector<bool> kept; // per original channel
};

/// Keep channel c iff mse_signal(c) >= tau.
inline FilterResult filter_low_snr(const SpectralCube& cube, double tau) {
    if (tau < 0.0) throw validation_error("filter_low_snr: negative threshold");
    std::vector<ChannelImage> kept_channels;
    std::vector<double> kept_labels;
    std::vector<bool> mask(cube.channel_count());
    for (std::size_t c = 0; c < cube.channel_count(); ++c) {
        const bool keep = mse_signal(cube.channel(c)) >= tau;
        mask[c] = keep;
        if (keep) {
            kept_channels.push_back(cube.channel(c));
            kept_labels.push_back(cube.labels()[c]);
        }
    }
    if (kept_channels.empty())
        throw validation_error("filter_low_snr: every channel fell below the threshold");
    return FilterResult{SpectralCube(std::move(kept_channels), cube.pixel_size_um(),
                                     std::move(kept_labels)),
                        std::move(mask)};
}

/// Top-left crop of every channel to dimensions divisible by s.
inline SpectralCube crop_to_multiple(const SpectralCube& cube, int s) {
    if (s < 1) throw validation_error("crop_to_multiple: scale must be >= 1");
    const int h = (cube.height() / s) * s;
    const int w = (cube.width() / s) * s;
    if (h < s || w < s) throw validation_error("crop_to_multiple: cube smaller than scale factor");
    if (h == cube.height() && w == cube.width()) return cube;
    std::vector<ChannelImage> channels;
    channels.reserve(cube.channel_count());
    for (std::size_t c = 0; c < cube.channel_count(); ++c) {
        ChannelImage out(h, w);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) out(i, j) = cube.channel(c)(i, j);
        channels.push_back(std::move(out));
    }
    return SpectralCube(std::move(channels), cube.pixel_size_um(),
                        cube.labels());
}

enum class ResizeDirection { down, up };

namespace detail {

// Two-parameter cubic interpolation kernel, a = -0.5 (Catmull-Rom).
inline double cubic_weight(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
    return 0.0;
}

} // namespace detail

/// Separable 4-tap cubic resampling with clamped (replicated) coordinates.
/// Down requires dimensions divisible by s; up multiplies them by s.
inline ChannelImage bicubic_resize(const ChannelImage& image, int s, ResizeDirection direction) {
    if (s < 2) throw validation_error("bicubic_resize: scale must be >= 2");
    const int h = image.height(), w = image.width();
    int oh, ow;
    if (direction == ResizeDirection::down) {
        if (h % s != 0 || w % s != 0)
            throw validation_error("bicubic_resize: dimensions not divisible by scale on down");
        oh = h / s;
        ow = w / s;
    } else {
        oh = h * s;
        ow = w * s;
    }
    // horizontal pass then vertical pass
    const double sy = static_cast<double>(h) / oh;
    const double sx = static_cast<double>(w) / ow;
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
    for (int j = 0; j < ow; ++j) {
        const double src = (j + 0.5) * sx - 0.5;
        const int x0 = static_cast<int>(std::floor(src));
        double wgt[4];
        int col[4];
        for (int t = 0; t < 4; ++t) {
            const int x = x0 - 1 + t;
            wgt[t] = detail::cubic_weight(src - x);
            col[t] = std::clamp(x, 0, w - 1);
        }
        for (int i = 0; i < h; ++i) {
            double acc = 0.0;
            for (int t = 0; t < 4; ++t) acc += wgt[t] * image(i, col[t]);
            tmp[static_cast<std::size_t>(i) * ow + j] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int i = 0; i < oh; ++i) {
        const double src = (i + 0.5) * sy - 0.5;
        const int y0 = static_cast<int>(std::floor(src));
        double wgt[4];
        int row[4];
        for (int t = 0; t < 4; ++t) {
            const int y = y0 - 1 + t;
            wgt[t] = detail::cubic_weight(src - y);
            row[t] = std::clamp(y, 0, h - 1);
        }
        for (int j = 0; j < ow; ++j) {
            double acc = 0.0;
            for (int t = 0; t < 4; ++t)
                acc += wgt[t] * tmp[static_cast<std::size_t>(row[t]) * ow + j];
            out[static_cast<std::size_t>(i) * ow + j] = acc;
        }
    }
    return ChannelImage(oh, ow, std::move(out));
}

/// Seeded i.i.d. Gaussian noise, clamped to [0,1]. With include_background
/// false, pixels that are exactly 0 are left untouched.
inline ChannelImage add_gaussian_noise(const ChannelImage& image, double sigma,
                                       std::uint64_t seed, bool include_background) {
    if (sigma < 0.0) throw validation_error("add_gaussian_noise: negative sigma");
    if (sigma == 0.0) return image;
    ChannelImage out = image;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!include_background && out.data()[k] == 0.0) continue;
        const double v = out.data()[k] + sigma * rng::normal(seed, 0xadd9015e, k);
        out.data()[k] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

/// Aligned LR/HR patch pairs with provenance.
struct PatchPair {
    ChannelImage lr;
    ChannelImage hr;
    std::size_t channel = 0; // index in the filtered+cropped cube
    int offset_y = 0;        // LR-pixel offset within the channel
    int offset_x = 0;
};

struct PairSet {
    std::vector<PatchPair> pairs;
    int scale = 0;
    int lr_patch = 0;
};

/// Degradation pipeline: SNR filter, crop to multiple of s, bicubic down,
/// seeded noise (background included on a random channel subset), then seeded
/// random patch extraction; ceil(area/patch_area) patches per channel.
inline PairSet make_training_pairs(const SpectralCube& hr, const DegradationConfig& dcfg,
                                   const TrainingConfig& tcfg) {
    dcfg.validate();
    tcfg.validate();
    const int s = dcfg.scale;
    const int p = tcfg.patch_size;

    const FilterResult filtered = filter_low_snr(hr, dcfg.snr_tau);
    const SpectralCube cropped = crop_to_multiple(filtered.cube, s);
    const int lh = cropped.height() / s;
    const int lw = cropped.width() / s;
    if (lh < p || lw < p)
        throw validation_error("make_training_pairs: channels smaller than one LR patch");

    // channel subset that receives background noise as well
    const std::size_t n_channels = cropped.channel_count();
    const std::size_t n_noisy =
        static_cast<std::size_t>(std::lround(dcfg.noisy_fraction * static_cast<double>(n_channels)));
    std::vector<std::size_t> order(n_channels);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n_channels; i > 1; --i) { // Fisher-Yates on the seeded hash stream
        const std::size_t j = rng::below(dcfg.seed, 0x5e1ec7, i, i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<bool> noisy_bg(n_channels, false);
    for (std::size_t i = 0; i < n_noisy; ++i) noisy_bg[order[i]] = true;

    PairSet set;
    set.scale = s;
    set.lr_patch = p;
    const std::size_t per_channel = static_cast<std::size_t>(std::ceil(
        static_cast<double>(lh) * lw / (static_cast<double>(p) * p)));
    std::uint64_t draw = 0;
    for (std::size_t c = 0; c < n_channels; ++c) {
        ChannelImage lr = bicubic_resize(cropped.channel(c), s, ResizeDirection::down);
        if (dcfg.noise_sigma > 0.0)
            lr = add_gaussian_noise(lr, dcfg.noise_sigma, dcfg.seed + 0x9000 + c, noisy_bg[c]);
        for (std::size_t k = 0; k < per_channel; ++k) {
            const int oy = static_cast<int>(rng::below(dcfg.seed, 0x0ff5e7, draw++,
                                                       static_cast<std::uint64_t>(lh - p + 1)));
            const int ox = static_cast<int>(rng::below(dcfg.seed, 0x0ff5e7, draw++,
                                                       static_cast<std::uint64_t>(lw - p + 1)));
            PatchPair pair;
            pair.channel = c;
            pair.offset_y = oy;
            pair.offset_x = ox;
            pair.lr = ChannelImage(p, p);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) pair.lr(i, j) = lr(oy + i, ox + j);
            pair.hr = ChannelImage(s * p, s * p);
            for (int i = 0; i < s * p; ++i)
                for (int j = 0; j < s * p; ++j)
                    pair.hr(i, j) = cropped.channel(c)(s * oy + i, s * ox + j);
            set.pairs.push_back(std::move(pair));
        }
    }
    return set;
}

} // namespace hyres

#endif
