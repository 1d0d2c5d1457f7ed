#ifndef HYRES_RESTORE_HPP
#define HYRES_RESTORE_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyres/degrade.hpp"
#include "hyres/errors.hpp"
#include "hyres/fourier.hpp"
#include "hyres/frc.hpp"
#include "hyres/image.hpp"

namespace hyres {

struct EpochLoss {
    double total = 0.0;
    double frc = 0.0;
    double pixel = 0.0;
    double adversarial = 0.0;
};

/// Learned upsample-then-deconvolve operator: bicubic up by s followed by a
/// periodic convolution with a trained K x K kernel.
struct RestorerModel {
    int scale = 4;
    int kernel_size = 9;
    std::vector<double> kernel; // row-major K x K, delta-initialized
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    std::vector<EpochLoss> trace;
    TrainingConfig config;

    static RestorerModel delta(int scale, int kernel_size, std::uint64_t seed) {
        RestorerModel m;
        m.scale = scale;
        m.kernel_size = kernel_size;
        m.seed = seed;
        m.kernel.assign(static_cast<std::size_t>(kernel_size) * kernel_size, 0.0);
        m.kernel[static_cast<std::size_t>(kernel_size) * kernel_size / 2] = 1.0;
        return m;
    }
};

namespace detail {

// pred(i,j) = sum_{a,b} k(a,b) * up(i-(a-h), j-(b-h)), periodic.
inline ChannelImage conv_kernel(const ChannelImage& up, const std::vector<double>& kernel,
                                int ksize) {
    const int h = up.height(), w = up.width(), half = ksize / 2;
    ChannelImage out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int a = 0; a < ksize; ++a) {
                const int y = (((i - (a - half)) % h) + h) % h;
                for (int b = 0; b < ksize; ++b) {
                    const int x = (((j - (b - half)) % w) + w) % w;
                    acc += kernel[static_cast<std::size_t>(a) * ksize + b] * up(y, x);
                }
            }
            out(i, j) = acc;
        }
    return out;
}

// dL/dk(a,b) = sum_ij g(i,j) * up(i-(a-h), j-(b-h))
inline void accumulate_kernel_grad(const ChannelImage& grad_pred, const ChannelImage& up,
                                   int ksize, std::vector<double>& grad_kernel) {
    const int h = up.height(), w = up.width(), half = ksize / 2;
    for (int a = 0; a < ksize; ++a)
        for (int b = 0; b < ksize; ++b) {
            double acc = 0.0;
            for (int i = 0; i < h; ++i) {
                const int y = (((i - (a - half)) % h) + h) % h;
                for (int j = 0; j < w; ++j) {
                    const int x = (((j - (b - half)) % w) + w) % w;
                    acc += grad_pred(i, j) * up(y, x);
                }
            }
            grad_kernel[static_cast<std::size_t>(a) * ksize + b] += acc;
        }
}

// Logistic scorer on 8x8-block means; the optional adversarial pathway.
struct PatchDiscriminator {
    int blocks_y = 0, blocks_x = 0;
    std::vector<double> weights;
    double bias = 0.0;
    // Adam state
    std::vector<double> m_w, v_w;
    double m_b = 0.0, v_b = 0.0;
    std::uint64_t steps = 0;

    void init(int height, int width) {
        blocks_y = height / 8;
        blocks_x = width / 8;
        weights.assign(static_cast<std::size_t>(blocks_y) * blocks_x, 0.0);
        m_w.assign(weights.size(), 0.0);
        v_w.assign(weights.size(), 0.0);
    }

    std::vector<double> features(const ChannelImage& img) const {
        std::vector<double> f(weights.size(), 0.0);
        for (int by = 0; by < blocks_y; ++by)
            for (int bx = 0; bx < blocks_x; ++bx) {
                double sum = 0.0;
                for (int i = 0; i < 8; ++i)
                    for (int j = 0; j < 8; ++j) sum += img(by * 8 + i, bx * 8 + j);
                f[static_cast<std::size_t>(by) * blocks_x + bx] = sum / 64.0;
            }
        return f;
    }

    double score(const std::vector<double>& f) const {
        double z = bias;
        for (std::size_t k = 0; k < f.size(); ++k) z += weights[k] * f[k];
        return 1.0 / (1.0 + std::exp(-z));
    }
};

} // namespace detail

/// Adam-trained deconvolution kernel on LR/HR pairs. Loss per sample is
/// alpha * frc_loss(pred, hr) + beta * mean|pred - hr|, with an optional
/// cross-entropy adversarial term when adv_weight > 0. Batches are walked in
/// a fixed canonical order, so training is bit-reproducible per seed.
inline RestorerModel train_restorer(const PairSet& pairs, const TrainingConfig& tcfg,
                                    FrcLossMode loss_mode = FrcLossMode::ring_mean) {
    tcfg.validate();
    if (pairs.pairs.empty()) throw validation_error("train_restorer: empty pair set");
    const int K = tcfg.kernel_size;
    RestorerModel model = RestorerModel::delta(pairs.scale, K, tcfg.seed);
    model.config = tcfg;

    const std::size_t n = pairs.pairs.size();
    std::vector<ChannelImage> ups;
    ups.reserve(n);
    for (const PatchPair& pp : pairs.pairs)
        ups.push_back(bicubic_resize(pp.lr, pairs.scale, ResizeDirection::up));

    const std::size_t kn = static_cast<std::size_t>(K) * K;
    std::vector<double> m(kn, 0.0), v(kn, 0.0);
    std::uint64_t step = 0;

    detail::PatchDiscriminator disc;
    const bool adversarial = tcfg.adv_weight > 0.0;
    if (adversarial) disc.init(pairs.pairs[0].hr.height(), pairs.pairs[0].hr.width());

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        EpochLoss ep;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(tcfg.batch_size)) {
            const std::size_t end = std::min(n, start + static_cast<std::size_t>(tcfg.batch_size));
            std::vector<double> grad(kn, 0.0);
            double batch_total = 0.0, batch_frc = 0.0, batch_pix = 0.0, batch_adv = 0.0;
            std::vector<double> disc_grad_w;
            double disc_grad_b = 0.0;
            if (adversarial) disc_grad_w.assign(disc.weights.size(), 0.0);

            for (std::size_t idx = start; idx < end; ++idx) {
                const ChannelImage& up = ups[idx];
                const ChannelImage& hr = pairs.pairs[idx].hr;
                const ChannelImage pred = detail::conv_kernel(up, model.kernel, K);

                double frc_l = 0.0;
                ChannelImage grad_pred =
                    frc_loss_gradient(pred, hr, loss_mode, &frc_l);
                const double npix = static_cast<double>(pred.size());
                double pix_l = 0.0;
                for (std::size_t k = 0; k < pred.size(); ++k) {
                    const double d = pred.data()[k] - hr.data()[k];
                    pix_l += std::abs(d);
                    const double sgn = (d > 0.0) - (d < 0.0);
                    grad_pred.data()[k] = tcfg.alpha_frc * grad_pred.data()[k] +
                                          tcfg.beta_pixel * sgn / npix;
                }
                pix_l /= npix;

                double adv_l = 0.0;
                if (adversarial) {
                    const auto f_real = disc.features(hr);
                    const auto f_fake = disc.features(pred);
                    const double d_real = disc.score(f_real);
                    const double d_fake = disc.score(f_fake);
                    // discriminator cross-entropy: -log D(hr) - log(1 - D(pred))
                    for (std::size_t k = 0; k < disc.weights.size(); ++k)
                        disc_grad_w[k] += (d_real - 1.0) * f_real[k] + d_fake * f_fake[k];
                    disc_grad_b += (d_real - 1.0) + d_fake;
                    // generator term: -log D(pred); gradient spreads over each block
                    adv_l = -std::log(std::max(d_fake, 1e-12));
                    const double gz = -(1.0 - d_fake);
                    for (int by = 0; by < disc.blocks_y; ++by)
                        for (int bx = 0; bx < disc.blocks_x; ++bx) {
                            const double gblock =
                                tcfg.adv_weight * gz *
                                disc.weights[static_cast<std::size_t>(by) * disc.blocks_x + bx] / 64.0;
                            for (int i = 0; i < 8; ++i)
                                for (int j = 0; j < 8; ++j)
                                    grad_pred(by * 8 + i, bx * 8 + j) += gblock;
                        }
                }

                detail::accumulate_kernel_grad(grad_pred, up, K, grad);
                const double total =
                    tcfg.alpha_frc * frc_l + tcfg.beta_pixel * pix_l + tcfg.adv_weight * adv_l;
                if (!std::isfinite(total))
                    throw std::runtime_error("train_restorer: non-finite loss at epoch " +
                                             std::to_string(epoch) + ", sample " +
                                             std::to_string(idx));
                batch_total += total;
                batch_frc += frc_l;
                batch_pix += pix_l;
                batch_adv += adv_l;
            }

            const double bn = static_cast<double>(end - start);
            for (double& g : grad) g /= bn;

            // Adam update on the kernel
            ++step;
            const double bc1 = 1.0 - std::pow(tcfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(tcfg.adam_beta2, static_cast<double>(step));
            for (std::size_t k = 0; k < kn; ++k) {
                m[k] = tcfg.adam_beta1 * m[k] + (1.0 - tcfg.adam_beta1) * grad[k];
                v[k] = tcfg.adam_beta2 * v[k] + (1.0 - tcfg.adam_beta2) * grad[k] * grad[k];
                model.kernel[k] -=
                    tcfg.learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + 1e-8);
            }

            if (adversarial) {
                for (double& g : disc_grad_w) g /= bn;
                disc_grad_b /= bn;
                ++disc.steps;
                const double dc1 = 1.0 - std::pow(tcfg.adam_beta1, static_cast<double>(disc.steps));
                const double dc2 = 1.0 - std::pow(tcfg.adam_beta2, static_cast<double>(disc.steps));
                for (std::size_t k = 0; k < disc.weights.size(); ++k) {
                    disc.m_w[k] = tcfg.adam_beta1 * disc.m_w[k] + (1.0 - tcfg.adam_beta1) * disc_grad_w[k];
                    disc.v_w[k] = tcfg.adam_beta2 * disc.v_w[k] +
                                  (1.0 - tcfg.adam_beta2) * disc_grad_w[k] * disc_grad_w[k];
                    disc.weights[k] -= tcfg.learning_rate * (disc.m_w[k] / dc1) /
                                       (std::sqrt(disc.v_w[k] / dc2) + 1e-8);
                }
                disc.m_b = tcfg.adam_beta1 * disc.m_b + (1.0 - tcfg.adam_beta1) * disc_grad_b;
                disc.v_b = tcfg.adam_beta2 * disc.v_b + (1.0 - tcfg.adam_beta2) * disc_grad_b * disc_grad_b;
                disc.bias -= tcfg.learning_rate * (disc.m_b / dc1) / (std::sqrt(disc.v_b / dc2) + 1e-8);
            }

            ep.total += batch_total / bn;
            ep.frc += batch_frc / bn;
            ep.pixel += batch_pix / bn;
            ep.adversarial += batch_adv / bn;
            ++batches;
        }
        const double nb = static_cast<double>(batches);
        ep.total /= nb;
        ep.frc /= nb;
        ep.pixel /= nb;
        ep.adversarial /= nb;
        model.trace.push_back(ep);
    }
    model.final_loss = model.trace.empty() ? 0.0 : model.trace.back().total;
    return model;
}

/// Bicubic up by the model scale, learned deconvolution, clamp to [0,1].
/// Pixel size shrinks by s; labels are preserved.
inline SpectralCube apply_restorer(const RestorerModel& model, const SpectralCube& lr) {
    std::vector<ChannelImage> channels;
    channels.reserve(lr.channel_count());
    for (std::size_t c = 0; c < lr.channel_count(); ++c) {
        ChannelImage up = bicubic_resize(lr.channel(c), model.scale, ResizeDirection::up);
        ChannelImage out = detail::conv_kernel(up, model.kernel, model.kernel_size);
        for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
        channels.push_back(std::move(out));
    }
    return SpectralCube(std::move(channels), lr.pixel_size_um() / model.scale, lr.labels());
}

// Model file: UTF-8 text, one "key = value" per line, kernel row-major with
// 17 significant digits.

inline void write_model(const RestorerModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_model: cannot open '" + path + "'");
    os << "format = hyres-model/1\n";
    os << "scale = " << model.scale << "\n";
    os << "kernel_size = " << model.kernel_size << "\n";
    os << "seed = " << model.seed << "\n";
    std::ostringstream num;
    num.precision(17);
    num << model.final_loss;
    os << "final_loss = " << num.str() << "\n";
    os << "kernel = ";
    for (std::size_t k = 0; k < model.kernel.size(); ++k) {
        num.str("");
        num << model.kernel[k];
        os << (k ? "," : "") << num.str();
    }
    os << "\n";
}

inline RestorerModel read_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("read_model: cannot open '" + path + "'");
    RestorerModel model;
    bool saw_format = false;
    std::string line;
    std::vector<double> kernel;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (key == "format") {
            if (value != "hyres-model/1")
                throw format_error("read_model: unknown format '" + value + "'");
            saw_format = true;
        } else if (key == "scale") model.scale = std::stoi(value);
        else if (key == "kernel_size") model.kernel_size = std::stoi(value);
        else if (key == "seed") model.seed = std::stoull(value);
        else if (key == "final_loss") model.final_loss = std::stod(value);
        else if (key == "kernel") {
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) kernel.push_back(std::stod(tok));
        }
    }
    if (!saw_format) throw format_error("read_model: '" + path + "' is not a hyres model file");
    if (kernel.size() != static_cast<std::size_t>(model.kernel_size) * model.kernel_size)
        throw corruption_error("read_model: kernel weight count mismatch");
    model.kernel = std::move(kernel);
    return model;
}

inline void write_loss_trace_csv(const RestorerModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_loss_trace_csv: cannot open '" + path + "'");
    os << "epoch,loss_total,loss_frc,loss_pixel,loss_adv\n";
    // shortest round-trip decimal form keeps the trace both exact and readable
    auto shortest = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    for (std::size_t e = 0; e < model.trace.size(); ++e) {
        const EpochLoss& l = model.trace[e];
        os << e << "," << shortest(l.total) << "," << shortest(l.frc) << ","
           << shortest(l.pixel) << "," << shortest(l.adversarial) << "\n";
    }
}

} // namespace hyres

#endif
