#ifndef HYRES_FOURIER_HPP
#define HYRES_FOURIER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/image.hpp"

namespace hyres {

using cplx = std::complex<double>;

/// Frequency-domain samples of a 2D transform, row-major, DC at (0,0).
class ComplexField {
public:
    ComplexField() = default;

    ComplexField(int height, int width)
        : h_(height), w_(width),
          data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        if (height < 1 || width < 1) throw validation_error("ComplexField: non-positive dimensions");
    }

    int height() const { return h_; }
    int width() const { return w_; }
    std::size_t size() const { return data_.size(); }

    cplx operator()(int u, int v) const { return data_[static_cast<std::size_t>(u) * w_ + v]; }
    cplx& operator()(int u, int v) { return data_[static_cast<std::size_t>(u) * w_ + v]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

private:
    int h_ = 0;
    int w_ = 0;
    std::vector<cplx> data_;
};

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place, n a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein's algorithm for arbitrary n, via a power-of-two convolution.
inline void fft_bluestein(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2/2 mod n computed in integers to keep the phase exact for large k
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }

    std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);

    fft_pow2(u, false);
    fft_pow2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_pow2(u, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * scale * chirp[k];
}

inline void fft1d(std::vector<cplx>& a, bool inverse) {
    if (a.size() <= 1) return;
    if (is_pow2(a.size())) fft_pow2(a, inverse);
    else fft_bluestein(a, inverse);
}

// Unnormalized 2D transform over rows then columns, in place on the field.
inline void fft2d(ComplexField& f, bool inverse) {
    const int h = f.height(), w = f.width();
    std::vector<cplx> line(static_cast<std::size_t>(std::max(h, w)));
    for (int i = 0; i < h; ++i) {
        line.assign(f.data().begin() + static_cast<std::size_t>(i) * w,
                    f.data().begin() + static_cast<std::size_t>(i + 1) * w);
        fft1d(line, inverse);
        std::copy(line.begin(), line.end(), f.data().begin() + static_cast<std::size_t>(i) * w);
    }
    line.resize(static_cast<std::size_t>(h));
    for (int j = 0; j < w; ++j) {
        for (int i = 0; i < h; ++i) line[static_cast<std::size_t>(i)] = f(i, j);
        fft1d(line, inverse);
        for (int i = 0; i < h; ++i) f(i, j) = line[static_cast<std::size_t>(i)];
    }
}

} // namespace detail

/// Forward DFT, X(u,v) = sum x(i,j) exp(-2*pi*i*(ui/H + vj/W)), unnormalized.
inline ComplexField dft2(const ChannelImage& image) {
    ComplexField f(image.height(), image.width());
    for (std::size_t k = 0; k < image.size(); ++k) f.data()[k] = cplx(image.data()[k], 0.0);
    detail::fft2d(f, false);
    return f;
}

/// Inverse DFT with 1/(HW) normalization. The imaginary residue of a
/// Hermitian-symmetric field is discarded; its maximum can be retrieved via
/// max_imag_out. A residue above 1e-6 (relative to the field magnitude)
/// signals non-Hermitian input and throws.
inline ChannelImage idft2(const ComplexField& field, double* max_imag_out = nullptr) {
    ComplexField f = field;
    detail::fft2d(f, true);
    const double norm = 1.0 / static_cast<double>(f.size());
    double max_imag = 0.0;
    double max_mag = 0.0;
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const cplx v = f.data()[k] * norm;
        out[k] = v.real();
        max_imag = std::max(max_imag, std::abs(v.imag()));
        max_mag = std::max(max_mag, std::abs(v.real()));
    }
    if (max_imag_out) *max_imag_out = max_imag;
    if (max_imag > 1e-6 * std::max(1.0, max_mag))
        throw symmetry_error("idft2: imaginary residue " + std::to_string(max_imag) +
                             " exceeds tolerance; input field is not Hermitian-symmetric");
    return ChannelImage(field.height(), field.width(), std::move(out));
}

/// Assignment of every frequency sample to an integer-radius ring.
/// Samples beyond ring R = floor(min(H,W)/2) are excluded (index -1).
class RingPartition {
public:
    RingPartition(int height, int width)
        : h_(height), w_(width) {
        if (height < 2 || width < 2)
            throw validation_error("ring_partition: needs at least 2 samples per axis");
        ring_count_ = std::min(height, width) / 2;
        index_.assign(static_cast<std::size_t>(height) * width, -1);
        counts_.assign(static_cast<std::size_t>(ring_count_) + 1, 0);
        for (int i = 0; i < height; ++i) {
            const int u = (i <= height / 2) ? i : i - height;
            for (int j = 0; j < width; ++j) {
                const int v = (j <= width / 2) ? j : j - width;
                const int r = static_cast<int>(std::lround(std::sqrt(
                    static_cast<double>(u) * u + static_cast<double>(v) * v)));
                if (r <= ring_count_) {
                    index_[static_cast<std::size_t>(i) * width + j] = r;
                    ++counts_[static_cast<std::size_t>(r)];
                }
            }
        }
    }

    int height() const { return h_; }
    int width() const { return w_; }
    /// Highest ring index R; rings run 0..R.
    int ring_count() const { return ring_count_; }
    /// Ring index of sample (u,v) in DFT layout, or -1 if excluded.
    int ring(int u, int v) const { return index_[static_cast<std::size_t>(u) * w_ + v]; }
    const std::vector<int>& index() const { return index_; }
    std::size_t samples_in_ring(int r) const { return counts_[static_cast<std::size_t>(r)]; }

private:
    int h_ = 0, w_ = 0, ring_count_ = 0;
    std::vector<int> index_;
    std::vector<std::size_t> counts_;
};

inline RingPartition ring_partition(int height, int width) { return RingPartition(height, width); }

/// Odd-sized normalized kernel, centrosymmetric for Gaussian construction.
class Kernel {
public:
    Kernel(int side, std::vector<double> weights)
        : side_(side), weights_(std::move(weights)) {
        if (side < 1 || side % 2 == 0) throw validation_error("Kernel: side must be odd and positive");
        if (weights_.size() != static_cast<std::size_t>(side) * side)
            throw validation_error("Kernel: weight count mismatch");
        double sum = 0.0;
        for (double v : weights_) {
            if (!std::isfinite(v)) throw validation_error("Kernel: non-finite weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw validation_error("Kernel: weights must sum to 1, got " + std::to_string(sum));
    }

    int side() const { return side_; }
    double operator()(int i, int j) const { return weights_[static_cast<std::size_t>(i) * side_ + j]; }
    const std::vector<double>& weights() const { return weights_; }

private:
    int side_;
    std::vector<double> weights_;
};

/// Centered Gaussian, w(i,j) ~ exp(-(i^2+j^2)/(2 sigma^2)), normalized to sum 1.
/// size == 0 auto-sizes to the smallest odd value >= 6*sigma.
inline Kernel gaussian_kernel(double sigma, int size = 0) {
    if (!(sigma > 0.0)) throw validation_error("gaussian_kernel: sigma must be > 0");
    if (size == 0) {
        size = static_cast<int>(std::ceil(6.0 * sigma));
        if (size % 2 == 0) ++size;
        size = std::max(size, 3);
    }
    if (size % 2 == 0) throw validation_error("gaussian_kernel: size must be odd");
    const int half = size / 2;
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
            const double v = std::exp(-(static_cast<double>(i) * i + static_cast<double>(j) * j) /
                                      (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(i + half) * size + (j + half)] = v;
            sum += v;
        }
    for (double& v : w) v /= sum;
    return Kernel(size, std::move(w));
}

/// Circular convolution via the Fourier product of the image with the kernel
/// embedded at the origin with wrap-around.
inline ChannelImage convolve_periodic(const ChannelImage& image, const Kernel& kernel) {
    const int h = image.height(), w = image.width();
    if (kernel.side() > std::min(h, w))
        throw validation_error("convolve_periodic: kernel larger than image");
    ChannelImage embedded(h, w, 0.0);
    const int half = kernel.side() / 2;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j)
            embedded(((i % h) + h) % h, ((j % w) + w) % w) += kernel(i + half, j + half);
    ComplexField a = dft2(image);
    const ComplexField b = dft2(embedded);
    for (std::size_t k = 0; k < a.size(); ++k) a.data()[k] *= b.data()[k];
    detail::fft2d(a, true);
    const double norm = 1.0 / static_cast<double>(a.size());
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a.data()[k].real() * norm;
    return ChannelImage(h, w, std::move(out));
}

} // namespace hyres

#endif
