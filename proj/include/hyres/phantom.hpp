#ifndef HYRES_PHANTOM_HPP
#define HYRES_PHANTOM_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hyres/fourier.hpp"
#include "hyres/image.hpp"
#include "hyres/rng.hpp"

namespace hyres {

/// Broadband synthetic test object: seeded white noise smoothed by a small
/// Gaussian, min-max normalized to [0,1]. Deterministic per (dims, seed,
/// smoothing); shared by the test suite, the report subcommand, and the
/// scorer calibration tool.
inline ChannelImage make_phantom(int height, int width, std::uint64_t seed,
                                 double smoothing_sigma = 1.0) {
    ChannelImage img(height, width);
    for (std::size_t k = 0; k < img.size(); ++k)
        img.data()[k] = rng::normal(seed, 0x9a27a0, k);
    if (smoothing_sigma > 0.0)
        img = convolve_periodic(img, gaussian_kernel(smoothing_sigma));
    double lo = img.data()[0], hi = img.data()[0];
    for (double v : img.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : img.data()) v = (v - lo) / span;
    return img;
}

/// Stack of independent phantoms with labels 100, 101, ...
inline SpectralCube make_phantom_cube(std::size_t channels, int height, int width,
                                      std::uint64_t seed, double pixel_size_um = 100.0,
                                      double smoothing_sigma = 1.0) {
    std::vector<ChannelImage> chans;
    std::vector<double> labels;
    for (std::size_t c = 0; c < channels; ++c) {
        chans.push_back(make_phantom(height, width, seed * 0x10001ULL + c, smoothing_sigma));
        labels.push_back(100.0 + static_cast<double>(c));
    }
    return SpectralCube(std::move(chans), pixel_size_um, std::move(labels));
}

} // namespace hyres

#endif
