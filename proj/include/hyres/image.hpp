#ifndef HYRES_IMAGE_HPP
#define HYRES_IMAGE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hyres/errors.hpp"

namespace hyres {

/// A single 2D intensity image, row-major doubles. All values must be finite;
/// ingestion normalizes to [0,1] but intermediate results may leave that range.
class ChannelImage {
public:
    ChannelImage() = default;

    ChannelImage(int height, int width, double fill = 0.0)
        : h_(height), w_(width), data_(check_dims(height, width), fill) {
        if (!std::isfinite(fill)) throw validation_error("ChannelImage: non-finite fill value");
    }

    ChannelImage(int height, int width, std::vector<double> data)
        : h_(height), w_(width), data_(std::move(data)) {
        if (data_.size() != check_dims(height, width))
            throw validation_error("ChannelImage: data length " + std::to_string(data_.size()) +
                                   " != " + std::to_string(height) + "x" + std::to_string(width));
        for (double v : data_)
            if (!std::isfinite(v)) throw validation_error("ChannelImage: non-finite value");
    }

    int height() const { return h_; }
    int width() const { return w_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * w_ + j]; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * w_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_dims(const ChannelImage& other) const {
        return h_ == other.h_ && w_ == other.w_;
    }

private:
    static std::size_t check_dims(int h, int w) {
        if (h < 1 || w < 1) throw validation_error("ChannelImage: non-positive dimensions");
        return static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    }

    int h_ = 0;
    int w_ = 0;
    std::vector<double> data_;
};

/// Ordered stack of same-sized channel images with a physical pixel size and
/// strictly increasing m/z labels.
class SpectralCube {
public:
    SpectralCube() = default;

    SpectralCube(std::vector<ChannelImage> channels, double pixel_size_um,
                 std::vector<double> labels)
        : channels_(std::move(channels)), pixel_size_um_(pixel_size_um),
          labels_(std::move(labels)) {
        if (channels_.empty()) throw validation_error("SpectralCube: no channels");
        if (!(pixel_size_um_ > 0.0) || !std::isfinite(pixel_size_um_))
            throw validation_error("SpectralCube: pixel_size_um must be > 0");
        if (labels_.size() != channels_.size())
            throw validation_error("SpectralCube: label count != channel count");
        for (std::size_t c = 1; c < channels_.size(); ++c)
            if (!channels_[c].same_dims(channels_[0]))
                throw validation_error("SpectralCube: channel dimension mismatch at index " +
                                       std::to_string(c));
        for (std::size_t c = 0; c < labels_.size(); ++c) {
            if (!std::isfinite(labels_[c])) throw validation_error("SpectralCube: non-finite label");
            if (c > 0 && !(labels_[c] > labels_[c - 1]))
                throw validation_error("SpectralCube: labels must be strictly increasing");
        }
    }

    int height() const { return channels_[0].height(); }
    int width() const { return channels_[0].width(); }
    std::size_t channel_count() const { return channels_.size(); }

    const ChannelImage& channel(std::size_t c) const { return channels_.at(c); }
    const std::vector<ChannelImage>& channels() const { return channels_; }
    double pixel_size_um() const { return pixel_size_um_; }
    const std::vector<double>& labels() const { return labels_; }

private:
    std::vector<ChannelImage> channels_;
    double pixel_size_um_ = 1.0;
    std::vector<double> labels_;
};

/// Recipe for assembling a cube from per-channel grayscale files.
struct CubeManifest {
    double pixel_size_um = 1.0;
    std::string label_path;             // where the labels came from (informational)
    std::vector<std::string> files;     // ordered channel files
    std::vector<double> labels;         // one m/z per file
};

} // namespace hyres

#endif
