#ifndef HYRES_CUBE_IO_HPP
#define HYRES_CUBE_IO_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hyres/errors.hpp"
#include "hyres/image.hpp"

namespace hyres {

// .hyrs container, all little-endian:
//   magic "HYRS" | u8 version=1 | u32 width | u32 height | u32 channels C |
//   f64 pixel_size_um | C x f64 labels | C x H x W x f32 intensities
// (channel-major, row-major within a channel)

namespace detail {

inline void put_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& os, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> buf;
    std::memcpy(buf.data(), &value, sizeof(T));
    // this codebase only targets little-endian hosts; assert-free passthrough
    put_bytes(os, buf.data(), sizeof(T));
}

template <typename T>
bool get_le(std::istream& is, T& value) {
    std::array<char, sizeof(T)> buf;
    is.read(buf.data(), sizeof(T));
    if (is.gcount() != static_cast<std::streamsize>(sizeof(T))) return false;
    std::memcpy(&value, buf.data(), sizeof(T));
    return true;
}

} // namespace detail

inline void write_cube(const SpectralCube& cube, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_cube: cannot open '" + path + "' for writing");
    os.write("HYRS", 4);
    detail::put_le<std::uint8_t>(os, 1);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.width()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.height()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.channel_count()));
    detail::put_le<double>(os, cube.pixel_size_um());
    for (double l : cube.labels()) detail::put_le<double>(os, l);
    for (const ChannelImage& ch : cube.channels())
        for (double v : ch.data())
            detail::put_le<float>(os, static_cast<float>(v));
    if (!os) throw io_error("write_cube: write failed for '" + path + "'");
}

inline SpectralCube read_cube(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_cube: cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::memcmp(magic, "HYRS", 4) != 0)
        throw format_error("read_cube: '" + path + "' is not a HYRS container (bad magic)");
    std::uint8_t version = 0;
    if (!detail::get_le(is, version)) throw corruption_error("read_cube: truncated header");
    if (version != 1)
        throw format_error("read_cube: unsupported container version " + std::to_string(version));
    std::uint32_t width = 0, height = 0, count = 0;
    double pixel_size = 0.0;
    if (!detail::get_le(is, width) || !detail::get_le(is, height) || !detail::get_le(is, count) ||
        !detail::get_le(is, pixel_size))
        throw corruption_error("read_cube: truncated header");
    std::vector<double> labels(count);
    for (std::uint32_t c = 0; c < count; ++c)
        if (!detail::get_le(is, labels[c]))
            throw corruption_error("read_cube: truncated label table");
    std::vector<ChannelImage> channels;
    channels.reserve(count);
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    for (std::uint32_t c = 0; c < count; ++c) {
        std::vector<double> data(pixels);
        for (std::size_t k = 0; k < pixels; ++k) {
            float v = 0.0f;
            if (!detail::get_le(is, v))
                throw corruption_error("read_cube: truncated payload in channel " +
                                       std::to_string(c));
            data[k] = static_cast<double>(v);
        }
        channels.emplace_back(static_cast<int>(height), static_cast<int>(width), std::move(data));
    }
    try {
        return SpectralCube(std::move(channels), pixel_size, std::move(labels));
    } catch (const validation_error& e) {
        throw validation_error(std::string("read_cube: ") + e.what());
    }
}

namespace detail {

inline int pgm_token(std::istream& is) {
    // next integer token, skipping whitespace and '#' comments
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw format_error("pgm: malformed header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = is.get();
    }
    return value;
}

} // namespace detail

/// Binary (P5) PGM, 8- or 16-bit, rescaled to [0,1] by the format maximum.
inline ChannelImage read_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_pgm: cannot open '" + path + "'");
    char p = 0, five = 0;
    is.get(p);
    is.get(five);
    if (p != 'P' || five != '5') throw format_error("read_pgm: '" + path + "' is not binary PGM (P5)");
    const int width = detail::pgm_token(is);
    const int height = detail::pgm_token(is);
    const int maxval = detail::pgm_token(is);
    if (maxval != 255 && maxval != 65535)
        throw format_error("read_pgm: unsupported maxval " + std::to_string(maxval));
    // pgm_token consumed the single whitespace byte after maxval
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    std::vector<double> data(pixels);
    const double scale = 1.0 / maxval;
    if (maxval == 255) {
        std::vector<unsigned char> raw(pixels);
        is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(pixels));
        if (static_cast<std::size_t>(is.gcount()) != pixels)
            throw corruption_error("read_pgm: truncated pixel data in '" + path + "'");
        for (std::size_t k = 0; k < pixels; ++k) data[k] = raw[k] * scale;
    } else {
        std::vector<unsigned char> raw(pixels * 2);
        is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(pixels * 2));
        if (static_cast<std::size_t>(is.gcount()) != pixels * 2)
            throw corruption_error("read_pgm: truncated pixel data in '" + path + "'");
        for (std::size_t k = 0; k < pixels; ++k) {
            const unsigned v = (static_cast<unsigned>(raw[2 * k]) << 8) | raw[2 * k + 1]; // big-endian per PGM
            data[k] = v * scale;
        }
    }
    return ChannelImage(height, width, std::move(data));
}

/// 16-bit binary PGM, values round(data * 65535), half away from zero.
inline void write_pgm16(const ChannelImage& image, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_pgm16: cannot open '" + path + "' for writing");
    os << "P5\n" << image.width() << " " << image.height() << "\n65535\n";
    for (double v : image.data()) {
        long q = std::lround(v * 65535.0); // lround rounds half away from zero
        q = std::clamp(q, 0L, 65535L);
        const unsigned char hi = static_cast<unsigned char>((q >> 8) & 0xff);
        const unsigned char lo = static_cast<unsigned char>(q & 0xff);
        os.put(static_cast<char>(hi));
        os.put(static_cast<char>(lo));
    }
    if (!os) throw io_error("write_pgm16: write failed for '" + path + "'");
}

/// One channel as CSV of raw reals: one row per image row, 17 significant
/// digits, '.' decimal, LF line endings, one header line.
inline void write_channel_csv(const ChannelImage& image, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_channel_csv: cannot open '" + path + "'");
    os << "# rows=" << image.height() << " cols=" << image.width() << "\n";
    std::ostringstream line;
    line.precision(17);
    for (int i = 0; i < image.height(); ++i) {
        line.str("");
        for (int j = 0; j < image.width(); ++j) {
            if (j) line << ",";
            line << image(i, j);
        }
        os << line.str() << "\n";
    }
}

inline SpectralCube import_channels(const CubeManifest& manifest) {
    if (manifest.files.size() != manifest.labels.size())
        throw validation_error("import_channels: file count != label count");
    if (manifest.files.empty()) throw validation_error("import_channels: empty manifest");
    std::vector<ChannelImage> channels;
    channels.reserve(manifest.files.size());
    for (const std::string& f : manifest.files) {
        ChannelImage ch = read_pgm(f);
        if (!channels.empty() && !ch.same_dims(channels[0]))
            throw validation_error("import_channels: dimension mismatch in '" + f + "'");
        channels.push_back(std::move(ch));
    }
    return SpectralCube(std::move(channels), manifest.pixel_size_um, manifest.labels);
}

inline void export_channel(const SpectralCube& cube, std::size_t index, const std::string& path,
                           bool with_csv = false) {
    if (index >= cube.channel_count())
        throw validation_error("export_channel: channel index " + std::to_string(index) +
                               " out of range (have " + std::to_string(cube.channel_count()) + ")");
    write_pgm16(cube.channel(index), path);
    if (with_csv) write_channel_csv(cube.channel(index), path + ".csv");
}

} // namespace hyres

#endif
