#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spd {

/// Row-major grayscale image with real-valued intensities in [0, 255].
/// Quantization to 8 bits only happens when encoding to a file format.
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);
    Image(int width, int height, std::vector<double> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    double operator()(int x, int y) const { return pixels_[index(x, y)]; }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::span<const double> pixels() const { return pixels_; }

    /// Sets one pixel; throws std::out_of_range on bad coordinates or intensity.
    void set(int x, int y, double value);
    void set(std::size_t flat, double value);

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
};

enum class BoundaryPolicy { clamp };

inline int clamp_coord(int v, int extent) {
    return v < 0 ? 0 : (v >= extent ? extent - 1 : v);
}

double pixel_at(const Image& img, int x, int y, BoundaryPolicy policy = BoundaryPolicy::clamp);

/// Square odd-sized patch centered on a pixel.
struct PatchRef {
    int center_x = 0;
    int center_y = 0;
    int size = 3;

    int radius() const { return size / 2; }
    friend bool operator==(const PatchRef&, const PatchRef&) = default;
};

/// Throws std::invalid_argument unless size is odd and >= 3.
void validate(const PatchRef& ref);

/// Row-major patch of size*size intensities.
std::vector<double> extract_patch(const Image& img, const PatchRef& ref,
                                  BoundaryPolicy policy = BoundaryPolicy::clamp);

// ---------------------------------------------------------------------------
// File I/O

enum class ImageFormat { pgm, png };

enum class ImageErrorKind { unsupported_format, malformed_header, truncated, unsupported_depth, io };

class ImageError : public std::runtime_error {
public:
    ImageError(ImageErrorKind kind, std::string field, const std::string& what)
        : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}

    ImageErrorKind kind() const { return kind_; }
    /// Header field or stage that failed ("magic", "width", "maxval", "payload", ...).
    const std::string& field() const { return field_; }

private:
    ImageErrorKind kind_;
    std::string field_;
};

/// Round half up, then clamp to [0, 255].
std::uint8_t quantize(double value);

Image load_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_image(const Image& img, ImageFormat format = ImageFormat::pgm);

bool png_supported();

Image read_image_file(const std::string& path);
void write_image_file(const Image& img, const std::string& path, ImageFormat format);

/// ".png" selects PNG, anything else PGM.
ImageFormat format_for_path(const std::string& path);

}  // namespace spd
