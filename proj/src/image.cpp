#include "spdenoise/image.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#ifdef SPDENOISE_HAVE_PNG
#include <png.h>
#endif

namespace spd {

namespace {

void check_intensity(double v) {
    if (!(v >= 0.0 && v <= 255.0)) {
        throw std::out_of_range("intensity " + std::to_string(v) + " outside [0, 255]");
    }
}

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
}

}  // namespace

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
    check_dims(width, height);
    check_intensity(fill);
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("pixel count does not match width*height");
    }
    for (double v : pixels_) check_intensity(v);
}

void Image::set(int x, int y, double value) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) {
        throw std::out_of_range("pixel coordinate outside image");
    }
    check_intensity(value);
    pixels_[index(x, y)] = value;
}

void Image::set(std::size_t flat, double value) {
    if (flat >= pixels_.size()) throw std::out_of_range("pixel index outside image");
    check_intensity(value);
    pixels_[flat] = value;
}

double pixel_at(const Image& img, int x, int y, BoundaryPolicy) {
    return img(clamp_coord(x, img.width()), clamp_coord(y, img.height()));
}

void validate(const PatchRef& ref) {
    if (ref.size < 3 || ref.size % 2 == 0) {
        throw std::invalid_argument("patch size must be odd and >= 3, got " + std::to_string(ref.size));
    }
}

std::vector<double> extract_patch(const Image& img, const PatchRef& ref, BoundaryPolicy policy) {
    validate(ref);
    const int r = ref.radius();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ref.size) * static_cast<std::size_t>(ref.size));
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            out.push_back(pixel_at(img, ref.center_x + dx, ref.center_y + dy, policy));
        }
    }
    return out;
}

std::uint8_t quantize(double value) {
    const double r = std::floor(value + 0.5);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

// ---------------------------------------------------------------------------
// PGM

namespace {

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class PgmReader {
public:
    explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments that run to end of line.
    void skip_separators(const char* field) {
        bool any = false;
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (is_space(c)) {
                ++pos_;
                any = true;
            } else if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
                any = true;
            } else {
                break;
            }
        }
        if (pos_ >= bytes_.size()) {
            throw ImageError(ImageErrorKind::truncated, field, std::string("PGM header truncated before ") + field);
        }
        if (!any) {
            throw ImageError(ImageErrorKind::malformed_header, field,
                             std::string("PGM header: missing whitespace before ") + field);
        }
    }

    int read_uint(const char* field) {
        skip_separators(field);
        long long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000) {
                throw ImageError(ImageErrorKind::malformed_header, field,
                                 std::string("PGM header: ") + field + " too large");
            }
            ++pos_;
            ++digits;
        }
        if (digits == 0) {
            throw ImageError(ImageErrorKind::malformed_header, field,
                             std::string("PGM header: expected integer for ") + field);
        }
        return static_cast<int>(value);
    }

    void expect_single_space_before_payload() {
        if (pos_ >= bytes_.size()) {
            throw ImageError(ImageErrorKind::truncated, "payload", "PGM data truncated after maxval");
        }
        if (!is_space(bytes_[pos_])) {
            throw ImageError(ImageErrorKind::malformed_header, "maxval",
                             "PGM header: maxval must be followed by one whitespace byte");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

Image load_pgm(std::span<const std::uint8_t> bytes) {
    PgmReader reader(bytes);
    reader.advance(2);
    const int width = reader.read_uint("width");
    const int height = reader.read_uint("height");
    const int maxval = reader.read_uint("maxval");
    if (width <= 0) throw ImageError(ImageErrorKind::malformed_header, "width", "PGM header: width must be positive");
    if (height <= 0) throw ImageError(ImageErrorKind::malformed_header, "height", "PGM header: height must be positive");
    if (maxval != 255) {
        throw ImageError(ImageErrorKind::unsupported_depth, "maxval",
                         "PGM maxval " + std::to_string(maxval) + " unsupported (only 255)");
    }
    reader.expect_single_space_before_payload();

    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - reader.pos() < n) {
        throw ImageError(ImageErrorKind::truncated, "payload",
                         "PGM payload truncated: expected " + std::to_string(n) + " bytes, got " +
                             std::to_string(bytes.size() - reader.pos()));
    }
    std::vector<double> px(n);
    const auto* data = bytes.data() + reader.pos();
    for (std::size_t i = 0; i < n; ++i) px[i] = data[i];
    return Image(width, height, std::move(px));
}

std::vector<std::uint8_t> save_pgm(const Image& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + img.size());
    for (double v : img.pixels()) out.push_back(quantize(v));
    return out;
}

// ---------------------------------------------------------------------------
// PNG

constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

#ifdef SPDENOISE_HAVE_PNG

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

Image load_png(std::span<const std::uint8_t> bytes) {
    // Signature, chunk length, "IHDR", width, height, depth, color type.
    if (bytes.size() < 33) throw ImageError(ImageErrorKind::truncated, "IHDR", "PNG: truncated before IHDR");
    if (std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
        throw ImageError(ImageErrorKind::malformed_header, "IHDR", "PNG: first chunk is not IHDR");
    }
    const int depth = bytes[24];
    const int color = bytes[25];
    if (color != 0) {
        throw ImageError(ImageErrorKind::unsupported_format, "color_type",
                         "PNG: color type " + std::to_string(color) + " unsupported (only grayscale)");
    }
    if (depth != 8) {
        throw ImageError(ImageErrorKind::unsupported_depth, "bit_depth",
                         "PNG: bit depth " + std::to_string(depth) + " unsupported (only 8)");
    }
    if (read_be32(bytes.data() + 16) == 0 || read_be32(bytes.data() + 20) == 0) {
        throw ImageError(ImageErrorKind::malformed_header, "width", "PNG: zero dimension");
    }

    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        std::string msg = image.message;
        png_image_free(&image);
        throw ImageError(ImageErrorKind::malformed_header, "header", "PNG: " + msg);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw ImageError(ImageErrorKind::truncated, "payload", "PNG: " + msg);
    }
    std::vector<double> px(raw.begin(), raw.end());
    return Image(static_cast<int>(image.width), static_cast<int>(image.height), std::move(px));
}

std::vector<std::uint8_t> save_png(const Image& img) {
    std::vector<std::uint8_t> raw(img.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(img.pixels()[i]);

    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, raw.data(), 0, nullptr)) {
        throw ImageError(ImageErrorKind::io, "png", std::string("PNG: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0, nullptr)) {
        throw ImageError(ImageErrorKind::io, "png", std::string("PNG: ") + image.message);
    }
    out.resize(size);
    return out;
}

#endif

}  // namespace

bool png_supported() {
#ifdef SPDENOISE_HAVE_PNG
    return true;
#else
    return false;
#endif
}

Image load_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) {
#ifdef SPDENOISE_HAVE_PNG
        return load_png(bytes);
#else
        throw ImageError(ImageErrorKind::unsupported_format, "magic", "PNG support not compiled in");
#endif
    }
    if (bytes.size() < 2) {
        throw ImageError(ImageErrorKind::truncated, "magic", "image data too short to identify format");
    }
    if (bytes[0] != 'P' || bytes[1] != '5') {
        throw ImageError(ImageErrorKind::unsupported_format, "magic",
                         std::string("unsupported image format (magic \"") + static_cast<char>(bytes[0]) +
                             static_cast<char>(bytes[1]) + "\"); expected binary PGM (P5) or PNG");
    }
    return load_pgm(bytes);
}

std::vector<std::uint8_t> save_image(const Image& img, ImageFormat format) {
    if (format == ImageFormat::png) {
#ifdef SPDENOISE_HAVE_PNG
        return save_png(img);
#else
        throw ImageError(ImageErrorKind::unsupported_format, "format", "PNG support not compiled in");
#endif
    }
    return save_pgm(img);
}

Image read_image_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageError(ImageErrorKind::io, "path", "cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_image(bytes);
}

void write_image_file(const Image& img, const std::string& path, ImageFormat format) {
    const auto bytes = save_image(img, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ImageError(ImageErrorKind::io, "path", "cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ImageError(ImageErrorKind::io, "path", "write to '" + path + "' failed");
}

ImageFormat format_for_path(const std::string& path) {
    auto ends_with = [&](const char* ext) {
        const std::size_t n = std::strlen(ext);
        if (path.size() < n) return false;
        for (std::size_t i = 0; i < n; ++i) {
            const char c = path[path.size() - n + i];
            if (std::tolower(static_cast<unsigned char>(c)) != ext[i]) return false;
        }
        return true;
    };
    return ends_with(".png") ? ImageFormat::png : ImageFormat::pgm;
}

}  // namespace spd
