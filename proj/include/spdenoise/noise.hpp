#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spdenoise/image.hpp"

namespace spd {

struct NoiseConfig {
    double density = 0.0;     ///< probability that a pixel is corrupted
    double salt_ratio = 0.5;  ///< fraction of corrupted pixels that become salt
    int delta = 0;            ///< impulse half-width; 0 means pure 0/255
    std::uint64_t seed = 0;
};

void validate(const NoiseConfig& cfg);

/// Per-pixel impulse flags aligned with an Image.
class NoiseMask {
public:
    NoiseMask() = default;
    NoiseMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          flags_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return flags_.size(); }

    bool operator()(int x, int y) const { return flags_[index(x, y)] != 0; }
    bool at(std::size_t flat) const { return flags_[flat] != 0; }
    void set(int x, int y, bool v) { flags_[index(x, y)] = v ? 1 : 0; }
    void set(std::size_t flat, bool v) { flags_[flat] = v ? 1 : 0; }

    std::size_t count() const;
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }
    bool matches(const Image& img) const { return img.width() == width_ && img.height() == height_; }

    friend bool operator==(const NoiseMask&, const NoiseMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> flags_;
};

struct NoisyImage {
    Image image;
    std::vector<std::size_t> corrupted;  ///< flat indices, ascending
};

/// Salt-and-pepper injection.
///
/// Pixels are visited in row-major order with one std::mt19937_64 stream
/// seeded by cfg.seed. Each pixel consumes one uniform draw for the
/// corruption test; a corrupted pixel consumes a second draw for salt vs
/// pepper and, when delta > 0, a third draw for the value inside
/// [0, delta) or (255 - delta, 255]. Uniforms are (u64 >> 11) * 2^-53, so
/// output is identical on every conforming platform.
NoisyImage inject_noise(const Image& img, const NoiseConfig& cfg);

/// Flags pepper values below max(delta, 1) and salt values above
/// 255 - max(delta, 1). With delta 0 this is exactly {0, 255}.
NoiseMask detect_noise(const Image& img, int delta);

}  // namespace spd
