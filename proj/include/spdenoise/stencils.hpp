#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spdenoise/image.hpp"
#include "spdenoise/noise.hpp"

namespace spd {

enum class DirectionClass { horizontal = 1, vertical = 2, diagonal = 3 };

/// One of the 24 multi-angle contour templates. The 3x3 matrix is indexed
/// [row][col] with row 0 above the center and col 0 left of it.
struct StencilTemplate {
    DirectionClass direction_class;
    int index_in_class;  // 1..8
    double angle;        // radians
    std::array<std::array<int, 3>, 3> matrix;

    /// (dx, dy) of the two +1 entries, in row-major matrix order.
    std::array<std::pair<int, int>, 2> offsets() const;
};

inline constexpr std::size_t kStencilCount = 24;

/// Bank ordered horizontal k=1..8, vertical k=1..8, diagonal k=1..8.
const std::array<StencilTemplate, kStencilCount>& template_bank();

struct StencilLabel {
    int template_id = 0;
    double angle = 0.0;
    double response = 0.0;
};

class StencilMap {
public:
    StencilMap() = default;
    StencilMap(int width, int height)
        : width_(width), height_(height), labels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {}

    int width() const { return width_; }
    int height() const { return height_; }
    const StencilLabel& operator()(int x, int y) const { return labels_[index(x, y)]; }
    StencilLabel& operator()(int x, int y) { return labels_[index(x, y)]; }
    std::span<const StencilLabel> labels() const { return labels_; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<StencilLabel> labels_;
};

struct PrefilterResult {
    Image image;
    std::size_t warnings = 0;  ///< flagged pixels with no clean neighbor inside the window cap
};

inline constexpr int kPrefilterMaxWindow = 21;
inline constexpr double kPrefilterFallback = 128.0;

/// Replaces each flagged pixel by the median of the unflagged pixels in the
/// smallest clamped window (3x3 up to 21x21) containing any. Reads only the
/// input image.
PrefilterResult median_prefilter(const Image& img, const NoiseMask& mask);

/// Discrete TV response: sum over the template's +1 entries of
/// |u(center + offset) - u(center)|.
double stencil_response(const Image& img, int x, int y, const StencilTemplate& tpl,
                        BoundaryPolicy policy = BoundaryPolicy::clamp);

/// Minimal-response template; ties go to the lowest bank index.
StencilLabel best_stencil(const Image& img, int x, int y, BoundaryPolicy policy = BoundaryPolicy::clamp);

/// best_stencil at every pixel of an already prefiltered image.
StencilMap stencil_map_prefiltered(const Image& prefiltered, BoundaryPolicy policy = BoundaryPolicy::clamp,
                                   unsigned threads = 1);

struct StencilMapResult {
    StencilMap map;
    std::size_t prefilter_warnings = 0;
};

StencilMapResult stencil_map(const Image& img, const NoiseMask& mask, BoundaryPolicy policy = BoundaryPolicy::clamp,
                             unsigned threads = 1);

/// Debug view: template_id * 10 per pixel.
Image stencil_map_image(const StencilMap& map);

}  // namespace spd
