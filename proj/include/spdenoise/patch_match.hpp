#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spdenoise/image.hpp"
#include "spdenoise/noise.hpp"
#include "spdenoise/stencils.hpp"

namespace spd {

/// Search window value meaning "every pixel of the image".
inline constexpr int kFullSearch = 0;

enum class MatchMetric {
    intensity,  ///< trimmed weighted Euclidean distance on pixel values
    stencil,    ///< wrapped squared angle distance between stencil-map crops
};

struct MatchConfig {
    int patch_size = 7;
    int mm = 16;
    int search_window = 39;  ///< odd side length, or kFullSearch
    MatchMetric metric = MatchMetric::intensity;
};

void validate(const MatchConfig& cfg);

struct ScoredCandidate {
    PatchRef patch;
    double distance = 0.0;
};

/// Trimmed patch distance: the `outliers` largest squared differences get
/// weight 0, the remaining n - outliers get 1/(n - outliers).
/// Throws std::invalid_argument on length mismatch or outliers >= n.
double weighted_distance(std::span<const double> p, std::span<const double> q, std::size_t outliers);

/// Positions where either patch is flagged, clamped to n - 1.
std::size_t estimate_nn(const NoiseMask& mask, const PatchRef& p, const PatchRef& q);

/// Wrapped squared angle distance between two equally sized angle crops.
/// Orientations have period pi, so each difference is folded into
/// (-pi/2, pi/2] before squaring.
double stencil_distance(std::span<const double> angles_p, std::span<const double> angles_q);

/// Angle crop of a stencil map (clamped), row-major size*size.
std::vector<double> stencil_crop(const StencilMap& map, const PatchRef& ref);

/// Precomputed search state over one noisy image. Thread-safe for
/// concurrent find() calls.
class PatchSearch {
public:
    /// `smap` is required only for MatchMetric::stencil and must outlive the search.
    PatchSearch(const Image& img, const NoiseMask& mask, const MatchConfig& cfg, const StencilMap* smap = nullptr);

    /// The mm best candidates for the patch centered at (cx, cy), ascending
    /// by distance with ties in row-major order. Never includes the target.
    std::vector<ScoredCandidate> find(int cx, int cy) const;

    const MatchConfig& config() const { return cfg_; }

private:
    double intensity_distance(std::span<const double> tp, std::span<const std::uint8_t> tm, int qx, int qy,
                              std::span<double> scratch) const;
    double angle_distance(std::span<const double> ta, int qx, int qy) const;

    int width_;
    int height_;
    int radius_;
    int padded_width_;
    MatchConfig cfg_;
    std::vector<double> pixels_;
    std::vector<std::uint8_t> flags_;
    std::vector<double> angles_;
};

std::vector<ScoredCandidate> find_similar(const Image& img, const NoiseMask& mask, const PatchRef& target,
                                          const MatchConfig& cfg);

}  // namespace spd
