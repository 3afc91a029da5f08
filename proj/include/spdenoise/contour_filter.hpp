#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "spdenoise/image.hpp"
#include "spdenoise/noise.hpp"
#include "spdenoise/patch_match.hpp"
#include "spdenoise/stencils.hpp"

namespace spd {

enum class SimilarityKernel {
    literal,     ///< 1 / (exp(d2 / sigma) * ln(sigma))
    simplified,  ///< exp(-d2 / sigma); differs from literal by a constant factor
};

enum class RepairOrder { row_major, reverse };

struct FilterConfig {
    double sigma = std::numbers::e;
    MatchConfig match;
    int delta = 0;
    SimilarityKernel kernel = SimilarityKernel::literal;
    RepairOrder order = RepairOrder::row_major;
    unsigned threads = 1;  ///< 0 = hardware concurrency
};

/// Throws std::invalid_argument; sigma must exceed 1 so that ln(sigma) > 0.
void validate(const FilterConfig& cfg);

struct DenoiseReport {
    FilterConfig config;
    std::size_t repaired_count = 0;
    std::size_t fallback_count = 0;
    std::size_t prefilter_warnings = 0;
    std::int64_t elapsed_ms = 0;
};

/// Single JSON object, keys in the order config, repaired_count,
/// fallback_count, prefilter_warnings, elapsed_ms.
std::string to_json(const DenoiseReport& report);

double stencil_similarity(double d2, double sigma);

/// Natural log of the chosen kernel's similarity.
double log_similarity(double d2, double sigma, SimilarityKernel kernel);

/// s_i / sum(s). Throws std::invalid_argument on an empty list or a
/// non-positive entry.
std::vector<double> stencil_weights(std::span<const double> similarities);

/// Normalized weights computed from log-similarities shifted by their
/// maximum, so large stencil distances never underflow to an all-zero sum.
std::vector<double> regression_weights(std::span<const double> stencil_d2, double sigma, SimilarityKernel kernel);

struct Restoration {
    double value = 0.0;
    bool fallback = false;
    std::vector<ScoredCandidate> survivors;
    std::vector<double> weights;
};

/// Shared per-image state for repairing flagged pixels. Reads only the
/// original noisy image, so repairs are independent of each other.
class ContourRepairer {
public:
    ContourRepairer(const Image& noisy, const NoiseMask& mask, const Image& prefiltered, const StencilMap& smap,
                    const FilterConfig& cfg);

    Restoration restore(int x, int y) const;

private:
    const Image& noisy_;
    const NoiseMask& mask_;
    const Image& prefiltered_;
    const StencilMap& smap_;
    FilterConfig cfg_;
    PatchSearch search_;
};

/// Convenience wrapper that prefilters `img` itself for the fallback value.
Restoration restore_pixel(const Image& img, const NoiseMask& mask, const StencilMap& smap, const PatchRef& target,
                          const FilterConfig& cfg);

struct DenoiseResult {
    Image image;
    DenoiseReport report;
};

/// Detect, prefilter, build the stencil map, then repair every flagged
/// pixel. Unflagged pixels are copied unchanged.
DenoiseResult denoise(const Image& img, const FilterConfig& cfg);

}  // namespace spd
