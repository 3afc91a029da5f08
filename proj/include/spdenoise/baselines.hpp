#pragma once

#include <optional>
#include <string>

#include "spdenoise/image.hpp"

namespace spd {

/// k x k median with clamped borders. k must be odd and >= 3.
Image median_filter(const Image& img, int k);

/// Two-stage adaptive median filter. The window grows from 3x3 until its
/// median lies strictly between the window min and max; the center is kept
/// when it is itself strictly between them, otherwise the median is
/// written. At max_window the median is written.
Image adaptive_median_filter(const Image& img, int max_window = 11);

double mse(const Image& a, const Image& b);

/// PSNR in dB; empty for identical images (infinite).
struct Psnr {
    std::optional<double> db;

    bool infinite() const { return !db.has_value(); }
    /// "inf" or the value with `decimals` fractional digits.
    std::string str(int decimals = 4) const;
};

Psnr psnr(const Image& reference, const Image& test);

}  // namespace spd
