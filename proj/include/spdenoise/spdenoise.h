/*
 * spdenoise C API
 *
 * Salt-and-pepper impulse removal with a patch-based contour prior, plus
 * the median / adaptive median baselines and PSNR metrics.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy / *_free function. Every fallible call returns an
 * spd_status; on failure spd_last_error() returns a thread-local message
 * describing the most recent error on the calling thread.
 */
#ifndef SPDENOISE_H
#define SPDENOISE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPDENOISE_BUILDING)
#    define SPD_API __declspec(dllexport)
#  else
#    define SPD_API __declspec(dllimport)
#  endif
#else
#  define SPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spd_status {
    SPD_OK = 0,
    SPD_ERR_INVALID_ARGUMENT = 1, /* bad pointer, dimension or parameter */
    SPD_ERR_CONFIG = 2,           /* configuration rejected (e.g. sigma <= 1) */
    SPD_ERR_IO = 3,               /* file could not be opened, read or written */
    SPD_ERR_UNSUPPORTED_FORMAT = 4,
    SPD_ERR_MALFORMED_HEADER = 5,
    SPD_ERR_TRUNCATED = 6,
    SPD_ERR_UNSUPPORTED_DEPTH = 7,
    SPD_ERR_DIMENSION_MISMATCH = 8,
    SPD_ERR_INTERNAL = 99
} spd_status;

typedef enum spd_format { SPD_FORMAT_PGM = 0, SPD_FORMAT_PNG = 1 } spd_format;

typedef enum spd_kernel { SPD_KERNEL_LITERAL = 0, SPD_KERNEL_SIMPLIFIED = 1 } spd_kernel;

typedef enum spd_metric { SPD_METRIC_INTENSITY = 0, SPD_METRIC_STENCIL = 1 } spd_metric;

typedef enum spd_repair_order { SPD_ORDER_ROW_MAJOR = 0, SPD_ORDER_REVERSE = 1 } spd_repair_order;

/* search_window value selecting the whole image. */
#define SPD_SEARCH_FULL 0

typedef struct spd_image spd_image;
typedef struct spd_report spd_report;

typedef struct spd_noise_config {
    double density;
    double salt_ratio;
    int delta;
    uint64_t seed;
} spd_noise_config;

typedef struct spd_denoise_config {
    double sigma;
    int patch_size;
    int mm;
    int search_window;
    int delta;
    spd_kernel kernel;
    spd_metric metric;
    spd_repair_order order;
    unsigned threads; /* 0 = hardware concurrency */
} spd_denoise_config;

SPD_API const char* spd_version(void);
SPD_API const char* spd_last_error(void);
SPD_API const char* spd_status_name(spd_status status);
SPD_API int spd_png_supported(void);

/* Fills defaults: density 0, salt_ratio 0.5, delta 0, seed 0. */
SPD_API void spd_noise_config_init(spd_noise_config* cfg);
/* Fills defaults: sigma e, patch 7, mm 16, window 39, delta 0, literal kernel,
 * intensity metric, row-major order, 1 thread. */
SPD_API void spd_denoise_config_init(spd_denoise_config* cfg);
SPD_API spd_status spd_denoise_config_validate(const spd_denoise_config* cfg);

/* ---- images ---- */
SPD_API spd_status spd_image_create(int width, int height, const double* pixels, spd_image** out);
SPD_API spd_status spd_image_load(const char* path, spd_image** out);
SPD_API spd_status spd_image_decode(const uint8_t* bytes, size_t size, spd_image** out);
SPD_API spd_status spd_image_save(const spd_image* img, const char* path, spd_format format);
/* Encoded bytes are released with spd_buffer_free. */
SPD_API spd_status spd_image_encode(const spd_image* img, spd_format format, uint8_t** bytes, size_t* size);
SPD_API void spd_image_destroy(spd_image* img);
SPD_API int spd_image_width(const spd_image* img);
SPD_API int spd_image_height(const spd_image* img);
/* Borrowed pointer to width*height row-major intensities, valid until destroy. */
SPD_API const double* spd_image_pixels(const spd_image* img);
SPD_API void spd_buffer_free(uint8_t* bytes);

/* ---- noise ---- */
/* corrupted_count may be NULL. */
SPD_API spd_status spd_add_noise(const spd_image* img, const spd_noise_config* cfg, spd_image** out,
                                 size_t* corrupted_count);
SPD_API spd_status spd_detect_noise_count(const spd_image* img, int delta, size_t* count);

/* ---- contour-prior denoiser ---- */
/* report may be NULL. */
SPD_API spd_status spd_denoise(const spd_image* img, const spd_denoise_config* cfg, spd_image** out,
                               spd_report** report);
SPD_API size_t spd_report_repaired_count(const spd_report* report);
SPD_API size_t spd_report_fallback_count(const spd_report* report);
SPD_API size_t spd_report_prefilter_warnings(const spd_report* report);
SPD_API int64_t spd_report_elapsed_ms(const spd_report* report);
/* JSON text is released with spd_string_free. */
SPD_API spd_status spd_report_json(const spd_report* report, char** json);
SPD_API void spd_report_destroy(spd_report* report);
SPD_API void spd_string_free(char* str);

/* Stencil-map debug view: template id * 10 per pixel. */
SPD_API spd_status spd_stencil_map_image(const spd_image* img, int delta, spd_image** out);

/* ---- baselines and metrics ---- */
SPD_API spd_status spd_median_filter(const spd_image* img, int k, spd_image** out);
SPD_API spd_status spd_adaptive_median_filter(const spd_image* img, int max_window, spd_image** out);
SPD_API spd_status spd_mse(const spd_image* a, const spd_image* b, double* out);
/* *is_infinite is set to 1 for identical images, in which case *db is untouched. */
SPD_API spd_status spd_psnr(const spd_image* reference, const spd_image* test, double* db, int* is_infinite);

#ifdef __cplusplus
}
#endif

#endif /* SPDENOISE_H */
