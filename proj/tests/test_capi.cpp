// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "spdenoise/spdenoise.h"

namespace {

spd_image* make(int w, int h, double v) {
    std::vector<double> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), v);
    spd_image* img = nullptr;
    REQUIRE(spd_image_create(w, h, px.data(), &img) == SPD_OK);
    return img;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(spd_version()).size() > 0);
    CHECK(std::string(spd_status_name(SPD_OK)) == "ok");
    CHECK(std::string(spd_status_name(SPD_ERR_DIMENSION_MISMATCH)).size() > 0);
}

TEST_CASE("image handles") {
    spd_image* img = make(3, 2, 40.0);
    CHECK(spd_image_width(img) == 3);
    CHECK(spd_image_height(img) == 2);
    CHECK(spd_image_pixels(img)[5] == 40.0);
    spd_image_destroy(img);
    spd_image_destroy(nullptr);

    spd_image* bad = nullptr;
    const double px[1] = {300.0};
    CHECK(spd_image_create(1, 1, px, &bad) == SPD_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(std::strlen(spd_last_error()) > 0);
    CHECK(spd_image_create(0, 1, px, &bad) == SPD_ERR_INVALID_ARGUMENT);
    CHECK(spd_image_create(1, 1, nullptr, &bad) == SPD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("encode and decode") {
    spd_image* img = make(2, 2, 128.0);
    std::uint8_t* bytes = nullptr;
    std::size_t size = 0;
    REQUIRE(spd_image_encode(img, SPD_FORMAT_PGM, &bytes, &size) == SPD_OK);
    CHECK(std::string(reinterpret_cast<char*>(bytes), 11) == "P5\n2 2\n255\n");
    CHECK(size == 15);
    spd_image* back = nullptr;
    REQUIRE(spd_image_decode(bytes, size, &back) == SPD_OK);
    CHECK(spd_image_pixels(back)[3] == 128.0);
    spd_buffer_free(bytes);

    const std::string p6 = "P6\n1 1\n255\n\x01\x02\x03";
    spd_image* none = nullptr;
    CHECK(spd_image_decode(reinterpret_cast<const std::uint8_t*>(p6.data()), p6.size(), &none) ==
          SPD_ERR_UNSUPPORTED_FORMAT);
    const std::string cut = "P5\n2 2\n255\n\x01";
    CHECK(spd_image_decode(reinterpret_cast<const std::uint8_t*>(cut.data()), cut.size(), &none) == SPD_ERR_TRUNCATED);
    const std::string deep = "P5\n1 1\n65535\n\x01\x01";
    CHECK(spd_image_decode(reinterpret_cast<const std::uint8_t*>(deep.data()), deep.size(), &none) ==
          SPD_ERR_UNSUPPORTED_DEPTH);
    CHECK(spd_image_load("/nonexistent/dir/file.pgm", &none) == SPD_ERR_IO);
    spd_image_destroy(img);
    spd_image_destroy(back);
}

TEST_CASE("noise, denoise and report") {
    spd_image* clean = make(32, 32, 90.0);
    spd_noise_config nc;
    spd_noise_config_init(&nc);
    nc.density = 0.2;
    nc.seed = 3;
    spd_image* noisy = nullptr;
    std::size_t corrupted = 0;
    REQUIRE(spd_add_noise(clean, &nc, &noisy, &corrupted) == SPD_OK);
    std::size_t detected = 0;
    REQUIRE(spd_detect_noise_count(noisy, 0, &detected) == SPD_OK);
    CHECK(detected == corrupted);

    spd_denoise_config dc;
    spd_denoise_config_init(&dc);
    CHECK(dc.sigma == doctest::Approx(2.718281828459045));
    CHECK(dc.patch_size == 7);
    CHECK(dc.mm == 16);
    CHECK(dc.search_window == 39);
    dc.patch_size = 5;
    spd_image* out = nullptr;
    spd_report* rep = nullptr;
    REQUIRE(spd_denoise(noisy, &dc, &out, &rep) == SPD_OK);
    CHECK(spd_report_repaired_count(rep) == corrupted);
    char* json = nullptr;
    REQUIRE(spd_report_json(rep, &json) == SPD_OK);
    CHECK(std::string(json).rfind("{\"config\":", 0) == 0);
    spd_string_free(json);

    int inf = 0;
    double db = 0.0;
    REQUIRE(spd_psnr(clean, out, &db, &inf) == SPD_OK);
    CHECK(inf == 1);

    dc.sigma = 1.0;
    spd_image* rejected = nullptr;
    CHECK(spd_denoise(noisy, &dc, &rejected, nullptr) == SPD_ERR_CONFIG);
    CHECK(rejected == nullptr);
    CHECK(std::string(spd_last_error()).find("sigma") != std::string::npos);
    CHECK(spd_denoise_config_validate(&dc) == SPD_ERR_CONFIG);

    spd_report_destroy(rep);
    spd_image_destroy(out);
    spd_image_destroy(noisy);
    spd_image_destroy(clean);
}

TEST_CASE("baselines and metrics") {
    spd_image* a = make(4, 4, 100.0);
    spd_image* b = make(4, 4, 116.0);
    spd_image* c = make(5, 4, 100.0);
    double m = 0.0, db = 0.0;
    int inf = 0;
    REQUIRE(spd_mse(a, b, &m) == SPD_OK);
    CHECK(m == 256.0);
    REQUIRE(spd_psnr(a, b, &db, &inf) == SPD_OK);
    CHECK(inf == 0);
    CHECK(std::abs(db - 24.0486) <= 1e-3);
    CHECK(spd_mse(a, c, &m) == SPD_ERR_DIMENSION_MISMATCH);
    CHECK(spd_psnr(a, c, &db, &inf) == SPD_ERR_DIMENSION_MISMATCH);

    spd_image* med = nullptr;
    CHECK(spd_median_filter(a, 4, &med) == SPD_ERR_INVALID_ARGUMENT);
    REQUIRE(spd_median_filter(a, 3, &med) == SPD_OK);
    CHECK(spd_image_pixels(med)[0] == 100.0);
    spd_image* amf = nullptr;
    REQUIRE(spd_adaptive_median_filter(a, 11, &amf) == SPD_OK);
    spd_image* smap = nullptr;
    REQUIRE(spd_stencil_map_image(a, 0, &smap) == SPD_OK);
    CHECK(spd_image_pixels(smap)[0] == 0.0);
    for (auto* p : {a, b, c, med, amf, smap}) spd_image_destroy(p);
}
