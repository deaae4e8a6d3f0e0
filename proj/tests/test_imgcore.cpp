#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "wavemix/image.hpp"
#include "wavemix/io.hpp"
#include "wavemix/metrics.hpp"
#include "wavemix/noise.hpp"
#include "wavemix/patches.hpp"
#include "wavemix/rng.hpp"

#include "support/oracles.hpp"

using namespace wavemix;

namespace {
std::string tmp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "wavemix_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}
}  // namespace

TEST_CASE("Image constructor validates dimensions") {
  CHECK_THROWS_AS(Image(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Image(4, -1), std::invalid_argument);
  const Image img(3, 2, 5.0);
  CHECK(img.size() == 6);
  CHECK(img.at(1, 2) == 5.0);
}

TEST_CASE("extract_patches: constant 3x3, p=2") {
  Image img(3, 3, 7.0);
  const PatchMatrix pm = extract_patches(img, 2);
  REQUIRE(pm.count == 4);
  CHECK(pm.n == 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(pm.means[j] == Catch::Approx(7.0));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(pm.columns(i, j)) < 1e-12);
  }
}

TEST_CASE("extract_patches: column-major vectorization of a 2x2 patch") {
  // [[1,2],[3,4]] row-major
  Image img(2, 2);
  img.at(0, 0) = 1;
  img.at(0, 1) = 2;
  img.at(1, 0) = 3;
  img.at(1, 1) = 4;
  const PatchMatrix pm = extract_patches(img, 2);
  REQUIRE(pm.count == 1);
  CHECK(pm.means[0] == Catch::Approx(2.5));
  const double expect[4] = {1, 3, 2, 4};  // down column 0, then column 1
  for (int i = 0; i < 4; ++i) CHECK(pm.columns(i, 0) == Catch::Approx(expect[i] - 2.5));
  // column mean removed
  CHECK(std::abs(pm.columns.col(0).sum()) < 1e-9);
}

TEST_CASE("extract_patches rejects oversized patches") {
  Image img(3, 3, 1.0);
  CHECK_THROWS_AS(extract_patches(img, 4), std::invalid_argument);
}

TEST_CASE("extract_patches: zero-mean columns and unique in-bounds origins") {
  const Image img = oracles::random_image(13, 9, 1234);
  const PatchMatrix pm = extract_patches(img, 4);
  CHECK(pm.count == (13 - 3) * (9 - 3));
  std::set<std::pair<int, int>> seen;
  for (auto [r, c] : pm.origins) {
    CHECK(r >= 0);
    CHECK(c >= 0);
    CHECK(r <= img.height - 4);
    CHECK(c <= img.width - 4);
    CHECK(seen.insert({r, c}).second);
  }
  for (Eigen::Index j = 0; j < pm.columns.cols(); ++j)
    CHECK(std::abs(pm.columns.col(j).mean()) < 1e-9);
}

TEST_CASE("aggregate_patches round-trips extraction") {
  for (int p : {2, 3, 5}) {
    const Image img = oracles::random_image(17, 12, 77 + p);
    const PatchMatrix pm = extract_patches(img, p);
    const Image back = aggregate_patches(pm, pm.columns, img.width, img.height);
    CHECK(oracles::rel_maxnorm_diff(img, back) < 1e-10);
  }
}

TEST_CASE("aggregate_patches: single patch covering the whole image") {
  const Image img = oracles::random_image(4, 4, 5);
  const PatchMatrix pm = extract_patches(img, 4);
  REQUIRE(pm.count == 1);
  Eigen::MatrixXd denoised = Eigen::MatrixXd::Zero(16, 1);
  const Image out = aggregate_patches(pm, denoised, 4, 4);
  for (double v : out.data) CHECK(v == Catch::Approx(pm.means[0]));
}

TEST_CASE("aggregate_patches: zero columns restore the constant image") {
  Image img(3, 3, 7.0);
  const PatchMatrix pm = extract_patches(img, 2);
  const Image out = aggregate_patches(pm, Eigen::MatrixXd::Zero(4, 4), 3, 3);
  for (double v : out.data) CHECK(v == Catch::Approx(7.0));
}

TEST_CASE("aggregate_patches rejects shape mismatches") {
  const Image img = oracles::random_image(6, 6, 3);
  const PatchMatrix pm = extract_patches(img, 3);
  CHECK_THROWS_AS(aggregate_patches(pm, Eigen::MatrixXd::Zero(9, 2), 6, 6),
                  std::invalid_argument);
}

TEST_CASE("add_gaussian_noise: sigma 0 is the identity") {
  const Image img = oracles::random_image(8, 8, 42);
  const Image out = add_gaussian_noise(img, {0.0, 99});
  CHECK(out.data == img.data);
}

TEST_CASE("add_gaussian_noise is a pure function of (img, spec)") {
  const Image img = oracles::random_image(16, 16, 5);
  const Image a = add_gaussian_noise(img, {25.0, 31});
  const Image b = add_gaussian_noise(img, {25.0, 31});
  CHECK(a.data == b.data);
  const Image c = add_gaussian_noise(img, {25.0, 32});
  CHECK(a.data != c.data);
}

TEST_CASE("add_gaussian_noise: sample statistics at sigma 25") {
  Image zero(512, 512, 0.0);
  const Image noisy = add_gaussian_noise(zero, {25.0, 2024});
  double mean = 0.0;
  for (double v : noisy.data) mean += v;
  mean /= static_cast<double>(noisy.size());
  double var = 0.0;
  for (double v : noisy.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(noisy.size());
  CHECK(std::abs(mean) < 0.3);
  CHECK(std::abs(std::sqrt(var) - 25.0) < 0.3);
  // input untouched
  for (double v : zero.data) REQUIRE(v == 0.0);
}

TEST_CASE("add_gaussian_noise rejects negative sigma") {
  CHECK_THROWS_AS(add_gaussian_noise(Image(2, 2), {-1.0, 0}), std::invalid_argument);
}

TEST_CASE("psnr examples") {
  const Image a = oracles::random_image(9, 9, 8);
  CHECK(std::isinf(psnr(a, a)));

  Image ref(10, 10, 0.0), test(10, 10, 1.0);  // MSE exactly 1
  CHECK(psnr(ref, test) == Catch::Approx(48.1308).margin(1e-4));

  Image black(10, 10, 0.0), white(10, 10, 255.0);
  CHECK(psnr(black, white) == Catch::Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(psnr(Image(3, 3), Image(3, 4)), std::invalid_argument);
}

TEST_CASE("psnr is symmetric in its arguments") {
  const Image a = oracles::random_image(14, 11, 3);
  const Image b = oracles::random_image(14, 11, 4);
  CHECK(psnr(a, b) == Catch::Approx(psnr(b, a)).epsilon(1e-12));
}

TEST_CASE("ssim: identity and constant cases") {
  const Image a = oracles::random_image(16, 16, 6);
  CHECK(ssim(a, a) == Catch::Approx(1.0).margin(1e-12));
  Image c1(16, 16, 128.0), c2(16, 16, 128.0);
  CHECK(ssim(c1, c2) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("ssim matches the scalar reference implementation") {
  const Image ramp = oracles::ramp_image(64, 64);
  const Image noisy = add_gaussian_noise(ramp, {25.0, 17});
  const double v = ssim(ramp, noisy);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(v == Catch::Approx(oracles::ssim_reference(ramp, noisy)).margin(1e-6));
}

TEST_CASE("ssim rejects bad inputs") {
  CHECK_THROWS_AS(ssim(Image(16, 16), Image(16, 17)), std::invalid_argument);
  CHECK_THROWS_AS(ssim(Image(8, 8), Image(8, 8)), std::invalid_argument);  // below window
}

TEST_CASE("pgm round-trip preserves 8-bit content") {
  Image img(7, 5);
  for (std::size_t i = 0; i < img.size(); ++i) img.data[i] = static_cast<double>((i * 37) % 256);
  const auto path = tmp_path("roundtrip.pgm");
  write_pgm(img, path);
  const Image back = read_pgm(path);
  REQUIRE(back.same_dims(img));
  CHECK(back.data == img.data);
}

TEST_CASE("pgm write clamps and rounds to [0,255]") {
  Image img(2, 1);
  img.data = {-12.4, 300.9};
  const auto path = tmp_path("clamp.pgm");
  write_pgm(img, path);
  const Image back = read_pgm(path);
  CHECK(back.data[0] == 0.0);
  CHECK(back.data[1] == 255.0);
}

TEST_CASE("pgm reader rejects junk") {
  const auto path = tmp_path("junk.pgm");
  std::ofstream(path) << "P6 2 2 255 junkjunk";
  CHECK_THROWS(read_pgm(path));
  CHECK_THROWS(read_pgm(tmp_path("missing_file.pgm")));
}

TEST_CASE("png round-trip preserves 8-bit grayscale content") {
  Image img(9, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img.data[i] = static_cast<double>((i * 11) % 256);
  const auto path = tmp_path("roundtrip.png");
  write_png(img, path);
  const Image back = read_png(path);
  REQUIRE(back.same_dims(img));
  CHECK(back.data == img.data);
}

TEST_CASE("raw f64 round-trip is lossless") {
  const Image img = oracles::random_image(6, 3, 1);
  const auto path = tmp_path("plane.f64");
  write_raw_f64(img, path);
  const Image back = read_raw_f64(path);
  REQUIRE(back.same_dims(img));
  CHECK(back.data == img.data);
}

TEST_CASE("seed derivation is frozen") {
  // values pinned so an accidental change of the hash recipe fails loudly
  CHECK(derive_seed(1, "lena", 25.0) == 0x606092ade88274efull);
  CHECK(derive_seed(20259, "barbara", 15.0) == 0xac92cf98a19bf7b2ull);
}
