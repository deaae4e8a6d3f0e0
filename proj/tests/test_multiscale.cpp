#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "wavemix/metrics.hpp"
#include "wavemix/multiscale.hpp"
#include "wavemix/noise.hpp"

#include "support/oracles.hpp"

using namespace wavemix;

namespace {

// fast TLD settings for composition-level tests
TldConfig small_tld() {
  TldConfig cfg;
  cfg.p = 5;
  cfg.iters = 2;
  return cfg;
}

// records the sigma passed to every call
class SigmaProbe final : public Denoiser {
 public:
  Image denoise(const Image& img, double sigma) const override {
    sigmas_.push_back(sigma);
    return img;
  }
  std::string name() const override { return "probe"; }
  const std::vector<double>& sigmas() const { return sigmas_; }

 private:
  mutable std::vector<double> sigmas_;
};

class DimBreaker final : public Denoiser {
 public:
  Image denoise(const Image& img, double) const override {
    return Image(img.width + 1, img.height);
  }
  std::string name() const override { return "broken"; }
};

}  // namespace

TEST_CASE("identity denoiser is a fixpoint of every composition") {
  const IdentityDenoiser id;
  const Image even = oracles::random_image(64, 48, 55);
  const Image odd = oracles::random_image(41, 37, 56);
  for (const Image* img : {&even, &odd}) {
    for (int s = 1; s <= 3; ++s) {
      MsConfig cfg;
      cfg.J = s;
      cfg.K = s;
      INFO("scales " << s << " size " << img->width << "x" << img->height);
      CHECK(oracles::rel_maxnorm_diff(*img, mtld(*img, 20.0, cfg, id)) < 1e-8);
      CHECK(oracles::rel_maxnorm_diff(*img, mmtld1(*img, 20.0, cfg, id)) < 1e-8);
      CHECK(oracles::rel_maxnorm_diff(*img, mmtld2(*img, 20.0, cfg, id)) < 1e-8);
      CHECK(oracles::rel_maxnorm_diff(*img, fmmtld1(*img, 20.0, cfg, id)) < 1e-8);
      CHECK(oracles::rel_maxnorm_diff(*img, fmmtld2(*img, 20.0, cfg, id)) < 1e-8);
    }
  }
}

TEST_CASE("mmtld2 with K = 1 equals mmtld1 bit for bit") {
  const TldDenoiser d(small_tld());
  for (int trial = 0; trial < 3; ++trial) {
    const Image noisy = add_gaussian_noise(
        oracles::textured_image(36 + 4 * trial, 30, trial), {15.0, 100u + trial});
    MsConfig cfg;  // K = 1
    const Image a = mmtld1(noisy, 15.0, cfg, d);
    const Image b = mmtld2(noisy, 15.0, cfg, d);
    CHECK(a.data == b.data);
  }
}

TEST_CASE("fmmtld2 with J = 1 equals fmmtld1 bit for bit") {
  const TldDenoiser d(small_tld());
  for (int trial = 0; trial < 3; ++trial) {
    const Image noisy = add_gaussian_noise(
        oracles::textured_image(34, 28 + 4 * trial, trial + 2), {15.0, 200u + trial});
    MsConfig cfg;  // J = 1
    const Image a = fmmtld1(noisy, 15.0, cfg, d);
    const Image b = fmmtld2(noisy, 15.0, cfg, d);
    CHECK(a.data == b.data);
  }
}

TEST_CASE("mmtld mixes the advertised subbands (K = 1)") {
  const TldDenoiser d(small_tld());
  const Image noisy = add_gaussian_noise(oracles::textured_image(40, 36, 1), {20.0, 9});
  MsConfig cfg;
  const Image xs = d.denoise(noisy, 20.0);
  const Image xm = mtld(noisy, 20.0, cfg, d);
  const Image out = mmtld(noisy, 20.0, cfg, d);
  // reconstruct the mix from the two branch outputs
  const SubbandSet ss = iuwt_forward(xs, 1);
  const SubbandSet sm = iuwt_forward(xm, 1);
  const Image expect = iuwt_inverse(mix_subbands(sm, ss), 1);
  CHECK(oracles::rel_maxnorm_diff(expect, out) < 1e-9);
}

TEST_CASE("denoiser call counts per composition") {
  const IdentityDenoiser id;
  const Image img = oracles::random_image(64, 64, 3);
  for (int J = 1; J <= 3; ++J) {
    MsConfig cfg;
    cfg.J = J;
    cfg.K = J;
    {
      CountingDenoiser counter(id);
      mtld(img, 10.0, cfg, counter);
      CHECK(counter.calls() == 3 * J + 1);
    }
    {
      CountingDenoiser counter(id);
      fmmtld2(img, 10.0, cfg, counter);
      CHECK(counter.calls() == J + 1);  // each pyramid level exactly once
      CHECK(counter.calls() <= 2 * J);
      // every input the denoiser saw is a pyramid level, never a detail plane
      std::vector<std::pair<int, int>> level_dims;
      Image cur = img;
      level_dims.emplace_back(cur.width, cur.height);
      for (int s = 1; s <= J; ++s) {
        cur = dwt_forward(cur, 1).approx;
        level_dims.emplace_back(cur.width, cur.height);
      }
      for (auto dims : counter.seen_dims())
        CHECK(std::find(level_dims.begin(), level_dims.end(), dims) != level_dims.end());
    }
    {
      CountingDenoiser counter(id);
      MsConfig literal = cfg;
      literal.double_denoise = true;
      fmmtld2(img, 10.0, literal, counter);
      CHECK(counter.calls() == 2 * J);
    }
  }
}

TEST_CASE("constant images are fixed points of all compositions under TLD") {
  const TldDenoiser d(small_tld());
  const Image img(37, 45, 88.0);
  MsConfig cfg;
  for (const Image& out : {mtld(img, 20.0, cfg, d), mmtld(img, 20.0, cfg, d),
                           fmmtld(img, 20.0, cfg, d)}) {
    for (double v : out.data) CHECK(v == Catch::Approx(88.0).margin(1e-6));
  }
}

TEST_CASE("subband sigma rule is applied to subband calls only") {
  SigmaProbe probe;
  const Image img = oracles::random_image(32, 32, 4);
  MsConfig cfg;
  cfg.J = 1;
  cfg.sigma_subband_rule = [](double s) { return 0.5 * s; };
  mtld(img, 20.0, cfg, probe);
  REQUIRE(probe.sigmas().size() == 4);
  for (double s : probe.sigmas()) CHECK(s == Catch::Approx(10.0));

  SigmaProbe probe2;
  mmtld1(img, 20.0, cfg, probe2);
  // image-level call keeps the image sigma, subband calls get the mapped one
  REQUIRE(probe2.sigmas().size() == 5);
  CHECK(probe2.sigmas()[0] == Catch::Approx(20.0));
  for (std::size_t i = 1; i < probe2.sigmas().size(); ++i)
    CHECK(probe2.sigmas()[i] == Catch::Approx(10.0));
}

TEST_CASE("compositions reject invalid scale counts and broken denoisers") {
  const IdentityDenoiser id;
  const Image img = oracles::random_image(32, 32, 5);
  MsConfig bad;
  bad.J = 0;
  CHECK_THROWS_AS(mtld(img, 10.0, bad, id), std::invalid_argument);
  MsConfig badk;
  badk.K = 0;
  CHECK_THROWS_AS(mmtld2(img, 10.0, badk, id), std::invalid_argument);
  const DimBreaker broken;
  MsConfig cfg;
  CHECK_THROWS_AS(mtld(img, 10.0, cfg, broken), std::logic_error);
}

TEST_CASE("multiscale denoising beats plain TLD on fine-grained texture") {
  // fine checkered texture at strong noise: the regime where mixing helps
  const Image clean = oracles::textured_image(72, 72, 1);
  const Image noisy = add_gaussian_noise(clean, {50.0, 77});
  const TldDenoiser d(small_tld());
  MsConfig cfg;
  const double p_tld = psnr(clean, d.denoise(noisy, 50.0));
  const double p_mm = psnr(clean, mmtld(noisy, 50.0, cfg, d));
  CHECK(p_mm > p_tld - 0.5);  // mixing must not collapse quality
}
