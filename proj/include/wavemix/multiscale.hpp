#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavemix/image.hpp"
#include "wavemix/tld.hpp"
#include "wavemix/wavelets.hpp"

namespace wavemix {

/// Pluggable single-scale denoiser. Implementations must be pure (no state
/// carried between calls) and must preserve image dimensions.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual Image denoise(const Image& img, double sigma) const = 0;
  virtual std::string name() const = 0;
};

class TldDenoiser final : public Denoiser {
 public:
  explicit TldDenoiser(TldConfig cfg = {}) : cfg_(std::move(cfg)) {}
  Image denoise(const Image& img, double sigma) const override {
    return tld_denoise(img, sigma, cfg_);
  }
  std::string name() const override { return "tld"; }
  const TldConfig& config() const { return cfg_; }

 private:
  TldConfig cfg_;
};

class IdentityDenoiser final : public Denoiser {
 public:
  Image denoise(const Image& img, double) const override { return img; }
  std::string name() const override { return "identity"; }
};

/// Wrapper that counts calls and records the size of every input it sees.
/// Used to account for where a composition spends denoiser work.
class CountingDenoiser final : public Denoiser {
 public:
  explicit CountingDenoiser(const Denoiser& inner) : inner_(inner) {}
  Image denoise(const Image& img, double sigma) const override {
    ++calls_;
    dims_.emplace_back(img.width, img.height);
    return inner_.denoise(img, sigma);
  }
  std::string name() const override { return inner_.name() + "+count"; }
  int calls() const { return calls_; }
  const std::vector<std::pair<int, int>>& seen_dims() const { return dims_; }
  void reset() {
    calls_ = 0;
    dims_.clear();
  }

 private:
  const Denoiser& inner_;
  mutable int calls_ = 0;
  mutable std::vector<std::pair<int, int>> dims_;
};

struct MsConfig {
  int J = 1;  // denoising-stage scales
  int K = 1;  // mixing-stage scales
  WaveletKind denoise_bank = WaveletKind::Dwt;   // transform used for subband denoising
  WaveletKind mix_bank = WaveletKind::Iuwt;      // transform used for subband mixing
  std::function<double(double)> sigma_subband_rule;  // image sigma -> subband sigma; null = identity
  bool double_denoise = false;  // re-denoise already mixed pyramid levels (ablation)
};

namespace ms_detail {

inline SubbandSet wt_forward(const Image& img, int scales, WaveletKind kind) {
  return kind == WaveletKind::Dwt ? dwt_forward(img, scales) : iuwt_forward(img, scales);
}

inline Image wt_inverse(const SubbandSet& sb) {
  return sb.kind == WaveletKind::Dwt ? dwt_inverse(sb, sb.scales)
                                     : iuwt_inverse(sb, sb.scales);
}

inline double subband_sigma(const MsConfig& cfg, double sigma) {
  return cfg.sigma_subband_rule ? cfg.sigma_subband_rule(sigma) : sigma;
}

inline Image checked_denoise(const Denoiser& d, const Image& img, double sigma) {
  Image out = d.denoise(img, sigma);
  if (!out.same_dims(img))
    throw std::logic_error("denoiser changed image dimensions");
  out.peak = img.peak;
  return out;
}

}  // namespace ms_detail

/// Denoises every subband of a J-scale decomposition and reconstructs.
inline Image mtld(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  if (cfg.J < 1) throw std::invalid_argument("mtld: J must be >= 1");
  SubbandSet sb = ms_detail::wt_forward(img, cfg.J, cfg.denoise_bank);
  const double sig_s = ms_detail::subband_sigma(cfg, sigma);
  sb.approx = ms_detail::checked_denoise(d, sb.approx, sig_s);
  for (Image& det : sb.details) det = ms_detail::checked_denoise(d, det, sig_s);
  Image out = ms_detail::wt_inverse(sb);
  out.peak = img.peak;
  return out;
}

/// Single mixing pass: approximate subband from the multiscale result,
/// detail subbands from the single-scale result.
inline Image mmtld1(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  if (cfg.K < 1) throw std::invalid_argument("mmtld1: K must be >= 1");
  const Image xs = ms_detail::checked_denoise(d, img, sigma);
  const Image xm = mtld(img, sigma, cfg, d);
  const SubbandSet ss = ms_detail::wt_forward(xs, cfg.K, cfg.mix_bank);
  const SubbandSet sm = ms_detail::wt_forward(xm, cfg.K, cfg.mix_bank);
  Image out = ms_detail::wt_inverse(mix_subbands(sm, ss));
  out.peak = img.peak;
  return out;
}

/// Mixing over all scales k = K..1; reduces to mmtld1 when K = 1.
inline Image mmtld2(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  if (cfg.K < 1) throw std::invalid_argument("mmtld2: K must be >= 1");
  const Image xs = ms_detail::checked_denoise(d, img, sigma);
  const Image xm = mtld(img, sigma, cfg, d);
  Image temp = xs;
  for (int k = cfg.K; k >= 1; --k) {
    const SubbandSet ss = ms_detail::wt_forward(temp, k, cfg.mix_bank);
    const SubbandSet sm = ms_detail::wt_forward(xm, k, cfg.mix_bank);
    temp = ms_detail::wt_inverse(mix_subbands(sm, ss));
  }
  temp.peak = img.peak;
  return temp;
}

inline Image mmtld(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  return mmtld2(img, sigma, cfg, d);
}

/// Detail subbands come from the decomposed single-scale result; only the
/// coarsest approximate subband is denoised directly.
inline Image fmmtld1(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  if (cfg.J < 1) throw std::invalid_argument("fmmtld1: J must be >= 1");
  const double sig_s = ms_detail::subband_sigma(cfg, sigma);
  const Image xs = ms_detail::checked_denoise(d, img, sigma);
  const SubbandSet ss = ms_detail::wt_forward(xs, cfg.J, cfg.denoise_bank);
  const SubbandSet sn = ms_detail::wt_forward(img, cfg.J, cfg.denoise_bank);
  const Image approx_hat = ms_detail::checked_denoise(d, sn.approx, sig_s);
  Image out = ms_detail::wt_inverse(replace_approx(ss, approx_hat));
  out.peak = img.peak;
  return out;
}

/// Pyramid form: only low-pass planes are ever denoised. Each level is
/// denoised once; the mixed reconstruction of level s serves as the coarse
/// operand of level s-1. With double_denoise set, mixed levels are run
/// through the denoiser again (the literal per-level recursion).
/// Equivalent to fmmtld1 when J = 1.
inline Image fmmtld2(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  if (cfg.J < 1) throw std::invalid_argument("fmmtld2: J must be >= 1");
  const double sig_s = ms_detail::subband_sigma(cfg, sigma);
  std::vector<Image> pyr;
  pyr.reserve(static_cast<std::size_t>(cfg.J) + 1);
  pyr.push_back(img);
  for (int s = 1; s <= cfg.J; ++s) {
    SubbandSet sb = ms_detail::wt_forward(pyr.back(), 1, cfg.denoise_bank);
    pyr.push_back(std::move(sb.approx));
  }
  Image coarse = ms_detail::checked_denoise(d, pyr[static_cast<std::size_t>(cfg.J)], sig_s);
  for (int s = cfg.J; s >= 1; --s) {
    const Image& fine_raw = pyr[static_cast<std::size_t>(s - 1)];
    const Image fine = ms_detail::checked_denoise(d, fine_raw, s == 1 ? sigma : sig_s);
    if (cfg.double_denoise && s < cfg.J) coarse = ms_detail::checked_denoise(d, coarse, sig_s);
    SubbandSet sf = ms_detail::wt_forward(fine, 1, cfg.denoise_bank);
    coarse = ms_detail::wt_inverse(replace_approx(sf, coarse));
  }
  coarse.peak = img.peak;
  return coarse;
}

inline Image fmmtld(const Image& img, double sigma, const MsConfig& cfg, const Denoiser& d) {
  return fmmtld2(img, sigma, cfg, d);
}

}  // namespace wavemix
