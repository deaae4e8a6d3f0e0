#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavemix/filters.hpp"
#include "wavemix/image.hpp"
#include "wavemix/io.hpp"

namespace wavemix {

enum class WaveletKind { Dwt, Iuwt };

/// One J-scale decomposition.
///
/// Dwt: details holds {LH, HL, HH} per scale (finest scale first; first
/// letter = horizontal filter, second = vertical), approx is the coarsest
/// low-pass plane, and level_dims records the pre-pad input size of each
/// level so the inverse can crop. Odd-sized levels are padded per axis by
/// duplicating the last row/column.
///
/// Iuwt: one full-size detail plane per scale (finest first); the input is
/// recovered exactly as approx + sum of details.
struct SubbandSet {
  WaveletKind kind = WaveletKind::Dwt;
  int scales = 0;
  Image approx;
  std::vector<Image> details;
  std::vector<std::pair<int, int>> level_dims;
};

namespace wavelet_detail {

// plane buffer with explicit dims; lighter than Image for intermediates
struct Plane {
  int w = 0, h = 0;
  std::vector<double> v;
  Plane() = default;
  Plane(int w_, int h_) : w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, 0.0) {}
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * w + c]; }
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * w + c]; }
};

inline Plane pad_to_even(const Image& in) {
  const int pw = in.width + (in.width & 1);
  const int ph = in.height + (in.height & 1);
  Plane p(pw, ph);
  for (int r = 0; r < ph; ++r) {
    const int sr = (r < in.height) ? r : in.height - 1;
    for (int c = 0; c < pw; ++c) {
      const int sc = (c < in.width) ? c : in.width - 1;
      p.at(r, c) = in.at(sr, sc);
    }
  }
  return p;
}

// analysis: out[k] = sum_m f[m] * x[(2k+m) mod n]
inline void analyze_periodic(const double* x, int n, const std::vector<double>& f,
                             double* out) {
  const int half = n / 2;
  const int taps = static_cast<int>(f.size());
  for (int k = 0; k < half; ++k) {
    double acc = 0.0;
    const int base = 2 * k;
    for (int m = 0; m < taps; ++m) acc += f[static_cast<std::size_t>(m)] * x[(base + m) % n];
    out[k] = acc;
  }
}

// synthesis (adjoint): x[(2k+m) mod n] += a[k]*lo[m] + d[k]*hi[m]
inline void synthesize_periodic(const double* a, const double* d, int n,
                                const std::vector<double>& lo, const std::vector<double>& hi,
                                double* x) {
  const int half = n / 2;
  const int taps = static_cast<int>(lo.size());
  for (int i = 0; i < n; ++i) x[i] = 0.0;
  for (int k = 0; k < half; ++k) {
    const int base = 2 * k;
    const double av = a[k], dv = d[k];
    for (int m = 0; m < taps; ++m)
      x[(base + m) % n] += av * lo[static_cast<std::size_t>(m)] + dv * hi[static_cast<std::size_t>(m)];
  }
}

struct DwtLevel {
  Image ll, lh, hl, hh;
};

inline DwtLevel dwt_level_forward(const Image& in, const FilterBank& fb) {
  const Plane p = pad_to_even(in);
  const int pw = p.w, ph = p.h;
  const int hw = pw / 2, hh2 = ph / 2;
  Plane lo_rows(hw, ph), hi_rows(hw, ph);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < ph; ++r) {
    analyze_periodic(&p.v[static_cast<std::size_t>(r) * pw], pw, fb.analysis_lo,
                     &lo_rows.v[static_cast<std::size_t>(r) * hw]);
    analyze_periodic(&p.v[static_cast<std::size_t>(r) * pw], pw, fb.analysis_hi,
                     &hi_rows.v[static_cast<std::size_t>(r) * hw]);
  }
  DwtLevel out;
  out.ll = Image(hw, hh2);
  out.lh = Image(hw, hh2);
  out.hl = Image(hw, hh2);
  out.hh = Image(hw, hh2);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < hw; ++c) {
    std::vector<double> col(static_cast<std::size_t>(ph)), a(static_cast<std::size_t>(hh2)),
        d(static_cast<std::size_t>(hh2));
    for (int r = 0; r < ph; ++r) col[static_cast<std::size_t>(r)] = lo_rows.at(r, c);
    analyze_periodic(col.data(), ph, fb.analysis_lo, a.data());
    analyze_periodic(col.data(), ph, fb.analysis_hi, d.data());
    for (int r = 0; r < hh2; ++r) {
      out.ll.at(r, c) = a[static_cast<std::size_t>(r)];
      out.lh.at(r, c) = d[static_cast<std::size_t>(r)];
    }
    for (int r = 0; r < ph; ++r) col[static_cast<std::size_t>(r)] = hi_rows.at(r, c);
    analyze_periodic(col.data(), ph, fb.analysis_lo, a.data());
    analyze_periodic(col.data(), ph, fb.analysis_hi, d.data());
    for (int r = 0; r < hh2; ++r) {
      out.hl.at(r, c) = a[static_cast<std::size_t>(r)];
      out.hh.at(r, c) = d[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

inline Image dwt_level_inverse(const DwtLevel& lv, int orig_w, int orig_h,
                               const FilterBank& fb) {
  const int hw = lv.ll.width, hh2 = lv.ll.height;
  const int pw = 2 * hw, ph = 2 * hh2;
  Plane lo_rows(hw, ph), hi_rows(hw, ph);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < hw; ++c) {
    std::vector<double> a(static_cast<std::size_t>(hh2)), d(static_cast<std::size_t>(hh2)),
        col(static_cast<std::size_t>(ph));
    for (int r = 0; r < hh2; ++r) {
      a[static_cast<std::size_t>(r)] = lv.ll.at(r, c);
      d[static_cast<std::size_t>(r)] = lv.lh.at(r, c);
    }
    synthesize_periodic(a.data(), d.data(), ph, fb.synthesis_lo, fb.synthesis_hi, col.data());
    for (int r = 0; r < ph; ++r) lo_rows.at(r, c) = col[static_cast<std::size_t>(r)];
    for (int r = 0; r < hh2; ++r) {
      a[static_cast<std::size_t>(r)] = lv.hl.at(r, c);
      d[static_cast<std::size_t>(r)] = lv.hh.at(r, c);
    }
    synthesize_periodic(a.data(), d.data(), ph, fb.synthesis_lo, fb.synthesis_hi, col.data());
    for (int r = 0; r < ph; ++r) hi_rows.at(r, c) = col[static_cast<std::size_t>(r)];
  }
  Plane full(pw, ph);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < ph; ++r) {
    synthesize_periodic(&lo_rows.v[static_cast<std::size_t>(r) * hw],
                        &hi_rows.v[static_cast<std::size_t>(r) * hw], pw, fb.synthesis_lo,
                        fb.synthesis_hi, &full.v[static_cast<std::size_t>(r) * pw]);
  }
  Image out(orig_w, orig_h);
  for (int r = 0; r < orig_h; ++r)
    for (int c = 0; c < orig_w; ++c) out.at(r, c) = full.at(r, c);
  return out;
}

// separable periodic smoothing with the B3 kernel dilated by `dil`
inline Image b3_smooth(const Image& in, int dil) {
  const auto& k = b3_kernel();
  const int w = in.width, h = in.height;
  Image tmp(w, h), out(w, h);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) {
        const int cc = ((c + t * dil) % w + w) % w;
        acc += k[static_cast<std::size_t>(t + 2)] * in.at(r, cc);
      }
      tmp.at(r, c) = acc;
    }
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) {
        const int rr = ((r + t * dil) % h + h) % h;
        acc += k[static_cast<std::size_t>(t + 2)] * tmp.at(rr, c);
      }
      out.at(r, c) = acc;
    }
  return out;
}

}  // namespace wavelet_detail

/// Separable periodized 2-D DWT, recursing on the approximate subband.
inline SubbandSet dwt_forward(const Image& img, int scales,
                              const FilterBank& fb = meyer_bank()) {
  if (scales < 1) throw std::invalid_argument("dwt_forward: scales must be >= 1");
  require_finite(img, "dwt_forward");
  SubbandSet sb;
  sb.kind = WaveletKind::Dwt;
  sb.scales = scales;
  Image cur = img;
  for (int s = 1; s <= scales; ++s) {
    if (cur.width < 2 || cur.height < 2)
      throw std::invalid_argument("dwt_forward: image too small for requested scales");
    sb.level_dims.emplace_back(cur.width, cur.height);
    auto lv = wavelet_detail::dwt_level_forward(cur, fb);
    lv.lh.peak = lv.hl.peak = lv.hh.peak = lv.ll.peak = img.peak;
    sb.details.push_back(std::move(lv.lh));
    sb.details.push_back(std::move(lv.hl));
    sb.details.push_back(std::move(lv.hh));
    cur = std::move(lv.ll);
  }
  sb.approx = std::move(cur);
  return sb;
}

inline Image dwt_inverse(const SubbandSet& sb, int scales,
                         const FilterBank& fb = meyer_bank()) {
  if (sb.kind != WaveletKind::Dwt)
    throw std::invalid_argument("dwt_inverse: subband set is not a DWT decomposition");
  if (sb.scales != scales || scales < 1)
    throw std::invalid_argument("dwt_inverse: scale count mismatch");
  if (sb.details.size() != static_cast<std::size_t>(3 * scales) ||
      sb.level_dims.size() != static_cast<std::size_t>(scales))
    throw std::invalid_argument("dwt_inverse: malformed subband set");
  Image cur = sb.approx;
  for (int s = scales; s >= 1; --s) {
    const auto [ow, oh] = sb.level_dims[static_cast<std::size_t>(s - 1)];
    const int hw = (ow + (ow & 1)) / 2;
    const int hh2 = (oh + (oh & 1)) / 2;
    wavelet_detail::DwtLevel lv;
    lv.lh = sb.details[static_cast<std::size_t>(3 * (s - 1))];
    lv.hl = sb.details[static_cast<std::size_t>(3 * (s - 1) + 1)];
    lv.hh = sb.details[static_cast<std::size_t>(3 * (s - 1) + 2)];
    if (cur.width != hw || cur.height != hh2 || !cur.same_dims(lv.lh) ||
        !cur.same_dims(lv.hl) || !cur.same_dims(lv.hh))
      throw std::invalid_argument("dwt_inverse: inconsistent subband dimensions");
    lv.ll = std::move(cur);
    cur = wavelet_detail::dwt_level_inverse(lv, ow, oh, fb);
  }
  cur.peak = sb.approx.peak;
  return cur;
}

/// Isotropic undecimated (starlet) transform with the B3-spline kernel,
/// a-trous dilated by 2^j at level j. All planes keep the input size.
inline SubbandSet iuwt_forward(const Image& img, int scales) {
  if (scales < 1) throw std::invalid_argument("iuwt_forward: scales must be >= 1");
  require_finite(img, "iuwt_forward");
  SubbandSet sb;
  sb.kind = WaveletKind::Iuwt;
  sb.scales = scales;
  Image a = img;
  int dil = 1;
  for (int s = 1; s <= scales; ++s) {
    Image next = wavelet_detail::b3_smooth(a, dil);
    next.peak = img.peak;
    Image d(a.width, a.height);
    d.peak = img.peak;
    for (std::size_t i = 0; i < d.size(); ++i) d.data[i] = a.data[i] - next.data[i];
    sb.details.push_back(std::move(d));
    a = std::move(next);
    dil *= 2;
  }
  sb.approx = std::move(a);
  return sb;
}

/// Additive reconstruction: approx + sum of detail planes (exact).
inline Image iuwt_inverse(const SubbandSet& sb, int scales) {
  if (sb.kind != WaveletKind::Iuwt)
    throw std::invalid_argument("iuwt_inverse: subband set is not an IUWT decomposition");
  if (sb.scales != scales || scales < 1)
    throw std::invalid_argument("iuwt_inverse: scale count mismatch");
  if (sb.details.size() != static_cast<std::size_t>(scales))
    throw std::invalid_argument("iuwt_inverse: malformed subband set");
  Image out = sb.approx;
  for (const Image& d : sb.details) {
    require_same_dims(out, d, "iuwt_inverse");
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += d.data[i];
  }
  return out;
}

/// New set with the approximate subband of `approx_source` and the detail
/// subbands of `detail_source`. Inputs are left untouched.
inline SubbandSet mix_subbands(const SubbandSet& approx_source,
                               const SubbandSet& detail_source) {
  if (approx_source.kind != detail_source.kind)
    throw std::invalid_argument("mix_subbands: decomposition kind mismatch");
  if (approx_source.scales != detail_source.scales)
    throw std::invalid_argument("mix_subbands: scale count mismatch");
  if (!approx_source.approx.same_dims(detail_source.approx) ||
      approx_source.details.size() != detail_source.details.size() ||
      approx_source.level_dims != detail_source.level_dims)
    throw std::invalid_argument("mix_subbands: subband dimensions mismatch");
  for (std::size_t i = 0; i < approx_source.details.size(); ++i)
    require_same_dims(approx_source.details[i], detail_source.details[i], "mix_subbands");
  SubbandSet out;
  out.kind = approx_source.kind;
  out.scales = approx_source.scales;
  out.approx = approx_source.approx;
  out.details = detail_source.details;
  out.level_dims = detail_source.level_dims;
  return out;
}

/// Same-kind set with the approximate plane swapped for `approx`.
inline SubbandSet replace_approx(const SubbandSet& sb, const Image& approx) {
  require_same_dims(sb.approx, approx, "replace_approx");
  SubbandSet out = sb;
  out.approx = approx;
  out.approx.peak = sb.approx.peak;
  return out;
}

/// Debug dump, one raw-f64 file per plane:
/// `<tag>_s<scale>_<LL|LH|HL|HH|D>.f64` under `dir`.
inline void dump_subbands(const SubbandSet& sb, const std::string& dir,
                          const std::string& tag) {
  const std::string base = dir + "/" + tag;
  write_raw_f64(sb.approx, base + "_s" + std::to_string(sb.scales) + "_LL.f64");
  if (sb.kind == WaveletKind::Dwt) {
    static const char* names[3] = {"LH", "HL", "HH"};
    for (int s = 1; s <= sb.scales; ++s)
      for (int j = 0; j < 3; ++j)
        write_raw_f64(sb.details[static_cast<std::size_t>(3 * (s - 1) + j)],
                      base + "_s" + std::to_string(s) + "_" + names[j] + ".f64");
  } else {
    for (int s = 1; s <= sb.scales; ++s)
      write_raw_f64(sb.details[static_cast<std::size_t>(s - 1)],
                    base + "_s" + std::to_string(s) + "_D.f64");
  }
}

}  // namespace wavemix
