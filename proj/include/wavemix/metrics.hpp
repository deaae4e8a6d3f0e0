#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wavemix/image.hpp"

namespace wavemix {

/// 10*log10(peak^2 / MSE), in dB; +inf when the images are identical.
/// The dynamic range is taken from ref.peak.
inline double psnr(const Image& ref, const Image& test) {
  require_same_dims(ref, test, "psnr");
  double se = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref.data[i] - test.data[i];
    se += d * d;
  }
  const double mse = se / static_cast<double>(ref.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ref.peak * ref.peak / mse);
}

namespace ssim_detail {

inline constexpr int kWindow = 11;
inline constexpr double kSigma = 1.5;
inline constexpr double kK1 = 0.01;
inline constexpr double kK2 = 0.03;

inline const std::array<double, kWindow * kWindow>& gaussian_window() {
  static const auto w = [] {
    std::array<double, kWindow * kWindow> g{};
    const int h = kWindow / 2;
    double sum = 0.0;
    for (int r = 0; r < kWindow; ++r)
      for (int c = 0; c < kWindow; ++c) {
        const double dr = r - h, dc = c - h;
        const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * kSigma * kSigma));
        g[static_cast<std::size_t>(r) * kWindow + c] = v;
        sum += v;
      }
    for (double& v : g) v /= sum;
    return g;
  }();
  return w;
}

}  // namespace ssim_detail

/// Mean local SSIM over all fully interior 11x11 windows, Gaussian-weighted
/// (sigma 1.5), stabilizers C1=(0.01*L)^2 and C2=(0.03*L)^2 with L = ref.peak.
inline double ssim(const Image& ref, const Image& test) {
  using namespace ssim_detail;
  require_same_dims(ref, test, "ssim");
  if (ref.width < kWindow || ref.height < kWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  const auto& w = gaussian_window();
  const double L = ref.peak;
  const double c1 = (kK1 * L) * (kK1 * L);
  const double c2 = (kK2 * L) * (kK2 * L);
  const int rows = ref.height - kWindow + 1;
  const int cols = ref.width - kWindow + 1;
  // per-row partials summed in row order: result independent of thread count
  std::vector<double> row_sums(static_cast<std::size_t>(rows), 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < cols; ++c) {
      double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
      int k = 0;
      for (int wr = 0; wr < kWindow; ++wr)
        for (int wc = 0; wc < kWindow; ++wc, ++k) {
          const double x = ref.at(r + wr, c + wc);
          const double y = test.at(r + wr, c + wc);
          const double g = w[static_cast<std::size_t>(k)];
          mx += g * x;
          my += g * y;
          xx += g * x * x;
          yy += g * y * y;
          xy += g * x * y;
        }
      const double vx = xx - mx * mx;
      const double vy = yy - my * my;
      const double cxy = xy - mx * my;
      row_sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    row_sums[static_cast<std::size_t>(r)] = row_sum;
  }
  double total = 0.0;
  for (double v : row_sums) total += v;
  return total / (static_cast<double>(rows) * cols);
}

}  // namespace wavemix
