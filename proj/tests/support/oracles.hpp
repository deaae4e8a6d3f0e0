#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "wavemix/image.hpp"
#include "wavemix/rng.hpp"

namespace oracles {

inline double rel_maxnorm_diff(const wavemix::Image& a, const wavemix::Image& b) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(a.data[i]));
    diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
  }
  return diff / std::max(scale, 1.0);
}

inline wavemix::Image random_image(int w, int h, std::uint64_t seed, double mean = 128.0,
                                   double amp = 40.0) {
  wavemix::Image img(w, h);
  wavemix::NormalSampler ns(seed);
  for (double& v : img.data) v = mean + amp * ns.next();
  return img;
}

inline wavemix::Image ramp_image(int w, int h) {
  wavemix::Image img(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      img.at(r, c) = 255.0 * (r + c) / static_cast<double>(w + h - 2);
  return img;
}

// textured but structured inputs for pipeline-level checks
inline wavemix::Image textured_image(int w, int h, int variant) {
  wavemix::Image img(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double v = 0.0;
      switch (variant % 5) {
        case 0: v = 128 + 90 * std::sin(0.21 * r) * std::cos(0.13 * c); break;
        case 1: v = ((r / 7 + c / 7) % 2) ? 200.0 : 55.0; break;
        case 2: v = 255.0 * (r + c) / (w + h); break;
        case 3: {
          const double dr = r - h / 2.0, dc = c - w / 2.0;
          v = 230 * std::exp(-(dr * dr + dc * dc) / (0.08 * w * h)) + 20;
          break;
        }
        default: v = 128 + 60 * std::sin(0.05 * r * c / (1.0 + 0.01 * r)); break;
      }
      img.at(r, c) = v;
    }
  return img;
}

/// Full 2-D periodic correlation followed by decimation by 2 on both axes:
/// out(r, c) = sum_{mr, mc} K(mr, mc) * x((2r+mr) mod H, (2c+mc) mod W).
inline wavemix::Image conv2_periodic_decimate(const wavemix::Image& x,
                                              const std::vector<double>& k_vert,
                                              const std::vector<double>& k_horz) {
  const int H = x.height, W = x.width;
  wavemix::Image out(W / 2, H / 2);
  for (int r = 0; r < H / 2; ++r)
    for (int c = 0; c < W / 2; ++c) {
      double acc = 0.0;
      for (std::size_t mr = 0; mr < k_vert.size(); ++mr)
        for (std::size_t mc = 0; mc < k_horz.size(); ++mc) {
          const int rr = (2 * r + static_cast<int>(mr)) % H;
          const int cc = (2 * c + static_cast<int>(mc)) % W;
          acc += k_vert[mr] * k_horz[mc] * x.at(rr, cc);
        }
      out.at(r, c) = acc;
    }
  return out;
}

/// Scalar, loop-based SSIM (11x11 Gaussian, sigma 1.5, K1=0.01, K2=0.03),
/// written separately from the library implementation.
inline double ssim_reference(const wavemix::Image& ref, const wavemix::Image& test) {
  const int win = 11;
  const double sig = 1.5, k1 = 0.01, k2 = 0.03;
  const double L = ref.peak;
  const double c1 = (k1 * L) * (k1 * L), c2 = (k2 * L) * (k2 * L);
  std::vector<double> g(static_cast<std::size_t>(win) * win);
  double gsum = 0.0;
  for (int r = 0; r < win; ++r)
    for (int c = 0; c < win; ++c) {
      const double dr = r - win / 2, dc = c - win / 2;
      g[static_cast<std::size_t>(r) * win + c] = std::exp(-(dr * dr + dc * dc) / (2 * sig * sig));
      gsum += g[static_cast<std::size_t>(r) * win + c];
    }
  double acc = 0.0;
  int count = 0;
  for (int r0 = 0; r0 + win <= ref.height; ++r0)
    for (int c0 = 0; c0 + win <= ref.width; ++c0) {
      double mx = 0, my = 0;
      for (int r = 0; r < win; ++r)
        for (int c = 0; c < win; ++c) {
          const double w = g[static_cast<std::size_t>(r) * win + c] / gsum;
          mx += w * ref.at(r0 + r, c0 + c);
          my += w * test.at(r0 + r, c0 + c);
        }
      double vx = 0, vy = 0, cxy = 0;
      for (int r = 0; r < win; ++r)
        for (int c = 0; c < win; ++c) {
          const double w = g[static_cast<std::size_t>(r) * win + c] / gsum;
          const double dx = ref.at(r0 + r, c0 + c) - mx;
          const double dy = test.at(r0 + r, c0 + c) - my;
          vx += w * dx * dx;
          vy += w * dy * dy;
          cxy += w * dx * dy;
        }
      acc += ((2 * mx * my + c1) * (2 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return acc / count;
}

/// Objective for the transform-update subproblem, evaluated directly.
inline double transform_objective_ref(const Eigen::MatrixXd& w, const Eigen::MatrixXd& y,
                                      const Eigen::MatrixXd& x, double lambda, double mu) {
  const double det = w.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    return std::numeric_limits<double>::infinity();
  return (w * y - x).squaredNorm() + lambda * (mu * w.squaredNorm() - std::log(std::abs(det)));
}

/// Central finite differences of the transform-update objective.
inline Eigen::MatrixXd objective_fd_gradient(const Eigen::MatrixXd& w, const Eigen::MatrixXd& y,
                                             const Eigen::MatrixXd& x, double lambda, double mu,
                                             double step = 1e-5) {
  Eigen::MatrixXd g(w.rows(), w.cols());
  Eigen::MatrixXd wp = w;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const double v = w(r, c);
      wp(r, c) = v + step;
      const double fp = transform_objective_ref(wp, y, x, lambda, mu);
      wp(r, c) = v - step;
      const double fm = transform_objective_ref(wp, y, x, lambda, mu);
      wp(r, c) = v;
      g(r, c) = (fp - fm) / (2 * step);
    }
  return g;
}

/// Gradient descent with Armijo backtracking on the same objective.
/// Returns the best objective value found.
inline double gd_minimize_transform_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                                              double lambda, double mu,
                                              const Eigen::MatrixXd& w0, int max_iters = 20000) {
  Eigen::MatrixXd w = w0;
  double f = transform_objective_ref(w, y, x, lambda, mu);
  double step = 1e-3;
  for (int it = 0; it < max_iters; ++it) {
    // analytic gradient: 2(WY - X)Y^T + 2*lambda*mu*W - lambda*W^{-T}
    const Eigen::MatrixXd grad = 2.0 * (w * y - x) * y.transpose() + 2.0 * lambda * mu * w -
                                 lambda * w.inverse().transpose();
    const double gn = grad.norm();
    if (gn < 1e-12 * std::max(1.0, std::abs(f))) break;
    double s = step;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::MatrixXd wn = w - s * grad;
      const double fn = transform_objective_ref(wn, y, x, lambda, mu);
      if (fn < f - 1e-4 * s * gn * gn) {
        w = wn;
        f = fn;
        step = s * 1.5;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
  }
  return f;
}

/// Global-search oracle for the transform-update subproblem: a coarse grid
/// over 2x2 matrices (when applicable) plus multi-start gradient descent
/// covering both determinant signs. Returns the best objective found.
inline double transform_global_min_oracle(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                                          double lambda, double mu, std::uint64_t seed) {
  const int n = static_cast<int>(y.rows());
  std::vector<Eigen::MatrixXd> starts;
  starts.push_back(Eigen::MatrixXd::Identity(n, n));
  starts.push_back(2.0 * Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd flipped = Eigen::MatrixXd::Identity(n, n);
  flipped(0, 0) = -1.0;
  starts.push_back(flipped);

  wavemix::NormalSampler ns(seed);
  for (int s = 0; s < 8; ++s) {
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w(i, j) = ns.next();
    w += ((s % 2) ? -1.0 : 1.0) * n * Eigen::MatrixXd::Identity(n, n);
    starts.push_back(w);
  }

  if (n == 2) {
    // coarse 4-D grid; polish the most promising corners
    const double grid[] = {-2.4, -1.2, -0.6, -0.2, 0.2, 0.6, 1.2, 2.4};
    std::vector<std::pair<double, Eigen::MatrixXd>> ranked;
    Eigen::MatrixXd w(2, 2);
    for (double a : grid)
      for (double b : grid)
        for (double c : grid)
          for (double d : grid) {
            w << a, b, c, d;
            const double f = transform_objective_ref(w, y, x, lambda, mu);
            if (std::isfinite(f)) ranked.emplace_back(f, w);
          }
    std::partial_sort(ranked.begin(), ranked.begin() + std::min<std::size_t>(5, ranked.size()),
                      ranked.end(),
                      [](const auto& l, const auto& r) { return l.first < r.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i)
      starts.push_back(ranked[i].second);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& w0 : starts)
    best = std::min(best, gd_minimize_transform_objective(y, x, lambda, mu, w0));
  return best;
}

/// Exhaustive minimal support size for the variable-sparsity stop rule:
/// smallest k such that keeping the k largest-|.| entries of z = W*y
/// (ties toward the lower index) gives ||y - W^{-1} x_k||^2 <= thr.
inline int min_support_bruteforce(const Eigen::MatrixXd& w, const Eigen::VectorXd& y,
                                  double thr) {
  const int n = static_cast<int>(w.rows());
  const Eigen::VectorXd z = w * y;
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double ma = std::abs(z[a]), mb = std::abs(z[b]);
    return ma > mb || (ma == mb && a < b);
  });
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
  for (int k = 0; k <= n; ++k) {
    Eigen::VectorXd xk = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k; ++j) xk[idx[static_cast<std::size_t>(j)]] = z[idx[static_cast<std::size_t>(j)]];
    const Eigen::VectorXd u = lu.solve(xk);
    if ((y - u).squaredNorm() <= thr) return k;
  }
  return n;
}

}  // namespace oracles
