#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "wavemix/image.hpp"
#include "wavemix/io.hpp"
#include "wavemix/patches.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace wavemix {

inline int resolve_threads(int requested) {
#if defined(_OPENMP)
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

/// Square learned analysis operator.
struct Transform {
  Eigen::MatrixXd W;
  int n = 0;
};

struct TldConfig {
  int p = 11;             // patch side
  double c = 1.04;        // sparsity-control constant in the n*c^2*sigma^2 stop rule
  double lambda0 = 0.031; // regularizer scale; lambda = lambda0 * ||Y||_F^2 / N
  double mu = 1.0;        // weight of ||W||_F^2 inside the regularizer
  int iters = 12;         // outer alternations of the learning phase
  int l0 = 0;             // fixed learning-phase sparsity; 0 -> round(n/10)
  int threads = 0;        // 0 -> library default; 1 -> single-thread reference mode
  std::string dump_transform_dir;  // when set, W is dumped each outer iteration
};

struct SparseCodes {
  Eigen::MatrixXd X;          // one code per column
  std::vector<int> support;   // nonzeros per column
};

/// Objective trace of the learning phase plus the final transform.
struct TldTrace {
  std::vector<double> objective;
  Transform transform;
};

namespace tld_detail {

inline constexpr Eigen::Index kColBlock = 4096;

inline Eigen::Index block_count(Eigen::Index cols) {
  return (cols + kColBlock - 1) / kColBlock;
}

// A * B^T over fixed column blocks; partials are combined in block order so
// the result does not depend on thread count.
inline Eigen::MatrixXd gemm_abt_blocked(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                        int threads) {
  const Eigen::Index nb = block_count(A.cols());
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(nb));
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index c0 = b * kColBlock;
    const Eigen::Index nc = std::min(kColBlock, A.cols() - c0);
    partial[static_cast<std::size_t>(b)].noalias() =
        A.middleCols(c0, nc) * B.middleCols(c0, nc).transpose();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.rows(), B.rows());
  for (auto& p : partial) out += p;
  return out;
}

// sum over columns of ||W*Y_col - X_col||^2, block-deterministic
inline double residual_frob2_blocked(const Eigen::MatrixXd& W, const Eigen::MatrixXd& Y,
                                     const Eigen::MatrixXd& X, int threads) {
  const Eigen::Index nb = block_count(Y.cols());
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index c0 = b * kColBlock;
    const Eigen::Index nc = std::min(kColBlock, Y.cols() - c0);
    partial[static_cast<std::size_t>(b)] =
        (W * Y.middleCols(c0, nc) - X.middleCols(c0, nc)).squaredNorm();
  }
  double acc = 0.0;
  for (double v : partial) acc += v;
  return acc;
}

// descending |value|, ties to the lower index
inline void order_by_magnitude(const double* z, int n, std::vector<int>& idx) {
  idx.resize(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [z](int a, int b) {
    const double ma = std::abs(z[a]), mb = std::abs(z[b]);
    return ma > mb || (ma == mb && a < b);
  });
}

}  // namespace tld_detail

inline double log_abs_det(const Eigen::MatrixXd& W) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);
  double acc = 0.0;
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double a = std::abs(diag[i]);
    if (!(a > 0.0) || !std::isfinite(a)) return -std::numeric_limits<double>::infinity();
    acc += std::log(a);
  }
  return acc;
}

/// Orthonormal DCT-II matrix of size p x p.
inline Eigen::MatrixXd dct_matrix(int p) {
  Eigen::MatrixXd c(p, p);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < p; ++k) {
    const double a = (k == 0) ? std::sqrt(1.0 / p) : std::sqrt(2.0 / p);
    for (int j = 0; j < p; ++j) c(k, j) = a * std::cos(pi * (2 * j + 1) * k / (2.0 * p));
  }
  return c;
}

/// 2-D DCT on column-major vectorized p x p patches: kron(C, C).
inline Eigen::MatrixXd dct2_transform(int p) {
  const Eigen::MatrixXd c = dct_matrix(p);
  const int n = p * p;
  Eigen::MatrixXd w(n, n);
  for (int br = 0; br < p; ++br)
    for (int bc = 0; bc < p; ++bc)
      w.block(br * p, bc * p, p, p) = c(br, bc) * c;
  return w;
}

/// Keeps the l largest-magnitude entries of W*Y_i per column (ties broken
/// toward the lower index), zeros the rest.
inline SparseCodes sparse_code(const Transform& t, const Eigen::MatrixXd& Y,
                               const std::vector<int>& levels, int threads = 0) {
  const int n = t.n;
  if (t.W.rows() != n || t.W.cols() != n || Y.rows() != n)
    throw std::invalid_argument("sparse_code: transform/patch dimension mismatch");
  if (levels.size() != static_cast<std::size_t>(Y.cols()))
    throw std::invalid_argument("sparse_code: one sparsity level per column required");
  for (int l : levels)
    if (l < 0 || l > n) throw std::invalid_argument("sparse_code: sparsity level out of range");
  SparseCodes out;
  out.X.resize(n, Y.cols());
  out.support = levels;
  const Eigen::Index nb = tld_detail::block_count(Y.cols());
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index c0 = b * tld_detail::kColBlock;
    const Eigen::Index nc = std::min(tld_detail::kColBlock, Y.cols() - c0);
    out.X.middleCols(c0, nc).noalias() = t.W * Y.middleCols(c0, nc);
    std::vector<int> idx;
    std::vector<char> keep(static_cast<std::size_t>(n));
    for (Eigen::Index j = c0; j < c0 + nc; ++j) {
      const int l = levels[static_cast<std::size_t>(j)];
      if (l == n) continue;
      double* col = out.X.col(j).data();
      if (l == 0) {
        std::fill(col, col + n, 0.0);
        continue;
      }
      idx.resize(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
      std::nth_element(idx.begin(), idx.begin() + l, idx.end(), [col](int a, int b2) {
        const double ma = std::abs(col[a]), mb = std::abs(col[b2]);
        return ma > mb || (ma == mb && a < b2);
      });
      std::fill(keep.begin(), keep.end(), 0);
      for (int k = 0; k < l; ++k) keep[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] = 1;
      for (int i = 0; i < n; ++i)
        if (!keep[static_cast<std::size_t>(i)]) col[i] = 0.0;
    }
  }
  return out;
}

inline SparseCodes sparse_code(const Transform& t, const Eigen::MatrixXd& Y, int l,
                               int threads = 0) {
  return sparse_code(t, Y, std::vector<int>(static_cast<std::size_t>(Y.cols()), l), threads);
}

/// Learning objective ||WY - X||_F^2 + lambda*(mu*||W||_F^2 - log|det W|).
inline double transform_objective(const Transform& t, const Eigen::MatrixXd& Y,
                                  const Eigen::MatrixXd& X, double lambda, double mu,
                                  int threads = 0) {
  const double fit = tld_detail::residual_frob2_blocked(t.W, Y, X, threads);
  const double lad = log_abs_det(t.W);
  if (!std::isfinite(lad)) return std::numeric_limits<double>::infinity();
  return fit + lambda * (mu * t.W.squaredNorm() - lad);
}

/// Exact minimizer of the objective above over W for fixed (Y, X):
/// factor Y*Y^T + lambda*mu*I = L*L^T, take the full SVD
/// L^{-1} Y X^T = Q S R^T, and return 0.5 * R (S + (S^2 + 2*lambda*I)^{1/2}) Q^T L^{-1}.
inline Transform transform_update(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                                  double lambda, double mu, int threads = 0) {
  const Eigen::Index n = Y.rows();
  if (X.rows() != n || X.cols() != Y.cols())
    throw std::invalid_argument("transform_update: Y/X shape mismatch");
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("transform_update: lambda and mu must be positive");
  Eigen::MatrixXd g = tld_detail::gemm_abt_blocked(Y, Y, threads);
  g.diagonal().array() += lambda * mu;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("transform_update: Cholesky factorization failed");
  const Eigen::MatrixXd p = tld_detail::gemm_abt_blocked(Y, X, threads);
  const Eigen::MatrixXd b = llt.matrixL().solve(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd d = svd.singularValues();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d[i] = 0.5 * (d[i] + std::sqrt(d[i] * d[i] + 2.0 * lambda));
  const Eigen::MatrixXd linv =
      llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
  Transform t;
  t.n = static_cast<int>(n);
  t.W.noalias() = svd.matrixV() * d.asDiagonal() * svd.matrixU().transpose() * linv;
  if (!t.W.allFinite())
    throw std::runtime_error("transform_update: non-finite result");
  return t;
}

struct VsuResult {
  Eigen::MatrixXd U;   // recovered columns
  SparseCodes codes;
};

/// Greedy per-column support growth: coefficients of W*Y_i enter by
/// descending magnitude (ties to the lower index) until
/// ||Y_i - W^{-1}X_i||^2 <= n*c^2*sigma^2 or the support is full.
inline VsuResult variable_sparsity_update(const Transform& t, const Eigen::MatrixXd& Y,
                                          double sigma, double c, int threads = 0) {
  const int n = t.n;
  if (t.W.rows() != n || t.W.cols() != n || Y.rows() != n)
    throw std::invalid_argument("variable_sparsity_update: dimension mismatch");
  if (!std::isfinite(log_abs_det(t.W)))
    throw std::runtime_error("variable_sparsity_update: singular transform");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(t.W);
  const Eigen::MatrixXd winv = lu.inverse();
  if (!winv.allFinite())
    throw std::runtime_error("variable_sparsity_update: singular transform");
  const double thr = n * c * c * sigma * sigma;
  const Eigen::Index cols = Y.cols();
  VsuResult out;
  out.U.resize(n, cols);
  out.codes.X = Eigen::MatrixXd::Zero(n, cols);
  out.codes.support.assign(static_cast<std::size_t>(cols), 0);
  const Eigen::Index nb = tld_detail::block_count(cols);
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index c0 = b * tld_detail::kColBlock;
    const Eigen::Index nc = std::min(tld_detail::kColBlock, cols - c0);
    Eigen::MatrixXd z(n, nc);
    z.noalias() = t.W * Y.middleCols(c0, nc);
    std::vector<int> order;
    Eigen::VectorXd r(n);
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Eigen::Index col = c0 + j;
      tld_detail::order_by_magnitude(z.col(j).data(), n, order);
      r = Y.col(col);
      double rn = r.squaredNorm();
      int k = 0;
      while (rn > thr && k < n) {
        const int i = order[static_cast<std::size_t>(k)];
        const double v = z(i, j);
        out.codes.X(i, col) = v;
        r.noalias() -= v * winv.col(i);
        rn = r.squaredNorm();
        ++k;
      }
      out.codes.support[static_cast<std::size_t>(col)] = k;
      out.U.col(col) = Y.col(col) - r;
    }
  }
  return out;
}

/// Full single-scale pipeline: overlapping zero-mean patches, alternating
/// sparse coding / closed-form transform updates from a 2-D DCT start, then
/// the variable-sparsity recovery pass and patch aggregation. Deterministic
/// for fixed inputs and config.
inline Image tld_denoise(const Image& img, double sigma, const TldConfig& cfg = {},
                         TldTrace* trace = nullptr) {
  if (cfg.p < 2) throw std::invalid_argument("tld_denoise: patch side must be >= 2");
  if (!(cfg.c > 0.0)) throw std::invalid_argument("tld_denoise: c must be positive");
  if (cfg.iters < 1) throw std::invalid_argument("tld_denoise: iters must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("tld_denoise: sigma must be >= 0");
  if (img.width < cfg.p || img.height < cfg.p)
    throw std::invalid_argument("tld_denoise: image smaller than patch");
  const int n = cfg.p * cfg.p;
  int l0 = cfg.l0 ? cfg.l0 : std::max(1, static_cast<int>(std::lround(n / 10.0)));
  if (l0 < 1 || l0 > n) throw std::invalid_argument("tld_denoise: l0 out of range");

  const PatchMatrix pm = extract_patches(img, cfg.p);
  // all-constant inputs give ||Y|| = 0; keep the Gram factor positive definite
  const double lambda =
      std::max(cfg.lambda0 * pm.columns.squaredNorm() / static_cast<double>(pm.count), 1e-12);

  Transform t{dct2_transform(cfg.p), n};
  for (int it = 0; it < cfg.iters; ++it) {
    SparseCodes codes = sparse_code(t, pm.columns, l0, cfg.threads);
    t = transform_update(pm.columns, codes.X, lambda, cfg.mu, cfg.threads);
    if (trace)
      trace->objective.push_back(
          transform_objective(t, pm.columns, codes.X, lambda, cfg.mu, cfg.threads));
    if (!cfg.dump_transform_dir.empty()) {
      Image w(n, n);
      for (int r = 0; r < n; ++r)
        for (int cix = 0; cix < n; ++cix) w.at(r, cix) = t.W(r, cix);
      write_raw_f64(w, cfg.dump_transform_dir + "/W_iter" +
                           (it < 9 ? "0" : "") + std::to_string(it + 1) + ".f64");
    }
  }
  const VsuResult vsu = variable_sparsity_update(t, pm.columns, sigma, cfg.c, cfg.threads);
  Image out = aggregate_patches(pm, vsu.U, img.width, img.height);
  out.peak = img.peak;
  if (trace) trace->transform = std::move(t);
  return out;
}

}  // namespace wavemix
