#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavemix/image.hpp"

namespace wavemix {

/// Fully overlapping patches (stride 1), one zero-mean column per patch.
///
/// Vectorization is column-major within each patch; patch columns are
/// ordered column-major over the origin grid (origin column slow, origin
/// row fast).
struct PatchMatrix {
  int n = 0;                                  // patch dimension p*p
  int p = 0;                                  // patch side
  std::int64_t count = 0;                     // number of patches
  Eigen::MatrixXd columns;                    // n x count, zero-mean
  Eigen::VectorXd means;                      // count
  std::vector<std::pair<int, int>> origins;   // (row, col) of patch top-left
};

inline PatchMatrix extract_patches(const Image& img, int p) {
  if (p < 1) throw std::invalid_argument("extract_patches: patch side must be >= 1");
  if (p > img.width || p > img.height)
    throw std::invalid_argument("extract_patches: patch larger than image");
  const int rows = img.height - p + 1;
  const int cols = img.width - p + 1;
  PatchMatrix pm;
  pm.p = p;
  pm.n = p * p;
  pm.count = static_cast<std::int64_t>(rows) * cols;
  pm.columns.resize(pm.n, pm.count);
  pm.means.resize(pm.count);
  pm.origins.resize(static_cast<std::size_t>(pm.count));
  const double inv_n = 1.0 / pm.n;
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < pm.count; ++idx) {
    const int oc = static_cast<int>(idx / rows);
    const int orow = static_cast<int>(idx % rows);
    pm.origins[static_cast<std::size_t>(idx)] = {orow, oc};
    double* col = pm.columns.col(idx).data();
    int k = 0;
    double sum = 0.0;
    for (int pc = 0; pc < p; ++pc)
      for (int pr = 0; pr < p; ++pr) {
        const double v = img.at(orow + pr, oc + pc);
        col[k++] = v;
        sum += v;
      }
    const double mean = sum * inv_n;
    pm.means[idx] = mean;
    for (int j = 0; j < pm.n; ++j) col[j] -= mean;
  }
  return pm;
}

/// Restores per-patch means and averages overlapping contributions at each
/// pixel. The per-pixel gather runs in a fixed order, so the result does
/// not depend on thread count.
inline Image aggregate_patches(const PatchMatrix& pm, const Eigen::MatrixXd& denoised,
                               int width, int height) {
  if (denoised.rows() != pm.columns.rows() || denoised.cols() != pm.columns.cols())
    throw std::invalid_argument("aggregate_patches: column matrix shape mismatch");
  const int p = pm.p;
  if (width < p || height < p)
    throw std::invalid_argument("aggregate_patches: output smaller than patch");
  const int rows = height - p + 1;
  const int cols = width - p + 1;
  // origin grid -> column index (-1 where absent)
  std::vector<std::int64_t> slot(static_cast<std::size_t>(rows) * cols, -1);
  for (std::int64_t i = 0; i < pm.count; ++i) {
    const auto [orow, oc] = pm.origins[static_cast<std::size_t>(i)];
    if (orow < 0 || oc < 0 || orow >= rows || oc >= cols)
      throw std::invalid_argument("aggregate_patches: patch origin out of bounds");
    auto& s = slot[static_cast<std::size_t>(orow) * cols + oc];
    if (s != -1) throw std::invalid_argument("aggregate_patches: duplicate patch origin");
    s = i;
  }
  Image out(width, height);
  bool uncovered = false;  // cannot throw from inside the parallel region
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double sum = 0.0;
      int hits = 0;
      for (int pr = 0; pr < p; ++pr) {
        const int orow = r - pr;
        if (orow < 0 || orow >= rows) continue;
        for (int pc = 0; pc < p; ++pc) {
          const int oc = c - pc;
          if (oc < 0 || oc >= cols) continue;
          const std::int64_t i = slot[static_cast<std::size_t>(orow) * cols + oc];
          if (i < 0) continue;
          sum += denoised(pc * p + pr, i) + pm.means[i];
          ++hits;
        }
      }
      if (hits == 0) {
        uncovered = true;
        continue;
      }
      out.at(r, c) = sum / hits;
    }
  }
  if (uncovered)
    throw std::invalid_argument("aggregate_patches: pixel not covered by any patch");
  return out;
}

}  // namespace wavemix
