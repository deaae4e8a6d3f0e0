#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavemix {

/// Row-major grayscale image with real-valued samples.
///
/// Samples are kept unclamped during processing; the [0, peak] range is
/// enforced only when writing 8-bit files.
struct Image {
  int width = 0;
  int height = 0;
  double peak = 255.0;  // dynamic range used by PSNR/SSIM
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(checked_area(w, h), fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }

  std::size_t size() const { return data.size(); }
  bool same_dims(const Image& o) const { return width == o.width && height == o.height; }

  static std::size_t checked_area(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("Image: dimensions must be >= 1");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
};

inline void require_same_dims(const Image& a, const Image& b, const char* what) {
  if (!a.same_dims(b))
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline void require_finite(const Image& img, const char* what) {
  for (double v : img.data)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace wavemix
