#pragma once

#include <cstdint>
#include <stdexcept>

#include "wavemix/image.hpp"
#include "wavemix/rng.hpp"

namespace wavemix {

struct NoiseSpec {
  double sigma = 0.0;       // standard deviation in intensity units
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, sigma^2) to every sample. Pure: a fixed (img, spec)
/// pair always yields the same output.
inline Image add_gaussian_noise(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0))
    throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
  Image out = img;
  if (spec.sigma == 0.0) return out;
  NormalSampler normal(spec.seed);
  for (double& v : out.data) v += spec.sigma * normal.next();
  return out;
}

}  // namespace wavemix
