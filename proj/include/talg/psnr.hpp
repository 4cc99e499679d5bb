#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "talg/dense_array.hpp"

namespace talg {

// Peak signal-to-noise ratio in dB over the plain entrywise difference:
//   20 * log10(maxval * sqrt(N) / ||orig - recon||_F).
// Identical inputs give +infinity.
inline double psnr(const DenseArray& orig, const DenseArray& recon, double maxval) {
  if (orig.dims() != recon.dims()) throw ConfigError("shape mismatch");
  if (maxval <= 0.0) throw ConfigError("peak value must be positive");
  double err2 = 0.0;
  for (std::int64_t i = 0; i < orig.size(); ++i) err2 += std::norm(orig[i] - recon[i]);
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(orig.size());
  return 20.0 * std::log10(maxval * std::sqrt(n) / std::sqrt(err2));
}

// Single global PSNR over a sample set: the concatenation of all samples is
// compared entrywise.
inline double psnr_many(const std::vector<DenseArray>& orig, const std::vector<DenseArray>& recon, double maxval) {
  if (orig.size() != recon.size() || orig.empty()) throw ConfigError("sample lists must be nonempty and equal length");
  if (maxval <= 0.0) throw ConfigError("peak value must be positive");
  double err2 = 0.0;
  std::int64_t n = 0;
  for (std::size_t q = 0; q < orig.size(); ++q) {
    if (orig[q].dims() != recon[q].dims()) throw ConfigError("shape mismatch");
    for (std::int64_t i = 0; i < orig[q].size(); ++i) err2 += std::norm(orig[q][i] - recon[q][i]);
    n += orig[q].size();
  }
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(maxval * std::sqrt(static_cast<double>(n)) / std::sqrt(err2));
}

}  // namespace talg
