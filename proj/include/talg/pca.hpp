#pragma once

#include <utility>
#include <vector>

#include "talg/thosvd.hpp"

namespace talg {

// Which modes of the stacked sample tensor are rank deficient:
//   Pca            -> the sample mode only
//   TwoDPca        -> structural mode 2 only
//   TwoDSquaredPca -> structural modes 1 and 2
//   MPca           -> every structural mode, sample mode full
//   Custom         -> any combination, from explicit per-mode ranks
// The same mapping covers the canonical methods (trivial algebra) and their
// transform-domain counterparts (nontrivial algebra).
enum class PcaVariant { Pca, TwoDPca, TwoDSquaredPca, MPca, Custom };

struct PcaSpec {
  PcaVariant variant = PcaVariant::TwoDSquaredPca;
  // Ranks of the deficient modes, in ascending mode order.
  std::vector<int> ranks;
  // Custom only: one rank per stacked mode (structural modes then the sample
  // mode); a rank equal to the mode dimension means full.
  std::vector<int> custom_ranks;
  bool center = true;
  bool optimize = false;
  int max_iters = 50;
  double tol = 1e-8;
};

struct PcaResult {
  std::vector<GTensor> reconstructions;
  GTensor mean;
  GTensor centered_stack;
  std::vector<TMatrix> factors;  // per stacked mode; empty entries are identity
  std::vector<int> ranks;        // resolved per stacked mode
  std::vector<double> objectives;
  int sweeps = 0;
  PcaSpec spec;
};

inline GTensor mean_sample(const std::vector<GTensor>& samples) {
  if (samples.empty()) throw ConfigError("sample list is empty");
  GTensor acc = samples.front();
  for (std::size_t q = 1; q < samples.size(); ++q) acc = acc + samples[q];
  return cplx(1.0 / double(samples.size()), 0.0) * acc;
}

inline std::vector<GTensor> center_samples(const std::vector<GTensor>& samples, GTensor* mean_out = nullptr) {
  GTensor mean = mean_sample(samples);
  std::vector<GTensor> centered;
  centered.reserve(samples.size());
  for (const GTensor& s : samples) centered.push_back(s - mean);
  if (mean_out) *mean_out = mean;
  return centered;
}

namespace detail {

inline std::vector<int> resolve_ranks(const PcaSpec& spec, const std::vector<int>& stacked_dims) {
  const int S = static_cast<int>(stacked_dims.size());  // structural modes + sample mode
  const int M = S - 1;
  std::vector<int> ranks(stacked_dims.begin(), stacked_dims.end());
  auto take = [&](const std::vector<int>& modes) {
    if (spec.ranks.size() != modes.size())
      throw ConfigError("variant expects one rank per deficient mode");
    for (std::size_t i = 0; i < modes.size(); ++i) ranks[modes[i]] = spec.ranks[i];
  };
  switch (spec.variant) {
    case PcaVariant::Pca:
      take({M});
      break;
    case PcaVariant::TwoDPca:
      if (M < 2) throw ConfigError("variant requires at least two structural modes");
      take({1});
      break;
    case PcaVariant::TwoDSquaredPca:
      if (M < 2) throw ConfigError("variant requires at least two structural modes");
      take({0, 1});
      break;
    case PcaVariant::MPca: {
      std::vector<int> modes(M);
      for (int k = 0; k < M; ++k) modes[k] = k;
      take(modes);
      break;
    }
    case PcaVariant::Custom:
      if (static_cast<int>(spec.custom_ranks.size()) != S)
        throw ConfigError("custom ranks must cover every stacked mode");
      ranks = spec.custom_ranks;
      break;
  }
  for (int k = 0; k < S; ++k)
    if (ranks[k] < 1 || ranks[k] > stacked_dims[k]) throw ConfigError("rank out of range for mode");
  return ranks;
}

inline std::vector<int> deficient_modes(const std::vector<int>& ranks, const std::vector<int>& dims) {
  std::vector<int> modes;
  for (std::size_t k = 0; k < ranks.size(); ++k)
    if (ranks[k] < dims[k]) modes.push_back(static_cast<int>(k));
  return modes;
}

inline std::vector<GTensor> split_and_uncenter(const GTensor& approx_stack, const GTensor& mean, bool centered) {
  const int Q = approx_stack.dims().back();
  std::vector<GTensor> out;
  out.reserve(Q);
  for (int q = 0; q < Q; ++q) {
    GTensor r = slice_last(approx_stack, q);
    out.push_back(centered ? r + mean : r);
  }
  return out;
}

}  // namespace detail

// Centers the samples, stacks them along a trailing sample mode, projects onto
// the leading subspaces of the deficient modes, and re-adds the mean. Full
// modes keep identity projectors and are never factored.
inline PcaResult pca_approximate(const std::vector<GTensor>& samples, const PcaSpec& spec) {
  if (samples.empty()) throw ConfigError("sample list is empty");
  PcaResult out;
  out.spec = spec;
  std::vector<GTensor> centered =
      spec.center ? center_samples(samples, &out.mean) : samples;
  if (!spec.center) out.mean = cplx(0.0, 0.0) * samples.front();
  out.centered_stack = stack_last(centered);

  out.ranks = detail::resolve_ranks(spec, out.centered_stack.dims());
  const std::vector<int> deficient = detail::deficient_modes(out.ranks, out.centered_stack.dims());

  if (deficient.empty()) {
    // Everything full rank: the approximation is the identity map.
    out.factors.resize(out.centered_stack.order());
    out.reconstructions = detail::split_and_uncenter(out.centered_stack, out.mean, spec.center);
    return out;
  }

  ThosvdOptions topts;
  topts.compute_core = false;
  topts.compute_approx = true;
  topts.factor_modes = deficient;
  ThosvdResult base = thosvd(out.centered_stack, out.ranks, topts);
  out.factors.resize(out.centered_stack.order());
  for (int k : deficient) out.factors[k] = base.factor_truncated(k);

  GTensor approx_stack = out.centered_stack;
  if (spec.optimize && deficient.size() >= 2) {
    ThooiOptions oopts;
    oopts.max_iters = spec.max_iters;
    oopts.tol = spec.tol;
    ThooiResult refined = thooi(out.centered_stack, out.ranks, base, oopts);
    for (int k : deficient) out.factors[k] = refined.factors[k];
    out.objectives = refined.objectives;
    out.sweeps = refined.sweeps;
    approx_stack = refined.approx;
  } else {
    approx_stack = base.approx;
  }
  out.reconstructions = detail::split_and_uncenter(approx_stack, out.mean, spec.center);
  return out;
}

// Alternating refinement of an existing approximation, restricted to its
// deficient modes. With fewer than two deficient modes each per-mode projector
// is already optimal and the input is returned unchanged.
inline PcaResult pca_refine(const PcaResult& in, int max_iters, double tol) {
  const std::vector<int> deficient = detail::deficient_modes(in.ranks, in.centered_stack.dims());
  if (deficient.size() < 2) return in;
  ThosvdResult init;
  init.factors = in.factors;
  init.ranks = in.ranks;
  ThooiOptions opts;
  opts.max_iters = max_iters;
  opts.tol = tol;
  ThooiResult refined = thooi(in.centered_stack, in.ranks, init, opts);
  PcaResult out = in;
  for (int k : deficient) out.factors[k] = refined.factors[k];
  out.objectives = refined.objectives;
  out.sweeps = refined.sweeps;
  out.reconstructions = detail::split_and_uncenter(refined.approx, in.mean, in.spec.center);
  return out;
}

}  // namespace talg
