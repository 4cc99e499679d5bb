#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "talg/gtensor.hpp"
#include "talg/tsvd.hpp"

namespace talg {

struct ThosvdOptions {
  bool compute_core = true;
  bool compute_approx = true;
  // Modes whose factor should be computed; empty means all. Skipped modes act
  // as identities everywhere downstream.
  std::vector<int> factor_modes;
};

// Orthogonal factors from the unfoldings, the all-mode projected core, and the
// rank-truncated approximation. Factors are spectral-domain t-matrices with
// all D_k columns (empty entries stand for identity factors of skipped
// modes); core and approx are returned in the domain of the input.
struct ThosvdResult {
  std::vector<TMatrix> factors;
  std::vector<int> ranks;
  GTensor core;
  GTensor approx;

  bool has_factor(int k) const { return !factors[k].empty(); }

  TMatrix factor_truncated(int k) const {
    if (!has_factor(k)) throw ConfigError("no stored factor for this mode");
    return left_cols(factors[k], ranks[k]);
  }

  TMatrix idempotent(int k) const {
    TMatrix u = factor_truncated(k);
    return tmatmul(u, conj_transpose(u));
  }
};

namespace detail {

inline void check_ranks(const GTensor& x, const std::vector<int>& ranks) {
  if (static_cast<int>(ranks.size()) != x.order())
    throw ConfigError("one rank per structural mode required");
  for (int k = 0; k < x.order(); ++k)
    if (ranks[k] < 1 || ranks[k] > x.mode_dim(k))
      throw ConfigError("rank out of range for mode");
}

// Per-slab leading left singular vectors of the mode-k unfolding.
inline TMatrix mode_factor(const GTensor& xs, int k, int cols) {
  const int K = xs.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  parallel_for(K, [&](std::int64_t k2) {
    slabs[k2] = leading_left_vectors(unfold_slab(xs.slab(static_cast<int>(k2)), xs.dims(), k), cols);
  });
  return TMatrix::from_slabs(xs.algebra(), std::move(slabs), Domain::Spectral);
}

// x projected onto the span of the leading columns: two skinny mode products.
inline GTensor apply_projector(const GTensor& x, int k, const TMatrix& u_cols) {
  return mode_mul(mode_mul(x, k, conj_transpose(u_cols)), k, u_cols);
}

}  // namespace detail

inline ThosvdResult thosvd(const GTensor& x, const std::vector<int>& ranks, const ThosvdOptions& opts = {}) {
  detail::check_ranks(x, ranks);
  const int M = x.order();
  std::vector<bool> wanted(M, true);
  if (!opts.factor_modes.empty()) {
    wanted.assign(M, false);
    for (int k : opts.factor_modes) {
      if (k < 0 || k >= M) throw ConfigError("factor mode index out of range");
      wanted[k] = true;
    }
  }
  const GTensor xs = x.spectral();
  ThosvdResult out;
  out.ranks = ranks;
  out.factors.resize(M);
  for (int k = 0; k < M; ++k)
    if (wanted[k]) out.factors[k] = detail::mode_factor(xs, k, x.mode_dim(k));

  if (opts.compute_core) {
    GTensor core = xs;
    for (int k = 0; k < M; ++k)
      if (out.has_factor(k)) core = mode_mul(core, k, conj_transpose(out.factors[k]));
    out.core = core.to_domain(x.domain());
  }
  if (opts.compute_approx) {
    GTensor approx = xs;
    for (int k = 0; k < M; ++k)
      if (out.has_factor(k)) approx = detail::apply_projector(approx, k, out.factor_truncated(k));
    out.approx = approx.to_domain(x.domain());
  }
  return out;
}

// Canonical higher-order SVD: the K = 1 degenerate case.
inline ThosvdResult hosvd(const DenseArray& x, const std::vector<int>& ranks, const ThosvdOptions& opts = {}) {
  return thosvd(GTensor::from_canonical(x), ranks, opts);
}

struct ThooiOptions {
  int max_iters = 50;
  double tol = 1e-8;
};

// Alternating refinement of the truncated factors. Factors hold the r_k
// retained columns (empty entries stand for identities on modes kept at full
// rank); objectives records the scalar error after initialization and after
// each accepted sweep.
struct ThooiResult {
  std::vector<TMatrix> factors;
  std::vector<int> ranks;
  GTensor approx;
  std::vector<double> objectives;
  int sweeps = 0;
  bool converged = false;
};

inline ThooiResult thooi(const GTensor& x, const std::vector<int>& ranks, const ThosvdResult& init,
                         const ThooiOptions& opts = {}) {
  detail::check_ranks(x, ranks);
  if (opts.max_iters < 0 || opts.tol < 0.0) throw ConfigError("invalid iteration options");
  const int M = x.order();
  const GTensor xs = x.spectral();
  const int K = x.algebra()->dim();

  // Full-rank modes act as identities; only deficient modes are refined.
  std::vector<int> active;
  for (int k = 0; k < M; ++k)
    if (ranks[k] < x.mode_dim(k)) active.push_back(k);

  std::vector<TMatrix> u(M);
  for (int k : active) {
    if (static_cast<int>(init.factors.size()) != M || !init.has_factor(k))
      throw ConfigError("initialization lacks a factor for an active mode");
    if (init.factors[k].cols() < ranks[k]) throw ConfigError("initialization factor has too few columns");
    u[k] = left_cols(init.factors[k].spectral(), ranks[k]);
    // The initial idempotents must have slicewise rank r_k, i.e. orthonormal
    // retained columns in every slab.
    for (int s = 0; s < K; ++s) {
      const Eigen::MatrixXcd& us = u[k].slab(s);
      if ((us.adjoint() * us - Eigen::MatrixXcd::Identity(ranks[k], ranks[k])).norm() > 1e-8 * std::sqrt(double(ranks[k])))
        throw ConfigError("initialization columns are not orthonormal; idempotent rank mismatch");
    }
  }

  auto project_all = [&](const GTensor& t, int skip) {
    GTensor r = t;
    for (int k : active)
      if (k != skip) r = detail::apply_projector(r, k, u[k]);
    return r;
  };

  ThooiResult out;
  out.ranks = ranks;
  GTensor best = project_all(xs, -1);
  double obj = frob_norm(xs - best);
  out.objectives.push_back(obj);

  for (int it = 0; it < opts.max_iters && !active.empty(); ++it) {
    std::vector<TMatrix> prev = u;
    for (int k : active) {
      GTensor partial = project_all(xs, k);
      u[k] = detail::mode_factor(partial, k, ranks[k]);
    }
    GTensor candidate = project_all(xs, -1);
    const double obj_new = frob_norm(xs - candidate);
    if (obj_new > obj * (1.0 + 1e-13)) {
      // A sweep may not increase the scalar objective; reject it and stop.
      u = std::move(prev);
      out.converged = true;
      break;
    }
    best = candidate;
    out.objectives.push_back(obj_new);
    ++out.sweeps;
    const double decrease = obj - obj_new;
    obj = obj_new;
    if (decrease <= opts.tol * std::max(obj, 1e-300)) {
      out.converged = true;
      break;
    }
  }

  out.factors.resize(M);
  for (int k : active) out.factors[k] = u[k];
  out.approx = best.to_domain(x.domain());
  return out;
}

inline ThooiResult thooi(const GTensor& x, const std::vector<int>& ranks, const ThooiOptions& opts = {}) {
  ThosvdOptions init_opts;
  init_opts.compute_core = false;
  init_opts.compute_approx = false;
  for (int k = 0; k < x.order(); ++k)
    if (ranks.size() == static_cast<std::size_t>(x.order()) && ranks[k] < x.mode_dim(k))
      init_opts.factor_modes.push_back(k);
  return thooi(x, ranks, thosvd(x, ranks, init_opts), opts);
}

inline ThooiResult hooi(const DenseArray& x, const std::vector<int>& ranks, const ThooiOptions& opts = {}) {
  return thooi(GTensor::from_canonical(x), ranks, opts);
}

}  // namespace talg
