#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "talg/parallel.hpp"
#include "talg/tmatrix.hpp"

namespace talg {

namespace detail {

// Mode-k unfolding of one slab. Row index is d_k; the column index packs the
// remaining modes with the earliest remaining mode fastest:
//   col = sum_{m != k} d_m * J_m,  J_m = prod_{n < m, n != k} D_n.
inline Eigen::MatrixXcd unfold_slab(const Eigen::VectorXcd& slab, const std::vector<int>& dims, int k) {
  const int M = static_cast<int>(dims.size());
  std::vector<std::int64_t> J(M, 0);
  std::int64_t acc = 1;
  for (int m = 0; m < M; ++m) {
    if (m == k) continue;
    J[m] = acc;
    acc *= dims[m];
  }
  Eigen::MatrixXcd out(dims[k], acc);
  std::vector<int> idx(M, 0);
  for (std::int64_t flat = 0; flat < slab.size(); ++flat) {
    std::int64_t col = 0;
    for (int m = 0; m < M; ++m)
      if (m != k) col += idx[m] * J[m];
    out(idx[k], col) = slab(flat);
    for (int m = M - 1; m >= 0; --m) {
      if (++idx[m] < dims[m]) break;
      idx[m] = 0;
    }
  }
  return out;
}

inline Eigen::VectorXcd fold_slab(const Eigen::MatrixXcd& mat, const std::vector<int>& dims, int k) {
  const int M = static_cast<int>(dims.size());
  std::vector<std::int64_t> J(M, 0);
  std::int64_t acc = 1, total = 1;
  for (int m = 0; m < M; ++m) {
    if (m != k) {
      J[m] = acc;
      acc *= dims[m];
    }
    total *= dims[m];
  }
  Eigen::VectorXcd out(total);
  std::vector<int> idx(M, 0);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t col = 0;
    for (int m = 0; m < M; ++m)
      if (m != k) col += idx[m] * J[m];
    out(flat) = mat(idx[k], col);
    for (int m = M - 1; m >= 0; --m) {
      if (++idx[m] < dims[m]) break;
      idx[m] = 0;
    }
  }
  return out;
}

}  // namespace detail

// Generalized tensor: a multiway array of t-scalars with structural modes
// D_1..D_M. Each spectral (or spatial) position holds one flattened canonical
// tensor slab, row-major with the last structural index fastest.
class GTensor {
public:
  GTensor() = default;

  static GTensor zero(AlgebraPtr a, std::vector<int> dims, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    const std::int64_t n = element_count(dims);
    std::vector<Eigen::VectorXcd> slabs(a->dim(), Eigen::VectorXcd::Zero(n));
    return GTensor(std::move(a), std::move(dims), std::move(slabs), d);
  }

  // Array layout (I_1..I_N, D_1..D_M): the t-scalar modes lead and vary
  // slowest, so each t-scalar position owns one contiguous structural chunk.
  static GTensor from_array(AlgebraPtr a, const DenseArray& arr, int structural_order, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    if (arr.order() != a->order() + structural_order)
      throw ConfigError("array order must be algebra order plus structural order");
    for (int m = 0; m < a->order(); ++m)
      if (arr.dims()[m] != a->shape()[m]) throw ConfigError("leading array modes must match the algebra shape");
    std::vector<int> dims(arr.dims().begin() + a->order(), arr.dims().end());
    const std::int64_t n = element_count(dims);
    std::vector<Eigen::VectorXcd> slabs(a->dim());
    for (int k = 0; k < a->dim(); ++k) {
      Eigen::VectorXcd s(n);
      for (std::int64_t i = 0; i < n; ++i) s(i) = arr[static_cast<std::int64_t>(k) * n + i];
      slabs[k] = std::move(s);
    }
    return GTensor(std::move(a), std::move(dims), std::move(slabs), d);
  }

  // Canonical tensor: the degenerate algebra with K = 1.
  static GTensor from_canonical(const DenseArray& arr, Domain d = Domain::Spatial) {
    return from_array(Algebra::complex_field(), arr, arr.order(), d);
  }

  static GTensor from_slabs(AlgebraPtr a, std::vector<int> dims, std::vector<Eigen::VectorXcd> slabs, Domain d) {
    if (!a) throw ConfigError("null algebra");
    if (static_cast<int>(slabs.size()) != a->dim()) throw ConfigError("one slab per spectral position required");
    const std::int64_t n = element_count(dims);
    for (const auto& s : slabs)
      if (s.size() != n) throw ConfigError("slab size does not match structural dimensions");
    return GTensor(std::move(a), std::move(dims), std::move(slabs), d);
  }

  DenseArray to_array() const {
    std::vector<int> dims = alg_->shape();
    dims.insert(dims.end(), dims_.begin(), dims_.end());
    DenseArray out(dims);
    const std::int64_t n = slab_size();
    for (int k = 0; k < alg_->dim(); ++k)
      for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::int64_t>(k) * n + i] = slabs_[k](i);
    return out;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  Domain domain() const { return dom_; }
  const std::vector<int>& dims() const { return dims_; }
  int order() const { return static_cast<int>(dims_.size()); }
  int mode_dim(int k) const { return dims_[k]; }
  std::int64_t slab_size() const { return slabs_.empty() ? 0 : slabs_[0].size(); }
  const Eigen::VectorXcd& slab(int k) const { return slabs_[k]; }

  TScalar entry(const std::vector<int>& idx) const {
    DenseArray probe(dims_);
    const std::int64_t flat = probe.flat_index(idx);
    Eigen::VectorXcd v(alg_->dim());
    for (int k = 0; k < alg_->dim(); ++k) v(k) = slabs_[k](flat);
    return TScalar::from_flat(alg_, std::move(v), dom_);
  }

  GTensor to_domain(Domain d) const {
    if (d == dom_) return *this;
    const Eigen::MatrixXcd& m = (d == Domain::Spectral) ? alg_->forward() : alg_->inverse();
    const int K = alg_->dim();
    const std::int64_t n = slab_size();
    Eigen::MatrixXcd stacked(K, n);
    for (int k = 0; k < K; ++k) stacked.row(k) = slabs_[k].transpose();
    Eigen::MatrixXcd mixed = m * stacked;
    std::vector<Eigen::VectorXcd> slabs(K);
    for (int k = 0; k < K; ++k) slabs[k] = mixed.row(k).transpose();
    return GTensor(alg_, dims_, std::move(slabs), d);
  }
  GTensor spectral() const { return to_domain(Domain::Spectral); }
  GTensor spatial() const { return to_domain(Domain::Spatial); }

  GTensor permuted_modes(const std::vector<int>& mode_order) const {
    std::vector<Eigen::VectorXcd> slabs(slabs_.size());
    std::vector<int> new_dims;
    for (std::size_t k = 0; k < slabs_.size(); ++k) {
      DenseArray wrapped(dims_, std::vector<cplx>(slabs_[k].data(), slabs_[k].data() + slabs_[k].size()));
      DenseArray p = wrapped.permuted(mode_order);
      if (k == 0) new_dims = p.dims();
      slabs[k] = Eigen::Map<const Eigen::VectorXcd>(p.data().data(), p.size());
    }
    return GTensor(alg_, std::move(new_dims), std::move(slabs), dom_);
  }

private:
  GTensor(AlgebraPtr a, std::vector<int> dims, std::vector<Eigen::VectorXcd> slabs, Domain d)
      : alg_(std::move(a)), dims_(std::move(dims)), slabs_(std::move(slabs)), dom_(d) {}

  AlgebraPtr alg_;
  std::vector<int> dims_;
  std::vector<Eigen::VectorXcd> slabs_;
  Domain dom_ = Domain::Spatial;

  friend GTensor mode_mul(const GTensor&, int, const TMatrix&);
  friend GTensor operator+(const GTensor&, const GTensor&);
  friend GTensor operator-(const GTensor&, const GTensor&);
  friend GTensor operator*(cplx, const GTensor&);
  friend GTensor stack_last(const std::vector<GTensor>&);
  friend GTensor slice_last(const GTensor&, int);
};

inline void check_mode(const GTensor& x, int k) {
  if (k < 0 || k >= x.order()) throw ConfigError("structural mode index out of range");
}

// Mode-k unfolding as a D_k x (prod of remaining dims) t-matrix.
inline TMatrix unfold(const GTensor& x, int k) {
  check_mode(x, k);
  const int K = x.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  parallel_for(K, [&](std::int64_t k2) { slabs[k2] = detail::unfold_slab(x.slab(static_cast<int>(k2)), x.dims(), k); });
  return TMatrix::from_slabs(x.algebra(), std::move(slabs), x.domain());
}

inline GTensor fold(const TMatrix& m, int k, const std::vector<int>& dims) {
  if (k < 0 || k >= static_cast<int>(dims.size())) throw ConfigError("structural mode index out of range");
  std::int64_t rest = 1;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (static_cast<int>(i) != k) rest *= dims[i];
  if (m.rows() != dims[k] || m.cols() != rest) throw ConfigError("matrix shape does not match fold dimensions");
  const int K = m.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K);
  for (int k2 = 0; k2 < K; ++k2) slabs[k2] = detail::fold_slab(m.slab(k2), dims, k);
  return GTensor::from_slabs(m.algebra(), dims, std::move(slabs), m.domain());
}

// Mode-k product: the mode-k unfolding is left-multiplied by a. Slabwise
// complex products in the spectral domain; two spatial operands give a
// spatial result.
inline GTensor mode_mul(const GTensor& x, int k, const TMatrix& a) {
  check_mode(x, k);
  require_same_algebra(x.algebra(), a.algebra());
  if (a.cols() != x.mode_dim(k)) throw ConfigError("mode product dimension mismatch");
  GTensor xs = x.spectral();
  TMatrix as = a.spectral();
  std::vector<int> new_dims = x.dims();
  new_dims[k] = a.rows();
  const int K = x.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K);
  parallel_for(K, [&](std::int64_t k2) {
    slabs[k2] = detail::fold_slab(as.slab(static_cast<int>(k2)) * detail::unfold_slab(xs.slabs_[k2], x.dims(), k), new_dims, k);
  });
  GTensor r(x.algebra(), std::move(new_dims), std::move(slabs), Domain::Spectral);
  if (x.domain() == Domain::Spatial && a.domain() == Domain::Spatial) return r.spatial();
  return r;
}

inline GTensor operator+(const GTensor& a, const GTensor& b) {
  require_same_algebra(a.algebra(), b.algebra());
  if (a.dims() != b.dims()) throw ConfigError("shape mismatch");
  const int K = a.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K);
  if (a.domain() == b.domain()) {
    for (int k = 0; k < K; ++k) slabs[k] = a.slab(k) + b.slab(k);
    return GTensor(a.algebra(), a.dims(), std::move(slabs), a.domain());
  }
  GTensor as = a.spectral(), bs = b.spectral();
  for (int k = 0; k < K; ++k) slabs[k] = as.slabs_[k] + bs.slabs_[k];
  return GTensor(a.algebra(), a.dims(), std::move(slabs), Domain::Spectral);
}

inline GTensor operator*(cplx alpha, const GTensor& a) {
  const int K = a.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K);
  for (int k = 0; k < K; ++k) slabs[k] = alpha * a.slab(k);
  return GTensor(a.algebra(), a.dims(), std::move(slabs), a.domain());
}

inline GTensor operator-(const GTensor& a, const GTensor& b) { return a + (cplx(-1.0, 0.0) * b); }

// Scalar Frobenius norm over the spectral entries; equals the norm of the
// block representation of any unfolding.
inline double frob_norm(const GTensor& x) {
  GTensor xs = x.spectral();
  double s = 0.0;
  for (int k = 0; k < x.algebra()->dim(); ++k) s += xs.slab(k).squaredNorm();
  return std::sqrt(s);
}

inline TScalar frob_norm_t(const GTensor& x) {
  GTensor xs = x.spectral();
  Eigen::VectorXcd v(x.algebra()->dim());
  for (int k = 0; k < x.algebra()->dim(); ++k) v(k) = cplx(xs.slab(k).norm(), 0.0);
  return TScalar::from_flat(x.algebra(), std::move(v), Domain::Spectral);
}

// Concatenation along a new trailing structural mode.
inline GTensor stack_last(const std::vector<GTensor>& parts) {
  if (parts.empty()) throw ConfigError("cannot stack an empty list");
  const int Q = static_cast<int>(parts.size());
  const GTensor& head = parts.front();
  for (const GTensor& p : parts) {
    require_same_algebra(head.algebra(), p.algebra());
    if (p.dims() != head.dims()) throw ConfigError("stacked tensors must share structural dimensions");
  }
  std::vector<int> dims = head.dims();
  dims.push_back(Q);
  const std::int64_t n = head.slab_size();
  const int K = head.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K, Eigen::VectorXcd(n * Q));
  for (int q = 0; q < Q; ++q) {
    GTensor p = parts[q].to_domain(head.domain());
    for (int k = 0; k < K; ++k)
      for (std::int64_t i = 0; i < n; ++i) slabs[k](i * Q + q) = p.slabs_[k](i);
  }
  return GTensor(head.algebra(), std::move(dims), std::move(slabs), head.domain());
}

// Fixes the trailing structural mode at index q.
inline GTensor slice_last(const GTensor& x, int q) {
  if (x.order() < 1) throw ConfigError("tensor has no structural modes");
  const int Q = x.dims().back();
  if (q < 0 || q >= Q) throw ConfigError("slice index out of range");
  std::vector<int> dims(x.dims().begin(), x.dims().end() - 1);
  const std::int64_t n = element_count(dims);
  const int K = x.algebra()->dim();
  std::vector<Eigen::VectorXcd> slabs(K, Eigen::VectorXcd(n));
  for (int k = 0; k < K; ++k)
    for (std::int64_t i = 0; i < n; ++i) slabs[k](i) = x.slab(k)(i * Q + q);
  return GTensor(x.algebra(), std::move(dims), std::move(slabs), x.domain());
}

inline double max_abs_diff(const GTensor& a, const GTensor& b) {
  require_same_algebra(a.algebra(), b.algebra());
  if (a.dims() != b.dims()) throw ConfigError("shape mismatch");
  const GTensor x = a.to_domain(b.domain());
  double m = 0.0;
  for (int k = 0; k < a.algebra()->dim(); ++k) m = std::max(m, (x.slab(k) - b.slab(k)).cwiseAbs().maxCoeff());
  return m;
}

inline double rel_frob_diff(const GTensor& a, const GTensor& b) {
  const GTensor d = a - b;
  const double den = frob_norm(b.to_domain(d.domain()));
  const double num = frob_norm(d);
  return den == 0.0 ? num : num / den;
}

}  // namespace talg
