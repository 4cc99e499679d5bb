#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "talg/tscalar.hpp"

namespace talg {

// Matrix over the algebra: D1 x D2 t-scalar entries. Storage is one complex
// D1 x D2 slab per spectral (or spatial) position, i.e. the t-scalar modes
// lead and vary slowest in the flattened layout. In the spectral domain slab k
// is an ordinary complex matrix and most algorithms act on slabs
// independently.
class TMatrix {
public:
  TMatrix() = default;

  static TMatrix zero(AlgebraPtr a, int rows, int cols, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    if (rows < 1 || cols < 1) throw ConfigError("matrix dimensions must be positive");
    std::vector<Eigen::MatrixXcd> slabs(a->dim(), Eigen::MatrixXcd::Zero(rows, cols));
    return TMatrix(std::move(a), std::move(slabs), d);
  }

  // Identity: diagonal of multiplicative-identity t-scalars, so every spectral
  // slab is the ordinary identity matrix.
  static TMatrix identity(AlgebraPtr a, int n) {
    if (!a) throw ConfigError("null algebra");
    if (n < 1) throw ConfigError("matrix dimensions must be positive");
    std::vector<Eigen::MatrixXcd> slabs(a->dim(), Eigen::MatrixXcd::Identity(n, n));
    return TMatrix(std::move(a), std::move(slabs), Domain::Spectral);
  }

  static TMatrix from_slabs(AlgebraPtr a, std::vector<Eigen::MatrixXcd> slabs, Domain d) {
    if (!a) throw ConfigError("null algebra");
    if (static_cast<int>(slabs.size()) != a->dim()) throw ConfigError("one slab per spectral position required");
    for (const auto& s : slabs)
      if (s.rows() != slabs[0].rows() || s.cols() != slabs[0].cols() || s.rows() < 1 || s.cols() < 1)
        throw ConfigError("slab shapes must agree and be nonempty");
    return TMatrix(std::move(a), std::move(slabs), d);
  }

  // Array layout (I_1..I_N, D1, D2), row-major: the chunk for each t-scalar
  // position is one contiguous D1 x D2 matrix.
  static TMatrix from_array(AlgebraPtr a, const DenseArray& arr, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    if (arr.order() != a->order() + 2) throw ConfigError("array must carry the algebra modes plus two matrix modes");
    for (int m = 0; m < a->order(); ++m)
      if (arr.dims()[m] != a->shape()[m]) throw ConfigError("leading array modes must match the algebra shape");
    const int rows = arr.dims()[a->order()];
    const int cols = arr.dims()[a->order() + 1];
    std::vector<Eigen::MatrixXcd> slabs(a->dim());
    std::int64_t pos = 0;
    for (int k = 0; k < a->dim(); ++k) {
      Eigen::MatrixXcd s(rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) s(r, c) = arr[pos++];
      slabs[k] = std::move(s);
    }
    return TMatrix(std::move(a), std::move(slabs), d);
  }

  DenseArray to_array() const {
    std::vector<int> dims = alg_->shape();
    dims.push_back(rows());
    dims.push_back(cols());
    DenseArray out(dims);
    std::int64_t pos = 0;
    for (int k = 0; k < alg_->dim(); ++k)
      for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) out[pos++] = slabs_[k](r, c);
    return out;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  Domain domain() const { return dom_; }
  int rows() const { return slabs_.empty() ? 0 : static_cast<int>(slabs_[0].rows()); }
  int cols() const { return slabs_.empty() ? 0 : static_cast<int>(slabs_[0].cols()); }
  bool empty() const { return slabs_.empty(); }
  const Eigen::MatrixXcd& slab(int k) const { return slabs_[k]; }
  const std::vector<Eigen::MatrixXcd>& slabs() const { return slabs_; }

  TScalar entry(int r, int c) const {
    Eigen::VectorXcd v(alg_->dim());
    for (int k = 0; k < alg_->dim(); ++k) v(k) = slabs_[k](r, c);
    return TScalar::from_flat(alg_, std::move(v), dom_);
  }

  void set_entry(int r, int c, const TScalar& x) {
    require_same_algebra(alg_, x.algebra());
    const Eigen::VectorXcd v = x.to_domain(dom_).flat();
    for (int k = 0; k < alg_->dim(); ++k) slabs_[k](r, c) = v(k);
  }

  TMatrix to_domain(Domain d) const {
    if (d == dom_) return *this;
    const Eigen::MatrixXcd& m = (d == Domain::Spectral) ? alg_->forward() : alg_->inverse();
    const int K = alg_->dim();
    const std::int64_t n = static_cast<std::int64_t>(rows()) * cols();
    Eigen::MatrixXcd stacked(K, n);
    for (int k = 0; k < K; ++k)
      stacked.row(k) = Eigen::Map<const Eigen::VectorXcd>(slabs_[k].data(), n).transpose();
    Eigen::MatrixXcd mixed = m * stacked;
    std::vector<Eigen::MatrixXcd> slabs(K);
    for (int k = 0; k < K; ++k) {
      Eigen::MatrixXcd s(rows(), cols());
      Eigen::Map<Eigen::VectorXcd>(s.data(), n) = mixed.row(k).transpose();
      slabs[k] = std::move(s);
    }
    return TMatrix(alg_, std::move(slabs), d);
  }
  TMatrix spectral() const { return to_domain(Domain::Spectral); }
  TMatrix spatial() const { return to_domain(Domain::Spatial); }

private:
  TMatrix(AlgebraPtr a, std::vector<Eigen::MatrixXcd> slabs, Domain d)
      : alg_(std::move(a)), slabs_(std::move(slabs)), dom_(d) {}

  AlgebraPtr alg_;
  std::vector<Eigen::MatrixXcd> slabs_;
  Domain dom_ = Domain::Spatial;

  friend TMatrix tmatmul(const TMatrix&, const TMatrix&);
  friend TMatrix conj_transpose(const TMatrix&);
  friend TMatrix operator+(const TMatrix&, const TMatrix&);
  friend TMatrix operator*(cplx, const TMatrix&);
};

// t-vectors are the single-column case.
using TVector = TMatrix;

// Matrix product over the algebra: slabwise complex products in the spectral
// domain. Two spatial operands give a spatial result.
inline TMatrix tmatmul(const TMatrix& a, const TMatrix& b) {
  require_same_algebra(a.algebra(), b.algebra());
  if (a.cols() != b.rows()) throw ConfigError("inner dimensions do not agree");
  TMatrix as = a.spectral(), bs = b.spectral();
  const int K = a.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  for (int k = 0; k < K; ++k) slabs[k] = as.slabs_[k] * bs.slabs_[k];
  TMatrix r(a.algebra(), std::move(slabs), Domain::Spectral);
  if (a.domain() == Domain::Spatial && b.domain() == Domain::Spatial) return r.spatial();
  return r;
}

// Conjugate transpose: slabwise adjoint in the spectral domain, returned in
// the operand's domain.
inline TMatrix conj_transpose(const TMatrix& a) {
  TMatrix as = a.spectral();
  std::vector<Eigen::MatrixXcd> slabs(as.slabs_.size());
  for (std::size_t k = 0; k < slabs.size(); ++k) slabs[k] = as.slabs_[k].adjoint();
  TMatrix r(a.algebra(), std::move(slabs), Domain::Spectral);
  return a.domain() == Domain::Spatial ? r.spatial() : r;
}

inline TMatrix operator+(const TMatrix& a, const TMatrix& b) {
  require_same_algebra(a.algebra(), b.algebra());
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("shape mismatch");
  const int K = a.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  if (a.domain() == b.domain()) {
    for (int k = 0; k < K; ++k) slabs[k] = a.slab(k) + b.slab(k);
    return TMatrix(a.algebra(), std::move(slabs), a.domain());
  }
  TMatrix as = a.spectral(), bs = b.spectral();
  for (int k = 0; k < K; ++k) slabs[k] = as.slabs_[k] + bs.slabs_[k];
  return TMatrix(a.algebra(), std::move(slabs), Domain::Spectral);
}

inline TMatrix operator-(const TMatrix& a, const TMatrix& b) {
  return a + (cplx(-1.0, 0.0) * b);
}

inline TMatrix operator*(cplx alpha, const TMatrix& a) {
  std::vector<Eigen::MatrixXcd> slabs(a.slabs().size());
  for (std::size_t k = 0; k < slabs.size(); ++k) slabs[k] = alpha * a.slab(static_cast<int>(k));
  return TMatrix::from_slabs(a.algebra(), std::move(slabs), a.domain());
}

// Scalar Frobenius norm: the norm of the block representation, summed over
// spectral slabs.
inline double frob_norm(const TMatrix& a) {
  TMatrix as = a.spectral();
  double s = 0.0;
  for (int k = 0; k < a.algebra()->dim(); ++k) s += as.slab(k).squaredNorm();
  return std::sqrt(s);
}

// t-scalar-valued Frobenius norm: spectral entry k is the plain Frobenius norm
// of slab k. Always self-conjugate and nonnegative.
inline TScalar frob_norm_t(const TMatrix& a) {
  TMatrix as = a.spectral();
  Eigen::VectorXcd v(a.algebra()->dim());
  for (int k = 0; k < a.algebra()->dim(); ++k) v(k) = cplx(as.slab(k).norm(), 0.0);
  return TScalar::from_flat(a.algebra(), std::move(v), Domain::Spectral);
}

inline TScalar trace_t(const TMatrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("trace requires a square t-matrix");
  TMatrix as = a.spectral();
  Eigen::VectorXcd v(a.algebra()->dim());
  for (int k = 0; k < a.algebra()->dim(); ++k) v(k) = as.slab(k).trace();
  return TScalar::from_flat(a.algebra(), std::move(v), Domain::Spectral);
}

// Dense block representation: a K*D1 x K*D2 complex matrix of D1 x D2 blocks,
// where block (i, j) is diagonal and carries the spectrum of entry (i, j).
inline Eigen::MatrixXcd block_matrix_repr(const TMatrix& a) {
  TMatrix as = a.spectral();
  const int K = a.algebra()->dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K) * a.rows(),
                                              static_cast<Eigen::Index>(K) * a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < K; ++k) m(static_cast<Eigen::Index>(i) * K + k, static_cast<Eigen::Index>(j) * K + k) = as.slab(k)(i, j);
  return m;
}

// Inverse of block_matrix_repr. Off-diagonal block entries beyond
// tol_rel * max|entry| are rejected.
inline TMatrix tmatrix_from_block(AlgebraPtr alg, const Eigen::MatrixXcd& m, double tol_rel = 1e-10) {
  if (!alg) throw ConfigError("null algebra");
  const int K = alg->dim();
  if (m.rows() % K != 0 || m.cols() % K != 0) throw ConfigError("block matrix size is not a multiple of the algebra dimension");
  const int rows = static_cast<int>(m.rows()) / K;
  const int cols = static_cast<int>(m.cols()) / K;
  if (rows < 1 || cols < 1) throw ConfigError("block matrix is empty");
  const double tol = tol_rel * (m.cwiseAbs().maxCoeff() + 1e-300);
  std::vector<Eigen::MatrixXcd> slabs(K, Eigen::MatrixXcd::Zero(rows, cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k1 = 0; k1 < K; ++k1)
        for (int k2 = 0; k2 < K; ++k2) {
          const cplx v = m(static_cast<Eigen::Index>(i) * K + k1, static_cast<Eigen::Index>(j) * K + k2);
          if (k1 == k2) {
            slabs[k1](i, j) = v;
          } else if (std::abs(v) > tol) {
            throw ConfigError("off-diagonal block entries exceed tolerance; not a valid block representation");
          }
        }
  return TMatrix::from_slabs(std::move(alg), std::move(slabs), Domain::Spectral);
}

inline TMatrix left_cols(const TMatrix& a, int r) {
  if (r < 0 || r > a.cols()) throw ConfigError("column count out of range");
  const int K = a.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  for (int k = 0; k < K; ++k) slabs[k] = a.slab(k).leftCols(r);
  return TMatrix::from_slabs(a.algebra(), std::move(slabs), a.domain());
}

inline double max_abs_diff(const TMatrix& a, const TMatrix& b) {
  require_same_algebra(a.algebra(), b.algebra());
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("shape mismatch");
  const TMatrix x = a.to_domain(b.domain());
  double m = 0.0;
  for (int k = 0; k < a.algebra()->dim(); ++k) m = std::max(m, (x.slab(k) - b.slab(k)).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace talg
