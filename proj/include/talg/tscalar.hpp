#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "talg/algebra.hpp"

namespace talg {

// Per-entry tolerance used by the self-conjugacy and partial-order checks.
inline double spectral_tol(double magnitude) { return 1e-10 * (1.0 + magnitude); }

// One element of the algebra: a complex multiway array of the algebra's shape,
// held in either the spatial or the spectral domain. Values are immutable;
// operations return new values. Entries are kept flat in row-major order.
class TScalar {
public:
  TScalar() = default;

  static TScalar zero(AlgebraPtr a, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    Eigen::Index k = a->dim();
    return TScalar(std::move(a), Eigen::VectorXcd::Zero(k), d);
  }

  // Multiplicative identity: the all-ones spectrum.
  static TScalar identity(AlgebraPtr a) {
    if (!a) throw ConfigError("null algebra");
    Eigen::Index k = a->dim();
    return TScalar(std::move(a), Eigen::VectorXcd::Ones(k), Domain::Spectral);
  }

  // alpha times the identity; these span the subalgebra isomorphic to the
  // complex field.
  static TScalar inception(AlgebraPtr a, cplx alpha) {
    if (!a) throw ConfigError("null algebra");
    Eigen::Index k = a->dim();
    return TScalar(std::move(a), Eigen::VectorXcd::Constant(k, alpha), Domain::Spectral);
  }

  static TScalar from_flat(AlgebraPtr a, Eigen::VectorXcd v, Domain d) {
    if (!a || v.size() != a->dim()) throw ConfigError("flat data size does not match algebra");
    return TScalar(std::move(a), std::move(v), d);
  }

  static TScalar from_array(AlgebraPtr a, const DenseArray& arr, Domain d = Domain::Spatial) {
    if (!a) throw ConfigError("null algebra");
    if (arr.dims() != a->shape()) throw ConfigError("array shape does not match algebra");
    Eigen::VectorXcd v(a->dim());
    for (std::int64_t i = 0; i < arr.size(); ++i) v(i) = arr[i];
    return TScalar(std::move(a), std::move(v), d);
  }

  const AlgebraPtr& algebra() const { return alg_; }
  Domain domain() const { return dom_; }
  const Eigen::VectorXcd& flat() const { return v_; }

  DenseArray to_array() const {
    DenseArray out(alg_->shape());
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = v_(i);
    return out;
  }

  TScalar to_domain(Domain d) const {
    if (d == dom_) return *this;
    const Eigen::MatrixXcd& m = (d == Domain::Spectral) ? alg_->forward() : alg_->inverse();
    return TScalar(alg_, m * v_, d);
  }
  TScalar spectral() const { return to_domain(Domain::Spectral); }
  TScalar spatial() const { return to_domain(Domain::Spatial); }

  cplx entry(const std::vector<int>& idx) const { return v_(alg_->flat_index(idx)); }

private:
  TScalar(AlgebraPtr a, Eigen::VectorXcd v, Domain d) : alg_(std::move(a)), v_(std::move(v)), dom_(d) {}

  AlgebraPtr alg_;
  Eigen::VectorXcd v_;
  Domain dom_ = Domain::Spatial;

  friend TScalar tmul(const TScalar&, const TScalar&);
  friend TScalar operator+(const TScalar&, const TScalar&);
  friend TScalar operator-(const TScalar&, const TScalar&);
  friend TScalar operator*(cplx, const TScalar&);
  friend TScalar conj(const TScalar&);
  friend TScalar modulus(const TScalar&);
  friend TScalar spectral_sqrt(const TScalar&);
};

// Product, diagonal in the spectral domain. Two spatial operands give a
// spatial result; otherwise the result stays spectral.
inline TScalar tmul(const TScalar& x, const TScalar& y) {
  require_same_algebra(x.algebra(), y.algebra());
  TScalar xs = x.spectral(), ys = y.spectral();
  TScalar r(x.algebra(), xs.flat().cwiseProduct(ys.flat()), Domain::Spectral);
  if (x.domain() == Domain::Spatial && y.domain() == Domain::Spatial) return r.spatial();
  return r;
}

inline TScalar operator+(const TScalar& x, const TScalar& y) {
  require_same_algebra(x.algebra(), y.algebra());
  if (x.domain() == y.domain()) return TScalar(x.algebra(), x.flat() + y.flat(), x.domain());
  return TScalar(x.algebra(), x.spectral().flat() + y.spectral().flat(), Domain::Spectral);
}

inline TScalar operator-(const TScalar& x, const TScalar& y) {
  require_same_algebra(x.algebra(), y.algebra());
  if (x.domain() == y.domain()) return TScalar(x.algebra(), x.flat() - y.flat(), x.domain());
  return TScalar(x.algebra(), x.spectral().flat() - y.spectral().flat(), Domain::Spectral);
}

inline TScalar operator*(cplx alpha, const TScalar& x) {
  return TScalar(x.algebra(), alpha * x.flat(), x.domain());
}
inline TScalar operator*(const TScalar& x, cplx alpha) { return alpha * x; }

// Conjugation acts entrywise on the spectrum; the result is returned in the
// operand's domain.
inline TScalar conj(const TScalar& x) {
  TScalar r(x.algebra(), x.spectral().flat().conjugate(), Domain::Spectral);
  return x.domain() == Domain::Spatial ? r.spatial() : r;
}

// Entrywise modulus of the spectrum; always a self-conjugate nonnegative
// value, returned in the spectral domain.
inline TScalar modulus(const TScalar& x) {
  Eigen::VectorXcd v = x.spectral().flat();
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(std::abs(v(i)), 0.0);
  return TScalar(x.algebra(), std::move(v), Domain::Spectral);
}

// Entrywise principal square root of the spectrum.
inline TScalar spectral_sqrt(const TScalar& x) {
  Eigen::VectorXcd v = x.spectral().flat();
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::sqrt(v(i));
  return TScalar(x.algebra(), std::move(v), Domain::Spectral);
}

// Spectral entries in row-major enumeration order; these are exactly the
// eigenvalues of the diagonal matrix representation.
inline std::vector<cplx> eigenvalues(const TScalar& x) {
  Eigen::VectorXcd v = x.spectral().flat();
  return std::vector<cplx>(v.data(), v.data() + v.size());
}

inline cplx trace(const TScalar& x) { return x.spectral().flat().sum(); }

// Frobenius norm in the spectral domain: sqrt of the summed squared moduli of
// the spectrum. Coincides with the spatial entrywise norm only for isometric
// transforms.
inline double frob_norm(const TScalar& x) { return x.spectral().flat().norm(); }

inline bool is_self_conjugate(const TScalar& x) {
  Eigen::VectorXcd v = x.spectral().flat();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i).imag()) > spectral_tol(std::abs(v(i)))) return false;
  return true;
}

inline bool is_nonnegative(const TScalar& x) {
  if (!is_self_conjugate(x)) return false;
  Eigen::VectorXcd v = x.spectral().flat();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i).real() < -spectral_tol(std::abs(v(i)))) return false;
  return true;
}

// Partial order: x <= y iff y - x has a nonnegative spectrum. Defined only for
// self-conjugate operands.
inline bool partial_le(const TScalar& x, const TScalar& y) {
  if (!is_self_conjugate(x) || !is_self_conjugate(y))
    throw ConfigError("partial order requires self-conjugate operands");
  return is_nonnegative(y - x);
}

}  // namespace talg
