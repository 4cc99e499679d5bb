#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "talg/dense_array.hpp"
#include "talg/errors.hpp"

namespace talg {

enum class Domain { Spatial, Spectral };
enum class TransformKind { Dft, Dct, Custom };

// The algebra of fixed-shape complex multiway arrays ("t-scalars").
//
// Addition is entrywise. The product is diagonalized by an invertible multiway
// transform: mode k of the array is multiplied by an I_k x I_k matrix W_k, the
// transformed ("spectral") entries multiply entrywise, and the literal inverse
// matrices map back. The algebra is therefore a direct sum of K = I_1*...*I_N
// copies of the complex field, one per spectral position.
//
// Spectral positions are enumerated row-major (last index fastest), so the
// full K x K transform is the Kronecker product of the mode matrices with
// mode 1 as the slowest factor.
class Algebra {
public:
  using Ptr = std::shared_ptr<const Algebra>;

  // Unnormalized discrete Fourier matrix per mode:
  //   W(m1, m2) = exp(-2*pi*i * m1 * m2 / I), zero-based indices.
  static Ptr dft(std::vector<int> shape) {
    if (shape.empty()) throw ConfigError("algebra shape needs at least one mode");
    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(shape.size());
    for (int n : shape) {
      check_mode_dim(n);
      Eigen::MatrixXcd w(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          double ang = -2.0 * std::numbers::pi * double(r) * double(c) / double(n);
          w(r, c) = cplx(std::cos(ang), std::sin(ang));
        }
      mats.push_back(std::move(w));
    }
    return Ptr(new Algebra(TransformKind::Dft, std::move(shape), std::move(mats), false));
  }

  // Cosine matrix per mode:
  //   W(m1, m2) = cos(pi * m1 * (m2 + 1/2) / I), zero-based indices.
  // The literal matrix has orthogonal rows of unequal norm; the orthonormal
  // variant rescales rows to make W unitary.
  static Ptr dct(std::vector<int> shape, bool orthonormal = false) {
    if (shape.empty()) throw ConfigError("algebra shape needs at least one mode");
    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(shape.size());
    for (int n : shape) {
      check_mode_dim(n);
      Eigen::MatrixXcd w(n, n);
      for (int r = 0; r < n; ++r) {
        double scale = 1.0;
        if (orthonormal) scale = (r == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int c = 0; c < n; ++c)
          w(r, c) = cplx(scale * std::cos(std::numbers::pi * double(r) * (double(c) + 0.5) / double(n)), 0.0);
      }
      mats.push_back(std::move(w));
    }
    return Ptr(new Algebra(TransformKind::Dct, std::move(shape), std::move(mats), orthonormal));
  }

  static Ptr custom(std::vector<int> shape, std::vector<Eigen::MatrixXcd> mats) {
    if (mats.size() != shape.size()) throw ConfigError("one transform matrix per mode required");
    for (std::size_t k = 0; k < shape.size(); ++k) {
      check_mode_dim(shape[k]);
      if (mats[k].rows() != shape[k] || mats[k].cols() != shape[k])
        throw ConfigError("transform matrix shape mismatch");
    }
    return Ptr(new Algebra(TransformKind::Custom, std::move(shape), std::move(mats), false));
  }

  // Degenerate algebra with an empty shape: K = 1, plain complex arithmetic.
  static Ptr complex_field() {
    return Ptr(new Algebra(TransformKind::Dft, {}, {}, false));
  }

  const std::vector<int>& shape() const { return shape_; }
  int order() const { return static_cast<int>(shape_.size()); }
  int dim() const { return dim_; }  // K
  TransformKind kind() const { return kind_; }
  bool orthonormal_variant() const { return orthonormal_; }
  bool trivial() const { return dim_ == 1; }

  const Eigen::MatrixXcd& mode_matrix(int k) const { return mats_[k]; }
  const Eigen::MatrixXcd& forward() const { return forward_; }
  const Eigen::MatrixXcd& inverse() const { return inverse_; }

  std::int64_t flat_index(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order()) throw ConfigError("index order mismatch");
    std::int64_t flat = 0;
    for (int m = 0; m < order(); ++m) {
      if (idx[m] < 0 || idx[m] >= shape_[m]) throw ConfigError("index out of range");
      flat = flat * shape_[m] + idx[m];
    }
    return flat;
  }

private:
  Algebra(TransformKind kind, std::vector<int> shape, std::vector<Eigen::MatrixXcd> mats, bool orthonormal)
      : kind_(kind), shape_(std::move(shape)), mats_(std::move(mats)), orthonormal_(orthonormal) {
    dim_ = 1;
    for (int n : shape_) dim_ *= n;
    std::vector<Eigen::MatrixXcd> inverses;
    inverses.reserve(mats_.size());
    for (const auto& w : mats_) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w);
      const auto& sv = svd.singularValues();
      const double smax = sv.size() ? sv(0) : 0.0;
      const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
      if (smax <= 0.0 || smin < 1e-12 * smax)
        throw ConfigError("transform matrix is singular or too ill-conditioned to invert");
      inverses.push_back(w.inverse());
    }
    forward_ = kron_all(mats_);
    inverse_ = kron_all(inverses);
  }

  static void check_mode_dim(int n) {
    if (n < 1) throw ConfigError("algebra mode dimensions must be positive");
  }

  // Kronecker product with the first factor slowest, matching row-major
  // enumeration of multi-indices.
  static Eigen::MatrixXcd kron_all(const std::vector<Eigen::MatrixXcd>& mats) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    for (const auto& m : mats) {
      Eigen::MatrixXcd next(acc.rows() * m.rows(), acc.cols() * m.cols());
      for (Eigen::Index r = 0; r < acc.rows(); ++r)
        for (Eigen::Index c = 0; c < acc.cols(); ++c) next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) = acc(r, c) * m;
      acc = std::move(next);
    }
    return acc;
  }

  TransformKind kind_;
  std::vector<int> shape_;
  std::vector<Eigen::MatrixXcd> mats_;
  bool orthonormal_;
  int dim_ = 1;
  Eigen::MatrixXcd forward_, inverse_;
};

using AlgebraPtr = Algebra::Ptr;

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!a || !b) return false;
  if (a == b) return true;
  if (a->kind() != b->kind() || a->shape() != b->shape()) return false;
  if (a->kind() != TransformKind::Custom) return a->orthonormal_variant() == b->orthonormal_variant();
  for (int k = 0; k < a->order(); ++k)
    if (a->mode_matrix(k) != b->mode_matrix(k)) return false;
  return true;
}

inline void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!same_algebra(a, b)) throw ConfigError("operands belong to different algebras");
}

}  // namespace talg
