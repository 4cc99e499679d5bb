#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "talg/errors.hpp"

namespace talg {

using cplx = std::complex<double>;

inline std::int64_t element_count(const std::vector<int>& dims) {
  std::int64_t n = 1;
  for (int d : dims) {
    if (d < 1) throw ConfigError("dimensions must be positive");
    n *= d;
  }
  return n;
}

// Row-major strides: last index fastest.
inline std::vector<std::int64_t> row_major_strides(const std::vector<int>& dims) {
  std::vector<std::int64_t> s(dims.size(), 1);
  for (int m = static_cast<int>(dims.size()) - 2; m >= 0; --m) s[m] = s[m + 1] * dims[m + 1];
  return s;
}

// Dense complex multiway array, stored row-major (last index fastest).
class DenseArray {
public:
  DenseArray() = default;

  explicit DenseArray(std::vector<int> dims)
      : dims_(std::move(dims)), data_(element_count(dims_), cplx(0.0)) {}

  DenseArray(std::vector<int> dims, std::vector<cplx> data) : dims_(std::move(dims)), data_(std::move(data)) {
    if (static_cast<std::int64_t>(data_.size()) != element_count(dims_))
      throw ConfigError("payload size does not match dimensions");
  }

  static DenseArray from_real(std::vector<int> dims, const std::vector<double>& vals) {
    DenseArray a(std::move(dims));
    if (vals.size() != a.data_.size()) throw ConfigError("payload size does not match dimensions");
    for (std::size_t i = 0; i < vals.size(); ++i) a.data_[i] = cplx(vals[i], 0.0);
    return a;
  }

  const std::vector<int>& dims() const { return dims_; }
  int order() const { return static_cast<int>(dims_.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }
  cplx& operator[](std::int64_t i) { return data_[i]; }
  const cplx& operator[](std::int64_t i) const { return data_[i]; }

  std::int64_t flat_index(const std::vector<int>& idx) const {
    if (idx.size() != dims_.size()) throw ConfigError("index order mismatch");
    std::int64_t flat = 0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      if (idx[m] < 0 || idx[m] >= dims_[m]) throw ConfigError("index out of range");
      flat = flat * dims_[m] + idx[m];
    }
    return flat;
  }

  cplx& at(const std::vector<int>& idx) { return data_[flat_index(idx)]; }
  const cplx& at(const std::vector<int>& idx) const { return data_[flat_index(idx)]; }

  // mode_order[m] names the source mode that becomes mode m of the result.
  DenseArray permuted(const std::vector<int>& mode_order) const {
    if (mode_order.size() != dims_.size()) throw ConfigError("permutation order mismatch");
    std::vector<bool> seen(dims_.size(), false);
    std::vector<int> new_dims(dims_.size());
    for (std::size_t m = 0; m < mode_order.size(); ++m) {
      int src = mode_order[m];
      if (src < 0 || src >= order() || seen[src]) throw ConfigError("invalid mode permutation");
      seen[src] = true;
      new_dims[m] = dims_[src];
    }
    DenseArray out(new_dims);
    const auto src_strides = row_major_strides(dims_);
    std::vector<int> idx(dims_.size(), 0);
    for (std::int64_t flat = 0; flat < out.size(); ++flat) {
      std::int64_t src_flat = 0;
      for (std::size_t m = 0; m < idx.size(); ++m) src_flat += idx[m] * src_strides[mode_order[m]];
      out.data_[flat] = data_[src_flat];
      for (int m = static_cast<int>(idx.size()) - 1; m >= 0; --m) {
        if (++idx[m] < new_dims[m]) break;
        idx[m] = 0;
      }
    }
    return out;
  }

  double frob_norm() const {
    double s = 0.0;
    for (const cplx& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_abs_imag() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  // Real export. Residual imaginary parts must be negligible relative to the
  // array norm; anything larger signals a bug upstream and is rejected.
  std::vector<double> to_real(double tol_rel = 1e-8) const {
    const double limit = tol_rel * (frob_norm() + 1e-300);
    if (max_abs_imag() > limit)
      throw ConfigError("imaginary residue " + std::to_string(max_abs_imag()) +
                        " exceeds real-export tolerance " + std::to_string(limit));
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = data_[i].real();
    return out;
  }

private:
  std::vector<int> dims_;
  std::vector<cplx> data_;
};

inline double max_abs_diff(const DenseArray& a, const DenseArray& b) {
  if (a.dims() != b.dims()) throw ConfigError("shape mismatch");
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_frob_diff(const DenseArray& a, const DenseArray& b) {
  if (a.dims() != b.dims()) throw ConfigError("shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(a[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace talg
