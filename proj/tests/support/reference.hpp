#pragma once

// Independent reference implementations the test suite checks the library
// against. Everything here works on plain dense arrays with its own index
// arithmetic and its own unfolding layout (trailing mode fastest, the
// opposite of the library's choice) so agreement is not a tautology.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <random>
#include <vector>

#include "talg/dense_array.hpp"

namespace ref {

using talg::cplx;
using talg::DenseArray;

inline std::vector<std::int64_t> strides_last_fastest(const std::vector<int>& dims) {
  std::vector<std::int64_t> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

// ---- random data ----------------------------------------------------------

inline DenseArray random_array(const std::vector<int>& dims, std::uint64_t seed, bool real_only = false) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseArray a(dims);
  for (std::int64_t i = 0; i < a.size(); ++i) a[i] = cplx(nd(gen), real_only ? 0.0 : nd(gen));
  return a;
}

// ---- N-way circular convolution ------------------------------------------

// Brute force over every output position and every shift.
inline DenseArray circular_convolution(const DenseArray& a, const DenseArray& b) {
  const std::vector<int>& dims = a.dims();
  DenseArray out(dims);
  const int N = static_cast<int>(dims.size());
  std::vector<int> p(N, 0), q(N, 0), r(N, 0);
  const std::vector<std::int64_t> st = strides_last_fastest(dims);
  auto flat = [&](const std::vector<int>& idx) {
    std::int64_t f = 0;
    for (int i = 0; i < N; ++i) f += idx[i] * st[i];
    return f;
  };
  do {
    cplx acc = 0.0;
    std::fill(q.begin(), q.end(), 0);
    do {
      for (int i = 0; i < N; ++i) r[i] = ((p[i] - q[i]) % dims[i] + dims[i]) % dims[i];
      acc += a[flat(q)] * b[flat(r)];
      int i = N - 1;
      while (i >= 0 && ++q[i] == dims[i]) q[i--] = 0;
      if (i < 0) break;
    } while (true);
    out[flat(p)] = acc;
    int i = N - 1;
    while (i >= 0 && ++p[i] == dims[i]) p[i--] = 0;
    if (i < 0) break;
  } while (true);
  return out;
}

// ---- mode-wise linear maps ------------------------------------------------

// Applies A along one mode by direct summation.
inline DenseArray mode_apply(const DenseArray& x, int mode, const Eigen::MatrixXcd& A) {
  std::vector<int> odims = x.dims();
  const int D = odims[mode];
  odims[mode] = static_cast<int>(A.rows());
  DenseArray out(odims);
  const int N = static_cast<int>(odims.size());
  const std::vector<std::int64_t> ist = strides_last_fastest(x.dims());
  const std::vector<std::int64_t> ost = strides_last_fastest(odims);
  std::vector<int> idx(N, 0);
  do {
    cplx acc = 0.0;
    std::int64_t base = 0;
    for (int i = 0; i < N; ++i)
      if (i != mode) base += idx[i] * ist[i];
    for (int d = 0; d < D; ++d) acc += A(idx[mode], d) * x[base + d * ist[mode]];
    std::int64_t o = 0;
    for (int i = 0; i < N; ++i) o += idx[i] * ost[i];
    out[o] = acc;
    int i = N - 1;
    while (i >= 0 && ++idx[i] == odims[i]) idx[i--] = 0;
    if (i < 0) break;
  } while (true);
  return out;
}

// Per-mode transforms applied in sequence; the reference for any
// "full transform = product over modes" claim.
inline DenseArray multiway_apply(const DenseArray& x, const std::vector<Eigen::MatrixXcd>& mats) {
  DenseArray y = x;
  for (std::size_t m = 0; m < mats.size(); ++m) y = mode_apply(y, static_cast<int>(m), mats[m]);
  return y;
}

// ---- canonical HOSVD / HOOI ----------------------------------------------

// Unfolding with the remaining modes enumerated in ascending order and the
// trailing one fastest.
inline Eigen::MatrixXcd unfold(const DenseArray& x, int mode) {
  const std::vector<int>& dims = x.dims();
  const int N = static_cast<int>(dims.size());
  std::int64_t cols = 1;
  for (int i = 0; i < N; ++i)
    if (i != mode) cols *= dims[i];
  Eigen::MatrixXcd M(dims[mode], cols);
  std::vector<int> idx(N, 0);
  const std::vector<std::int64_t> ist = strides_last_fastest(dims);
  do {
    std::int64_t col = 0;
    for (int i = 0; i < N; ++i)
      if (i != mode) col = col * dims[i] + idx[i];
    std::int64_t f = 0;
    for (int i = 0; i < N; ++i) f += idx[i] * ist[i];
    M(idx[mode], col) = x[f];
    int i = N - 1;
    while (i >= 0 && ++idx[i] == dims[i]) idx[i--] = 0;
    if (i < 0) break;
  } while (true);
  return M;
}

inline Eigen::MatrixXcd leading_left_vectors(const Eigen::MatrixXcd& M, int r) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(r);
}

struct HosvdRef {
  std::vector<Eigen::MatrixXcd> factors;
  DenseArray approx;
};

inline HosvdRef hosvd(const DenseArray& x, const std::vector<int>& ranks) {
  HosvdRef out;
  out.approx = x;
  const int N = static_cast<int>(x.dims().size());
  for (int k = 0; k < N; ++k) out.factors.push_back(leading_left_vectors(unfold(x, k), ranks[k]));
  for (int k = 0; k < N; ++k) {
    const Eigen::MatrixXcd p = out.factors[k] * out.factors[k].adjoint();
    out.approx = mode_apply(out.approx, k, p);
  }
  return out;
}

struct HooiRef {
  DenseArray approx;
  std::vector<double> objectives;  // initial value, then one per accepted sweep
  int sweeps = 0;
};

inline double err_norm(const DenseArray& a, const DenseArray& b) {
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

// Alternating refinement: per mode, project along every other mode, then
// refresh that mode's factor from the unfolding of the partial projection.
inline HooiRef hooi(const DenseArray& x, const std::vector<int>& ranks, int max_iters, double tol) {
  const int N = static_cast<int>(x.dims().size());
  std::vector<Eigen::MatrixXcd> u(N);
  for (int k = 0; k < N; ++k) u[k] = leading_left_vectors(unfold(x, k), ranks[k]);
  auto project_all = [&](int skip) {
    DenseArray y = x;
    for (int k = 0; k < N; ++k) {
      if (k == skip) continue;
      if (ranks[k] == x.dims()[k]) continue;
      y = mode_apply(y, k, Eigen::MatrixXcd(u[k] * u[k].adjoint()));
    }
    return y;
  };
  HooiRef out;
  out.approx = project_all(-1);
  out.objectives.push_back(err_norm(x, out.approx));
  for (int it = 0; it < max_iters; ++it) {
    for (int k = 0; k < N; ++k) {
      if (ranks[k] == x.dims()[k]) continue;
      u[k] = leading_left_vectors(unfold(project_all(k), k), ranks[k]);
    }
    DenseArray approx = project_all(-1);
    const double obj = err_norm(x, approx);
    const double prev = out.objectives.back();
    out.approx = approx;
    out.objectives.push_back(obj);
    ++out.sweeps;
    if (prev - obj <= tol * std::max(prev, 1e-300)) break;
  }
  return out;
}

}  // namespace ref
