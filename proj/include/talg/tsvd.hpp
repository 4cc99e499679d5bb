#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "talg/parallel.hpp"
#include "talg/tmatrix.hpp"

namespace talg {

namespace detail {

struct SlabSvd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd v;
};

// Deterministic complex SVD, singular values descending. Jacobi for small
// slabs (better small-case accuracy), divide-and-conquer otherwise.
inline SlabSvd slab_svd(const Eigen::MatrixXcd& a, bool full) {
  const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                             : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  SlabSvd out;
  if (std::max(a.rows(), a.cols()) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, opts);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, opts);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

// Rotates each left/right column pair by a unit phase so the largest-modulus
// entry of the left column becomes real positive. Columns beyond the pair
// count are normalized on their own.
inline void fix_phases(Eigen::MatrixXcd& u, Eigen::MatrixXcd& v) {
  const Eigen::Index pairs = std::min(u.cols(), v.cols());
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    Eigen::Index r = 0;
    const double m = u.col(i).cwiseAbs().maxCoeff(&r);
    if (m <= 0.0) continue;
    const cplx phase = u(r, i) / std::abs(u(r, i));
    u.col(i) *= std::conj(phase);
    if (i < pairs) v.col(i) *= std::conj(phase);
  }
  for (Eigen::Index i = pairs; i < v.cols(); ++i) {
    Eigen::Index r = 0;
    const double m = v.col(i).cwiseAbs().maxCoeff(&r);
    if (m <= 0.0) continue;
    const cplx phase = v(r, i) / std::abs(v(r, i));
    v.col(i) *= std::conj(phase);
  }
}

// Leading r left singular vectors. Very wide slabs go through the Hermitian
// Gram matrix, which costs one GEMM plus a small eigendecomposition instead
// of a bidiagonalization of the full slab.
inline Eigen::MatrixXcd leading_left_vectors(const Eigen::MatrixXcd& a, int r) {
  if (r < 0 || r > a.rows()) throw ConfigError("requested more left vectors than rows");
  if (a.cols() >= 16 * a.rows() && a.rows() <= 512) {
    Eigen::MatrixXcd gram = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
    Eigen::MatrixXcd u(a.rows(), r);
    for (int i = 0; i < r; ++i) u.col(i) = eig.eigenvectors().col(a.rows() - 1 - i);
    return u;
  }
  const bool need_full = std::min(a.rows(), a.cols()) < r;
  SlabSvd svd = slab_svd(a, need_full);
  return svd.u.leftCols(r);
}

}  // namespace detail

enum class TsvdMode { Compact, Full };

// Result of the t-matrix singular value decomposition a = u * diag(s) * v^H.
// Factors are kept in the spectral domain; s holds min(D1, D2) singular
// t-scalars, self-conjugate, nonnegative and descending in the spectral
// partial order.
struct TsvdResult {
  TMatrix u;
  std::vector<TScalar> s;
  TMatrix v;
  Domain source_domain = Domain::Spatial;
  TsvdMode mode = TsvdMode::Compact;
};

// Slab-wise route: one ordinary complex SVD per spectral position.
inline TsvdResult tsvd(const TMatrix& a, TsvdMode mode = TsvdMode::Compact) {
  if (a.empty()) throw ConfigError("empty t-matrix");
  const TMatrix as = a.spectral();
  const int K = a.algebra()->dim();
  const int d1 = a.rows(), d2 = a.cols();
  const int nsv = std::min(d1, d2);
  const bool full = mode == TsvdMode::Full;
  std::vector<detail::SlabSvd> per_slab(K);
  parallel_for(K, [&](std::int64_t k) {
    per_slab[k] = detail::slab_svd(as.slab(static_cast<int>(k)), full);
    detail::fix_phases(per_slab[k].u, per_slab[k].v);
  });
  std::vector<Eigen::MatrixXcd> u_slabs(K), v_slabs(K);
  for (int k = 0; k < K; ++k) {
    u_slabs[k] = std::move(per_slab[k].u);
    v_slabs[k] = std::move(per_slab[k].v);
  }
  TsvdResult out;
  out.u = TMatrix::from_slabs(a.algebra(), std::move(u_slabs), Domain::Spectral);
  out.v = TMatrix::from_slabs(a.algebra(), std::move(v_slabs), Domain::Spectral);
  out.s.reserve(nsv);
  for (int i = 0; i < nsv; ++i) {
    Eigen::VectorXcd sv(K);
    for (int k = 0; k < K; ++k) sv(k) = cplx(per_slab[k].s(i), 0.0);
    out.s.push_back(TScalar::from_flat(a.algebra(), std::move(sv), Domain::Spectral));
  }
  out.source_domain = a.domain();
  out.mode = mode;
  return out;
}

namespace detail {

// Residue class (spectral slice) a block-representation singular vector lives
// on: row r of the block matrix belongs to slice r mod K. Returns nothing when
// more than off_tol of the vector's energy lies outside its best slice.
inline std::optional<int> classify_block_vector(const Eigen::VectorXcd& u, int K, double off_tol = 1e-8) {
  std::vector<double> energy(K, 0.0);
  for (Eigen::Index r = 0; r < u.size(); ++r) energy[r % K] += std::norm(u(r));
  int best = 0;
  for (int k = 1; k < K; ++k)
    if (energy[k] > energy[best]) best = k;
  double total = 0.0, off = 0.0;
  for (int k = 0; k < K; ++k) {
    total += energy[k];
    if (k != best) off += energy[k];
  }
  if (total <= 0.0 || off > off_tol * total) return std::nullopt;
  return best;
}

// Pads a class of slice-pure vectors (dim x 1 each, expressed in the block
// coordinate space of size K*dim) up to `target` orthonormal columns. The
// complement is read off the projector onto the slice coordinate subspace
// minus the span of the collected vectors.
inline void pad_class_with_complement(std::vector<Eigen::VectorXcd>& cls, int slice, int K, int dim, int target) {
  const int missing = target - static_cast<int>(cls.size());
  if (missing <= 0) return;
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K) * dim, static_cast<Eigen::Index>(K) * dim);
  for (int i = 0; i < dim; ++i) proj(static_cast<Eigen::Index>(i) * K + slice, static_cast<Eigen::Index>(i) * K + slice) = 1.0;
  for (const auto& c : cls) proj -= c * c.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(proj, Eigen::ComputeThinU);
  for (int i = 0; i < missing; ++i) {
    if (svd.singularValues()(i) < 0.5) throw Error("slice complement has insufficient rank");
    cls.push_back(svd.matrixU().col(i));
  }
}

}  // namespace detail

// Block-representation route: one dense SVD of the whole block matrix, then
// each singular vector is attributed to its spectral slice; classes are padded
// with orthonormal complement vectors (and zero singular values) when a slice
// is rank deficient. Exactly repeated singular values across slices can make
// the attribution ambiguous, which raises DegenerateSpectrum; callers may
// fall back to the slab-wise route.
inline TsvdResult tsvd_via_block_svd(const TMatrix& a, TsvdMode mode = TsvdMode::Compact) {
  if (a.empty()) throw ConfigError("empty t-matrix");
  const int K = a.algebra()->dim();
  const int d1 = a.rows(), d2 = a.cols();
  const int nsv = std::min(d1, d2);
  const bool full = mode == TsvdMode::Full;
  const int tu = full ? d1 : nsv;
  const int tv = full ? d2 : nsv;

  const Eigen::MatrixXcd block = block_matrix_repr(a);
  detail::SlabSvd svd = detail::slab_svd(block, true);
  const double smax = svd.s.size() ? svd.s(0) : 0.0;
  const double tau = std::max(block.rows(), block.cols()) * std::numeric_limits<double>::epsilon() * smax;

  std::vector<std::vector<Eigen::VectorXcd>> u_classes(K), v_classes(K);
  std::vector<std::vector<double>> s_classes(K);
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
    if (svd.s(i) <= tau) break;
    const auto ku = detail::classify_block_vector(svd.u.col(i), K);
    const auto kv = detail::classify_block_vector(svd.v.col(i), K);
    if (!ku || !kv || *ku != *kv)
      throw DegenerateSpectrum("singular vector is not supported on a single spectral slice");
    if (static_cast<int>(s_classes[*ku].size()) >= nsv)
      throw DegenerateSpectrum("a spectral slice collected more singular values than its rank bound");
    u_classes[*ku].push_back(svd.u.col(i));
    v_classes[*kv].push_back(svd.v.col(i));
    s_classes[*ku].push_back(svd.s(i));
  }
  for (int k = 0; k < K; ++k) {
    detail::pad_class_with_complement(u_classes[k], k, K, d1, tu);
    detail::pad_class_with_complement(v_classes[k], k, K, d2, tv);
    s_classes[k].resize(nsv, 0.0);
  }

  std::vector<Eigen::MatrixXcd> u_slabs(K), v_slabs(K);
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd uk(d1, tu), vk(d2, tv);
    for (int i = 0; i < tu; ++i)
      for (int r = 0; r < d1; ++r) uk(r, i) = u_classes[k][i](static_cast<Eigen::Index>(r) * K + k);
    for (int i = 0; i < tv; ++i)
      for (int r = 0; r < d2; ++r) vk(r, i) = v_classes[k][i](static_cast<Eigen::Index>(r) * K + k);
    detail::fix_phases(uk, vk);
    u_slabs[k] = std::move(uk);
    v_slabs[k] = std::move(vk);
  }
  TsvdResult out;
  out.u = TMatrix::from_slabs(a.algebra(), std::move(u_slabs), Domain::Spectral);
  out.v = TMatrix::from_slabs(a.algebra(), std::move(v_slabs), Domain::Spectral);
  out.s.reserve(nsv);
  for (int i = 0; i < nsv; ++i) {
    Eigen::VectorXcd sv(K);
    for (int k = 0; k < K; ++k) sv(k) = cplx(s_classes[k][i], 0.0);
    out.s.push_back(TScalar::from_flat(a.algebra(), std::move(sv), Domain::Spectral));
  }
  out.source_domain = a.domain();
  out.mode = mode;
  return out;
}

// Reconstruction keeping terms (i, j) with i < r1 and j < r2; effectively the
// leading min(r1, r2) rank-one terms. Returned in the domain of the
// decomposed input.
inline TMatrix tsvd_truncate(const TsvdResult& res, int r1, int r2) {
  const int d1 = res.u.rows(), d2 = res.v.rows();
  if (r1 < 0 || r1 > d1 || r2 < 0 || r2 > d2) throw ConfigError("truncation ranks out of range");
  const int terms = std::min({r1, r2, static_cast<int>(res.s.size())});
  const int K = res.u.algebra()->dim();
  std::vector<Eigen::MatrixXcd> slabs(K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd sig(terms);
    for (int i = 0; i < terms; ++i) sig(i) = res.s[i].flat()(k).real();
    slabs[k] = res.u.slab(k).leftCols(terms) * sig.asDiagonal() *
               res.v.slab(k).leftCols(terms).adjoint();
  }
  TMatrix rec = TMatrix::from_slabs(res.u.algebra(), std::move(slabs), Domain::Spectral);
  return res.source_domain == Domain::Spatial ? rec.spatial() : rec;
}

// Diagonal t-matrix holding the singular t-scalars: compact gives
// min(D1, D2) square, full gives D1 x D2.
inline TMatrix singular_diagonal(const TsvdResult& res) {
  const int nsv = static_cast<int>(res.s.size());
  const int rows = res.mode == TsvdMode::Full ? res.u.rows() : nsv;
  const int cols = res.mode == TsvdMode::Full ? res.v.rows() : nsv;
  TMatrix s = TMatrix::zero(res.u.algebra(), rows, cols, Domain::Spectral);
  for (int i = 0; i < std::min({rows, cols, nsv}); ++i) s.set_entry(i, i, res.s[i]);
  return s;
}

// Numerical rank tolerance: max(K*D1, K*D2) * eps * sigma_max, the standard
// convention applied to the block representation.
inline double rank_tolerance(const TMatrix& a, const TsvdResult& res) {
  double smax = 0.0;
  for (const TScalar& s : res.s) smax = std::max(smax, s.flat().cwiseAbs().maxCoeff());
  const double dim = static_cast<double>(a.algebra()->dim()) * std::max(a.rows(), a.cols());
  return dim * std::numeric_limits<double>::epsilon() * smax;
}

// Slicewise numerical rank as a t-scalar with nonnegative integer spectrum.
inline TScalar rank_t(const TMatrix& a) {
  TsvdResult res = tsvd(a);
  const double tau = rank_tolerance(a, res);
  const int K = a.algebra()->dim();
  Eigen::VectorXcd counts = Eigen::VectorXcd::Zero(K);
  for (const TScalar& s : res.s)
    for (int k = 0; k < K; ++k)
      if (s.flat()(k).real() > tau) counts(k) += 1.0;
  return TScalar::from_flat(a.algebra(), std::move(counts), Domain::Spectral);
}

// Rank of the block representation: the slicewise ranks summed.
inline int rank(const TMatrix& a) {
  return static_cast<int>(std::llround(trace(rank_t(a)).real()));
}

// Moore-Penrose pseudoinverse, slabwise.
inline TMatrix pinv(const TMatrix& a) {
  TsvdResult res = tsvd(a);
  const double tau = rank_tolerance(a, res);
  const int K = a.algebra()->dim();
  const int nsv = static_cast<int>(res.s.size());
  std::vector<Eigen::MatrixXcd> slabs(K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd inv(nsv);
    for (int i = 0; i < nsv; ++i) {
      const double sig = res.s[i].flat()(k).real();
      inv(i) = sig > tau ? 1.0 / sig : 0.0;
    }
    slabs[k] = res.v.slab(k).leftCols(nsv) * inv.asDiagonal() * res.u.slab(k).leftCols(nsv).adjoint();
  }
  TMatrix p = TMatrix::from_slabs(a.algebra(), std::move(slabs), Domain::Spectral);
  return a.domain() == Domain::Spatial ? p.spatial() : p;
}

}  // namespace talg
