#pragma once

#include <utility>
#include <vector>

#include "talg/gtensor.hpp"

namespace talg {

enum class Anchor {
  Inception,  // window extends forward: offsets 0 .. w-1, anchor at the corner
  Center      // window centered on the pixel: offsets -w/2 .. +w/2, odd sizes
};

// Neighborhood map turning each pixel into a t-scalar of shape `window`
// (repeated nesting_depth times). The window applies to the leading
// structural modes; out-of-range reads take the padding value.
struct NeighborhoodSpec {
  std::vector<int> window;
  Anchor anchor = Anchor::Inception;
  int nesting_depth = 1;
  cplx padding = cplx(0.0, 0.0);
};

namespace detail {

inline void check_neighborhood(const NeighborhoodSpec& spec, const std::vector<int>& img_dims) {
  const int L = static_cast<int>(spec.window.size());
  if (L < 1) throw ConfigError("window must name at least one mode");
  if (L > static_cast<int>(img_dims.size())) throw ConfigError("window has more modes than the image");
  if (spec.nesting_depth < 1) throw ConfigError("nesting depth must be at least 1");
  for (int l = 0; l < L; ++l) {
    if (spec.window[l] < 1) throw ConfigError("window dimensions must be positive");
    if (spec.anchor == Anchor::Center && spec.window[l] % 2 == 0)
      throw ConfigError("centered windows require odd dimensions");
    if (spec.window[l] > img_dims[l]) throw ConfigError("window exceeds the image extent");
  }
}

inline std::vector<int> lifted_algebra_shape(const NeighborhoodSpec& spec) {
  std::vector<int> shape;
  shape.reserve(spec.window.size() * spec.nesting_depth);
  for (int d = 0; d < spec.nesting_depth; ++d)
    shape.insert(shape.end(), spec.window.begin(), spec.window.end());
  return shape;
}

// Summed per-mode offsets for one t-index (given as per-mode digits).
inline std::vector<std::int64_t> total_offsets(const NeighborhoodSpec& spec, const std::vector<int>& digits) {
  const int L = static_cast<int>(spec.window.size());
  std::vector<std::int64_t> off(L, 0);
  for (int d = 0; d < spec.nesting_depth; ++d)
    for (int l = 0; l < L; ++l) {
      const int c = digits[d * L + l];
      off[l] += (spec.anchor == Anchor::Center) ? c - spec.window[l] / 2 : c;
    }
  return off;
}

inline std::vector<int> anchor_index(const NeighborhoodSpec& spec) {
  const int L = static_cast<int>(spec.window.size());
  std::vector<int> idx(L * spec.nesting_depth, 0);
  if (spec.anchor == Anchor::Center)
    for (int d = 0; d < spec.nesting_depth; ++d)
      for (int l = 0; l < L; ++l) idx[d * L + l] = spec.window[l] / 2;
  return idx;
}

}  // namespace detail

// Lifts an image (or any array) into a g-tensor over the given algebra, whose
// shape must equal the window repeated nesting_depth times. Structural
// dimensions equal the input dimensions; the lift is linear in the input.
inline GTensor lift(const DenseArray& img, const NeighborhoodSpec& spec, const AlgebraPtr& algebra) {
  detail::check_neighborhood(spec, img.dims());
  if (!algebra || algebra->shape() != detail::lifted_algebra_shape(spec))
    throw ConfigError("algebra shape must equal the window repeated nesting_depth times");
  const int L = static_cast<int>(spec.window.size());
  const int K = algebra->dim();
  const std::vector<int>& dims = img.dims();
  const int M = static_cast<int>(dims.size());
  const std::int64_t n = img.size();
  const auto strides = row_major_strides(dims);

  std::vector<Eigen::VectorXcd> slabs(K);
  std::vector<int> digits(algebra->order(), 0);
  for (int k = 0; k < K; ++k) {
    const auto off = detail::total_offsets(spec, digits);
    Eigen::VectorXcd slab(n);
    std::vector<int> p(M, 0);
    for (std::int64_t flat = 0; flat < n; ++flat) {
      bool inside = true;
      std::int64_t src = flat;
      for (int l = 0; l < L && inside; ++l) {
        const std::int64_t q = p[l] + off[l];
        if (q < 0 || q >= dims[l]) {
          inside = false;
        } else {
          src += (q - p[l]) * strides[l];
        }
      }
      slab(flat) = inside ? img[src] : spec.padding;
      for (int m = M - 1; m >= 0; --m) {
        if (++p[m] < dims[m]) break;
        p[m] = 0;
      }
    }
    slabs[k] = std::move(slab);
    for (int m = algebra->order() - 1; m >= 0; --m) {
      if (++digits[m] < algebra->shape()[m]) break;
      digits[m] = 0;
    }
  }
  return GTensor::from_slabs(algebra, dims, std::move(slabs), Domain::Spatial);
}

// Convenience: lift over the Fourier algebra of the lifted shape.
inline GTensor lift(const DenseArray& img, const NeighborhoodSpec& spec) {
  detail::check_neighborhood(spec, img.dims());
  return lift(img, spec, Algebra::dft(detail::lifted_algebra_shape(spec)));
}

// Reads the image back out of a lifted g-tensor. The default takes the anchor
// entry of every t-scalar; with average = true each pixel instead averages all
// neighborhood copies that referenced it.
inline DenseArray unlift(const GTensor& g, const NeighborhoodSpec& spec, bool average = false) {
  detail::check_neighborhood(spec, g.dims());
  if (g.algebra()->shape() != detail::lifted_algebra_shape(spec))
    throw ConfigError("g-tensor algebra does not match the neighborhood spec");
  const GTensor gs = g.spatial();
  const std::vector<int>& dims = g.dims();
  DenseArray out(dims);

  if (!average) {
    const std::int64_t anchor = g.algebra()->flat_index(detail::anchor_index(spec));
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = gs.slab(static_cast<int>(anchor))(i);
    return out;
  }

  const int L = static_cast<int>(spec.window.size());
  const int M = static_cast<int>(dims.size());
  const auto strides = row_major_strides(dims);
  std::vector<double> counts(out.size(), 0.0);
  std::vector<int> digits(g.algebra()->order(), 0);
  for (int k = 0; k < g.algebra()->dim(); ++k) {
    const auto off = detail::total_offsets(spec, digits);
    std::vector<int> p(M, 0);
    for (std::int64_t flat = 0; flat < out.size(); ++flat) {
      // Pixel p appears in the t-scalar anchored at q = p - off.
      bool inside = true;
      std::int64_t src = flat;
      for (int l = 0; l < L && inside; ++l) {
        const std::int64_t q = p[l] - off[l];
        if (q < 0 || q >= dims[l]) {
          inside = false;
        } else {
          src += (q - p[l]) * strides[l];
        }
      }
      if (inside) {
        out[flat] += gs.slab(k)(src);
        counts[flat] += 1.0;
      }
      for (int m = M - 1; m >= 0; --m) {
        if (++p[m] < dims[m]) break;
        p[m] = 0;
      }
    }
    for (int m = g.algebra()->order() - 1; m >= 0; --m) {
      if (++digits[m] < g.algebra()->shape()[m]) break;
      digits[m] = 0;
    }
  }
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] /= counts[i];
  return out;
}

}  // namespace talg
