#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "talg/gtensor.hpp"
#include "talg/image_io.hpp"
#include "talg/lifting.hpp"
#include "talg/parallel.hpp"
#include "talg/pca.hpp"
#include "talg/psnr.hpp"
#include "talg/raw_tensor_file.hpp"
#include "talg/thosvd.hpp"
#include "talg/tsvd.hpp"
#include "talg/version.hpp"

namespace talg {

enum class DatasetKind { Pgm, Png, Cifar10Bin, RawTensor };

// What the reconstruction is compared against: the pixel-domain arrays
// (lifted scopes are read back out first) or the whole lifted array.
enum class PsnrDomain { Pixel, Lifted };

struct ExperimentConfig {
  std::vector<std::string> inputs;
  DatasetKind kind = DatasetKind::Pgm;
  int sample_count = 100;  // leading records taken from a cifar batch

  // t-algebra scope: none (canonical), pixel-neighborhood lifting, or
  // order-one channel t-scalars for RGB data.
  TransformKind transform = TransformKind::Dft;
  bool orthonormal_dct = false;
  std::vector<int> window;  // empty = no lifting
  int nest = 1;
  Anchor anchor = Anchor::Inception;
  bool channel_tscalar = false;

  // algorithm: hosvd | hooi | tsvd | pca | 2dpca | 2d2pca | mpca | custom
  std::string algorithm = "hosvd";
  bool optimize = false;
  int max_iters = 50;
  double tol = 1e-8;
  std::vector<int> custom_ranks;  // per stacked mode, for the custom variant

  std::vector<std::vector<int>> rank_grid;  // values per rank slot

  double psnr_max = 0.0;  // 0 = auto
  bool unlift_average = false;
  PsnrDomain psnr_domain = PsnrDomain::Pixel;

  std::string out_csv;
  std::string out_manifest;
  std::string out_plot;  // base name; writes .dat and, for curves, .svg
  bool timing = false;
  bool keep_recons = false;
  std::uint64_t seed = 0;
  double mem_budget_mb = 8192.0;
};

struct MetricsRow {
  std::string method;
  std::string algebra;
  std::string transform;
  std::vector<int> ranks;
  double psnr_db = 0.0;
  int iters = 0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  int rank_slots = 0;
  std::vector<DenseArray> recons;  // first grid point, when requested
  std::vector<std::pair<std::string, std::uint32_t>> checksums;
  double psnr_max = 0.0;
};

// ---- rank grid parsing ----------------------------------------------------

// Accepts "8", "3,7,11" or an inclusive stride range "8:56:8".
inline std::vector<int> parse_rank_list(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad rank value: '" + s + "' in '" + text + "'");
    }
  };
  std::vector<int> vals;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("range must be lo:hi:step, got '" + text + "'");
    const int lo = to_int(parts[0]), hi = to_int(parts[1]), step = to_int(parts[2]);
    if (step < 1 || lo > hi) throw ConfigError("bad range '" + text + "'");
    for (int v = lo; v <= hi; v += step) vals.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) vals.push_back(to_int(p));
  }
  if (vals.empty()) throw ConfigError("empty rank list: '" + text + "'");
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  for (int v : vals)
    if (v < 1) throw ConfigError("ranks must be positive in '" + text + "'");
  return vals;
}

inline std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, 'x')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(p, &pos);
      if (pos != p.size() || v < 1) throw std::invalid_argument(p);
      dims.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad shape: '" + text + "'");
    }
  }
  if (dims.empty()) throw ConfigError("empty shape");
  return dims;
}

// ---- dataset / scope ------------------------------------------------------

struct Dataset {
  std::vector<DenseArray> samples;  // as loaded; cifar records are (3, r, c)
  double maxval = 255.0;
  std::vector<std::pair<std::string, std::uint32_t>> checksums;
};

inline Dataset load_dataset(const ExperimentConfig& cfg) {
  if (cfg.inputs.empty()) throw ConfigError("no input files");
  Dataset ds;
  for (const std::string& path : cfg.inputs) {
    switch (cfg.kind) {
      case DatasetKind::Pgm: {
        double mx = 255.0;
        ds.samples.push_back(load_pgm(path, &mx));
        ds.maxval = std::max(ds.maxval, mx);
        break;
      }
      case DatasetKind::Png: {
        double mx = 255.0;
        ds.samples.push_back(load_png(path, &mx));
        ds.maxval = std::max(ds.maxval, mx);
        break;
      }
      case DatasetKind::Cifar10Bin: {
        std::vector<DenseArray> imgs = load_cifar10(path, cfg.sample_count);
        for (DenseArray& im : imgs) ds.samples.push_back(std::move(im));
        break;
      }
      case DatasetKind::RawTensor: {
        RawScalarKind k;
        ds.samples.push_back(read_raw_tensor(path, &k));
        break;
      }
    }
    ds.checksums.emplace_back(path, crc32_file(path));
  }
  if (cfg.kind == DatasetKind::RawTensor) {
    double mx = 0.0;
    for (const DenseArray& s : ds.samples) mx = std::max(mx, s.max_abs());
    ds.maxval = mx > 0.0 ? mx : 1.0;
  }
  return ds;
}

struct Scope {
  AlgebraPtr algebra;
  std::vector<GTensor> samples;
  std::vector<DenseArray> reference;  // what reconstructions are compared to
  bool lifted = false;
  NeighborhoodSpec spec;
  bool channel = false;
  double psnr_max = 255.0;
  std::string algebra_label = "scalar";
  std::string transform_label = "none";
};

namespace detail {

inline AlgebraPtr make_algebra(const ExperimentConfig& cfg, const std::vector<int>& shape) {
  switch (cfg.transform) {
    case TransformKind::Dft:
      return Algebra::dft(shape);
    case TransformKind::Dct:
      return Algebra::dct(shape, cfg.orthonormal_dct);
    default:
      throw ConfigError("custom transforms are not constructible from a config");
  }
}

inline std::string shape_label(const std::vector<int>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims[i]);
  }
  return s;
}

inline std::string transform_label(const ExperimentConfig& cfg) {
  switch (cfg.transform) {
    case TransformKind::Dft:
      return "dft";
    case TransformKind::Dct:
      return cfg.orthonormal_dct ? "dct-ortho" : "dct";
    default:
      return "custom";
  }
}

inline void check_memory_budget(const ExperimentConfig& cfg, std::int64_t struct_elems, std::int64_t K,
                                std::int64_t n_samples, bool stacked) {
  const double copies = stacked ? 6.0 : 4.0;
  const double bytes = double(struct_elems) * double(K) * double(n_samples) * 16.0 * copies;
  const double mb = bytes / (1024.0 * 1024.0);
  if (mb > cfg.mem_budget_mb) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "estimated working set %.0f MB exceeds the %.0f MB memory budget", mb, cfg.mem_budget_mb);
    throw ConfigError(buf);
  }
}

}  // namespace detail

// Builds g-tensor samples in the configured scope. Lifting applies to the
// leading modes; cifar records are permuted channel-last for lifted and
// canonical scopes and kept channel-leading for the channel-t-scalar scope.
inline Scope build_scope(const ExperimentConfig& cfg, const Dataset& ds) {
  if (!cfg.window.empty() && cfg.channel_tscalar)
    throw ConfigError("pixel lifting and channel t-scalars are mutually exclusive");
  Scope sc;
  sc.psnr_max = cfg.psnr_max > 0.0 ? cfg.psnr_max : ds.maxval;

  std::vector<DenseArray> arrays;
  arrays.reserve(ds.samples.size());
  const bool channel_leading_data = cfg.kind == DatasetKind::Cifar10Bin;
  for (const DenseArray& s : ds.samples) {
    if (channel_leading_data && !cfg.channel_tscalar)
      arrays.push_back(s.permuted({1, 2, 0}));
    else
      arrays.push_back(s);
  }

  if (!cfg.window.empty()) {
    sc.lifted = true;
    sc.spec = NeighborhoodSpec{cfg.window, cfg.anchor, cfg.nest, 0.0};
    std::vector<int> ashape = detail::lifted_algebra_shape(sc.spec);
    sc.algebra = detail::make_algebra(cfg, ashape);
    sc.algebra_label = detail::shape_label(ashape);
    sc.transform_label = detail::transform_label(cfg);
    detail::check_memory_budget(cfg, arrays.empty() ? 0 : element_count(arrays[0].dims()), sc.algebra->dim(),
                                static_cast<std::int64_t>(arrays.size()), cfg.algorithm != "hosvd" && cfg.algorithm != "hooi" && cfg.algorithm != "tsvd");
    for (const DenseArray& a : arrays) sc.samples.push_back(lift(a, sc.spec, sc.algebra));
  } else if (cfg.channel_tscalar) {
    sc.channel = true;
    for (const DenseArray& a : arrays)
      if (a.order() < 2) throw ConfigError("channel t-scalars need a channel-leading array");
    const int ch = arrays.empty() ? 3 : arrays[0].dims()[0];
    sc.algebra = detail::make_algebra(cfg, {ch});
    sc.algebra_label = std::to_string(ch);
    sc.transform_label = detail::transform_label(cfg);
    for (const DenseArray& a : arrays) sc.samples.push_back(GTensor::from_array(sc.algebra, a, a.order() - 1));
  } else {
    sc.algebra = Algebra::complex_field();
    for (const DenseArray& a : arrays) sc.samples.push_back(GTensor::from_canonical(a));
  }
  sc.reference = std::move(arrays);
  return sc;
}

namespace detail {

// Reconstruction back in the comparison domain of the scope.
inline DenseArray read_back(const Scope& sc, const ExperimentConfig& cfg, const GTensor& recon) {
  if (sc.lifted && cfg.psnr_domain == PsnrDomain::Pixel)
    return unlift(recon.spatial(), sc.spec, cfg.unlift_average);
  return recon.spatial().to_array();
}

inline std::vector<DenseArray> psnr_reference(const Scope& sc, const ExperimentConfig& cfg) {
  if (!sc.lifted || cfg.psnr_domain == PsnrDomain::Pixel) return sc.reference;
  std::vector<DenseArray> lifted_ref;
  lifted_ref.reserve(sc.samples.size());
  for (const GTensor& g : sc.samples) lifted_ref.push_back(g.spatial().to_array());
  return lifted_ref;
}

// A two-mode g-tensor viewed as a t-matrix and back: the mode-1 unfolding of
// an order-two g-tensor is exactly its entry grid.
inline TMatrix as_tmatrix(const GTensor& g) {
  if (g.order() != 2) throw ConfigError("t-matrix view needs exactly two structural modes");
  return unfold(g, 0);
}

inline GTensor as_gtensor(const TMatrix& m) { return fold(m, 0, {m.rows(), m.cols()}); }

struct SlotInfo {
  std::vector<int> modes;  // structural (or stacked) modes the slots rank
  std::vector<int> bounds;
};

inline void check_grid(const std::vector<std::vector<int>>& grid, const SlotInfo& slots) {
  if (grid.size() != slots.modes.size())
    throw ConfigError("need " + std::to_string(slots.modes.size()) + " rank slot(s), got " +
                      std::to_string(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int v : grid[i])
      if (v > slots.bounds[i])
        throw ConfigError("rank " + std::to_string(v) + " exceeds mode bound " + std::to_string(slots.bounds[i]));
}

inline std::vector<std::vector<int>> grid_points(const std::vector<std::vector<int>>& grid) {
  std::vector<std::vector<int>> pts;
  std::vector<std::size_t> idx(grid.size(), 0);
  if (grid.empty()) return pts;
  while (true) {
    std::vector<int> p(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) p[i] = grid[i][idx[i]];
    pts.push_back(std::move(p));
    std::size_t i = grid.size();
    while (i > 0) {
      --i;
      if (++idx[i] < grid[i].size()) break;
      idx[i] = 0;
      if (i == 0) return pts;
    }
  }
}

inline std::string method_label(const ExperimentConfig& cfg, const Scope& sc) {
  const bool t = sc.lifted || sc.channel;
  std::string base;
  if (cfg.algorithm == "hosvd")
    base = t ? "thosvd" : "hosvd";
  else if (cfg.algorithm == "hooi")
    base = t ? "thooi" : "hooi";
  else if (cfg.algorithm == "tsvd")
    base = t ? "tsvd" : "svd";
  else if (cfg.algorithm == "pca")
    base = t ? "tpca" : "pca";
  else if (cfg.algorithm == "2dpca")
    base = t ? "t-2dpca" : "2dpca";
  else if (cfg.algorithm == "2d2pca")
    base = t ? "t-2d2pca" : "2d2pca";
  else if (cfg.algorithm == "mpca")
    base = t ? "t-mpca" : "mpca";
  else if (cfg.algorithm == "custom")
    base = t ? "t-custom" : "custom";
  else
    throw ConfigError("unknown algorithm: " + cfg.algorithm);
  const bool pca_family = cfg.algorithm != "hosvd" && cfg.algorithm != "hooi" && cfg.algorithm != "tsvd";
  if (cfg.optimize && pca_family) base += "-op";
  return base;
}

inline PcaVariant pca_variant(const std::string& algorithm) {
  if (algorithm == "pca") return PcaVariant::Pca;
  if (algorithm == "2dpca") return PcaVariant::TwoDPca;
  if (algorithm == "2d2pca") return PcaVariant::TwoDSquaredPca;
  if (algorithm == "mpca") return PcaVariant::MPca;
  if (algorithm == "custom") return PcaVariant::Custom;
  throw ConfigError("not a pca-family algorithm: " + algorithm);
}

// The stacked modes whose ranks a variant's rank slots control; S counts the
// structural modes plus the trailing sample mode.
inline std::vector<int> variant_rank_modes(PcaVariant v, int S) {
  const int M = S - 1;
  switch (v) {
    case PcaVariant::Pca:
      return {M};
    case PcaVariant::TwoDPca:
      if (M < 2) throw ConfigError("variant requires at least two structural modes");
      return {1};
    case PcaVariant::TwoDSquaredPca:
      if (M < 2) throw ConfigError("variant requires at least two structural modes");
      return {0, 1};
    case PcaVariant::MPca: {
      std::vector<int> modes(M);
      for (int k = 0; k < M; ++k) modes[k] = k;
      return modes;
    }
    case PcaVariant::Custom: {
      std::vector<int> modes(S);
      for (int k = 0; k < S; ++k) modes[k] = k;
      return modes;
    }
  }
  throw ConfigError("unknown pca variant");
}

}  // namespace detail

// Runs the configured experiment over the whole rank grid, reusing the
// rank-independent factorization work across grid points. Grid points are
// processed by a worker pool; rows come back in grid order regardless of
// thread count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  Dataset ds = load_dataset(cfg);
  Scope sc = build_scope(cfg, ds);
  if (sc.samples.empty()) throw ConfigError("dataset is empty");
  const std::string method = detail::method_label(cfg, sc);
  const int M = sc.samples[0].order();
  for (const GTensor& g : sc.samples)
    if (g.dims() != sc.samples[0].dims()) throw ConfigError("samples disagree in shape");

  ExperimentResult out;
  out.checksums = ds.checksums;
  out.psnr_max = sc.psnr_max;

  const bool pca_family =
      cfg.algorithm != "hosvd" && cfg.algorithm != "hooi" && cfg.algorithm != "tsvd";

  detail::SlotInfo slots;
  if (cfg.algorithm == "tsvd") {
    if (M != 2) throw ConfigError("tsvd needs two structural modes");
    slots.modes = {0};
    slots.bounds = {std::min(sc.samples[0].mode_dim(0), sc.samples[0].mode_dim(1))};
  } else if (!pca_family) {
    for (int k = 0; k < M; ++k) {
      slots.modes.push_back(k);
      slots.bounds.push_back(sc.samples[0].mode_dim(k));
    }
  }

  const std::vector<DenseArray> reference = detail::psnr_reference(sc, cfg);
  std::vector<MetricsRow> rows;
  std::vector<DenseArray> first_recons;

  auto now = [] { return std::chrono::steady_clock::now(); };
  auto secs = [&](std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  // Grid points run through a worker pool unless a single point's working set
  // is large; then points run serially and the per-slice parallelism inside
  // the tensor ops takes over. The choice depends only on the data shape, so
  // results do not depend on the thread count either way.
  const double point_bytes = 16.0 * double(sc.algebra->dim()) *
                             double(element_count(sc.samples[0].dims())) * double(sc.samples.size()) * 3.0;
  const bool parallel_points = point_bytes <= 256.0 * 1024.0 * 1024.0;
  auto for_points = [&](std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (parallel_points)
      parallel_for(n, fn);
    else
      for (std::int64_t p = 0; p < n; ++p) fn(p);
  };

  ThooiOptions iter_opts;
  iter_opts.max_iters = cfg.max_iters;
  iter_opts.tol = cfg.tol;

  if (!pca_family) {
    detail::check_grid(cfg.rank_grid, slots);
    const std::vector<std::vector<int>> pts = detail::grid_points(cfg.rank_grid);
    rows.resize(pts.size());

    if (cfg.algorithm == "tsvd") {
      std::vector<TsvdResult> svds(sc.samples.size());
      for (std::size_t i = 0; i < sc.samples.size(); ++i)
        svds[i] = tsvd(detail::as_tmatrix(sc.samples[i]));
      for_points(static_cast<std::int64_t>(pts.size()), [&](std::int64_t p) {
        const auto t0 = now();
        std::vector<DenseArray> rec(sc.samples.size());
        for (std::size_t i = 0; i < sc.samples.size(); ++i) {
          TMatrix tr = tsvd_truncate(svds[i], pts[p][0], pts[p][0]);
          rec[i] = detail::read_back(sc, cfg, detail::as_gtensor(tr));
        }
        MetricsRow row{method, sc.algebra_label, sc.transform_label, pts[p],
                       psnr_many(reference, rec, sc.psnr_max), 0, 0.0};
        row.seconds = secs(t0, now());
        rows[p] = std::move(row);
        if (cfg.keep_recons && p == 0) first_recons = std::move(rec);
      });
    } else {
      // Rank-independent part once per sample: full factors for every mode.
      std::vector<int> full(M);
      for (int k = 0; k < M; ++k) full[k] = sc.samples[0].mode_dim(k);
      ThosvdOptions fopts;
      fopts.compute_core = false;
      fopts.compute_approx = false;
      std::vector<ThosvdResult> bases(sc.samples.size());
      for (std::size_t i = 0; i < sc.samples.size(); ++i) bases[i] = thosvd(sc.samples[i], full, fopts);

      const bool iterate = cfg.algorithm == "hooi";
      for_points(static_cast<std::int64_t>(pts.size()), [&](std::int64_t p) {
        const auto t0 = now();
        int iters = 0;
        std::vector<DenseArray> rec(sc.samples.size());
        for (std::size_t i = 0; i < sc.samples.size(); ++i) {
          GTensor approx = sc.samples[i].spectral();
          if (iterate) {
            ThooiResult r = thooi(sc.samples[i], pts[p], bases[i], iter_opts);
            approx = std::move(r.approx);
            iters = std::max(iters, r.sweeps);
          } else {
            for (int k = 0; k < M; ++k) {
              if (pts[p][k] >= sc.samples[0].mode_dim(k)) continue;
              approx = detail::apply_projector(approx, k, left_cols(bases[i].factors[k], pts[p][k]));
            }
          }
          rec[i] = detail::read_back(sc, cfg, approx);
        }
        MetricsRow row{method, sc.algebra_label, sc.transform_label, pts[p],
                       psnr_many(reference, rec, sc.psnr_max), iters, 0.0};
        row.seconds = secs(t0, now());
        rows[p] = std::move(row);
        if (cfg.keep_recons && p == 0) first_recons = std::move(rec);
      });
    }
  } else {
    // PCA family: one stack, centered once, factored once at full rank.
    const int S = M + 1;
    std::vector<int> stacked_dims = sc.samples[0].dims();
    stacked_dims.push_back(static_cast<int>(sc.samples.size()));
    slots.modes = detail::variant_rank_modes(detail::pca_variant(cfg.algorithm), S);
    slots.bounds.clear();
    for (int m : slots.modes) slots.bounds.push_back(stacked_dims[m]);
    detail::check_grid(cfg.rank_grid, slots);

    GTensor mean = mean_sample(sc.samples);
    std::vector<GTensor> centered = center_samples(sc.samples, &mean);
    GTensor cstack = stack_last(centered).spectral();
    centered.clear();

    ThosvdOptions fopts;
    fopts.compute_core = false;
    fopts.compute_approx = false;
    fopts.factor_modes = slots.modes;
    ThosvdResult base = thosvd(cstack, cstack.dims(), fopts);

    const std::vector<std::vector<int>> pts = detail::grid_points(cfg.rank_grid);
    rows.resize(pts.size());
    for_points(static_cast<std::int64_t>(pts.size()), [&](std::int64_t p) {
      const auto t0 = now();
      std::vector<int> ranks = cstack.dims();
      for (std::size_t i = 0; i < slots.modes.size(); ++i) ranks[slots.modes[i]] = pts[p][i];
      int iters = 0;
      GTensor approx = cstack;
      if (cfg.optimize && static_cast<int>(slots.modes.size()) >= 2) {
        ThooiResult r = thooi(cstack, ranks, base, iter_opts);
        approx = std::move(r.approx);
        iters = r.sweeps;
      } else {
        for (int m : slots.modes)
          if (ranks[m] < cstack.mode_dim(m))
            approx = detail::apply_projector(approx, m, left_cols(base.factors[m], ranks[m]));
      }
      std::vector<GTensor> recs = detail::split_and_uncenter(approx, mean, true);
      std::vector<DenseArray> rec(recs.size());
      for (std::size_t i = 0; i < recs.size(); ++i) rec[i] = detail::read_back(sc, cfg, recs[i]);
      MetricsRow row{method, sc.algebra_label, sc.transform_label, pts[p],
                     psnr_many(reference, rec, sc.psnr_max), iters, 0.0};
      row.seconds = secs(t0, now());
      rows[p] = std::move(row);
      if (cfg.keep_recons && p == 0) first_recons = std::move(rec);
    });
  }

  out.rows = std::move(rows);
  out.rank_slots = static_cast<int>(slots.modes.size());
  if (cfg.keep_recons) out.recons = std::move(first_recons);
  return out;
}

// ---- output files ---------------------------------------------------------

inline std::string format_psnr(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string csv_text(const ExperimentResult& res, bool timing) {
  std::string s = "method,algebra,transform";
  for (int i = 1; i <= res.rank_slots; ++i) s += ",r" + std::to_string(i);
  s += ",psnr_db,iters,seconds\n";
  for (const MetricsRow& row : res.rows) {
    s += row.method + "," + row.algebra + "," + row.transform;
    for (int r : row.ranks) s += "," + std::to_string(r);
    s += "," + format_psnr(row.psnr_db) + "," + std::to_string(row.iters);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", timing ? row.seconds : 0.0);
    s += std::string(",") + buf + "\n";
  }
  return s;
}

inline void write_csv(const ExperimentResult& res, const std::string& path, bool timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << csv_text(res, timing);
  if (!out) throw DataError("write failed: " + path);
}

inline void write_manifest(const ExperimentConfig& cfg, const ExperimentResult& res, const std::string& path) {
  nlohmann::json j;
  j["version"] = TALG_VERSION_STRING;
  j["threads"] = thread_count();
  j["seed"] = cfg.seed;
  nlohmann::json c;
  c["inputs"] = cfg.inputs;
  c["kind"] = cfg.kind == DatasetKind::Pgm      ? "pgm"
              : cfg.kind == DatasetKind::Png    ? "png"
              : cfg.kind == DatasetKind::Cifar10Bin ? "cifar10-bin"
                                                   : "raw-tensor";
  c["sample_count"] = cfg.sample_count;
  c["algorithm"] = cfg.algorithm;
  c["optimize"] = cfg.optimize;
  c["max_iters"] = cfg.max_iters;
  c["tol"] = cfg.tol;
  c["window"] = cfg.window;
  c["nest"] = cfg.nest;
  c["anchor"] = cfg.anchor == Anchor::Inception ? "inception" : "center";
  c["channel_tscalar"] = cfg.channel_tscalar;
  c["transform"] = detail::transform_label(cfg);
  c["rank_grid"] = cfg.rank_grid;
  c["psnr_max"] = res.psnr_max;
  c["unlift_average"] = cfg.unlift_average;
  c["psnr_domain"] = cfg.psnr_domain == PsnrDomain::Pixel ? "pixel" : "lifted";
  c["timing"] = cfg.timing;
  c["mem_budget_mb"] = cfg.mem_budget_mb;
  j["config"] = c;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [p, crc] : res.checksums) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08x", crc);
    files.push_back({{"path", p}, {"crc32", buf}});
  }
  j["datasets"] = files;
  j["rows"] = res.rows.size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed: " + path);
}

// Gnuplot-style data file; for single-varying-rank grids also a small SVG
// line chart of PSNR against that rank.
inline void write_plots(const ExperimentResult& res, const std::string& base) {
  {
    std::ofstream out(base + ".dat", std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + base + ".dat");
    out << "# ";
    for (int i = 1; i <= res.rank_slots; ++i) out << "r" << i << " ";
    out << "psnr_db\n";
    int prev_first = res.rows.empty() ? 0 : res.rows[0].ranks.empty() ? 0 : res.rows[0].ranks[0];
    for (const MetricsRow& row : res.rows) {
      if (!row.ranks.empty() && row.ranks[0] != prev_first) {
        out << "\n";  // blank-line blocks per leading rank, for grid plots
        prev_first = row.ranks[0];
      }
      for (int r : row.ranks) out << r << " ";
      out << format_psnr(row.psnr_db) << "\n";
    }
  }

  int varying = -1, nvary = 0;
  for (int i = 0; i < res.rank_slots; ++i) {
    std::vector<int> seen;
    for (const MetricsRow& row : res.rows) seen.push_back(row.ranks[i]);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (seen.size() > 1) {
      varying = i;
      ++nvary;
    }
  }
  if (res.rank_slots == 1) varying = 0, nvary = 1;
  if (nvary != 1 || res.rows.size() < 2) return;

  std::vector<std::pair<double, double>> xy;
  double ymin = 1e300, ymax = -1e300;
  for (const MetricsRow& row : res.rows) {
    if (std::isinf(row.psnr_db)) continue;
    xy.emplace_back(row.ranks[varying], row.psnr_db);
    ymin = std::min(ymin, row.psnr_db);
    ymax = std::max(ymax, row.psnr_db);
  }
  if (xy.size() < 2) return;
  std::sort(xy.begin(), xy.end());
  const double xmin = xy.front().first, xmax = xy.back().first;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double W = 640, H = 420, L = 60, B = 40, T = 20, R = 20;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T); };
  std::ofstream out(base + ".svg", std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + base + ".svg");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const auto& [x, y] : xy) out << px(x) << "," << py(y) << " ";
  out << "\"/>\n";
  for (const auto& [x, y] : xy)
    out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  char lab[64];
  std::snprintf(lab, sizeof(lab), "%.1f", ymin);
  out << "<text x=\"4\" y=\"" << H - B << "\" font-size=\"12\">" << lab << "</text>\n";
  std::snprintf(lab, sizeof(lab), "%.1f", ymax);
  out << "<text x=\"4\" y=\"" << T + 10 << "\" font-size=\"12\">" << lab << "</text>\n";
  out << "<text x=\"" << L << "\" y=\"" << H - 8 << "\" font-size=\"12\">" << int(xmin) << "</text>\n";
  out << "<text x=\"" << W - R - 24 << "\" y=\"" << H - 8 << "\" font-size=\"12\">" << int(xmax)
      << "</text>\n";
  out << "<text x=\"" << (W / 2 - 40) << "\" y=\"" << H - 8 << "\" font-size=\"12\">rank r"
      << (varying + 1) << "</text>\n";
  out << "<text x=\"10\" y=\"" << (H / 2) << "\" font-size=\"12\" transform=\"rotate(-90 10 "
      << (H / 2) << ")\">PSNR dB</text>\n";
  out << "</svg>\n";
}

}  // namespace talg
