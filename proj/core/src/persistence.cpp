#include "topoprobe/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "topoprobe/io.hpp"
#include "topoprobe/svg.hpp"

namespace topo {

namespace {

std::uint64_t pack_verts(const Simplex& s, std::int64_t n) {
  std::uint64_t key = 0;
  for (const std::int32_t* v = s.begin(); v != s.end(); ++v)
    key = key * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(*v);
  return key;
}

}  // namespace

BoundaryMatrix build_boundary_matrix(const RipsFiltration& filt) {
  const std::int64_t m = static_cast<std::int64_t>(filt.simplices.size());
  const std::int64_t n = filt.n_points;

  BoundaryMatrix bm;
  bm.offsets.reserve(static_cast<std::size_t>(m) + 1);
  bm.dims.reserve(static_cast<std::size_t>(m));
  bm.offsets.push_back(0);

  // Facet lookups. Vertices sort to the front in id order, so vertex v sits
  // at filtration index v; edges and triangles get hash maps built on demand.
  bool has_tri = false, has_tet = false;
  for (const Simplex& s : filt.simplices) {
    if (s.dim == 2) has_tri = true;
    else if (s.dim == 3) has_tet = true;
  }
  for (std::int64_t j = 0; j < std::min<std::int64_t>(m, n); ++j) {
    const Simplex& s = filt.simplices[static_cast<std::size_t>(j)];
    if (s.dim != 0 || s.verts[0] != static_cast<std::int32_t>(j))
      throw FiltrationError("vertex simplices must occupy the first n slots in id order");
  }

  std::unordered_map<std::uint64_t, std::int32_t> edge_index;
  std::unordered_map<std::uint64_t, std::int32_t> tri_index;
  if (has_tri || has_tet) {
    for (std::int64_t j = 0; j < m; ++j) {
      const Simplex& s = filt.simplices[static_cast<std::size_t>(j)];
      if (s.dim == 1 && has_tri) edge_index.emplace(pack_verts(s, n), static_cast<std::int32_t>(j));
      else if (s.dim == 2 && has_tet) tri_index.emplace(pack_verts(s, n), static_cast<std::int32_t>(j));
    }
  }

  auto lookup = [&](Simplex& facet) -> std::int32_t {
    if (facet.dim == 0) return facet.verts[0];
    const auto& map = facet.dim == 1 ? edge_index : tri_index;
    auto it = map.find(pack_verts(facet, n));
    if (it == map.end())
      throw FiltrationError("filtration is missing a face; corrupt input");
    return it->second;
  };

  std::array<std::int32_t, 4> facets{};
  for (std::int64_t j = 0; j < m; ++j) {
    const Simplex& s = filt.simplices[static_cast<std::size_t>(j)];
    bm.dims.push_back(static_cast<std::int8_t>(s.dim));
    if (s.dim > 0) {
      for (std::int32_t drop = 0; drop <= s.dim; ++drop) {
        Simplex facet;
        facet.dim = s.dim - 1;
        std::int32_t w = 0;
        for (std::int32_t v = 0; v <= s.dim; ++v)
          if (v != drop) facet.verts[w++] = s.verts[static_cast<std::size_t>(v)];
        facets[static_cast<std::size_t>(drop)] = lookup(facet);
      }
      std::sort(facets.begin(), facets.begin() + s.dim + 1);
      for (std::int32_t f = 0; f <= s.dim; ++f) {
        if (facets[static_cast<std::size_t>(f)] >= j)
          throw FiltrationError("face does not precede its coface; corrupt filtration order");
        bm.entries.push_back(facets[static_cast<std::size_t>(f)]);
      }
    }
    bm.offsets.push_back(static_cast<std::int64_t>(bm.entries.size()));
  }
  return bm;
}

std::span<const std::int32_t> ReducedMatrix::column(std::int64_t j) const {
  auto it = std::lower_bound(nonzero_cols_.begin(), nonzero_cols_.end(), j);
  if (it == nonzero_cols_.end() || *it != j) return {};
  const std::size_t slot = static_cast<std::size_t>(it - nonzero_cols_.begin());
  return {entries_.data() + offsets_[slot], entries_.data() + offsets_[slot + 1]};
}

ReduceResult reduce(const BoundaryMatrix& matrix) {
  const std::int64_t m = matrix.columns();

  ReduceResult result;
  result.partner.assign(static_cast<std::size_t>(m), -1);

  // pivot_slot[row]: index into `store` of the reduced column owning `row`
  // as its lowest entry, or -1.
  std::vector<std::int32_t> pivot_slot(static_cast<std::size_t>(m), -1);
  std::vector<std::vector<std::int32_t>> store;
  std::vector<std::int64_t> store_col;  // owning column id per slot
  std::vector<bool> cleared(static_cast<std::size_t>(m), false);

  std::int8_t top = 0;
  for (std::int64_t j = 0; j < m; ++j) top = std::max(top, matrix.dims[static_cast<std::size_t>(j)]);

  std::vector<std::int32_t> working, scratch;
  for (std::int8_t d = top; d >= 1; --d) {
    for (std::int64_t j = 0; j < m; ++j) {
      if (matrix.dims[static_cast<std::size_t>(j)] != d) continue;
      // A column claimed as a pivot row by dimension d+1 is a known birth:
      // it reduces to zero, so skip the work (clearing).
      if (cleared[static_cast<std::size_t>(j)]) continue;

      auto col = matrix.column(j);
      working.assign(col.begin(), col.end());
      while (!working.empty()) {
        const std::int32_t low = working.back();
        const std::int32_t slot = pivot_slot[static_cast<std::size_t>(low)];
        if (slot < 0) {
          pivot_slot[static_cast<std::size_t>(low)] = static_cast<std::int32_t>(store.size());
          store.push_back(working);
          store_col.push_back(j);
          result.partner[static_cast<std::size_t>(low)] = static_cast<std::int32_t>(j);
          result.partner[static_cast<std::size_t>(j)] = low;
          cleared[static_cast<std::size_t>(low)] = true;
          break;
        }
        // Z/2 addition: symmetric difference of two ascending index lists.
        const auto& other = store[static_cast<std::size_t>(slot)];
        scratch.clear();
        std::size_t a = 0, b = 0;
        while (a < working.size() && b < other.size()) {
          if (working[a] < other[b]) scratch.push_back(working[a++]);
          else if (other[b] < working[a]) scratch.push_back(other[b++]);
          else { ++a; ++b; }
        }
        scratch.insert(scratch.end(), working.begin() + static_cast<std::ptrdiff_t>(a), working.end());
        scratch.insert(scratch.end(), other.begin() + static_cast<std::ptrdiff_t>(b), other.end());
        working.swap(scratch);
      }
    }
  }

  // Pack the surviving nonzero columns, sorted by column id.
  std::vector<std::int64_t> order(store.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return store_col[static_cast<std::size_t>(a)] < store_col[static_cast<std::size_t>(b)];
  });
  std::vector<std::int64_t> nonzero_cols, offsets;
  std::vector<std::int32_t> entries;
  offsets.push_back(0);
  for (std::int64_t slot : order) {
    nonzero_cols.push_back(store_col[static_cast<std::size_t>(slot)]);
    const auto& colv = store[static_cast<std::size_t>(slot)];
    entries.insert(entries.end(), colv.begin(), colv.end());
    offsets.push_back(static_cast<std::int64_t>(entries.size()));
  }
  result.matrix = ReducedMatrix(m, std::move(nonzero_cols), std::move(offsets), std::move(entries));
  return result;
}

PersistenceDiagram extract_diagram(const RipsFiltration& filt, const ReduceResult& reduction) {
  const std::int64_t m = static_cast<std::int64_t>(filt.simplices.size());
  if (static_cast<std::int64_t>(reduction.partner.size()) != m)
    throw ShapeError("reduction does not match the filtration size");

  PersistenceDiagram diagram;
  diagram.max_dim = filt.max_dim;
  diagram.threshold = filt.threshold;
  diagram.simplex_count = m;

  for (std::int64_t i = 0; i < m; ++i) {
    const Simplex& s = filt.simplices[static_cast<std::size_t>(i)];
    const std::int32_t p = reduction.partner[static_cast<std::size_t>(i)];
    if (p >= 0 && p < i) continue;  // death side of a pair
    if (p < 0) {
      if (s.dim <= filt.max_dim)
        diagram.pairs.push_back(
            {s.dim, s.diameter, std::numeric_limits<double>::infinity()});
      else
        ++diagram.unkilled_top_count;
    } else {
      const Simplex& killer = filt.simplices[static_cast<std::size_t>(p)];
      diagram.pairs.push_back({s.dim, s.diameter, killer.diameter});
    }
  }

  std::sort(diagram.pairs.begin(), diagram.pairs.end(),
            [](const PersistencePair& a, const PersistencePair& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              return a.death < b.death;
            });
  return diagram;
}

PersistenceDiagram compute_persistence(const DistanceMatrix& dm, int max_dim,
                                       double threshold, std::int64_t simplex_cap) {
  const RipsFiltration filt = rips_filtration(dm, max_dim, threshold, simplex_cap);
  const BoundaryMatrix bm = build_boundary_matrix(filt);
  const ReduceResult red = reduce(bm);
  return extract_diagram(filt, red);
}

BettiNumbers betti_at(const PersistenceDiagram& diagram, double t) {
  if (!(t >= 0.0) || t > diagram.threshold)
    throw ParameterError("scale t must lie in [0, threshold]");
  BettiNumbers out;
  out.scale = t;
  out.betti.assign(static_cast<std::size_t>(diagram.max_dim) + 1, 0);
  for (const PersistencePair& p : diagram.pairs)
    if (p.birth <= t && t < p.death) ++out.betti[static_cast<std::size_t>(p.dim)];
  return out;
}

namespace {

double persistence_of(const PersistencePair& p) { return p.death - p.birth; }

}  // namespace

std::vector<PersistencePair> dominant_features(const PersistenceDiagram& diagram,
                                               int dim, std::int64_t k) {
  if (k < 1) throw ParameterError("dominant_features requires k >= 1");
  std::vector<PersistencePair> of_dim;
  for (const PersistencePair& p : diagram.pairs)
    if (p.dim == dim) of_dim.push_back(p);
  std::sort(of_dim.begin(), of_dim.end(),
            [](const PersistencePair& a, const PersistencePair& b) {
              const double pa = persistence_of(a), pb = persistence_of(b);
              if (pa != pb) return pa > pb;
              if (a.birth != b.birth) return a.birth < b.birth;
              return a.death < b.death;
            });
  if (static_cast<std::int64_t>(of_dim.size()) > k)
    of_dim.resize(static_cast<std::size_t>(k));
  return of_dim;
}

double dominant_bar_mid_scale(const PersistenceDiagram& diagram, int dim) {
  const auto top = dominant_features(diagram, dim, 1);
  if (top.empty())
    throw ParameterError("no bars of dimension " + std::to_string(dim));
  const double death = std::min(top[0].death, diagram.threshold);
  return 0.5 * (top[0].birth + death);
}

void write_diagram_csv(const PersistenceDiagram& diagram, std::ostream& os,
                       bool include_zero_persistence) {
  os << "dim,birth,death\n";
  for (const PersistencePair& p : diagram.pairs) {
    if (!include_zero_persistence && is_zero_persistence(p)) continue;
    os << p.dim << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
  }
}

void write_diagram_svg(const PersistenceDiagram& diagram, std::ostream& os) {
  double max_finite = 0.0;
  for (const PersistencePair& p : diagram.pairs) {
    max_finite = std::max(max_finite, p.birth);
    if (std::isfinite(p.death)) max_finite = std::max(max_finite, p.death);
  }
  if (max_finite <= 0.0) max_finite = 1.0;
  const double inf_line = max_finite * 1.08;

  std::vector<SvgSeries> series;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};
  for (int d = 0; d <= diagram.max_dim; ++d) {
    SvgSeries s;
    s.name = "H" + std::to_string(d);
    s.marker = d % 3;
    s.color = kColors[d % 3];
    for (const PersistencePair& p : diagram.pairs) {
      if (p.dim != d || is_zero_persistence(p)) continue;
      s.x.push_back(p.birth);
      s.y.push_back(std::isfinite(p.death) ? p.death : inf_line);
    }
    series.push_back(std::move(s));
  }

  SvgOptions opts;
  opts.x_label = "birth";
  opts.y_label = "death";
  opts.title = "persistence diagram";
  opts.diagonal = true;
  opts.hline = inf_line;
  opts.hline_label = "inf";
  opts.equal_axes = true;
  write_scatter_svg(os, series, opts);
}

}  // namespace topo
