#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "topoprobe/filtration.hpp"

namespace topo {

// Z/2 boundary matrix in filtration order: column j lists the filtration
// indices of the facets of simplex j, ascending. Vertex columns are empty.
struct BoundaryMatrix {
  std::vector<std::int64_t> offsets;  // size columns()+1
  std::vector<std::int32_t> entries;
  std::vector<std::int8_t> dims;      // dimension of each column's simplex

  std::int64_t columns() const { return static_cast<std::int64_t>(dims.size()); }
  std::span<const std::int32_t> column(std::int64_t j) const {
    return {entries.data() + offsets[static_cast<std::size_t>(j)],
            entries.data() + offsets[static_cast<std::size_t>(j) + 1]};
  }
};

BoundaryMatrix build_boundary_matrix(const RipsFiltration& filt);

// Reduced matrix: only nonzero columns are stored (each with a unique lowest
// row); every other column reduced to zero.
class ReducedMatrix {
 public:
  ReducedMatrix() = default;
  ReducedMatrix(std::int64_t n_cols, std::vector<std::int64_t> nonzero_cols,
                std::vector<std::int64_t> offsets, std::vector<std::int32_t> entries)
      : n_cols_(n_cols), nonzero_cols_(std::move(nonzero_cols)),
        offsets_(std::move(offsets)), entries_(std::move(entries)) {}

  std::int64_t columns() const { return n_cols_; }
  std::int64_t nonzero_count() const { return static_cast<std::int64_t>(nonzero_cols_.size()); }
  // Empty span when the column reduced to zero.
  std::span<const std::int32_t> column(std::int64_t j) const;

 private:
  std::int64_t n_cols_ = 0;
  std::vector<std::int64_t> nonzero_cols_;  // sorted
  std::vector<std::int64_t> offsets_;
  std::vector<std::int32_t> entries_;
};

struct ReduceResult {
  ReducedMatrix matrix;
  // partner[i] = j and partner[j] = i for each persistence pair (i births,
  // j kills, i < j); -1 for unpaired (essential) simplices.
  std::vector<std::int32_t> partner;
};

// Standard persistence reduction over Z/2 with the clearing optimization:
// dimensions are processed in descending order and columns claimed as pivot
// rows are zeroed without work. Within a dimension, each column repeatedly
// adds the earlier column sharing its lowest nonzero row until that row is
// unique or the column vanishes.
ReduceResult reduce(const BoundaryMatrix& matrix);

struct PersistencePair {
  std::int32_t dim = 0;
  double birth = 0.0;
  double death = 0.0;  // +inf for essential classes
};

inline bool is_zero_persistence(const PersistencePair& p) { return p.birth == p.death; }

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;  // dims 0..max_dim, sorted (dim, birth, death)
  std::int32_t max_dim = 0;
  double threshold = 0.0;
  std::int64_t simplex_count = 0;      // of the source filtration
  // Top-dimension (max_dim+1) simplices that created cycles nothing could
  // kill. They are outside the diagram's dimension range but are needed for
  // the conservation check: every simplex is exactly one birth or death.
  std::int64_t unkilled_top_count = 0;
};

PersistenceDiagram extract_diagram(const RipsFiltration& filt, const ReduceResult& reduction);

// Convenience: filtration -> boundary -> reduce -> diagram.
PersistenceDiagram compute_persistence(const DistanceMatrix& dm, int max_dim,
                                       double threshold,
                                       std::int64_t simplex_cap = kDefaultSimplexCap);

struct BettiNumbers {
  double scale = 0.0;
  std::vector<std::int64_t> betti;  // b0..b_max_dim
};

// Counts pairs alive at t (birth <= t < death). Requires 0 <= t <= threshold.
BettiNumbers betti_at(const PersistenceDiagram& diagram, double t);

// Top-k pairs of one dimension by persistence (descending; infinite deaths
// first; ties by earlier birth).
std::vector<PersistencePair> dominant_features(const PersistenceDiagram& diagram,
                                               int dim, std::int64_t k);

// Midpoint of the most persistent bar of `dim`, with infinite deaths capped
// at the filtration threshold; the scale at which Betti numbers are read off.
double dominant_bar_mid_scale(const PersistenceDiagram& diagram, int dim);

// CSV "dim,birth,death" with `inf` for essential classes. Zero-persistence
// pairs are hidden unless asked for: they carry no topological signal but are
// kept in the data model for conservation accounting.
void write_diagram_csv(const PersistenceDiagram& diagram, std::ostream& os,
                       bool include_zero_persistence = false);

// Birth/death scatter with a diagonal reference line, one marker shape per
// dimension, and essential classes pinned to a dashed "inf" line.
void write_diagram_svg(const PersistenceDiagram& diagram, std::ostream& os);

}  // namespace topo
