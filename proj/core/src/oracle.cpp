#include "topoprobe/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <vector>

namespace topo {

namespace {

// Dense Z/2 column: one bit per row, packed in 64-bit words.
using BitColumn = std::vector<std::uint64_t>;

int highest_bit(const BitColumn& col) {
  for (std::int64_t w = static_cast<std::int64_t>(col.size()) - 1; w >= 0; --w)
    if (col[static_cast<std::size_t>(w)])
      return static_cast<int>(w) * 64 + 63 - std::countl_zero(col[static_cast<std::size_t>(w)]);
  return -1;
}

void xor_into(BitColumn& dst, const BitColumn& src) {
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

// Rank of a set of columns by elimination on the highest set bit.
std::int64_t z2_rank(std::vector<BitColumn> columns) {
  std::map<int, BitColumn> pivots;
  std::int64_t rank = 0;
  for (auto& col : columns) {
    int hi = highest_bit(col);
    while (hi >= 0) {
      auto it = pivots.find(hi);
      if (it == pivots.end()) {
        pivots.emplace(hi, std::move(col));
        ++rank;
        break;
      }
      xor_into(col, it->second);
      hi = highest_bit(col);
    }
  }
  return rank;
}

}  // namespace

BettiNumbers oracle_betti(const RipsFiltration& filt, double t, std::int64_t simplex_cap) {
  const int top_dim = filt.max_dim + 1;

  // Simplices of the subcomplex at scale t, grouped by dimension, each as a
  // sorted vertex list.
  std::vector<std::vector<std::vector<std::int32_t>>> by_dim(
      static_cast<std::size_t>(top_dim) + 1);
  std::int64_t count = 0;
  for (const Simplex& s : filt.simplices) {
    if (s.diameter > t) continue;
    if (++count > simplex_cap)
      throw CapacityError("oracle subcomplex exceeds its cap of " +
                          std::to_string(simplex_cap) + " simplices");
    by_dim[static_cast<std::size_t>(s.dim)].emplace_back(s.begin(), s.end());
  }

  // Local index of each (k-1)-simplex, for boundary columns of dimension k.
  std::vector<std::int64_t> rank_d(static_cast<std::size_t>(top_dim) + 2, 0);
  for (int k = 1; k <= top_dim; ++k) {
    const auto& faces = by_dim[static_cast<std::size_t>(k - 1)];
    const auto& cells = by_dim[static_cast<std::size_t>(k)];
    if (cells.empty()) continue;

    std::map<std::vector<std::int32_t>, std::int64_t> face_index;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(faces.size()); ++i)
      face_index.emplace(faces[static_cast<std::size_t>(i)], i);

    const std::size_t words = (faces.size() + 63) / 64;
    std::vector<BitColumn> columns;
    columns.reserve(cells.size());
    for (const auto& cell : cells) {
      BitColumn col(words, 0);
      // facets: drop one vertex at a time
      std::vector<std::int32_t> facet(cell.size() - 1);
      for (std::size_t drop = 0; drop < cell.size(); ++drop) {
        std::size_t w = 0;
        for (std::size_t v = 0; v < cell.size(); ++v)
          if (v != drop) facet[w++] = cell[v];
        auto it = face_index.find(facet);
        if (it == face_index.end())
          throw FiltrationError("subcomplex is not closed under faces");
        col[static_cast<std::size_t>(it->second) / 64] ^=
            std::uint64_t{1} << (static_cast<std::size_t>(it->second) % 64);
      }
      columns.push_back(std::move(col));
    }
    rank_d[static_cast<std::size_t>(k)] = z2_rank(std::move(columns));
  }

  BettiNumbers out;
  out.scale = t;
  out.betti.resize(static_cast<std::size_t>(filt.max_dim) + 1);
  for (int k = 0; k <= filt.max_dim; ++k) {
    const auto n_k = static_cast<std::int64_t>(by_dim[static_cast<std::size_t>(k)].size());
    out.betti[static_cast<std::size_t>(k)] =
        n_k - rank_d[static_cast<std::size_t>(k)] - rank_d[static_cast<std::size_t>(k) + 1];
  }
  return out;
}

}  // namespace topo
