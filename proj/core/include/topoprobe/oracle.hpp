#pragma once

#include <cstdint>

#include "topoprobe/persistence.hpp"

namespace topo {

// Brute-force Betti numbers of the subcomplex at scale t: for each dimension
// k, b_k = dim ker d_k - rank d_{k+1}, with ranks obtained by dense Gaussian
// elimination over Z/2. Shares nothing with the reduction engine beyond the
// filtration type; it exists to validate that engine and was written first.
BettiNumbers oracle_betti(const RipsFiltration& filt, double t,
                          std::int64_t simplex_cap = 10'000);

}  // namespace topo
