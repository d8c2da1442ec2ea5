#pragma once

#include "estower/lattice.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace estower {

std::int64_t binomial(int n, int k);

// All n-bit spin configurations with a fixed number of up spins (bit b set
// means site b is up), in ascending numeric order, with bidirectional lookup.
// Lookup is O(1) through a direct-address table when the table fits in a
// modest footprint (n <= 24), binary search over the sorted list otherwise.
class SectorBasis {
  public:
    SectorBasis(int n, int n_up);

    int n() const { return n_; }
    int n_up() const { return n_up_; }
    std::int64_t size() const { return static_cast<std::int64_t>(states_.size()); }

    std::uint32_t state(std::int64_t idx) const { return states_[idx]; }

    // ordinal of a configuration; -1 if it is not in this sector
    std::int64_t index(std::uint32_t config) const;

    const std::vector<std::uint32_t>& states() const { return states_; }

  private:
    int n_, n_up_;
    std::vector<std::uint32_t> states_;
    std::vector<std::int32_t> table_;   // empty when falling back to binary search
};

// a_config bit k = config bit at a_sites[k]; likewise for b. Exact inverse of
// join_config.
std::pair<std::uint32_t, std::uint32_t> split_config(std::uint32_t config, const Cut& cut);
std::uint32_t join_config(std::uint32_t a_config, std::uint32_t b_config, const Cut& cut);

} // namespace estower
