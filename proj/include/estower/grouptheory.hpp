#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace estower {

// quadratic Casimir eigenvalue J(J+N-2) of the fully symmetric SO(N) irrep
double casimir(int group_n, double j);

// dimension of the rank-J traceless symmetric tensor representation of SO(N)
std::int64_t symrep_dimension(int group_n, int j);

// SO(3) spin content of the fully symmetric SO(N) irrep with J boxes, for the
// embedding where the defining vector restricts to spin-1 plus (N-3) singlets.
struct BranchingTable {
    int group_n = 0;
    int j = 0;
    std::vector<std::int64_t> mult;   // mult[s] = number of spin-s multiplets, s = 0..j
    std::int64_t dim = 0;             // = symrep_dimension(group_n, j)

    std::int64_t states(int s) const { return mult[s] * (2 * s + 1); }
};

// Exact weight counting: multiplicities of the Sz weights of the degree-J
// symmetric power minus those of degree J-2 (traceless condition); then
// mult(S) = w(S) - w(S+1). Integer arithmetic throughout.
BranchingTable branch_to_so3(int group_n, int j);

// aligned text analogue of the irrep/spin-sector state-count table
std::string format_branching_text(int group_n, int j_max);
std::string format_branching_csv(int group_n, int j_max);

} // namespace estower
