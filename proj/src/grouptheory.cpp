#include "estower/grouptheory.hpp"

#include "estower/basis.hpp"
#include "estower/errors.hpp"

#include <cstdio>
#include <sstream>

namespace estower {

namespace {

// weight multiplicity w(k) of the degree-j symmetric power of the SO(N)
// defining vector under the spin subgroup: choose a items of weight +1,
// b of weight -1 (a - b = k), and a size-(j-a-b) multiset of the N-2
// weight-0 flavors
std::int64_t sym_power_weight(int group_n, int j, int k) {
    if (j < 0) return 0;
    std::int64_t w = 0;
    for (int a = std::max(0, k); 2 * a - k <= j; ++a) {
        const int b = a - k;
        if (b < 0) continue;
        const int zeros = j - a - b;
        w += binomial(zeros + group_n - 3, group_n - 3);
    }
    return w;
}

} // namespace

double casimir(int group_n, double j) {
    if (group_n < 3) throw config_error("casimir requires N >= 3");
    if (j < 0) throw config_error("casimir requires J >= 0");
    return j * (j + group_n - 2);
}

std::int64_t symrep_dimension(int group_n, int j) {
    if (group_n < 3) throw config_error("symrep_dimension requires N >= 3");
    if (j < 0) throw config_error("symrep_dimension requires J >= 0");
    return binomial(j + group_n - 1, group_n - 1) - binomial(j + group_n - 3, group_n - 1);
}

BranchingTable branch_to_so3(int group_n, int j) {
    if (group_n < 3) throw config_error("branch_to_so3 requires N >= 3");
    if (j < 0) throw config_error("branch_to_so3 requires J >= 0");

    BranchingTable table;
    table.group_n = group_n;
    table.j = j;
    table.dim = symrep_dimension(group_n, j);
    table.mult.resize(j + 1, 0);

    std::vector<std::int64_t> w(j + 2, 0);   // w[k], k = 0..j+1
    for (int k = 0; k <= j + 1; ++k)
        w[k] = sym_power_weight(group_n, j, k) - sym_power_weight(group_n, j - 2, k);
    for (int s = 0; s <= j; ++s) table.mult[s] = w[s] - w[s + 1];

    std::int64_t total = 0;
    for (int s = 0; s <= j; ++s) {
        if (table.mult[s] < 0)
            throw numerical_error("negative multiplicity in branching table");
        total += table.states(s);
    }
    if (total != table.dim)
        throw numerical_error("branching table violates the dimension sum rule");
    return table;
}

std::string format_branching_text(int group_n, int j_max) {
    std::ostringstream out;
    out << "SO(" << group_n << ") fully symmetric irreps: state counts per SO(3) spin sector\n";
    out << "  J    dim |";
    for (int s = 0; s <= j_max; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof buf, " S=%-4d", s);
        out << buf;
    }
    out << "\n";
    for (int j = 0; j <= j_max; ++j) {
        const BranchingTable t = branch_to_so3(group_n, j);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%3d %6lld |", j, static_cast<long long>(t.dim));
        out << buf;
        for (int s = 0; s <= j; ++s) {
            std::snprintf(buf, sizeof buf, " %-6lld", static_cast<long long>(t.states(s)));
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::string format_branching_csv(int group_n, int j_max) {
    std::ostringstream out;
    out << "N,J,dim,S,multiplets,states\n";
    for (int j = 0; j <= j_max; ++j) {
        const BranchingTable t = branch_to_so3(group_n, j);
        for (int s = 0; s <= j; ++s)
            out << group_n << ',' << j << ',' << t.dim << ',' << s << ',' << t.mult[s] << ','
                << t.states(s) << "\n";
    }
    return out.str();
}

} // namespace estower
