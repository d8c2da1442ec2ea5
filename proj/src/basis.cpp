#include "estower/basis.hpp"

#include "estower/errors.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace estower {

namespace {
constexpr int kDirectTableMaxBits = 24;   // 2^24 int32 entries = 64 MiB
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

SectorBasis::SectorBasis(int n, int n_up) : n_(n), n_up_(n_up) {
    if (n < 0 || n > 32)
        throw config_error("sector basis capacity is 32 sites, got n=" + std::to_string(n));
    if (n_up < 0 || n_up > n)
        throw config_error("n_up=" + std::to_string(n_up) + " out of range for n=" +
                           std::to_string(n));

    states_.reserve(static_cast<std::size_t>(binomial(n, n_up)));
    if (n_up == 0) {
        states_.push_back(0);
    } else {
        // Gosper's hack: next-larger word with the same popcount
        const std::uint64_t last = (n_up >= n) ? ((std::uint64_t{1} << n) - 1)
                                               : (((std::uint64_t{1} << n_up) - 1) << (n - n_up));
        std::uint64_t v = (std::uint64_t{1} << n_up) - 1;
        while (true) {
            states_.push_back(static_cast<std::uint32_t>(v));
            if (v == last) break;
            const std::uint64_t c = v & (~v + 1);
            const std::uint64_t r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }

    if (n <= kDirectTableMaxBits) {
        table_.assign(std::size_t{1} << n, -1);
        for (std::size_t k = 0; k < states_.size(); ++k)
            table_[states_[k]] = static_cast<std::int32_t>(k);
    }
}

std::int64_t SectorBasis::index(std::uint32_t config) const {
    if (!table_.empty()) {
        if (config >= table_.size()) return -1;
        return table_[config];
    }
    const auto it = std::lower_bound(states_.begin(), states_.end(), config);
    if (it == states_.end() || *it != config) return -1;
    return it - states_.begin();
}

std::pair<std::uint32_t, std::uint32_t> split_config(std::uint32_t config, const Cut& cut) {
    std::uint32_t a = 0, b = 0;
    for (std::size_t k = 0; k < cut.a_sites.size(); ++k)
        a |= ((config >> cut.a_sites[k]) & 1u) << k;
    for (std::size_t k = 0; k < cut.b_sites.size(); ++k)
        b |= ((config >> cut.b_sites[k]) & 1u) << k;
    return {a, b};
}

std::uint32_t join_config(std::uint32_t a_config, std::uint32_t b_config, const Cut& cut) {
    std::uint32_t config = 0;
    for (std::size_t k = 0; k < cut.a_sites.size(); ++k)
        config |= ((a_config >> k) & 1u) << cut.a_sites[k];
    for (std::size_t k = 0; k < cut.b_sites.size(); ++k)
        config |= ((b_config >> k) & 1u) << cut.b_sites[k];
    return config;
}

} // namespace estower
