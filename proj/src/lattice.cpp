#include "estower/lattice.hpp"

#include "estower/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace estower {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

Bond canonical(int i, int j, BondKind kind) {
    if (i > j) std::swap(i, j);
    return Bond{i, j, kind};
}

} // namespace

Lattice::Lattice(int lx, int ly) : lx_(lx), ly_(ly) {
    if (lx < 2 || ly < 2)
        throw config_error("lattice dimensions must be >= 2, got " + std::to_string(lx) + "x" +
                           std::to_string(ly));
    if (lx % 2 != 0 || ly % 2 != 0)
        throw config_error("lattice dimensions must be even, got " + std::to_string(lx) + "x" +
                           std::to_string(ly));
}

int Lattice::site(int x, int y) const { return mod(x, lx_) + lx_ * mod(y, ly_); }

std::array<int, 4> Lattice::neighbors(int s) const {
    const int x = x_of(s), y = y_of(s);
    return {site(x + 1, y), site(x - 1, y), site(x, y + 1), site(x, y - 1)};
}

std::vector<Bond> Lattice::nn_bonds() const {
    std::vector<Bond> bonds;
    bonds.reserve(2 * n());
    for (int y = 0; y < ly_; ++y)
        for (int x = 0; x < lx_; ++x) {
            bonds.push_back(canonical(site(x, y), site(x + 1, y), BondKind::plain));
            bonds.push_back(canonical(site(x, y), site(x, y + 1), BondKind::plain));
        }
    return bonds;
}

std::vector<Bond> dimer_bonds(const Lattice& lat) {
    // columnar pattern with the strong dimers perpendicular to the row rings
    // used as subsystem cuts, so a row cut severs every dimer it touches
    std::vector<Bond> bonds;
    bonds.reserve(2 * lat.n());
    for (int y = 0; y < lat.ly(); ++y)
        for (int x = 0; x < lat.lx(); ++x) {
            const BondKind vertical = (y % 2 == 0) ? BondKind::strong : BondKind::weak;
            bonds.push_back(canonical(lat.site(x, y), lat.site(x + 1, y), BondKind::weak));
            bonds.push_back(canonical(lat.site(x, y), lat.site(x, y + 1), vertical));
        }
    return bonds;
}

std::vector<Plaquette> jq3_plaquettes(const Lattice& lat) {
    std::vector<Plaquette> plaquettes;
    plaquettes.reserve(2 * lat.n());
    for (int y = 0; y < lat.ly(); ++y)
        for (int x = 0; x < lat.lx(); ++x) {
            // three stacked horizontal bonds
            Plaquette h;
            h.pairings.emplace_back();
            for (int r = 0; r < 3; ++r) {
                const int a = lat.site(x, y + r), b = lat.site(x + 1, y + r);
                h.sites.push_back(a);
                h.sites.push_back(b);
                h.pairings[0].emplace_back(std::min(a, b), std::max(a, b));
            }
            plaquettes.push_back(std::move(h));
            // three side-by-side vertical bonds
            Plaquette v;
            v.pairings.emplace_back();
            for (int c = 0; c < 3; ++c) {
                const int a = lat.site(x + c, y), b = lat.site(x + c, y + 1);
                v.sites.push_back(a);
                v.sites.push_back(b);
                v.pairings[0].emplace_back(std::min(a, b), std::max(a, b));
            }
            plaquettes.push_back(std::move(v));
        }
    return plaquettes;
}

std::vector<Plaquette> cbjq_plaquettes(const Lattice& lat, bool single_pairing) {
    std::vector<Plaquette> plaquettes;
    plaquettes.reserve(lat.n() / 2);
    for (int y = 0; y < lat.ly(); ++y)
        for (int x = 0; x < lat.lx(); ++x) {
            if ((x + y) % 2 != 0) continue;
            const int ll = lat.site(x, y), lr = lat.site(x + 1, y);
            const int ul = lat.site(x, y + 1), ur = lat.site(x + 1, y + 1);
            Plaquette p;
            p.sites = {ll, lr, ul, ur};
            Plaquette::Pairing horizontal{{std::min(ll, lr), std::max(ll, lr)},
                                          {std::min(ul, ur), std::max(ul, ur)}};
            p.pairings.push_back(std::move(horizontal));
            if (!single_pairing) {
                Plaquette::Pairing vertical{{std::min(ll, ul), std::max(ll, ul)},
                                            {std::min(lr, ur), std::max(lr, ur)}};
                p.pairings.push_back(std::move(vertical));
            }
            plaquettes.push_back(std::move(p));
        }
    return plaquettes;
}

Cut make_cut(const Lattice& lat, const std::string& descriptor) {
    Cut cut;
    const auto colon = descriptor.find(':');
    const std::string head = descriptor.substr(0, colon);
    if (colon == std::string::npos)
        throw config_error("cut descriptor must be row:<y> or sites:<list>, got '" + descriptor +
                           "'");
    const std::string body = descriptor.substr(colon + 1);
    if (head == "row") {
        int y = -1;
        try {
            size_t pos = 0;
            y = std::stoi(body, &pos);
            if (pos != body.size()) throw std::invalid_argument(body);
        } catch (const std::exception&) {
            throw config_error("invalid row index '" + body + "'");
        }
        if (y < 0 || y >= lat.ly())
            throw config_error("row " + std::to_string(y) + " out of range for Ly=" +
                               std::to_string(lat.ly()));
        for (int x = 0; x < lat.lx(); ++x) cut.a_sites.push_back(lat.site(x, y));
    } else if (head == "sites") {
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            int s = -1;
            try {
                size_t pos = 0;
                s = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw config_error("invalid site index '" + tok + "' in cut descriptor");
            }
            if (s < 0 || s >= lat.n())
                throw config_error("site " + std::to_string(s) + " out of range for n=" +
                                   std::to_string(lat.n()));
            cut.a_sites.push_back(s);
        }
    } else {
        throw config_error("unknown cut kind '" + head + "'");
    }

    std::set<int> in_a(cut.a_sites.begin(), cut.a_sites.end());
    if (in_a.size() != cut.a_sites.size()) throw config_error("cut contains duplicate sites");
    if (cut.a_sites.empty()) throw config_error("cut subsystem is empty");
    if (static_cast<int>(cut.a_sites.size()) >= lat.n())
        throw config_error("cut subsystem covers the whole lattice");
    for (int s = 0; s < lat.n(); ++s)
        if (!in_a.count(s)) cut.b_sites.push_back(s);
    return cut;
}

} // namespace estower
