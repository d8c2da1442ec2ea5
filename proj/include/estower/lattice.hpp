#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace estower {

enum class BondKind { plain, strong, weak };

struct Bond {
    int i = 0;
    int j = 0;
    BondKind kind = BondKind::plain;
};

// A multi-spin interaction cell: an ordered site tuple plus one or more pair
// decompositions, each defining a product of two-site projectors. On
// wrap-degenerate lattices (an extent of 2) pairs may repeat; they are kept as
// formal terms.
struct Plaquette {
    using Pairing = std::vector<std::pair<int, int>>;   // nearest-neighbor pairs, i < j
    std::vector<int> sites;                             // 4 or 6 entries
    std::vector<Pairing> pairings;
};

// Periodic Lx x Ly square lattice, site index s = x + Lx*y.
class Lattice {
  public:
    Lattice(int lx, int ly);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int n() const { return lx_ * ly_; }
    static constexpr int dim = 2;

    int site(int x, int y) const;               // periodic wrap on both axes
    int x_of(int s) const { return s % lx_; }
    int y_of(int s) const { return s / lx_; }

    // +x, -x, +y, -y neighbors (duplicates possible when an extent is 2)
    std::array<int, 4> neighbors(int s) const;

    // All nearest-neighbor bonds: one +x and one +y bond per site, 2n total.
    // Wrap duplicates between the same site pair are kept as distinct entries.
    std::vector<Bond> nn_bonds() const;

  private:
    int lx_, ly_;
};

// Columnar dimer pattern: vertical bonds (x,y)-(x,y+1) with y even are strong,
// every other nearest-neighbor bond is weak.
std::vector<Bond> dimer_bonds(const Lattice& lat);

// Three parallel nearest-neighbor bonds per cell, both orientations, one cell
// per translation: 2 * Lx * Ly plaquettes of 6 sites.
std::vector<Plaquette> jq3_plaquettes(const Lattice& lat);

// 2x2 squares on the (x+y)-even checkerboard, Lx*Ly/2 plaquettes. Each carries
// two pairings (horizontal and vertical) unless single_pairing is set, in which
// case only the horizontal pairing is emitted.
std::vector<Plaquette> cbjq_plaquettes(const Lattice& lat, bool single_pairing = false);

struct Cut {
    std::vector<int> a_sites;   // ordered subsystem sites
    std::vector<int> b_sites;   // ascending complement
};

// Descriptor grammar: "row:<y>" (ring of Lx sites along x) or
// "sites:<comma-separated site indices>".
Cut make_cut(const Lattice& lat, const std::string& descriptor);

} // namespace estower
