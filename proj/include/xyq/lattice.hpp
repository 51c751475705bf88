#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace xyq {

enum class LatticeKind { Chain, Ladder, Torus };

inline std::string to_string(LatticeKind k) {
    switch (k) {
    case LatticeKind::Chain: return "chain";
    case LatticeKind::Ladder: return "ladder";
    case LatticeKind::Torus: return "torus";
    }
    throw std::logic_error("unknown LatticeKind");
}

using Bond = std::pair<int, int>;  // unordered pair, stored with first < second

/// Periodic lattice: site count plus deduplicated nearest-neighbor bond list.
///
/// Site ordering is row-major for the torus and rail-major for the ladder
/// (rail 0 sites 0..L-1, then rail 1 sites L..2L-1).
struct Lattice {
    LatticeKind kind;
    int n_sites = 0;
    std::vector<Bond> bonds;
    int rows = 0;  // rails for Ladder, rows for Torus, 1 for Chain
    int cols = 0;

    std::vector<int> degrees() const {
        std::vector<int> deg(n_sites, 0);
        for (const auto& [i, j] : bonds) {
            ++deg[i];
            ++deg[j];
        }
        return deg;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = to_string(kind);
        j["n_sites"] = n_sites;
        j["rows"] = rows;
        j["cols"] = cols;
        j["site_ordering"] = kind == LatticeKind::Ladder
                                 ? "rail-major (rail 0 sites, then rail 1 sites)"
                                 : "row-major";
        j["bonds"] = nlohmann::json::array();
        for (const auto& [a, b] : bonds) j["bonds"].push_back({a, b});
        return j;
    }
};

namespace detail {

inline void add_bond(std::set<Bond>& bonds, int i, int j) {
    if (i == j) throw std::invalid_argument("bond endpoints coincide");
    bonds.insert({std::min(i, j), std::max(i, j)});
}

}  // namespace detail

/// Builds a periodic chain (N >= 3), a 2xL ladder with periodic rails
/// (L >= 3), or an RxC torus (R, C >= 3).  The minimum extents keep
/// wrap-around bonds distinct from direct ones.
inline Lattice build_lattice(LatticeKind kind, std::array<int, 2> dimensions) {
    Lattice lat;
    lat.kind = kind;
    std::set<Bond> bonds;
    switch (kind) {
    case LatticeKind::Chain: {
        const int n = dimensions[0];
        if (n < 3)
            throw std::invalid_argument(
                "chain requires N >= 3 (shorter rings duplicate the wrap-around bond)");
        lat.n_sites = n;
        lat.rows = 1;
        lat.cols = n;
        for (int i = 0; i < n; ++i) detail::add_bond(bonds, i, (i + 1) % n);
        break;
    }
    case LatticeKind::Ladder: {
        const int L = dimensions[1];
        if (dimensions[0] != 2)
            throw std::invalid_argument("ladder has exactly 2 rails");
        if (L < 3)
            throw std::invalid_argument(
                "ladder requires L >= 3 (shorter rails duplicate the wrap-around bond)");
        lat.n_sites = 2 * L;
        lat.rows = 2;
        lat.cols = L;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < L; ++c)
                detail::add_bond(bonds, r * L + c, r * L + (c + 1) % L);  // rails, PBC
        for (int c = 0; c < L; ++c) detail::add_bond(bonds, c, L + c);    // rungs, open
        break;
    }
    case LatticeKind::Torus: {
        const int R = dimensions[0], C = dimensions[1];
        if (R < 3 || C < 3)
            throw std::invalid_argument(
                "torus requires R, C >= 3 (extent 2 duplicates wrap-around bonds)");
        lat.n_sites = R * C;
        lat.rows = R;
        lat.cols = C;
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                const int i = r * C + c;
                detail::add_bond(bonds, i, r * C + (c + 1) % C);
                detail::add_bond(bonds, i, ((r + 1) % R) * C + c);
            }
        break;
    }
    }
    lat.bonds.assign(bonds.begin(), bonds.end());
    return lat;
}

/// Bond classification used when reporting per-bond-type observables.
/// Average is a synthetic label for the bond-count-weighted mean over types;
/// classify_bond never returns it.
enum class BondType { ChainBond, Rail, Rung, Row, Column, Average };

inline std::string to_string(BondType t) {
    switch (t) {
    case BondType::ChainBond: return "chain";
    case BondType::Rail: return "rail";
    case BondType::Rung: return "rung";
    case BondType::Row: return "row";
    case BondType::Column: return "column";
    case BondType::Average: return "average";
    }
    throw std::logic_error("unknown BondType");
}

inline BondType classify_bond(const Lattice& lat, const Bond& b) {
    switch (lat.kind) {
    case LatticeKind::Chain: return BondType::ChainBond;
    case LatticeKind::Ladder:
        return (b.second - b.first == lat.cols) ? BondType::Rung : BondType::Rail;
    case LatticeKind::Torus: {
        const int r1 = b.first / lat.cols, r2 = b.second / lat.cols;
        return (r1 == r2) ? BondType::Row : BondType::Column;
    }
    }
    throw std::logic_error("unknown LatticeKind");
}

/// One representative bond per bond type, in a deterministic order.
inline std::vector<std::pair<BondType, Bond>> representative_bonds(const Lattice& lat) {
    std::vector<std::pair<BondType, Bond>> out;
    for (const auto& b : lat.bonds) {
        const BondType t = classify_bond(lat, b);
        bool seen = false;
        for (const auto& [tt, bb] : out) seen |= (tt == t);
        if (!seen) out.emplace_back(t, b);
    }
    return out;
}

/// Fraction of the lattice's bonds belonging to each type.
inline std::vector<std::pair<BondType, double>> bond_type_weights(const Lattice& lat) {
    std::vector<std::pair<BondType, int>> counts;
    for (const auto& b : lat.bonds) {
        const BondType t = classify_bond(lat, b);
        bool found = false;
        for (auto& [tt, c] : counts)
            if (tt == t) {
                ++c;
                found = true;
            }
        if (!found) counts.emplace_back(t, 1);
    }
    std::vector<std::pair<BondType, double>> out;
    for (const auto& [t, c] : counts)
        out.emplace_back(t, static_cast<double>(c) / lat.bonds.size());
    return out;
}

inline bool is_bond(const Lattice& lat, int i, int j) {
    const Bond b{std::min(i, j), std::max(i, j)};
    for (const auto& bb : lat.bonds)
        if (bb == b) return true;
    return false;
}

}  // namespace xyq
