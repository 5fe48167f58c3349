#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdcover/lattice.hpp"

namespace bdcover {

/// Classical families: A(n) is the root datum of GL_{n+1}; B_n, C_n, D_n are
/// SO_{2n+1}, Sp_{2n}, SO_{2n} in the standard e_i coordinates.
enum class Family { A, B, C, D };

std::string family_name(Family f);

struct RootDatum {
    Family family;
    std::size_t param;       ///< the subscript n of the family symbol
    Lattice Y;               ///< cocharacter lattice (rank = X rank)
    Lattice X;               ///< character lattice
    std::vector<Vec> roots;  ///< X-vectors
    std::vector<Vec> coroots;  ///< matched Y-vectors
    std::vector<std::size_t> simple;  ///< indices of the simple roots
    IntMatrix pairing;  ///< Gram matrix of <.,.> : X x Y -> Z (identity here)

    std::size_t rank() const { return Y.rank; }

    Int pair(const Vec& x, const Vec& y) const;

    std::optional<std::size_t> root_index(const Vec& alpha) const;
    std::optional<std::size_t> coroot_index(const Vec& coroot) const;
    bool is_coroot(const Vec& v) const { return coroot_index(v).has_value(); }

    /// Reflection s_alpha as a matrix acting on Y (columns = images of e_i).
    IntMatrix reflection_on_Y(std::size_t root_idx) const;
    /// Same reflection acting on X.
    IntMatrix reflection_on_X(std::size_t root_idx) const;

    /// True when the coroot is a nonnegative combination of simple coroots.
    bool coroot_is_positive(std::size_t idx) const;

    /// Coordinates of a Y-vector in the simple-coroot basis, when the vector
    /// lies in the span (rational solve with an integrality check).
    std::optional<Vec> simple_coroot_coordinates(const Vec& v) const;

private:
    // Lazily built lookup tables so index queries stay cheap at large rank.
    mutable std::map<Vec, std::size_t> root_lookup_, coroot_lookup_;
};

/// Build the standard root datum of the family (A requires n >= 0, B/C
/// require n >= 1, D requires n >= 2).
RootDatum build_root_datum(Family family, std::size_t n);

struct WeylElement {
    std::vector<std::size_t> word;  ///< simple reflection indices (into datum.simple)
    IntMatrix action;               ///< product of the reflections, acting on Y
};

WeylElement weyl_identity(const RootDatum& datum);
WeylElement weyl_simple(const RootDatum& datum, std::size_t simple_idx);
Vec weyl_act(const WeylElement& w, const Vec& y);

/// All elements of W as matrices on Y, by closure under the simple
/// reflections (intended for small rank).
std::vector<IntMatrix> weyl_group(const RootDatum& datum);

struct StarDecomposition {
    Vec coroot;
    std::vector<std::size_t> summands;  ///< positions into datum.simple, in order
};

/// One ordered decomposition of a positive coroot into simple coroots with
/// every prefix sum again a coroot.
StarDecomposition star_decompose(const RootDatum& datum, const Vec& coroot);

/// All such decompositions (exhaustive over orderings; small ranks only).
std::vector<StarDecomposition> star_decompose_all(const RootDatum& datum, const Vec& coroot,
                                                  std::size_t limit = 100000);

}  // namespace bdcover
