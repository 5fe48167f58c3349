#pragma once

#include <optional>
#include <vector>

#include "bdcover/coeff.hpp"
#include "bdcover/intmat.hpp"

namespace bdcover {

/// Free abelian group Z^rank with the standard basis e_1..e_rank.
struct Lattice {
    std::size_t rank = 0;
    bool operator==(const Lattice& o) const { return rank == o.rank; }
    bool operator!=(const Lattice& o) const { return rank != o.rank; }
};

using Vec = std::vector<Int>;

/// Homomorphism between lattices, given by a (target.rank x source.rank)
/// matrix acting on column vectors.
struct LatticeHom {
    Lattice source;
    Lattice target;
    IntMatrix matrix;

    LatticeHom(Lattice src, Lattice tgt, IntMatrix m)
        : source(src), target(tgt), matrix(std::move(m)) {
        if (matrix.rows() != target.rank || matrix.cols() != source.rank)
            throw DimensionMismatch("hom matrix shape");
    }

    static LatticeHom identity(Lattice l) {
        return LatticeHom(l, l, IntMatrix::identity(l.rank));
    }

    Vec apply(const Vec& v) const { return matrix.apply(v); }

    LatticeHom compose(const LatticeHom& inner) const {
        if (inner.target != source) throw DimensionMismatch("hom composition");
        return LatticeHom(inner.source, target, matrix * inner.matrix);
    }

    bool injective() const { return matrix.rank() == source.rank; }
};

/// Homomorphism Z^rank -> coefficient group, stored by basis values.
struct Character {
    Lattice domain;
    CoeffGroup group;
    std::vector<CoeffElem> values;  // one per basis vector

    CoeffElem eval(const Vec& v) const {
        if (v.size() != domain.rank) throw DimensionMismatch("character argument");
        CoeffElem acc = CoeffElem::zero(group);
        for (std::size_t i = 0; i < v.size(); ++i) acc = acc + values[i].times(v[i]);
        return acc;
    }
};

/// Index [target : image] of an injective hom; nullopt is the
/// infinity-marker (image not of full rank in the target).
std::optional<Int> sublattice_index(const LatticeHom& incl);

/// Extend a character given on a finite-index sublattice to the ambient
/// lattice, solving in the coefficient group; nullopt when no extension
/// exists (never for QmodZ).
std::optional<Character> extend_character(const LatticeHom& sub, const Character& values,
                                          const Lattice& ambient);

}  // namespace bdcover
