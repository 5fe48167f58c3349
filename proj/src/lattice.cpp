#include "bdcover/lattice.hpp"

namespace bdcover {

std::optional<Int> sublattice_index(const LatticeHom& incl) {
    if (!incl.injective()) throw NonInjective("sublattice inclusion has nonzero kernel");
    if (incl.source.rank != incl.target.rank) return std::nullopt;  // infinite index
    SmithResult snf = smith_normal_form(incl.matrix);
    Int index = 1;
    for (std::size_t i = 0; i < incl.source.rank; ++i) {
        if (snf.D(i, i) == 0) return std::nullopt;
        index *= snf.D(i, i);
    }
    return index;
}

namespace {

std::vector<CoeffElem> apply_int_matrix(const IntMatrix& m, const std::vector<CoeffElem>& v,
                                        const CoeffGroup& g) {
    std::vector<CoeffElem> out(m.rows(), CoeffElem::zero(g));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] = out[i] + v[j].times(m(i, j));
    return out;
}

}  // namespace

std::optional<Character> extend_character(const LatticeHom& sub, const Character& values,
                                          const Lattice& ambient) {
    if (sub.target != ambient || values.domain != sub.source)
        throw DimensionMismatch("extend_character shapes");
    if (!sub.injective()) throw NonInjective("extend_character needs injective inclusion");
    if (sub.source.rank != ambient.rank)
        throw IndexInfinite("extend_character needs a finite-index sublattice");

    // We need chi on the ambient basis with  M^T chi = values  where M is the
    // inclusion matrix (chi(sub(e_j)) = sum_i M_ij chi(e_i)).  Solve through
    // the Smith form of A = M^T:  U A V = D  =>  D (V^{-1} chi) = U values.
    const IntMatrix A = sub.matrix.transpose();
    SmithResult snf = smith_normal_form(A);
    const CoeffGroup& g = values.group;
    std::vector<CoeffElem> w = apply_int_matrix(snf.U, values.values, g);

    const std::size_t n = ambient.rank;
    std::vector<CoeffElem> z;
    z.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (snf.D(i, i) == 0) throw IndexInfinite("degenerate inclusion");
        auto sol = w[i].divide(snf.D(i, i));
        if (!sol) return std::nullopt;
        z.push_back(*sol);
    }
    std::vector<CoeffElem> chi = apply_int_matrix(snf.V, z, g);
    return Character{ambient, g, std::move(chi)};
}

}  // namespace bdcover
