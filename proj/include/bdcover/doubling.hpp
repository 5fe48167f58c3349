#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bdcover/gfq.hpp"

namespace bdcover {

/// Dense matrix over a finite field; entries are GFq element indices.
class FqMatrix {
public:
    FqMatrix() : rows_(0), cols_(0) {}
    FqMatrix(std::shared_ptr<const GFq> F, std::size_t rows, std::size_t cols)
        : F_(std::move(F)), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static FqMatrix identity(std::shared_ptr<const GFq> F, std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::shared_ptr<const GFq>& field() const { return F_; }
    int& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    int at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    const std::vector<int>& entries() const { return e_; }

    bool operator==(const FqMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const FqMatrix& o) const { return !(*this == o); }
    bool operator<(const FqMatrix& o) const { return e_ < o.e_; }

    std::string describe() const;

private:
    std::shared_ptr<const GFq> F_;
    std::size_t rows_, cols_;
    std::vector<int> e_;
};

FqMatrix fq_mul(const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_add(const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_sub(const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_transpose(const FqMatrix& a);
/// Reduced row echelon form with zero rows removed: the canonical basis of
/// the row space.
FqMatrix fq_row_space(const FqMatrix& a);
std::size_t fq_rank(const FqMatrix& a);
int fq_det(const FqMatrix& a);
FqMatrix fq_inverse(const FqMatrix& a);  ///< NotInGroup if singular
bool fq_invertible(const FqMatrix& a);
/// Solve x * a = b for a row vector x; ShapeMismatch if inconsistent.
std::vector<int> fq_solve_row(const FqMatrix& a, const std::vector<int>& b);
/// Is the row vector v in the row space of a?
bool fq_in_row_space(const FqMatrix& a, const std::vector<int>& v);
/// Canonical basis of the intersection of two row spaces.
FqMatrix fq_intersect_row_spaces(const FqMatrix& a, const FqMatrix& b);

/// epsilon-skew form space over F_q: <x,y> = x * form * y^T with
/// form^T = -epsilon * form (epsilon = -1 symplectic, +1 symmetric;
/// epsilon = 0 marks a plain GL space with no form).
struct FormedSpace {
    std::shared_ptr<const GFq> F;
    std::size_t dim;
    FqMatrix form;
    int epsilon;
};

/// Finite classical matrix group with its full element list (small ranks).
struct MatrixGroup {
    char family;  // 'A' = GL_m, 'B' = SO_{2m+1}, 'C' = Sp_{2m}, 'D' = SO_{2m}
    std::size_t m;
    FormedSpace space;
    std::vector<FqMatrix> elements;
    std::vector<FqMatrix> generators;  // small verified generating set

    std::size_t order() const { return elements.size(); }
    bool contains(const FqMatrix& g) const;
};

/// Build G(F_q) by exhaustive form-preservation filtering; the element count
/// is checked against the classical order formula and the generating set is
/// verified by closure.
MatrixGroup build_group(char family, std::size_t m, long q,
                        std::size_t max_states = 1u << 24);

/// W^{++2k} with form sum <x_i,x_i'> - <y_i,y_i'>, coordinates ordered
/// (x_1..x_k; y_k..y_1); carries the maximal isotropic W^{Delta,k} and the
/// default flag Y_1 = W_k^nabla, ..., Y_{k-1} = W_2^nabla + ... + W_k^nabla.
struct DoubledSpace {
    FormedSpace base;
    std::size_t k;
    FormedSpace total;
    FqMatrix w_delta;            // kn x 2kn rows spanning W^{Delta,k}
    std::vector<FqMatrix> flag;  // Y_1, ..., Y_{k-1}
    FqMatrix y_k;                // Y_k = perp of Y_{k-1}
};

DoubledSpace make_doubled(const FormedSpace& base, std::size_t k);

/// Is g an isometry of the space (and det 1 when the space is orthogonal-
/// with-determinant restriction handled by the caller)?
bool preserves_form(const FormedSpace& space, const FqMatrix& g);

/// iota(g1, g2): g1 on every copy except the last minus copy, g2 there.
FqMatrix iota(const FqMatrix& g1, const FqMatrix& g2, const DoubledSpace& dbl);

/// The F_q-argument of the flag character: sum over i of
/// trace(u_i compose A_i), with A_i the identity identification for
/// i <= k-2 and the unscaled nabla -> Delta identification for A_{k-1}
/// (a factor of 2 would be a unit rescaling in odd characteristic and
/// would kill the functional in characteristic 2).
int psi_argument(const FqMatrix& u, const DoubledSpace& dbl);

enum class OmegaClass { Omega1, Omega2, Tilde };

struct OmegaReport {
    OmegaClass label;
    std::size_t intersection_dim;  // dim(L cap Y_{k-1})
    bool geometric_trivial;        // intersection_dim == 0
    bool normalization_fired;      // repeated subspaces deleted in the induced pair
};

/// Classify the coset of gamma: Omega1 via a nontrivial character on
/// gamma^{-1} N gamma cap N-bullet (linear algebra on the unipotent
/// parameter space), Omega2 via the induced pair on the Levi lying higher
/// than (k^m), Tilde otherwise.
OmegaReport omega_classify(const FqMatrix& gamma, const DoubledSpace& dbl,
                           std::size_t max_states = 1u << 22);

/// Ascending chain of totally isotropic (or plain, for GL spaces) row spans.
struct IsotropicFlag {
    std::vector<FqMatrix> subspaces;
};

/// Flag on a GL space together with maps A_i: Y_i/Y_{i-1} -> Y_{i+1}/Y_i
/// written in the flag's quotient bases.
struct WhittakerPair {
    IsotropicFlag flag;
    std::vector<FqMatrix> a_maps;
};

enum class PairClass { InOrbitKm, Higher, Other };

struct PairReport {
    PairClass cls;
    std::size_t rank_a;            // rank of A_1
    std::size_t stabilizer_gl_m;   // m when the pair is full (GL_m stabilizer part)
    std::size_t s_a_dim;           // dim of the unipotent S_A when rank_a < m
};

PairReport whittaker_pair_classify(const WhittakerPair& pair, std::size_t k,
                                   std::size_t m);

struct CosetOrbit {
    FqMatrix representative;  // canonical Lagrangian basis rows
    std::size_t size;
    std::string cls;  // main | negligible | omega1 | omega2
    std::size_t stabilizer_order;
    bool n_minus_detected;
};

struct DoubleCosetReport {
    char family;
    std::size_t m, k;
    long q;
    std::size_t total_cosets;  // maximal isotropic count
    std::vector<CosetOrbit> orbits;
};

/// Enumerate P\G-square as maximal isotropic subspaces and decompose under
/// the right action of iota(G x G) N-bullet.  Deterministic; jobs > 1
/// parallelizes the orbit expansion with identical output.
DoubleCosetReport enumerate_double_cosets(char family, std::size_t m, long q,
                                          std::size_t k,
                                          std::size_t max_states = 1u << 22,
                                          int jobs = 1);

/// Determinant of the conjugation action of iota(g1,g2) on the Lie algebra
/// of N-bullet, as an F_q element index (expected 1).
int modular_character_check(const FqMatrix& g1, const FqMatrix& g2,
                            const DoubledSpace& dbl);

/// All elements of the unipotent radical N-bullet of the flag stabilizer
/// (trivial on every flag quotient), by exhausting the linear parameter
/// space and filtering on the isometry condition.
std::vector<FqMatrix> enumerate_unipotent_radical(const DoubledSpace& dbl,
                                                  std::size_t max_states = 1u << 22);

/// A gamma in the isometry group of the doubled space with
/// W^{Delta,k} gamma = the given maximal isotropic L.
FqMatrix coset_representative(const DoubledSpace& dbl, const FqMatrix& lagrangian);

/// All maximal isotropic subspaces (canonical bases), ascending order.
std::vector<FqMatrix> enumerate_lagrangians(const FormedSpace& space,
                                            std::size_t max_states = 1000000);

}  // namespace bdcover
