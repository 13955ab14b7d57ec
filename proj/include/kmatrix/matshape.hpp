#pragma once

// Matrix subrings over a finite base ring: pattern hypotheses, generic
// construction from per-entry subquotients, companion rings, Milnor squares.

#include "kmatrix/finmod.hpp"
#include "kmatrix/finring.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kmatrix {

enum class ShapeKind {
    S_thm1,
    T_thm1,
    S_thm2,
    T_thm2,
    B_lemma32,
    B_lemma34,
    B_powers,
    Poset,
    Bimodule,
    Corner,
    Generic,
};
const char* shape_kind_name(ShapeKind k);
std::optional<ShapeKind> parse_shape_kind(const std::string& s);

// Entry (i,j) of a matrix ring: the subquotient top/bottom of the base
// ring's additive group.
struct Component {
    Subgroup top;
    Subgroup bottom;
};

// One hypothesis of a shape. Positions are 1-based; 0 means unused.
struct Condition {
    enum class Type { Contains, Product, Closed, Subring, Arith };
    Type type = Type::Contains;
    std::string text;
    int i = 0, k = 0, j = 0;
    Subgroup a, b, c;     // Contains: a <= c; Product: a*b <= c; Closed/Subring: a
    Side side = Side::Two;
    bool arith_ok = true;
    std::string detail;
};

struct Violation {
    std::string condition;
    int i = 0, k = 0, j = 0;
    std::optional<Elem> witness;
    std::string detail;
};

struct ConditionReport {
    std::size_t checked = 0;
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

using Pos = std::pair<int, int>;  // 1-based (row, column)

// Named parameters of the shape families.
struct ShapeData {
    std::optional<Ideal> I;
    std::optional<Ideal> J;            // lower entries of the I/J shapes
    std::map<Pos, Ideal> Iij;
    std::map<int, Subgroup> Ri;        // subrings, i = 2..n
    std::map<int, Ideal> Ii;           // I_i, i = 2..n
    std::map<Pos, int> t;              // exponents of the power shape
};

struct MatrixPattern {
    ShapeKind kind = ShapeKind::Generic;
    std::size_t n = 0;
    RingPtr R;
    std::vector<Subgroup> entries;  // row-major n x n, additive subgroups of R
    std::vector<std::string> names;
    std::vector<Condition> conditions;

    const Subgroup& entry(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    const std::string& name(std::size_t i, std::size_t j) const { return names[i * n + j]; }
};

// Entry subgroups of R, identity of R on the diagonal; the conditions are the
// closure conditions E_ik E_kj <= E_ij and 1 in E_ii.
MatrixPattern generic_pattern(const RingPtr& R, std::size_t n, const std::vector<Subgroup>& entries,
                              std::vector<std::string> names = {});
// Shapes S-thm1, T-thm1, S-thm2, T-thm2, B-lemma32, B-lemma34, B-powers.
// Also "ij": R on and below the diagonal, I above, J below (as Generic with
// named conditions). Throws ShapeMismatch when a parameter is missing.
MatrixPattern make_pattern(ShapeKind kind, const RingPtr& R, std::size_t n, const ShapeData& data);
MatrixPattern ij_pattern(const RingPtr& R, std::size_t n, const Ideal& I, const Ideal& J);

ConditionReport check_conditions(const MatrixPattern& p);
// Closure conditions only: what construction of the ring needs.
ConditionReport check_closure(const MatrixPattern& p);

class MatrixRing {
public:
    const RingPtr& ring() const { return ring_; }
    const RingPtr& base() const { return base_; }
    std::size_t size() const { return n_; }
    const Component& component(std::size_t i, std::size_t j) const { return comps_[i * n_ + j]; }
    // Additive generators of position (i,j) inside ring().
    std::size_t offset(std::size_t i, std::size_t j) const { return off_[i * n_ + j]; }
    std::size_t width(std::size_t i, std::size_t j) const { return sq_[i * n_ + j].dim(); }
    Subgroup block(std::size_t i, std::size_t j) const;
    Elem idempotent(std::size_t i) const;
    // Element of ring() with the class of x at (i,j); x must lie in top(i,j).
    Elem embed(std::size_t i, std::size_t j, const Elem& x) const;
    // A base-ring representative of the (i,j) entry of a.
    Elem entry(const Elem& a, std::size_t i, std::size_t j) const;

private:
    friend MatrixRing build_matrix_ring(const RingPtr&, std::size_t, std::vector<Component>, const std::vector<Elem>&);
    RingPtr ring_, base_;
    std::size_t n_ = 0;
    std::vector<Component> comps_;
    std::vector<Subquotient> sq_;
    std::vector<std::size_t> off_;
};

// Matrix multiplication on the given components. Throws ConditionsNotVerified
// when the components are not closed or the quotients are not compatible.
MatrixRing build_matrix_ring(const RingPtr& base, std::size_t n, std::vector<Component> comps,
                             const std::vector<Elem>& diag_ones);
// Re-checks the pattern's hypotheses; throws ConditionsNotVerified.
MatrixRing build_subring(const MatrixPattern& p);

// Companion ring C of an S-thm2/B-lemma32 or T-thm2/B-lemma34 pattern, with
// the same K-theory as the pattern's ring.
MatrixRing companion_C(const MatrixPattern& p);

struct MilnorSquare {
    // R -f1-> R1, R -h2-> R2, R1 -h1-> R0, R2 -f2-> R0
    RingPtr R, R1, R2, R0;
    RingHom f1, h2, h1, f2;
};

struct PullbackCheck {
    bool commutes = false;
    bool milnor = false;      // h1 or f2 surjective
    bool injective = false;   // R -> R1 x R2
    bool counts_match = false;
    bool ok() const { return commutes && milnor && injective && counts_match; }
};
PullbackCheck check_pullback(const MilnorSquare& sq);

// Square B -> A, B -> B/J, A -> A/J, B/J -> A/J for patterns B <= A over the
// same base with a common ideal J <= B of A, all given entrywise. Throws
// NotPullback if the built square fails the check.
struct ThmSquare {
    MatrixRing B, A;
    Ideal J_in_B, J_in_A;
    MilnorSquare square;
};
ThmSquare inclusion_square(const RingPtr& R, std::size_t n, const std::vector<Subgroup>& B,
                           const std::vector<Subgroup>& A, const std::vector<Subgroup>& J);
// The square of the S-thm1 shape: A has R below the diagonal, J has I on the
// diagonal and below, I_ij above.
ThmSquare milnor_square_thm1(const MatrixPattern& p);

// Elements a_1..a_n of a poset given by its order relation less_eq[i][j]
// (a_i <= a_j). Throws NotLinearlyExtended unless a_i <= a_j implies i <= j.
MatrixRing poset_ring(const RingPtr& R, const Ideal& I, const std::vector<std::vector<bool>>& less_eq);
MatrixPattern poset_pattern(const RingPtr& R, const Ideal& I, const std::vector<std::vector<bool>>& less_eq);

struct BimoduleRing {
    RingPtr A;
    Ideal Mprime, Nprime;
    MilnorSquare square;  // A -> A/M', A -> A/N', both -> A/(M'+N')
    std::size_t r_gens, m_gens, n_gens, s_gens;
};
// [[R, M],[N, S]] with M*N = N*M = 0.
BimoduleRing bimodule_ring(const RingPtr& R, const RingPtr& S, const Bimodule& M, const Bimodule& N);

// e B e for the diagonal idempotent diag(e, ..., e) of a pattern, presented
// over the corner ring eRe.
MatrixPattern corner_pattern(const MatrixPattern& p, const Elem& e);
MatrixRing corner_ring(const MatrixPattern& p, const Elem& e);

// Opposite of a built ring; the transposed shape.
RingPtr opposite_shape(const MatrixRing& m);

}  // namespace kmatrix
