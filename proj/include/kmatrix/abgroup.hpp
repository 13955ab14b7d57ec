#pragma once

#include "kmatrix/integer.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kmatrix {

// Dense integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const = default;
    IntMatrix transpose() const;
    std::vector<Integer> row(std::size_t i) const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    // row_i += k * row_j
    void add_row(std::size_t i, std::size_t j, const Integer& k);
    void add_col(std::size_t i, std::size_t j, const Integer& k);
    void negate_row(std::size_t i);
    void negate_col(std::size_t i);

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Integer> a_;
};

Integer determinant(const IntMatrix& m);

struct SnfResult {
    IntMatrix D;     // U * M * V
    IntMatrix U;     // rows x rows, unimodular
    IntMatrix V;     // cols x cols, unimodular
    IntMatrix Vinv;  // inverse of V
    std::vector<Integer> diagonal;  // D(i,i) for i < min(rows, cols), all >= 0
    // Nonzero diagonal entries; the divisibility chain d1 | d2 | ...
    std::vector<Integer> invariants() const;
    std::size_t rank() const;
};

// Smith normal form with transformation certificates. Pivots are chosen by
// minimal absolute value.
SnfResult snf(const IntMatrix& M);

class FgAbGroup {
public:
    FgAbGroup() = default;
    // Any list of positive orders; 1 is dropped, 0 counts as a free summand.
    FgAbGroup(std::size_t free_rank, const std::vector<Integer>& orders);

    static FgAbGroup trivial() { return {}; }
    static FgAbGroup free(std::size_t r) { return FgAbGroup(r, {}); }
    static FgAbGroup cyclic(const Integer& n);

    std::size_t free_rank() const { return rank_; }
    const std::vector<Integer>& invariant_factors() const { return torsion_; }
    bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }
    bool is_finite() const { return rank_ == 0; }
    Integer torsion_order() const;
    // Standard coordinates: free coordinates first (modulus 0), then torsion.
    std::vector<Integer> moduli() const;
    std::size_t ngens() const { return rank_ + torsion_.size(); }

    bool operator==(const FgAbGroup& o) const = default;
    std::string str() const;

private:
    std::size_t rank_ = 0;
    std::vector<Integer> torsion_;
};

class LocalizedAbGroup {
public:
    LocalizedAbGroup() = default;
    LocalizedAbGroup(Integer s, std::size_t rank, std::vector<Integer> torsion);
    const Integer& inverted() const { return s_; }
    std::size_t free_rank() const { return rank_; }
    const std::vector<Integer>& torsion() const { return torsion_; }
    bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }
    bool operator==(const LocalizedAbGroup& o) const = default;
    std::string str() const;

private:
    Integer s_ = 1;
    std::size_t rank_ = 0;
    std::vector<Integer> torsion_;
};

bool iso_test(const FgAbGroup& g, const FgAbGroup& h);
bool iso_test(const LocalizedAbGroup& g, const LocalizedAbGroup& h);

// Largest divisor of d supported on the primes of s.
Integer part_supported_on(const Integer& d, const Integer& s);

LocalizedAbGroup localize(const FgAbGroup& g, const Integer& s);
LocalizedAbGroup localize(const LocalizedAbGroup& g, const Integer& s);

struct ModP {
    FgAbGroup tensor;
    FgAbGroup tor;
};
ModP mod_p(const FgAbGroup& g, const Integer& p);

FgAbGroup direct_sum(const std::vector<FgAbGroup>& gs);
LocalizedAbGroup direct_sum(const std::vector<LocalizedAbGroup>& gs);

// Canonical row Hermite normal form of the lattice spanned by `rows`
// (each of length `cols`); zero rows removed.
IntMatrix hnf_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

// Group homomorphism between presented groups Z^k / diag(moduli) with
// modulus 0 meaning a free coordinate. matrix is target-coords x source-coords.
struct AbMap {
    std::vector<Integer> src;
    std::vector<Integer> dst;
    IntMatrix matrix;

    static AbMap between(const FgAbGroup& a, const FgAbGroup& b, IntMatrix m);
    // Throws if the matrix does not respect the source relations.
    void check_well_defined() const;
    AbMap compose_after(const AbMap& first) const;  // this o first
};

// Lattices in Z^k containing diag(moduli), as canonical HNF.
IntMatrix kernel_lattice(const AbMap& f);
IntMatrix image_lattice(const AbMap& f);
IntMatrix relation_lattice(const std::vector<Integer>& moduli);

bool is_injective(const AbMap& f);
bool is_surjective(const AbMap& f);
// im(first) == ker(second) for first: A -> B, second: B -> C.
bool is_exact_at(const AbMap& first, const AbMap& second);
bool is_zero_map(const AbMap& f);

// Abstract group L / M for lattices M <= L in Z^k (both HNF, full description).
FgAbGroup lattice_quotient(const IntMatrix& L, const IntMatrix& M);
FgAbGroup kernel_group(const AbMap& f);
FgAbGroup image_group(const AbMap& f);
FgAbGroup cokernel_group(const AbMap& f);

}  // namespace kmatrix
