#pragma once

// Linear algebra over finite abelian groups G = Z^k / diag(d) with small
// moduli. A subgroup is stored through its preimage lattice in Z^k, which
// always contains diag(d), as the canonical upper-triangular Hermite basis.

#include "kmatrix/abgroup.hpp"
#include "kmatrix/integer.hpp"

#include <optional>
#include <vector>

namespace kmatrix {

Vec reduce_mod(Vec v, const Vec& d);

class Subgroup {
public:
    Subgroup() = default;
    // The zero subgroup.
    explicit Subgroup(Vec orders);
    static Subgroup whole(Vec orders);
    static Subgroup generated(Vec orders, const std::vector<Vec>& gens);

    const Vec& orders() const { return d_; }
    std::size_t dim() const { return d_.size(); }
    i64 pivot(std::size_t i) const { return h_[i][i]; }
    const Vec& row(std::size_t i) const { return h_[i]; }

    bool insert(Vec v);
    bool insert_all(const Subgroup& o);
    Vec reduce(Vec v) const;
    bool contains(const Vec& v) const;
    bool contains(const Subgroup& o) const;
    bool is_zero() const;
    bool is_whole() const;
    Integer order() const;
    Integer index() const;
    // Rows whose pivot is a proper divisor of the ambient order.
    std::vector<Vec> generators() const;

    bool operator==(const Subgroup& o) const { return d_ == o.d_ && h_ == o.h_; }

private:
    void canonicalize();
    Vec d_;
    std::vector<Vec> h_;
};

Subgroup intersect(const Subgroup& a, const Subgroup& b);

// Additive map Z^k/diag(src) -> Z^l/diag(dst) given by the images of the
// standard generators.
struct LinMap {
    Vec src;
    Vec dst;
    std::vector<Vec> images;

    Vec apply(const Vec& x) const;
    void check_well_defined() const;
};

Subgroup kernel(const LinMap& f);
Subgroup image(const LinMap& f);
// Some x with f(x) = b, if one exists.
std::optional<Vec> solve(const LinMap& f, const Vec& b);

// Coordinates on A / Z for subgroups Z <= A of the same ambient group.
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(const Subgroup& A, const Subgroup& Z);

    // Invariant factors of A/Z, each >= 2.
    const Vec& orders() const { return sigma_; }
    std::size_t dim() const { return sigma_.size(); }
    const Vec& ambient_orders() const { return d_; }
    Integer order() const;
    FgAbGroup group() const;

    // a must lie in A; returns its class.
    Vec coords(const Vec& a) const;
    // An element of A in the given class.
    Vec embed(const Vec& z) const;

private:
    Vec d_;
    Vec sigma_;
    std::vector<Vec> ha_;    // Hermite basis of A
    std::vector<Vec> vmod_;  // k x dim, column transform reduced mod sigma
    std::vector<Vec> emb_;   // dim x k, representatives of the quotient basis
};

// Mixed-radix enumeration helpers.
Integer product_of(const Vec& orders);
// Index of x (entries in [0, d_i)) with the first coordinate fastest.
std::uint64_t mixed_index(const Vec& x, const Vec& d);
Vec mixed_digits(std::uint64_t idx, const Vec& d);

}  // namespace kmatrix
