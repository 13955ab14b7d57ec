#pragma once

#include "kmatrix/lattice.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace kmatrix {

using Elem = Vec;

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

// Additive group Z^k / diag(orders) with bilinear multiplication given by
// structure constants on the standard generators.
class FiniteRing {
public:
    const Vec& orders() const { return d_; }
    std::size_t ngens() const { return d_.size(); }
    const Elem& one() const { return one_; }
    const std::vector<std::string>& labels() const { return labels_; }
    // Coordinates of g_i * g_j.
    const Elem& table(std::size_t i, std::size_t j) const { return table_[i][j]; }

    Elem zero() const { return Elem(d_.size(), 0); }
    Elem gen(std::size_t i) const;
    Elem reduce(Elem a) const { return reduce_mod(std::move(a), d_); }
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem scale(const Elem& a, i64 n) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(Elem a, std::uint64_t n) const;
    bool is_zero(const Elem& a) const;

    Integer order() const { return product_of(d_); }
    i64 exponent() const;
    bool is_zero_ring() const { return d_.empty(); }
    bool is_commutative() const;

    // Element enumeration, only when |R| fits the given cap.
    std::uint64_t size_checked(std::uint64_t cap) const;
    std::uint64_t index_of(const Elem& a) const { return mixed_index(a, d_); }
    Elem element_at(std::uint64_t idx) const { return mixed_digits(idx, d_); }

    LinMap left_mul(const Elem& a) const;   // x -> a x
    LinMap right_mul(const Elem& a) const;  // x -> x a

    Subgroup zero_subgroup() const { return Subgroup(d_); }
    Subgroup whole() const { return Subgroup::whole(d_); }

private:
    friend RingPtr make_ring(Vec, std::vector<std::vector<Elem>>, Elem, std::vector<std::string>);
    struct Term {
        std::uint32_t j;
        std::vector<std::pair<std::uint32_t, i64>> out;
    };
    Vec d_;
    Elem one_;
    std::vector<std::vector<Elem>> table_;
    std::vector<std::vector<Term>> sparse_;
    std::vector<std::string> labels_;
};

// Validates associativity on all generator triples, the identity law and
// order compatibility of the structure constants.
RingPtr make_ring(Vec orders, std::vector<std::vector<Elem>> mul, Elem one,
                  std::vector<std::string> labels = {});

RingPtr zmod_ring(i64 n);
RingPtr product_ring(const RingPtr& a, const RingPtr& b);
RingPtr opposite_ring(const RingPtr& r);
// Full matrix ring M_n(R).
RingPtr matrix_ring(const RingPtr& r, std::size_t n);

enum class Side { Left, Right, Two };
const char* side_name(Side s);

struct Ideal {
    RingPtr parent;
    Subgroup sub;
    Side side = Side::Two;

    bool contains(const Elem& x) const { return sub.contains(x); }
    Integer order() const { return sub.order(); }
    std::vector<Elem> basis() const { return sub.generators(); }
    bool is_zero() const { return sub.is_zero(); }
    bool is_whole() const { return sub.is_whole(); }
};

Ideal ideal_closure(const RingPtr& r, const std::vector<Elem>& gens, Side side);
Ideal zero_ideal(const RingPtr& r);
Ideal unit_ideal(const RingPtr& r);
// True when the additive subgroup is closed under the multiplications of `side`.
bool is_closed(const RingPtr& r, const Subgroup& s, Side side);
// Additive span of all products a*b, a in A, b in B.
Subgroup product_span(const RingPtr& r, const Subgroup& a, const Subgroup& b);
Ideal ideal_product(const Ideal& a, const Ideal& b);
Ideal ideal_power(const Ideal& a, unsigned t);
Ideal ideal_sum(const Ideal& a, const Ideal& b);
// {x | I x ⊆ J}
Ideal colon_ideal(const Ideal& i, const Ideal& j);
bool same_parent(const Ideal& a, const Ideal& b);

class RingHom {
public:
    RingHom() = default;
    // Checks additivity, multiplicativity on generator pairs and, when
    // `unital`, that one maps to one.
    RingHom(RingPtr src, RingPtr dst, std::vector<Elem> images, bool unital = true);
    static RingHom identity(const RingPtr& r);

    const RingPtr& source() const { return src_; }
    const RingPtr& target() const { return dst_; }
    const std::vector<Elem>& images() const { return images_; }
    Elem operator()(const Elem& a) const;
    LinMap linear() const;
    Subgroup kernel_subgroup() const;
    Subgroup image_subgroup() const;
    bool is_surjective() const;
    bool is_injective() const;
    // other o this
    RingHom then(const RingHom& other) const;

private:
    RingPtr src_, dst_;
    std::vector<Elem> images_;
};

struct Quotient {
    RingPtr ring;
    RingHom proj;
    Subquotient coords;  // R -> R/I on the additive level; embed() lifts
    Elem lift(const Elem& y) const { return coords.embed(y); }
};
Quotient quotient_ring(const Ideal& i);

// Ring structure on a multiplicatively closed subgroup with its own
// identity element (e.g. a corner eRe). The returned map is additive and
// multiplicative, but unital only when `one` is the identity of R.
struct SubringResult {
    RingPtr ring;
    RingHom inclusion;
};
SubringResult ring_on_subgroup(const RingPtr& r, const Subgroup& s, const Elem& one);

// Jacobson radical: largest nilpotent ideal.
Ideal jacobson_radical(const RingPtr& r);
bool is_nilpotent(const RingPtr& r, const Subgroup& s);
bool is_nilpotent_element(const RingPtr& r, const Elem& x);

constexpr std::uint64_t kDefaultUnitCap = std::uint64_t{1} << 20;

class UnitGroup {
public:
    UnitGroup(RingPtr r, std::uint64_t cap = kDefaultUnitCap);
    const RingPtr& ring() const { return ring_; }
    std::size_t size() const { return elems_.size(); }
    // Unit number of a ring element, or -1.
    std::int32_t number(const Elem& x) const { return number_[ring_->index_of(x)]; }
    std::int32_t number_at(std::uint64_t idx) const { return number_[idx]; }
    Elem element(std::int32_t u) const { return ring_->element_at(elems_[static_cast<std::size_t>(u)]); }
    std::uint64_t index(std::int32_t u) const { return elems_[static_cast<std::size_t>(u)]; }
    std::int32_t identity() const { return number(ring_->one()); }
    std::int32_t mul(std::int32_t a, std::int32_t b) const;
    std::int32_t inverse(std::int32_t a) const;
    bool is_unit(const Elem& x) const { return number(x) >= 0; }

private:
    RingPtr ring_;
    std::vector<std::uint64_t> elems_;
    std::vector<std::int32_t> number_;
};

Elem inverse_of(const RingPtr& r, const Elem& x);  // throws when x is not a unit

// Semisimple quotient and its simple blocks.
struct BlockData {
    Ideal radical;
    Quotient semisimple;
    std::vector<Elem> central_idempotents;  // in R/J
    std::vector<i64> field_order;           // q with centre of the block F_q
    std::vector<int> matrix_size;           // m with block M_m(F_q)
};
BlockData block_data(const RingPtr& r);
std::size_t block_count(const RingPtr& r);

// 3e^2 - 2e^3 iteration from an element idempotent modulo a nilpotent ideal.
Elem lift_idempotent(const RingPtr& r, Elem e);
bool is_idempotent(const RingPtr& r, const Elem& e);

}  // namespace kmatrix
