#pragma once

// Direct K_0 / K_1 oracles for finite rings, induced maps, and the
// Mayer-Vietoris check for Milnor squares.

#include "kmatrix/abgroup.hpp"
#include "kmatrix/finring.hpp"
#include "kmatrix/matshape.hpp"

#include <memory>
#include <string>
#include <vector>

namespace kmatrix {

// K_0(R) is free on the simple blocks of R/rad R. Basis element i is the
// class of R e_i for a primitive idempotent e_i over block i.
class K0Data {
public:
    explicit K0Data(RingPtr r);
    const RingPtr& ring() const { return ring_; }
    const BlockData& blocks() const { return blocks_; }
    std::size_t rank() const { return primitive_.size(); }
    FgAbGroup group() const { return FgAbGroup::free(rank()); }
    // Primitive idempotent of R over block i.
    const Elem& primitive(std::size_t i) const { return primitive_[i]; }
    // Multiplicity vector of the projective R e for an idempotent e of R.
    std::vector<Integer> decompose(const Elem& e) const;

private:
    RingPtr ring_;
    BlockData blocks_;
    std::vector<Elem> primitive_;
};

// K_1(R) as the unit group modulo commutators and (1+ab)(1+ba)^-1.
class K1Data {
public:
    explicit K1Data(RingPtr r, std::uint64_t cap = kDefaultUnitCap);
    const RingPtr& ring() const { return ring_; }
    const UnitGroup& units() const { return *units_; }
    FgAbGroup group() const { return k1_.group(); }
    // U / [U, U].
    FgAbGroup abelianized_units() const { return q_.group(); }
    std::vector<Integer> moduli() const;
    // Coordinates of the class of a unit.
    Vec class_of(const Elem& u) const;
    // A unit in the class of basis element i.
    Elem representative(std::size_t i) const;
    // Pairs (a, b) examined by the relation scan, for diagnostics.
    std::uint64_t pairs_scanned() const { return scanned_; }

private:
    RingPtr ring_;
    std::shared_ptr<UnitGroup> units_;
    std::vector<std::int32_t> gens_;      // unit numbers generating U
    Vec gen_orders_;                      // their orders in U/[U,U]
    std::vector<std::int32_t> coset_;     // unit number -> commutator coset
    std::vector<Vec> coset_vec_;          // coset -> exponent vector
    Subquotient q_;                       // U/[U,U] on exponent vectors
    Subquotient k1_;                      // K_1 on exponent vectors
    std::uint64_t scanned_ = 0;
};

FgAbGroup k0(const RingPtr& r);
FgAbGroup k1(const RingPtr& r, std::uint64_t cap = kDefaultUnitCap);

AbMap induced_k0(const RingHom& f);
AbMap induced_k0(const K0Data& src, const K0Data& dst, const RingHom& f);
AbMap induced_k1(const RingHom& f, std::uint64_t cap = kDefaultUnitCap);
AbMap induced_k1(const K1Data& src, const K1Data& dst, const RingHom& f);

struct MvCheck {
    std::string position;
    bool holds = false;
    std::string detail;
};

struct MvReport {
    // Indexed R, R1, R2, R0.
    std::vector<FgAbGroup> k0, k1;
    std::vector<MvCheck> checks;
    bool exact() const;
};

// Throws NotMilnor unless the square is a pullback with h1 or f2 onto.
MvReport mv_exactness(const MilnorSquare& sq, std::uint64_t cap = kDefaultUnitCap);

}  // namespace kmatrix
