#pragma once

// GV-ideals: ideals I with R -> Hom_R(I, R), r -> (x -> x r) bijective, and
// endomorphism rings of ideal chains.

#include "kmatrix/finmod.hpp"
#include "kmatrix/matshape.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kmatrix {

struct GvCertificate {
    enum class Evidence { Inverse, Annihilator, Unreachable };

    RingPtr ring;
    Ideal ideal;
    bool gv = false;
    Evidence evidence = Evidence::Inverse;
    HomGroup hom;                      // Hom_R(I, R)
    std::vector<Elem> inverse;         // GV: r_i with mu(r_i) = hom basis i
    std::optional<Elem> annihilator;   // nonzero x with I x = 0
    std::optional<ModuleMap> unreachable;  // not a right multiplication
    FgAbGroup ext0, ext1;              // Ext^i_R(R/I, R)
    bool routes_agree = false;

    // Re-checks the evidence from scratch.
    bool reverify() const;
};

const char* evidence_name(GvCertificate::Evidence e);

// I must be a two-sided ideal of R (ParentMismatch, NotTwoSided).
GvCertificate is_gv(const RingPtr& R, const Ideal& I);

// Elements x with I x = 0.
Subgroup right_annihilator(const RingPtr& R, const Ideal& I);

// End_B(I_1 + ... + I_n) with entries Hom(I_i, I_j), maps composed left to
// right, next to the colon matrix with (I_i : I_j) above the diagonal.
struct ChainEndReport {
    RingPtr hom_ring;
    MatrixRing colon_ring;
    LinMap embedding;  // colon ring -> hom ring, entries acting by right multiplication
    bool multiplicative = false;
    bool injective = false;
    bool surjective = false;
    bool last_is_gv = false;
    bool isomorphic() const { return multiplicative && injective && surjective; }
};
// chain[0] = I_1 contains chain[1] = I_2 and so on; ChainBroken otherwise.
ChainEndReport chain_end_ring(const RingPtr& B, const std::vector<Ideal>& chain);

struct GvPropertyItem {
    std::string property;  // end-ring, hom-colon, annihilator, superset, product
    std::size_t ideal = 0;
    std::optional<std::size_t> other;
    bool applicable = false;  // the ideal is GV
    bool holds = false;
    std::optional<Elem> witness;
    std::string detail;
};

struct GvPropertyReport {
    std::vector<GvCertificate> certificates;
    std::vector<GvPropertyItem> items;
    // Every applicable item holds.
    bool consistent() const;
};

GvPropertyReport gv_property_check(const RingPtr& B, const std::vector<Ideal>& ideals);

}  // namespace kmatrix
