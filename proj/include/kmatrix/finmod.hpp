#pragma once

// Finite left modules over finite rings, Hom and Ext^1, add(M)-approximations
// and D-split sequences.

#include "kmatrix/finring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kmatrix {

// Left module: additive group Z^k/diag(orders), ring generator g_i acting
// through action[i]. Right modules are modelled over the opposite ring.
class FinModule {
public:
    FinModule() = default;
    // Validates the ring relations on generators; throws ActionMismatch.
    FinModule(RingPtr ring, Vec orders, std::vector<LinMap> action);

    // R as a left module over itself.
    static FinModule regular(const RingPtr& r);
    static FinModule free(const RingPtr& r, std::size_t rank);

    const RingPtr& ring() const { return ring_; }
    const Vec& orders() const { return d_; }
    std::size_t ngens() const { return d_.size(); }
    const LinMap& action(std::size_t g) const { return action_[g]; }
    Integer order() const { return product_of(d_); }
    bool is_zero() const { return d_.empty(); }

    Vec act(const Elem& r, const Vec& m) const;
    Vec zero() const { return Vec(d_.size(), 0); }
    Subgroup whole() const { return Subgroup::whole(d_); }
    Subgroup zero_subgroup() const { return Subgroup(d_); }

private:
    RingPtr ring_;
    Vec d_;
    std::vector<LinMap> action_;
};

// Module with coordinates relative to an ambient module.
struct SubquotientModule {
    FinModule module;
    Subquotient coords;
};
// top/bottom for submodules bottom <= top of M; throws ActionMismatch when
// either is not closed under the action.
SubquotientModule subquotient(const FinModule& m, const Subgroup& top, const Subgroup& bottom);
bool is_submodule(const FinModule& m, const Subgroup& s);
Subgroup submodule_closure(const FinModule& m, const std::vector<Vec>& gens);

FinModule direct_sum(const FinModule& a, const FinModule& b);
// Restriction of scalars along f: S -> R for an R-module.
FinModule restrict_scalars(const FinModule& m, const RingHom& f);

struct ModuleMap {
    FinModule source;
    FinModule target;
    LinMap map;

    ModuleMap() = default;
    // Throws NotModuleMap when the map is not linear over the ring.
    ModuleMap(FinModule src, FinModule dst, LinMap f);
    Vec operator()(const Vec& x) const { return map.apply(x); }
    ModuleMap then(const ModuleMap& g) const;  // g o this
};

ModuleMap identity_map(const FinModule& m);
// Map between subquotients of two modules induced by an ambient additive map.
ModuleMap induced_map(const SubquotientModule& a, const SubquotientModule& b, const LinMap& ambient);

// Hom_R(M, N) as a subgroup of N^{ngens(M)} (images of the generators of M).
struct HomGroup {
    FinModule source;
    FinModule target;
    Subgroup sub;
    Subquotient coords;

    FgAbGroup group() const { return coords.group(); }
    std::size_t rank() const { return coords.dim(); }
    ModuleMap basis(std::size_t i) const;
    std::vector<ModuleMap> basis() const;
    ModuleMap map_of(const Vec& images) const;
    // Flattened images of the generators.
    static Vec flatten(const ModuleMap& f);
};
HomGroup hom_group(const FinModule& m, const FinModule& n);

enum class PresentationKind { Minimal, AllAdditive };
// Ext^1 from a free cover F0 -> M with kernel K, as coker(Hom(F0,N) -> Hom(K,N)).
FgAbGroup ext1(const FinModule& m, const FinModule& n, PresentationKind kind = PresentationKind::Minimal);
// Module generators found greedily.
std::vector<Vec> module_generators(const FinModule& m);

enum class ApproxSide { Left, Right };

struct ApproxResult {
    bool holds = true;
    std::optional<ModuleMap> witness;  // a map that does not lift
};
// Left: f: X -> M' and every X -> M factors through f.
// Right: f: M' -> Y and every M -> Y factors through f.
ApproxResult is_approximation(const ModuleMap& f, const FinModule& m, ApproxSide side);

// M' in add(M): the identity of M' lies in the span of maps M' -> M -> M'.
bool in_add(const FinModule& mprime, const FinModule& m);

struct DsplitReport {
    bool holds = true;
    std::string failed;  // first failing condition
    std::optional<ModuleMap> witness;
};
DsplitReport is_dsplit(const ModuleMap& f, const ModuleMap& g, const FinModule& m);

bool same_module_ring(const FinModule& a, const FinModule& b);

// Bimodule over (left ring, right ring) with commuting actions.
struct Bimodule {
    RingPtr left;
    RingPtr right;
    Vec orders;
    std::vector<LinMap> left_action;   // one per generator of `left`
    std::vector<LinMap> right_action;  // one per generator of `right`, m -> m g

    // Throws ActionMismatch on failed module axioms or non-commuting actions.
    void validate() const;
    static Bimodule zero(RingPtr l, RingPtr r);
    // A ring as a bimodule over itself.
    static Bimodule regular(const RingPtr& r);
    Vec act_left(const Elem& r, const Vec& m) const;
    Vec act_right(const Vec& m, const Elem& s) const;
};

// Sequence Re --(.a)--> Rf --> Rf/Rea of left R-modules for idempotents e, f
// and a in eRf.
struct RightMulSequence {
    SubquotientModule re;
    SubquotientModule rf;
    SubquotientModule cok;
    ModuleMap mult;
    ModuleMap proj;
};
RightMulSequence right_multiplication_sequence(const RingPtr& r, const Elem& e, const Elem& f, const Elem& a);
// eRf == a f R f as additive subgroups.
bool erf_criterion(const RingPtr& r, const Elem& e, const Elem& f, const Elem& a);

// Modules attached to an extension B <= A: B and A as left B-modules, A/B,
// the inclusion and the projection.
struct ExtensionSequence {
    FinModule b;
    FinModule a;
    SubquotientModule quotient;
    ModuleMap inclusion;
    ModuleMap projection;
};
ExtensionSequence extension_sequence(const RingHom& inclusion);

}  // namespace kmatrix
