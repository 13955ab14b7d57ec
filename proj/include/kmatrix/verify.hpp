#pragma once

// Direct verification of the matrix-subring decomposition rules: the left
// side is computed on the built ring, the right side on the quotient rings,
// and both are compared in the requested coefficient mode.

#include "kmatrix/abgroup.hpp"
#include "kmatrix/finmod.hpp"
#include "kmatrix/finring.hpp"
#include "kmatrix/matshape.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kmatrix {

struct CoeffMode {
    enum class Kind { Integral, Localized, ModP };
    Kind kind = Kind::Integral;
    Integer param = 0;  // s for Localized, p for ModP

    static CoeffMode integral() { return {}; }
    static CoeffMode localized(Integer s) { return {Kind::Localized, std::move(s)}; }
    static CoeffMode mod_p(Integer p) { return {Kind::ModP, std::move(p)}; }
    // "integral", "localized:s", "modp:p"
    static std::optional<CoeffMode> parse(const std::string& s);
    std::string str() const;
    bool operator==(const CoeffMode&) const = default;
};

using KValue = std::variant<FgAbGroup, LocalizedAbGroup>;
std::string value_str(const KValue& v);
bool value_iso(const KValue& a, const KValue& b);

// K_d of a ring with coefficients: localization, or K_d tensor Z/p plus
// Tor(K_{d-1}, Z/p). For d <= 1 the Tor term vanishes since K_0 is free.
KValue apply_mode(const FgAbGroup& k, const CoeffMode& mode);

struct KReport {
    enum class Verdict { Iso, Mismatch, SymbolicOnly };

    std::string instance;
    std::string rule;
    int degree = 0;
    CoeffMode mode;
    std::optional<KValue> lhs, rhs;
    std::string lhs_label;
    std::vector<std::string> rhs_labels;
    Verdict verdict = Verdict::SymbolicOnly;
    bool claimed = true;  // false: the rule makes no statement at this degree
    std::string note;
};
const char* verdict_name(KReport::Verdict v);

// Parameters of a rule application. Only the fields a rule reads need to be
// filled; see rule_info().
struct RuleInstance {
    std::string id;
    RingPtr R;
    std::size_t n = 2;
    ShapeKind shape = ShapeKind::Generic;  // picks the variant of thm1.1, thm1.2, cor4.6, prop5.1
    ShapeData data;                        // I, J, Iij, Ri, Ii, t
    std::vector<Ideal> chain;              // prop7.2: I_1 ⊇ ... ⊇ I_n
    std::optional<Elem> idempotent;        // corner
    std::vector<std::vector<bool>> order;  // poset
    std::optional<Subgroup> subring;       // radical-full: B inside A = R
    RingPtr S;                             // lemma4.1, bimodule
    std::optional<Bimodule> M, N;
};

struct RuleInfo {
    std::string id;
    std::string statement;   // left side and right side, in words
    bool localized = false;  // the claim holds after inverting s
    std::set<int> degrees;   // degrees the rule speaks about
};
const std::vector<RuleInfo>& rule_table();
const RuleInfo& rule_info(const std::string& id);  // UnknownRule

// Throws UnknownRule, ModeConflict, HypothesisFailed, SizeCapExceeded and the
// builders' errors. Degrees >= 2 yield SymbolicOnly reports.
std::vector<KReport> verify_decomposition(const std::string& rule, const RuleInstance& inst,
                                          const std::vector<int>& degrees, const CoeffMode& mode,
                                          std::uint64_t cap = kDefaultUnitCap);

// Every claimed report is Iso.
bool all_iso(const std::vector<KReport>& reports);

}  // namespace kmatrix
