#pragma once

// Formal K-expressions: direct sums of K_n(label) rewritten by the
// decomposition rules and evaluated against a table of base facts.

#include "kmatrix/abgroup.hpp"
#include "kmatrix/verify.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kmatrix {

// Degree n = a*m + b for m >= min_m; a = 0 is the single degree b.
struct Degree {
    int a = 0;
    int b = 0;
    int min_m = 0;
    bool symbolic_n = false;  // plain "n": no statement about the degree

    static Degree concrete(int d) { return {0, d, 0, false}; }
    static Degree any() { return {0, 0, 0, true}; }
    // "3", "n", "2m", "2m-1", "2m+1"; a guard "m>=k" may follow after ','.
    static std::optional<Degree> parse(const std::string& s);
    bool is_concrete() const { return a == 0 && !symbolic_n; }
    std::string str() const;  // "3", "n", "2m-1"
    bool operator==(const Degree&) const = default;
};

struct KTerm {
    std::string label;
    std::size_t multiplicity = 1;
    bool operator==(const KTerm&) const = default;
};

struct KExpr {
    Degree degree = Degree::any();
    std::vector<KTerm> terms;
    CoeffMode mode;

    static KExpr of(const std::string& label, Degree d = Degree::any(), CoeffMode mode = {});
    std::string str() const;
    bool operator==(const KExpr&) const = default;
};

// Sorted labels, merged multiplicities, zero multiplicities dropped.
KExpr normalize(KExpr e);

// Concrete part plus named unknown groups such as K_3(Z).
struct SymGroup {
    std::size_t free = 0;
    std::vector<Integer> cyclic;
    std::vector<std::string> symbols;  // sorted

    FgAbGroup concrete() const { return FgAbGroup(free, cyclic); }
    bool is_zero() const;
    std::string str() const;
    bool operator==(const SymGroup& o) const;
};

struct FactGuard {
    enum class Kind { MinM, Prime, PrimePower };
    Kind kind = Kind::MinM;
    std::string var;
    int bound = 0;
};

struct KBaseFact {
    enum class Kind { Value, SameAs, Gv };
    Kind kind = Kind::Value;
    std::string label;    // may contain placeholders {p}
    Degree degree;        // Value facts
    std::vector<FactGuard> guards;
    std::size_t free = 0;
    std::vector<std::string> cyclic;   // integer expressions in the placeholders and m
    std::vector<std::string> symbols;  // templates, {n} is the degree
    std::string display;
    std::string same_as;  // SameAs facts
    std::string ring;     // Gv facts: label is the ideal
    std::string provenance;
};

class FactTable {
public:
    FactTable() = default;
    explicit FactTable(std::vector<KBaseFact> facts) : facts_(std::move(facts)) {}
    // JSON array of facts; ParseError with the position on malformed input.
    static FactTable from_json(const std::string& text);
    static const FactTable& builtin();
    const std::vector<KBaseFact>& facts() const { return facts_; }
    void add(KBaseFact f) { facts_.push_back(std::move(f)); }
    void merge(const FactTable& other);
    // A Gv fact covers (ring, ideal).
    bool is_gv(const std::string& ring, const std::string& ideal, const std::map<std::string, Integer>& params) const;

private:
    std::vector<KBaseFact> facts_;
};

struct RuleBinding {
    std::string target;  // label of the term that is rewritten
    std::string shape;   // S-thm1, T-thm1, S-thm2, T-thm2, B-lemma32, B-lemma34, B-powers, ij, poset, chain, ...
    std::size_t n = 2;
    std::map<std::string, std::string> labels;  // R, I, J, I_{1,2}, R_2, I_2, S, A, B, e, t_{1,2}, and overrides
    std::optional<Integer> s;                   // injected by localized rules
    std::optional<Integer> p;                   // characteristic prime of the localized rules
    std::set<std::string> assume;               // e.g. "I_n is GV"
};

struct SymRule {
    std::string id;
    std::vector<std::string> shapes;
    bool localized = false;
    std::optional<int> only_degree;  // K_0-only or K_1-only statements
    std::string statement;
};
const std::vector<SymRule>& sym_rules();

// Throws UnknownRule, HypothesisSchemaMismatch, ModeConflict.
KExpr apply_rule(const KExpr& e, const std::string& rule, const RuleBinding& b, const FactTable* facts = nullptr);

struct EvalResult {
    enum class Status { Value, Unknown, Unsplit };
    Status status = Status::Value;
    SymGroup value;                // Status::Value; localized groups keep only the part prime to s
    std::optional<LocalizedAbGroup> localized;
    std::vector<std::string> missing;
    std::vector<std::string> provenance;
    std::string display;
    // Mod-p: K_n (x) Z/p and Tor(K_{n-1}, Z/p)
    std::optional<SymGroup> tensor, tor;
    std::string note;

    // Throws ModeConflict for an unsplit mod-p result.
    const SymGroup& require_value() const;
};

// params bind placeholders such as p to integers.
EvalResult evaluate(const KExpr& e, const Degree& degree, const FactTable& facts,
                    const std::map<std::string, Integer>& params = {});

struct ExampleLine {
    std::string degree;     // "0", "1", "2m", "2m-1"
    std::string expected;   // display of the worked example
    std::string produced;
    std::optional<SymGroup> group;      // at the sample degree
    std::optional<SymGroup> reference;  // expected value at the sample degree
    int sample_degree = 0;
    bool matches = false;
};

struct ExampleReport {
    Integer p;
    KExpr expression;  // after the rewrite
    std::vector<ExampleLine> lines;
    std::vector<std::string> provenance;
    bool ok() const;
};

// End_{Z[x]}(Z[x] + (p, x)) through the chain rule and the base facts.
ExampleReport reproduce_worked_example(const Integer& p, const FactTable& facts = FactTable::builtin());

}  // namespace kmatrix
