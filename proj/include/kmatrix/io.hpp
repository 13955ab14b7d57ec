#pragma once

// Instance files: JSON documents naming rings, ideals, a matrix pattern and
// the extra data some rules need. Also JSON renderings of the reports.

#include "kmatrix/error.hpp"
#include "kmatrix/gvtools.hpp"
#include "kmatrix/kdirect.hpp"
#include "kmatrix/ksymbolic.hpp"
#include "kmatrix/matshape.hpp"
#include "kmatrix/verify.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace kmatrix {

using Json = nlohmann::json;

// ParseError with line and column on malformed text.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

// Ring presentations:
//   "name"                                  entry of the document's "rings"
//   {"zmod": 4}
//   {"product": [r, s]}
//   {"matrix": r, "n": 2}
//   {"opposite": r}
//   {"poly": 2, "modulus": [c_0, ..., c_{k-1}]}   Z/n[x]/(x^k + ... + c_0)
//   {"upper": r, "n": 2}                    upper triangular matrices
//   {"orders": [...], "mul": [[e_ij]], "one": e}
// Ideals: "name" from "ideals", "0", "R", or {"ring": r, "gens": [[...]], "side": "two"}.
class InstanceDoc {
public:
    explicit InstanceDoc(Json doc, std::string source = "<input>");

    const Json& json() const { return doc_; }
    std::string id() const;
    const std::string& source() const { return source_; }

    RingPtr ring(const Json& ref) const;
    RingPtr ring_named(const std::string& name) const;
    // Default ring: the pattern's R, else "R", else the only ring.
    RingPtr default_ring() const;
    Ideal ideal(const Json& ref, const RingPtr& R) const;
    Elem element(const Json& v, const RingPtr& R) const;
    Bimodule bimodule(const Json& ref, const RingPtr& left, const RingPtr& right) const;

    bool has_pattern() const { return doc_.contains("pattern"); }
    MatrixPattern pattern() const;
    // The pattern and extras as the input of verify_decomposition.
    RuleInstance rule_instance() const;

private:
    [[noreturn]] void unresolved(const std::string& what, const std::string& name) const;
    const Json& pattern_json() const;
    ShapeData shape_data(const Json& p, const RingPtr& R, std::size_t n) const;

    Json doc_;
    std::string source_;
    mutable std::map<std::string, RingPtr> ring_cache_;
    mutable std::map<std::string, int> resolving_;
};

Json ring_json(const RingPtr& r, bool with_table = true);
Json elem_json(const Elem& e);
Json group_json(const FgAbGroup& g);
Json value_json(const KValue& v);
Json report_json(const ConditionReport& r);
Json report_json(const KReport& r);
Json report_json(const MvReport& r);
Json report_json(const GvCertificate& c);
Json report_json(const GvPropertyReport& r);
Json report_json(const ChainEndReport& r);
Json sym_json(const SymGroup& g);
Json eval_json(const EvalResult& r);
Json example_json(const ExampleReport& r);
Json error_json(const Error& e);

// Indented "key: value" text for --pretty.
std::string pretty_text(const Json& j);

}  // namespace kmatrix
