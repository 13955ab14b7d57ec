#include "kmatrix/io.hpp"

#include "kmatrix/error.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace kmatrix {

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

i64 as_int(const Json& v, const std::string& what) {
    if (!v.is_number_integer()) fail(ErrorKind::ParseError, what + ": expected an integer");
    return v.get<i64>();
}

std::size_t as_size(const Json& v, const std::string& what) {
    i64 k = as_int(v, what);
    if (k <= 0) fail(ErrorKind::ParseError, what + ": expected a positive integer");
    return std::size_t(k);
}

Vec as_vec(const Json& v, const std::string& what) {
    if (!v.is_array()) fail(ErrorKind::ParseError, what + ": expected an array of integers");
    Vec out;
    for (const auto& x : v) out.push_back(as_int(x, what));
    return out;
}

Side parse_side(const Json& v) {
    if (v.is_null()) return Side::Two;
    const std::string s = v.get<std::string>();
    if (s == "two") return Side::Two;
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    fail(ErrorKind::ParseError, "side must be left, right or two, not '" + s + "'");
}

Pos parse_pos(const std::string& key) {
    static const std::regex re(R"(\s*(\d+)\s*,\s*(\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(key, m, re)) fail(ErrorKind::ParseError, "position '" + key + "' is not of the form \"i,j\"");
    return {std::stoi(m[1]), std::stoi(m[2])};
}

int parse_index(const std::string& key) {
    static const std::regex re(R"(\s*(\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(key, m, re)) fail(ErrorKind::ParseError, "index '" + key + "' is not an integer");
    return std::stoi(m[1]);
}

RingPtr upper_ring(const RingPtr& R, std::size_t n) {
    std::vector<Subgroup> entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) entries.push_back(i <= j ? R->whole() : R->zero_subgroup());
    return build_subring(generic_pattern(R, n, entries)).ring();
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte);
        std::string what = e.what();
        if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
        fail(ErrorKind::ParseError,
             source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

// ---- InstanceDoc ----

InstanceDoc::InstanceDoc(Json doc, std::string source) : doc_(std::move(doc)), source_(std::move(source)) {
    if (!doc_.is_object()) fail(ErrorKind::ParseError, source_ + ": instance must be a JSON object");
    for (const char* key : {"rings", "ideals"})
        if (doc_.contains(key) && !doc_[key].is_object())
            fail(ErrorKind::ParseError, source_ + ": '" + key + "' must be an object");
}

std::string InstanceDoc::id() const {
    if (doc_.contains("id") && doc_["id"].is_string()) return doc_["id"].get<std::string>();
    return source_;
}

void InstanceDoc::unresolved(const std::string& what, const std::string& name) const {
    fail(ErrorKind::UnresolvedReference, source_ + ": unknown " + what + " '" + name + "'");
}

RingPtr InstanceDoc::ring_named(const std::string& name) const {
    if (auto it = ring_cache_.find(name); it != ring_cache_.end()) return it->second;
    if (!doc_.contains("rings") || !doc_["rings"].contains(name)) unresolved("ring", name);
    if (resolving_[name]++) fail(ErrorKind::UnresolvedReference, source_ + ": ring '" + name + "' refers to itself");
    RingPtr r = ring(doc_["rings"][name]);
    resolving_.erase(name);
    ring_cache_[name] = r;
    return r;
}

RingPtr InstanceDoc::ring(const Json& ref) const {
    if (ref.is_string()) return ring_named(ref.get<std::string>());
    if (!ref.is_object()) fail(ErrorKind::ParseError, source_ + ": ring must be a name or an object");
    if (ref.contains("zmod")) {
        i64 n = as_int(ref["zmod"], "zmod");
        if (n < 2) fail(ErrorKind::ParseError, "zmod needs n >= 2");
        return zmod_ring(n);
    }
    if (ref.contains("product")) {
        const Json& parts = ref["product"];
        if (!parts.is_array() || parts.size() < 2) fail(ErrorKind::ParseError, "product needs at least two rings");
        RingPtr r = ring(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) r = product_ring(r, ring(parts[i]));
        return r;
    }
    if (ref.contains("matrix")) return matrix_ring(ring(ref["matrix"]), as_size(ref.value("n", Json(2)), "n"));
    if (ref.contains("upper")) return upper_ring(ring(ref["upper"]), as_size(ref.value("n", Json(2)), "n"));
    if (ref.contains("opposite")) return opposite_ring(ring(ref["opposite"]));
    if (ref.contains("poly")) {
        i64 n = as_int(ref["poly"], "poly");
        Vec low = as_vec(ref.value("modulus", Json::array()), "modulus");
        const std::size_t k = low.size();
        if (n < 2 || k == 0) fail(ErrorKind::ParseError, "poly needs n >= 2 and a monic modulus of degree >= 1");
        std::vector<Vec> powers;
        for (std::size_t m = 0; m < 2 * k; ++m) {
            Vec v(k, 0);
            if (m < k) {
                v[m] = 1;
            } else {
                const Vec& prev = powers[m - 1];
                for (std::size_t i = 0; i + 1 < k; ++i) v[i + 1] = prev[i];
                for (std::size_t i = 0; i < k; ++i) v[i] = mod64(v[i] - prev[k - 1] * low[i], n);
            }
            powers.push_back(v);
        }
        std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) t[i][j] = powers[i + j];
        Elem one(k, 0);
        one[0] = 1;
        return make_ring(Vec(k, n), t, one);
    }
    if (ref.contains("orders")) {
        Vec orders = as_vec(ref["orders"], "orders");
        if (!ref.contains("mul") || !ref["mul"].is_array() || ref["mul"].size() != orders.size())
            fail(ErrorKind::ParseError, "mul must be a k x k table of elements");
        std::vector<std::vector<Elem>> t;
        for (const auto& row : ref["mul"]) {
            if (!row.is_array() || row.size() != orders.size()) fail(ErrorKind::ParseError, "mul rows must have k entries");
            std::vector<Elem> r;
            for (const auto& e : row) r.push_back(as_vec(e, "mul entry"));
            t.push_back(std::move(r));
        }
        std::vector<std::string> labels;
        if (ref.contains("labels")) labels = ref["labels"].get<std::vector<std::string>>();
        return make_ring(orders, t, as_vec(ref.value("one", Json::array()), "one"), labels);
    }
    fail(ErrorKind::ParseError, source_ + ": unknown ring presentation " + ref.dump());
}

RingPtr InstanceDoc::default_ring() const {
    if (doc_.contains("pattern") && doc_["pattern"].contains("R")) return ring(doc_["pattern"]["R"]);
    if (doc_.contains("ring")) return ring(doc_["ring"]);
    if (doc_.contains("rings")) {
        if (doc_["rings"].contains("R")) return ring_named("R");
        if (doc_["rings"].size() == 1) return ring_named(doc_["rings"].begin().key());
    }
    unresolved("ring", "R");
}

Elem InstanceDoc::element(const Json& v, const RingPtr& R) const {
    if (v.is_number_integer()) return R->scale(R->one(), v.get<i64>());
    Vec e = as_vec(v, "element");
    if (e.size() != R->ngens())
        fail(ErrorKind::ParseError, "element " + v.dump() + " needs " + std::to_string(R->ngens()) + " coordinates");
    return R->reduce(e);
}

Ideal InstanceDoc::ideal(const Json& ref, const RingPtr& R) const {
    if (ref.is_string()) {
        const std::string name = ref.get<std::string>();
        if (name == "0") return zero_ideal(R);
        if (name == "R") return unit_ideal(R);
        if (!doc_.contains("ideals") || !doc_["ideals"].contains(name)) unresolved("ideal", name);
        Ideal I = ideal(doc_["ideals"][name], R);
        return I;
    }
    if (ref.is_array()) {
        std::vector<Elem> gens;
        for (const auto& g : ref) gens.push_back(element(g, R));
        return ideal_closure(R, gens, Side::Two);
    }
    if (!ref.is_object()) fail(ErrorKind::ParseError, "ideal must be a name, a generator list or an object");
    RingPtr parent = ref.contains("ring") ? ring(ref["ring"]) : R;
    if (R && parent != R && parent->orders() != R->orders())
        fail(ErrorKind::ParentMismatch, "ideal " + ref.dump() + " lives in another ring");
    std::vector<Elem> gens;
    for (const auto& g : ref.value("gens", Json::array())) gens.push_back(element(g, parent));
    Ideal I = ideal_closure(parent, gens, parse_side(ref.value("side", Json())));
    if (R) I.parent = R;
    return I;
}

Bimodule InstanceDoc::bimodule(const Json& ref, const RingPtr& left, const RingPtr& right) const {
    const std::string kind = ref.is_string() ? ref.get<std::string>() : ref.value("kind", std::string("explicit"));
    if (kind == "zero") return Bimodule::zero(left, right);
    if (kind == "regular") {
        if (left->orders() != right->orders()) fail(ErrorKind::ActionMismatch, "regular bimodule needs R = S");
        return Bimodule::regular(left);
    }
    if (!ref.is_object()) fail(ErrorKind::ParseError, "bimodule must be zero, regular or an object");
    Bimodule M;
    M.left = left;
    M.right = right;
    M.orders = as_vec(ref.value("orders", Json::array()), "orders");
    auto actions = [&](const char* key, const RingPtr& ring) {
        std::vector<LinMap> out;
        const Json& a = ref.value(key, Json::array());
        if (a.size() != ring->ngens()) fail(ErrorKind::ParseError, std::string(key) + ": one matrix per ring generator");
        for (const auto& m : a) {
            LinMap f{M.orders, M.orders, {}};
            for (const auto& img : m) f.images.push_back(as_vec(img, key));
            if (f.images.size() != M.orders.size()) fail(ErrorKind::ParseError, std::string(key) + ": wrong matrix size");
            out.push_back(std::move(f));
        }
        return out;
    };
    M.left_action = actions("left", left);
    M.right_action = actions("right", right);
    M.validate();
    return M;
}

const Json& InstanceDoc::pattern_json() const {
    if (!doc_.contains("pattern") || !doc_["pattern"].is_object())
        fail(ErrorKind::ParseError, source_ + ": no pattern object");
    return doc_["pattern"];
}

ShapeData InstanceDoc::shape_data(const Json& p, const RingPtr& R, std::size_t n) const {
    ShapeData d;
    if (p.contains("I")) d.I = ideal(p["I"], R);
    if (p.contains("J")) d.J = ideal(p["J"], R);
    if (p.contains("entries") && p["entries"].is_object())
        for (const auto& [k, v] : p["entries"].items()) d.Iij.emplace(parse_pos(k), ideal(v, R));
    if (p.contains("ideals"))
        for (const auto& [k, v] : p["ideals"].items()) d.Ii.emplace(parse_index(k), ideal(v, R));
    if (p.contains("subrings"))
        for (const auto& [k, v] : p["subrings"].items()) {
            if (v.is_string() && v.get<std::string>() == "R") {
                d.Ri.emplace(parse_index(k), R->whole());
                continue;
            }
            const Json& gens = v.is_object() ? v.value("gens", Json::array()) : v;
            std::vector<Vec> g{R->one()};
            for (const auto& x : gens) g.push_back(element(x, R));
            d.Ri.emplace(parse_index(k), Subgroup::generated(R->orders(), g));
        }
    if (p.contains("t"))
        for (const auto& [k, v] : p["t"].items()) d.t.emplace(parse_pos(k), int(as_int(v, "t")));
    (void)n;
    return d;
}

MatrixPattern InstanceDoc::pattern() const {
    const Json& p = pattern_json();
    const std::string kind = p.value("kind", std::string("generic"));
    RingPtr R = ring(p.contains("R") ? p["R"] : Json("R"));
    const std::size_t n = as_size(p.value("n", Json(2)), "n");
    if (kind == "ij") {
        if (!p.contains("I") || !p.contains("J")) fail(ErrorKind::ParseError, "ij pattern needs I and J");
        return ij_pattern(R, n, ideal(p["I"], R), ideal(p["J"], R));
    }
    if (kind == "poset") {
        if (!p.contains("I") || !p.contains("order")) fail(ErrorKind::ParseError, "poset pattern needs I and order");
        return poset_pattern(R, ideal(p["I"], R), p["order"].get<std::vector<std::vector<bool>>>());
    }
    if (kind == "generic") {
        const Json& e = p.value("entries", Json::array());
        if (!e.is_array() || e.size() != n) fail(ErrorKind::ParseError, "generic pattern needs an n x n entries array");
        std::vector<Subgroup> subs;
        std::vector<std::string> names;
        for (const auto& row : e) {
            if (!row.is_array() || row.size() != n) fail(ErrorKind::ParseError, "entries rows must have n entries");
            for (const auto& x : row) {
                subs.push_back(ideal(x, R).sub);
                names.push_back(x.is_string() ? x.get<std::string>() : x.dump());
            }
        }
        return generic_pattern(R, n, subs, names);
    }
    std::string k = kind == "S" ? "S-thm2" : kind == "T" ? "T-thm2" : kind;
    auto sk = parse_shape_kind(k);
    if (!sk) fail(ErrorKind::ParseError, "unknown pattern kind '" + kind + "'");
    return make_pattern(*sk, R, n, shape_data(p, R, n));
}

RuleInstance InstanceDoc::rule_instance() const {
    RuleInstance in;
    in.id = id();
    in.R = default_ring();
    if (doc_.contains("pattern")) {
        const Json& p = pattern_json();
        in.n = as_size(p.value("n", Json(2)), "n");
        const std::string kind = p.value("kind", std::string("generic"));
        std::string k = kind == "S" ? "S-thm2" : kind == "T" ? "T-thm2" : kind;
        if (auto sk = parse_shape_kind(k)) in.shape = *sk;
        in.data = shape_data(p, in.R, in.n);
        if (p.contains("order")) in.order = p["order"].get<std::vector<std::vector<bool>>>();
    }
    if (doc_.contains("n")) in.n = as_size(doc_["n"], "n");
    if (doc_.contains("chain")) {
        for (const auto& c : doc_["chain"]) in.chain.push_back(ideal(c, in.R));
        if (!doc_.contains("n") && !doc_.contains("pattern")) in.n = in.chain.size();
    }
    if (doc_.contains("idempotent")) in.idempotent = element(doc_["idempotent"], in.R);
    if (doc_.contains("subring")) {
        std::vector<Vec> g{in.R->one()};
        for (const auto& x : doc_["subring"]) g.push_back(element(x, in.R));
        in.subring = Subgroup::generated(in.R->orders(), g);
    }
    if (doc_.contains("S")) in.S = ring(doc_["S"]);
    if (doc_.contains("M")) {
        if (!in.S) fail(ErrorKind::ParseError, "M needs S");
        in.M = bimodule(doc_["M"], in.R, in.S);
    }
    if (doc_.contains("N")) {
        if (!in.S) fail(ErrorKind::ParseError, "N needs S");
        in.N = bimodule(doc_["N"], in.S, in.R);
    }
    return in;
}

// ---- JSON renderings ----

Json elem_json(const Elem& e) { return Json(e); }

Json ring_json(const RingPtr& r, bool with_table) {
    Json j;
    j["orders"] = r->orders();
    j["order"] = to_string(r->order());
    j["one"] = r->one();
    j["commutative"] = r->is_commutative();
    if (with_table) {
        Json t = Json::array();
        for (std::size_t a = 0; a < r->ngens(); ++a) {
            Json row = Json::array();
            for (std::size_t b = 0; b < r->ngens(); ++b) row.push_back(r->table(a, b));
            t.push_back(row);
        }
        j["mul"] = t;
    }
    return j;
}

Json group_json(const FgAbGroup& g) {
    Json j;
    j["free"] = g.free_rank();
    Json c = Json::array();
    for (const auto& d : g.invariant_factors()) c.push_back(to_string(d));
    j["cyclic"] = c;
    j["text"] = g.str();
    return j;
}

Json value_json(const KValue& v) {
    if (const auto* g = std::get_if<FgAbGroup>(&v)) return group_json(*g);
    const auto& l = std::get<LocalizedAbGroup>(v);
    Json j;
    j["localized_at"] = to_string(l.inverted());
    j["free"] = l.free_rank();
    Json c = Json::array();
    for (const auto& d : l.torsion()) c.push_back(to_string(d));
    j["cyclic"] = c;
    j["text"] = value_str(v);
    return j;
}

Json report_json(const ConditionReport& r) {
    Json j;
    j["pass"] = r.pass();
    j["checked"] = r.checked;
    Json v = Json::array();
    for (const auto& x : r.violations) {
        Json e;
        e["condition"] = x.condition;
        e["position"] = {x.i, x.k, x.j};
        if (x.witness) e["witness"] = *x.witness;
        e["detail"] = x.detail;
        v.push_back(e);
    }
    j["violations"] = v;
    return j;
}

Json report_json(const KReport& r) {
    Json j;
    j["instance"] = r.instance;
    j["rule"] = r.rule;
    j["degree"] = r.degree;
    j["mode"] = r.mode.str();
    j["verdict"] = verdict_name(r.verdict);
    j["claimed"] = r.claimed;
    j["lhs_label"] = r.lhs_label;
    j["rhs_labels"] = r.rhs_labels;
    j["lhs"] = r.lhs ? value_json(*r.lhs) : Json();
    j["rhs"] = r.rhs ? value_json(*r.rhs) : Json();
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json report_json(const MvReport& r) {
    Json j;
    j["exact"] = r.exact();
    const char* names[] = {"R", "R1", "R2", "R0"};
    for (std::size_t i = 0; i < r.k0.size() && i < 4; ++i) j["K0"][names[i]] = r.k0[i].str();
    for (std::size_t i = 0; i < r.k1.size() && i < 4; ++i) j["K1"][names[i]] = r.k1[i].str();
    Json c = Json::array();
    for (const auto& x : r.checks) c.push_back({{"position", x.position}, {"holds", x.holds}, {"detail", x.detail}});
    j["checks"] = c;
    return j;
}

Json report_json(const GvCertificate& c) {
    Json j;
    j["gv"] = c.gv;
    j["evidence"] = evidence_name(c.evidence);
    j["ideal_basis"] = c.ideal.basis();
    j["hom_rank"] = c.hom.rank();
    if (!c.inverse.empty()) j["inverse"] = c.inverse;
    if (c.annihilator) j["annihilator"] = *c.annihilator;
    j["ext0"] = c.ext0.str();
    j["ext1"] = c.ext1.str();
    j["routes_agree"] = c.routes_agree;
    j["reverified"] = c.reverify();
    return j;
}

Json report_json(const GvPropertyReport& r) {
    Json j;
    j["consistent"] = r.consistent();
    Json gv = Json::array();
    for (const auto& c : r.certificates) gv.push_back(c.gv);
    j["gv"] = gv;
    Json items = Json::array();
    for (const auto& it : r.items) {
        Json e{{"property", it.property}, {"ideal", it.ideal}, {"applicable", it.applicable}, {"holds", it.holds}};
        if (it.other) e["other"] = *it.other;
        if (it.witness) e["witness"] = *it.witness;
        if (!it.detail.empty()) e["detail"] = it.detail;
        items.push_back(e);
    }
    j["items"] = items;
    return j;
}

Json report_json(const ChainEndReport& r) {
    return Json{{"hom_ring_order", to_string(r.hom_ring->order())},
                {"colon_ring_order", to_string(r.colon_ring.ring()->order())},
                {"multiplicative", r.multiplicative},
                {"injective", r.injective},
                {"surjective", r.surjective},
                {"isomorphic", r.isomorphic()},
                {"last_is_gv", r.last_is_gv}};
}

Json sym_json(const SymGroup& g) {
    const FgAbGroup conc = g.concrete();
    Json c = Json::array();
    for (const auto& d : conc.invariant_factors()) c.push_back(to_string(d));
    return Json{{"free", conc.free_rank()}, {"cyclic", c}, {"symbols", g.symbols}, {"text", g.str()}};
}

Json eval_json(const EvalResult& r) {
    const char* status = r.status == EvalResult::Status::Value     ? "value"
                         : r.status == EvalResult::Status::Unknown ? "unknown"
                                                                   : "unsplit";
    Json j{{"status", status}, {"display", r.display}, {"provenance", r.provenance}};
    if (r.status == EvalResult::Status::Value) j["value"] = sym_json(r.value);
    if (!r.missing.empty()) j["missing"] = r.missing;
    if (r.tensor) j["tensor"] = sym_json(*r.tensor);
    if (r.tor) j["tor"] = sym_json(*r.tor);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json example_json(const ExampleReport& r) {
    Json lines = Json::array();
    for (const auto& l : r.lines) {
        Json e{{"degree", l.degree},
               {"expected", l.expected},
               {"produced", l.produced},
               {"sample_degree", l.sample_degree},
               {"matches", l.matches}};
        if (l.group) e["sample_value"] = l.group->str();
        if (l.reference) e["sample_expected"] = l.reference->str();
        lines.push_back(e);
    }
    return Json{{"p", to_string(r.p)},
                {"expression", r.expression.str()},
                {"lines", lines},
                {"provenance", r.provenance},
                {"ok", r.ok()}};
}

Json error_json(const Error& e) {
    return Json{{"error", error_kind_name(e.kind())}, {"message", e.what()}, {"exit_code", exit_code_for(e.kind())}};
}

namespace {

void pretty_into(std::ostringstream& out, const Json& j, int indent) {
    const std::string pad(std::size_t(indent) * 2, ' ');
    auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto flat = [](const Json& v) {
        if (!v.is_array()) return false;
        for (const auto& x : v)
            if (x.is_structured() && !(x.is_array() && std::all_of(x.begin(), x.end(), [](const Json& y) {
                                           return y.is_primitive();
                                       })))
                return false;
        return true;
    };
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_primitive() || flat(v)) {
                out << pad << k << ": " << (v.is_primitive() ? scalar(v) : v.dump()) << "\n";
            } else {
                out << pad << k << ":\n";
                pretty_into(out, v, indent + 1);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_primitive() || flat(v)) {
                out << pad << "- " << (v.is_primitive() ? scalar(v) : v.dump()) << "\n";
            } else {
                out << pad << "-\n";
                pretty_into(out, v, indent + 1);
            }
        }
    } else {
        out << pad << scalar(j) << "\n";
    }
}

}  // namespace

std::string pretty_text(const Json& j) {
    std::ostringstream out;
    pretty_into(out, j, 0);
    return out.str();
}

}  // namespace kmatrix
