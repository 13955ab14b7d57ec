#include "kmatrix/ksymbolic.hpp"

#include "kmatrix/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <regex>

namespace kmatrix {

extern const char* const kDefaultFactsJson;

namespace {

using Params = std::map<std::string, Integer>;

// ---- integer expressions: + - * ^ and parentheses over named variables ----

class ExprParser {
public:
    ExprParser(const std::string& s, const Params& vars) : s_(s), vars_(vars) {}

    std::optional<Integer> run() {
        auto v = sum();
        skip();
        if (pos_ != s_.size()) return std::nullopt;
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::optional<Integer> sum() {
        auto v = product();
        while (v) {
            if (eat('+')) {
                auto w = product();
                if (!w) return std::nullopt;
                *v += *w;
            } else if (eat('-')) {
                auto w = product();
                if (!w) return std::nullopt;
                *v -= *w;
            } else {
                break;
            }
        }
        return v;
    }
    std::optional<Integer> product() {
        auto v = power();
        while (v && eat('*')) {
            auto w = power();
            if (!w) return std::nullopt;
            *v *= *w;
        }
        return v;
    }
    std::optional<Integer> power() {
        auto v = atom();
        if (v && eat('^')) {
            auto e = power();
            if (!e || *e < 0 || *e > 4096) return std::nullopt;
            Integer r = 1;
            for (unsigned i = 0; i < e->convert_to<unsigned>(); ++i) r *= *v;
            return r;
        }
        return v;
    }
    std::optional<Integer> atom() {
        skip();
        if (eat('(')) {
            auto v = sum();
            if (!eat(')')) return std::nullopt;
            return v;
        }
        if (eat('-')) {
            auto v = atom();
            if (v) *v = -*v;
            return v;
        }
        std::size_t start = pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Integer(s_.substr(start, pos_ - start));
        }
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) return std::nullopt;
        auto it = vars_.find(s_.substr(start, pos_ - start));
        if (it == vars_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& s_;
    const Params& vars_;
    std::size_t pos_ = 0;
};

std::optional<Integer> eval_int(const std::string& s, const Params& vars) { return ExprParser(s, vars).run(); }

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    for (Integer d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_prime_power(Integer n) {
    if (n < 2) return false;
    Integer d = 2;
    while (n % d != 0) ++d;
    while (n % d == 0) n /= d;
    return n == 1;
}

// ---- label templates ----

std::string regex_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != ' ') out += '\\';
        out += c;
    }
    return out;
}

// Tokens bound to the placeholders of tmpl, or nullopt when label does not
// have the template's form.
std::optional<std::map<std::string, std::string>> match_template(const std::string& tmpl, const std::string& label) {
    static const std::regex ph(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
    std::string pattern;
    std::vector<std::string> names;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(tmpl.begin(), tmpl.end(), ph); it != std::sregex_iterator(); ++it) {
        pattern += regex_escape(tmpl.substr(last, std::size_t(it->position()) - last));
        pattern += R"(([A-Za-z][A-Za-z0-9_]*|[0-9]+))";
        names.push_back((*it)[1]);
        last = std::size_t(it->position() + it->length());
    }
    pattern += regex_escape(tmpl.substr(last));
    std::smatch m;
    if (!std::regex_match(label, m, std::regex(pattern))) return std::nullopt;
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto [it, fresh] = out.emplace(names[i], m[i + 1].str());
        if (!fresh && it->second != m[i + 1].str()) return std::nullopt;
    }
    return out;
}

std::string render(std::string tmpl, const std::map<std::string, std::string>& tokens) {
    for (const auto& [name, tok] : tokens) {
        const std::string key = "{" + name + "}";
        for (std::size_t pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos + tok.size()))
            tmpl.replace(pos, key.size(), tok);
    }
    return tmpl;
}

// Placeholder tokens turned into values: digits directly, names through params.
Params token_values(const std::map<std::string, std::string>& tokens, const Params& params) {
    Params out;
    for (const auto& [name, tok] : tokens) {
        if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
            out[name] = Integer(tok);
        } else if (auto it = params.find(tok); it != params.end()) {
            out[name] = it->second;
        }
    }
    return out;
}

// Non-degree guards; unknown values pass and are reported.
bool guards_hold(const KBaseFact& f, const Params& vals, std::vector<std::string>* notes) {
    for (const auto& g : f.guards) {
        if (g.kind == FactGuard::Kind::MinM) continue;
        auto it = vals.find(g.var);
        if (it == vals.end()) {
            if (notes)
                notes->push_back(std::string(g.kind == FactGuard::Kind::Prime ? "prime(" : "prime_power(") + g.var +
                                 ") assumed");
            continue;
        }
        bool ok = g.kind == FactGuard::Kind::Prime ? is_prime(it->second) : is_prime_power(it->second);
        if (!ok) return false;
    }
    return true;
}

// m for which the fact's degree pattern meets the query, or -1 when the
// query is a family covered by the fact; nullopt when they do not meet.
std::optional<int> degree_match(const Degree& fact, const Degree& q) {
    if (q.symbolic_n) return std::nullopt;
    if (q.a == 0) {
        if (fact.a == 0) return fact.b == q.b ? std::optional<int>(0) : std::nullopt;
        int diff = q.b - fact.b;
        if (diff % fact.a != 0) return std::nullopt;
        int m = diff / fact.a;
        if (m < fact.min_m) return std::nullopt;
        return m;
    }
    if (fact.a == q.a && fact.b == q.b && fact.min_m <= q.min_m) return -1;
    return std::nullopt;
}

std::string degree_token(const Degree& d) { return d.is_concrete() ? std::to_string(d.b) : "{" + d.str() + "}"; }

struct TermValue {
    SymGroup group;
    std::string display;
};

// Value of K_d(label), following SameAs facts.
std::optional<TermValue> lookup(const std::string& label0, const Degree& d, const FactTable& facts, const Params& params,
                                std::vector<std::string>& provenance, std::vector<std::string>& notes) {
    std::string label = label0;
    for (int depth = 0; depth < 16; ++depth) {
        bool moved = false;
        for (const auto& f : facts.facts()) {
            if (f.kind != KBaseFact::Kind::SameAs) continue;
            auto tok = match_template(f.label, label);
            if (!tok || !guards_hold(f, token_values(*tok, params), &notes)) continue;
            provenance.push_back(f.provenance);
            label = render(f.same_as, *tok);
            moved = true;
            break;
        }
        if (!moved) break;
    }
    for (const auto& f : facts.facts()) {
        if (f.kind != KBaseFact::Kind::Value) continue;
        auto tok = match_template(f.label, label);
        if (!tok) continue;
        auto m = degree_match(f.degree, d);
        if (!m) continue;
        Params vals = token_values(*tok, params);
        if (!guards_hold(f, vals, &notes)) continue;
        std::map<std::string, std::string> shown = *tok;
        shown["n"] = degree_token(d);
        shown["m"] = *m >= 0 ? std::to_string(*m) : "m";
        if (*m >= 0) vals["m"] = *m;
        TermValue v;
        v.group.free = f.free;
        for (const auto& c : f.cyclic) {
            auto k = eval_int(c, vals);
            if (k) {
                if (*k != 1) v.group.cyclic.push_back(*k);
            } else {
                v.group.symbols.push_back("Z/(" + render(c, shown) + ")");
            }
        }
        for (const auto& s : f.symbols) v.group.symbols.push_back(render(s, shown));
        v.display = render(f.display, shown);
        provenance.push_back(f.provenance);
        return v;
    }
    return std::nullopt;
}

void add_into(SymGroup& a, const SymGroup& b) {
    a.free += b.free;
    a.cyclic.insert(a.cyclic.end(), b.cyclic.begin(), b.cyclic.end());
    a.symbols.insert(a.symbols.end(), b.symbols.begin(), b.symbols.end());
    std::sort(a.symbols.begin(), a.symbols.end());
}

struct Summed {
    SymGroup group;
    std::vector<std::string> displays;
    std::vector<std::string> missing;
};

Summed sum_terms(const KExpr& e, const Degree& d, const FactTable& facts, const Params& params,
                 std::vector<std::string>& provenance, std::vector<std::string>& notes) {
    Summed s;
    for (const auto& t : e.terms) {
        auto v = lookup(t.label, d, facts, params, provenance, notes);
        if (!v) {
            s.missing.push_back("K_" + degree_token(d) + "(" + t.label + ")");
            continue;
        }
        for (std::size_t k = 0; k < t.multiplicity; ++k) {
            add_into(s.group, v->group);
            if (v->display != "0") s.displays.push_back(v->display);
        }
    }
    return s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

void dedupe(std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (auto& s : v)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    v = std::move(out);
}

SymGroup from_fg(const FgAbGroup& g) { return SymGroup{g.free_rank(), g.invariant_factors(), {}}; }

// ---- fact file ----

std::vector<FactGuard> parse_guards(const std::vector<std::string>& gs, Degree& deg) {
    static const std::regex minm(R"(\s*m\s*>=\s*(\d+)\s*)");
    static const std::regex pred(R"(\s*(prime|prime_power)\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*)");
    std::vector<FactGuard> out;
    for (const auto& g : gs) {
        std::smatch m;
        if (std::regex_match(g, m, minm)) {
            int k = std::stoi(m[1]);
            deg.min_m = std::max(deg.min_m, k);
            out.push_back({FactGuard::Kind::MinM, "m", k});
        } else if (std::regex_match(g, m, pred)) {
            out.push_back({m[1] == "prime" ? FactGuard::Kind::Prime : FactGuard::Kind::PrimePower, m[2], 0});
        } else {
            fail(ErrorKind::ParseError, "facts: unknown guard '" + g + "'");
        }
    }
    return out;
}

KBaseFact parse_fact(const nlohmann::json& j, std::size_t index) {
    const std::string where = "facts[" + std::to_string(index) + "]";
    if (!j.is_object()) fail(ErrorKind::ParseError, where + ": expected an object");
    auto str = [&](const char* key) -> std::string {
        if (!j.contains(key)) return {};
        if (!j[key].is_string()) fail(ErrorKind::ParseError, where + "." + key + ": expected a string");
        return j[key].get<std::string>();
    };
    KBaseFact f;
    f.label = str("label");
    f.provenance = str("provenance");
    if (f.label.empty()) fail(ErrorKind::ParseError, where + ": missing label");
    if (f.provenance.empty()) fail(ErrorKind::ParseError, where + ": missing provenance");
    std::vector<std::string> guards;
    if (j.contains("guard")) {
        if (!j["guard"].is_array()) fail(ErrorKind::ParseError, where + ".guard: expected an array");
        for (const auto& g : j["guard"]) {
            if (!g.is_string()) fail(ErrorKind::ParseError, where + ".guard: expected strings");
            guards.push_back(g.get<std::string>());
        }
    }
    const std::string kind = str("kind");
    if (kind == "gv") {
        f.kind = KBaseFact::Kind::Gv;
        f.ring = str("ring");
        if (f.ring.empty()) fail(ErrorKind::ParseError, where + ": gv fact needs a ring");
    } else if (j.contains("same_as")) {
        f.kind = KBaseFact::Kind::SameAs;
        f.same_as = str("same_as");
    } else {
        if (!kind.empty() && kind != "value") fail(ErrorKind::ParseError, where + ": unknown kind '" + kind + "'");
        auto d = Degree::parse(str("degree"));
        if (!d) fail(ErrorKind::ParseError, where + ".degree: cannot parse '" + str("degree") + "'");
        f.degree = *d;
        if (!j.contains("group") || !j["group"].is_object()) fail(ErrorKind::ParseError, where + ": missing group");
        const auto& g = j["group"];
        try {
            f.free = g.value("free", std::size_t{0});
            f.cyclic = g.value("cyclic", std::vector<std::string>{});
            f.symbols = g.value("symbols", std::vector<std::string>{});
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::ParseError, where + ".group: " + e.what());
        }
        f.display = str("display");
        if (f.display.empty()) f.display = f.free || !f.cyclic.empty() || !f.symbols.empty() ? f.label : "0";
    }
    f.guards = parse_guards(guards, f.degree);
    return f;
}

// ---- rules ----

[[noreturn]] void schema(const std::string& msg) { fail(ErrorKind::HypothesisSchemaMismatch, msg); }

std::string ij(std::size_t i, std::size_t j) { return "{" + std::to_string(i) + "," + std::to_string(j) + "}"; }

class Labels {
public:
    Labels(const RuleBinding& b, const std::string& rule) : b_(b), rule_(rule) {}
    const std::string& need(const std::string& key) const {
        auto it = b_.labels.find(key);
        if (it == b_.labels.end() || it->second.empty()) schema(rule_ + ": missing binding " + key);
        return it->second;
    }
    bool has(const std::string& key) const { return b_.labels.count(key) > 0; }
    // Label for the key, the override when bound, otherwise built by make.
    template <class F>
    std::string or_else(const std::string& key, F make) const {
        auto it = b_.labels.find(key);
        return it != b_.labels.end() ? it->second : make();
    }
    std::string quotient(const std::string& r, const std::string& i) const {
        return or_else(r + "/" + i, [&] { return need(r) + "/" + need(i); });
    }

private:
    const RuleBinding& b_;
    std::string rule_;
};

std::vector<std::string> rewrite(const std::string& rule, const RuleBinding& b, const FactTable* facts) {
    Labels L(b, rule);
    const std::size_t n = b.n;
    std::vector<std::string> out;
    auto with_r = [&](const std::string& r) { out.push_back(L.need(r)); };
    if (rule == "lemma4.1") {
        with_r("R_1");
        with_r("R_2");
    } else if (rule == "bimodule") {
        L.need("M");
        L.need("N");
        with_r("R");
        with_r("S");
    } else if (rule == "lemma4.2") {
        with_r("R");
        for (std::size_t j = 1; j < n; ++j) out.push_back(L.quotient("R", "I_" + ij(j, j + 1)));
    } else if (rule == "cor4.3") {
        with_r("R");
        for (std::size_t j = 2; j <= n; ++j) {
            std::string t = "t_" + ij(j - 1, j);
            out.push_back(L.or_else("R/I^" + t, [&] { return L.need("R") + "/" + L.need("I") + "^" + L.need(t); }));
        }
    } else if (rule == "lemma4.5") {
        with_r("R");
        for (std::size_t j = 2; j <= n; ++j)
            out.push_back(L.quotient("R_" + std::to_string(j), "I_" + std::to_string(j)));
    } else if (rule == "cor4.6") {
        with_r("R");
        for (std::size_t j = 2; j <= n; ++j) out.push_back(L.quotient("R", "I_" + std::to_string(j)));
    } else if (rule == "thm1.1" || rule == "thm1.2" || rule == "prop5.1") {
        with_r("R");
        if (b.shape == "S-thm1" || b.shape == "S-thm2") {
            for (std::size_t j = 2; j <= n; ++j) out.push_back(L.quotient("R", "I_" + ij(j - 1, j)));
        } else if (b.shape == "T-thm1" || b.shape == "T-thm2") {
            for (std::size_t j = 2; j <= n; ++j)
                out.push_back(L.quotient("R_" + std::to_string(j), "I_" + std::to_string(j)));
        } else {
            L.need("J");
            for (std::size_t j = 2; j <= n; ++j) out.push_back(L.quotient("R", "I"));
        }
    } else if (rule == "cor4.8" || rule == "prop5.3") {
        L.need("J");
        with_r("R");
        for (std::size_t j = 2; j <= n; ++j) out.push_back(L.quotient("R", "I"));
    } else if (rule == "poset") {
        with_r("R");
        for (std::size_t j = 2; j <= n; ++j) out.push_back(L.quotient("R", "I"));
    } else if (rule == "lemma5.2") {
        L.need("I");
        with_r("A");
    } else if (rule == "prop7.2") {
        const std::string In = "I_" + std::to_string(n);
        const bool gv = b.assume.count("I_n is GV") > 0 ||
                        (facts && facts->is_gv(L.need("B"), L.need(In), {}));
        if (!gv) schema("prop7.2: " + L.need(In) + " is not known to be a GV-ideal of " + L.need("B"));
        with_r("B");
        for (std::size_t j = 1; j < n; ++j) {
            std::string a = "I_" + std::to_string(j), c = "I_" + std::to_string(j + 1);
            std::string colon = "(" + a + ":" + c + ")";
            std::string col = L.or_else(colon, [&] { return "(" + L.need(a) + ":" + L.need(c) + ")"; });
            out.push_back(L.or_else("B/" + colon, [&] { return L.need("B") + "/" + col; }));
        }
    } else if (rule == "opposite") {
        with_r("R");
        for (std::size_t j = 1; j < n; ++j) out.push_back(L.quotient("R", "I_" + std::to_string(j)));
    } else if (rule == "corner") {
        std::string eRe = L.or_else("eRe", [&] { return L.need("e") + L.need("R") + L.need("e"); });
        out.push_back(eRe);
        for (std::size_t j = 1; j < n; ++j) {
            std::string key = "I_" + ij(j, j + 1);
            out.push_back(L.or_else("eRe/e" + key + "e", [&] { return eRe + "/" + L.need("e") + L.need(key) + L.need("e"); }));
        }
    } else if (rule == "radical-full") {
        with_r("A");
        out.push_back(L.or_else("B/rad(B)", [&] { return L.need("B") + "/rad(" + L.need("B") + ")"; }));
    } else if (rule == "lemma3.2" || rule == "lemma3.4") {
        with_r("B");
    } else {
        fail(ErrorKind::UnknownRule, "unknown rule " + rule);
    }
    return out;
}

CoeffMode rewrite_mode(const SymRule& r, const KExpr& e, const RuleBinding& b) {
    using K = CoeffMode::Kind;
    if (!r.localized) return e.mode;
    if (e.mode.kind == K::ModP) {
        if (e.mode.param % 4 == 2) fail(ErrorKind::ModeConflict, r.id + ": mod-p form needs p not congruent to 2 mod 4");
        if (b.p && gcd(*b.p, e.mode.param) != 1)
            fail(ErrorKind::ModeConflict, r.id + ": mod-p form needs p invertible in the base ring");
        return e.mode;
    }
    Integer s;
    if (e.mode.kind == K::Localized) {
        s = e.mode.param;
        if (b.s && *b.s != s)
            fail(ErrorKind::ModeConflict, r.id + ": expression is localized at " + to_string(s) + ", binding asks for " +
                                              to_string(*b.s));
    } else {
        if (!b.s) fail(ErrorKind::ModeConflict, r.id + " holds only after inverting s; integral application refused");
        s = *b.s;
    }
    if (s <= 0) fail(ErrorKind::ModeConflict, r.id + ": s must be positive");
    if (b.p && s % *b.p != 0)
        fail(ErrorKind::ModeConflict, r.id + ": s = " + to_string(s) + " is not divisible by p = " + to_string(*b.p));
    return CoeffMode::localized(s);
}

std::string subscript(const Degree& d) {
    if (d.is_concrete()) return d.b < 10 ? std::to_string(d.b) : "{" + std::to_string(d.b) + "}";
    return d.symbolic_n ? "n" : "{" + d.str() + "}";
}

}  // namespace

// ---- Degree / KExpr ----

std::optional<Degree> Degree::parse(const std::string& text) {
    static const std::regex re(R"(\s*(?:(n)|(-?\d+)|(\d*)m\s*(?:([+-])\s*(\d+))?)\s*(?:,\s*m\s*>=\s*(\d+)\s*)?)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) return std::nullopt;
    if (m[1].matched) return any();
    if (m[2].matched) return concrete(std::stoi(m[2]));
    Degree d;
    d.a = m[3].length() ? std::stoi(m[3]) : 1;
    if (d.a <= 0) return std::nullopt;
    if (m[4].matched) d.b = (m[4] == "-" ? -1 : 1) * std::stoi(m[5]);
    if (m[6].matched) d.min_m = std::stoi(m[6]);
    return d;
}

std::string Degree::str() const {
    if (symbolic_n) return "n";
    if (a == 0) return std::to_string(b);
    std::string s = (a == 1 ? "" : std::to_string(a)) + "m";
    if (b > 0) s += "+" + std::to_string(b);
    if (b < 0) s += "-" + std::to_string(-b);
    return s;
}

KExpr KExpr::of(const std::string& label, Degree d, CoeffMode mode) { return KExpr{d, {{label, 1}}, std::move(mode)}; }

std::string KExpr::str() const {
    std::vector<std::string> parts;
    for (const auto& t : terms) {
        std::string k = "K_" + subscript(degree) + "(" + t.label + ")";
        parts.push_back(t.multiplicity == 1 ? k : std::to_string(t.multiplicity) + "·" + k);
    }
    std::string s = parts.empty() ? "0" : join(parts, " ⊕ ");
    if (mode.kind != CoeffMode::Kind::Integral) s += " [" + mode.str() + "]";
    return s;
}

KExpr normalize(KExpr e) {
    std::map<std::string, std::size_t> m;
    for (const auto& t : e.terms) m[t.label] += t.multiplicity;
    e.terms.clear();
    for (const auto& [label, k] : m)
        if (k > 0) e.terms.push_back({label, k});
    return e;
}

// ---- SymGroup ----

bool SymGroup::is_zero() const { return concrete().is_trivial() && symbols.empty(); }

std::string SymGroup::str() const {
    std::vector<std::string> parts;
    FgAbGroup g = concrete();
    if (!g.is_trivial()) parts.push_back(g.str());
    for (const auto& s : symbols) parts.push_back(s);
    return parts.empty() ? "0" : join(parts, " ⊕ ");
}

bool SymGroup::operator==(const SymGroup& o) const {
    auto a = symbols, b = o.symbols;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b && iso_test(concrete(), o.concrete());
}

// ---- facts ----

FactTable FactTable::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::ParseError, "facts: parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_array()) fail(ErrorKind::ParseError, "facts: expected a JSON array");
    std::vector<KBaseFact> facts;
    for (std::size_t i = 0; i < j.size(); ++i) facts.push_back(parse_fact(j[i], i));
    return FactTable(std::move(facts));
}

const FactTable& FactTable::builtin() {
    static const FactTable t = from_json(kDefaultFactsJson);
    return t;
}

void FactTable::merge(const FactTable& other) {
    facts_.insert(facts_.end(), other.facts_.begin(), other.facts_.end());
}

bool FactTable::is_gv(const std::string& ring, const std::string& ideal, const Params& params) const {
    for (const auto& f : facts_) {
        if (f.kind != KBaseFact::Kind::Gv) continue;
        auto ti = match_template(f.label, ideal);
        auto tr = match_template(f.ring, ring);
        if (!ti || !tr) continue;
        auto tok = *ti;
        bool clash = false;
        for (const auto& [k, v] : *tr) {
            auto [it, fresh] = tok.emplace(k, v);
            if (!fresh && it->second != v) clash = true;
        }
        if (!clash && guards_hold(f, token_values(tok, params), nullptr)) return true;
    }
    return false;
}

// ---- rules ----

const std::vector<SymRule>& sym_rules() {
    static const std::vector<SymRule> rules = {
        {"lemma4.1", {"triangular"}, false, std::nullopt, "K([[R_1, M],[0, R_2]]) = K(R_1) + K(R_2)"},
        {"lemma4.2", {"B-lemma32"}, false, std::nullopt, "K(B) = K(R) + sum_{j<n} K(R/I_{j,j+1})"},
        {"cor4.3", {"B-powers"}, false, std::nullopt, "K(S) = K(R) + sum_{j>=2} K(R/I^{t_{j-1,j}})"},
        {"lemma4.5", {"B-lemma34"}, false, std::nullopt, "K(B) = K(R) + sum_{j>=2} K(R_j/I_j)"},
        {"cor4.6", {"S", "T"}, false, std::nullopt, "K(S) = K(R) + sum_{j>=2} K(R/I_j) = K(T)"},
        {"thm1.1", {"S-thm1", "T-thm1"}, true, std::nullopt, "localized decomposition of the S and T shapes"},
        {"thm1.2", {"S-thm2", "T-thm2"}, false, std::nullopt, "integral decomposition of the S and T shapes"},
        {"cor4.8", {"ij"}, true, std::nullopt, "K(S)[1/s] = K(R)[1/s] + (n-1) K(R/I)[1/s] when I² ⊆ J"},
        {"prop5.1", {"S-thm1", "T-thm1", "ij"}, false, 0, "K_0 decomposition of the S, T and I/J shapes"},
        {"prop5.3", {"ij"}, false, 1, "K_1(B) = K_1(R) + (n-1) K_1(R/I) for idempotent I ⊆ J"},
        {"lemma5.2", {"ij"}, false, 1, "K_1(B) = K_1(A) for B ⊆ A sharing an idempotent ideal"},
        {"prop7.2", {"chain"}, false, std::nullopt, "K(End(I_1+...+I_n)) = K(B) + sum K(B/(I_j:I_{j+1}))"},
        {"opposite", {"opposite"}, false, std::nullopt, "K(S') = K(R) + sum_{j<n} K(R/I_j)"},
        {"corner", {"corner"}, false, std::nullopt, "K(B_1) = K(eRe) + sum K(eRe/eI_{j,j+1}e)"},
        {"radical-full", {"radical-full"}, false, std::nullopt, "K([[A, rad B],[A, B]]) = K(A) + K(B/rad B)"},
        {"poset", {"poset"}, true, std::nullopt, "K(B(R,I,P))[1/s] = K(R)[1/s] + (n-1) K(R/I)[1/s]"},
        {"bimodule", {"bimodule"}, false, std::nullopt, "K([[R, M],[N, S]]) = K(R) + K(S) when MN = NM = 0"},
        {"lemma3.2", {"B-lemma32", "S-thm2"}, false, std::nullopt, "K(C) = K(B), companion of an S-type ring"},
        {"lemma3.4", {"B-lemma34", "T-thm2"}, false, std::nullopt, "K(C) = K(B), companion of a T-type ring"},
    };
    return rules;
}

KExpr apply_rule(const KExpr& e, const std::string& rule, const RuleBinding& b, const FactTable* facts) {
    auto it = std::find_if(sym_rules().begin(), sym_rules().end(), [&](const SymRule& r) { return r.id == rule; });
    if (it == sym_rules().end()) fail(ErrorKind::UnknownRule, "unknown rule " + rule);
    const SymRule& r = *it;
    if (std::find(r.shapes.begin(), r.shapes.end(), b.shape) == r.shapes.end())
        schema(rule + ": shape '" + b.shape + "' does not fit; expected " + join(r.shapes, " or "));
    if (b.n == 0) schema(rule + ": n must be positive");
    if (r.only_degree && !(e.degree.is_concrete() && e.degree.b == *r.only_degree))
        schema(rule + " is a statement about K_" + std::to_string(*r.only_degree) + " only");
    auto target = std::find_if(e.terms.begin(), e.terms.end(), [&](const KTerm& t) { return t.label == b.target; });
    if (target == e.terms.end()) schema(rule + ": no term K(" + b.target + ") in " + e.str());

    KExpr out;
    out.degree = e.degree;
    out.mode = rewrite_mode(r, e, b);
    for (const auto& t : e.terms)
        if (t.label != b.target) out.terms.push_back(t);
    for (const auto& label : rewrite(rule, b, facts)) out.terms.push_back({label, target->multiplicity});
    return normalize(out);
}

// ---- evaluation ----

const SymGroup& EvalResult::require_value() const {
    if (status == Status::Unsplit)
        fail(ErrorKind::ModeConflict, "universal coefficient sequence does not split for p = 2 mod 4: " + note);
    if (status == Status::Unknown) fail(ErrorKind::InvalidArgument, "no value: missing " + join(missing, ", "));
    return value;
}

EvalResult evaluate(const KExpr& e, const Degree& d, const FactTable& facts, const Params& params) {
    if (!e.degree.symbolic_n && !(e.degree == d))
        fail(ErrorKind::InvalidArgument, "expression is in degree " + e.degree.str() + ", asked for " + d.str());
    EvalResult res;
    std::vector<std::string> notes;
    Summed s = sum_terms(e, d, facts, params, res.provenance, notes);
    res.missing = s.missing;
    std::string shown = s.displays.empty() ? "0" : join(s.displays, " ⊕ ");

    switch (e.mode.kind) {
        case CoeffMode::Kind::Integral:
            res.value = s.group;
            res.display = shown;
            break;
        case CoeffMode::Kind::Localized: {
            const Integer& sv = e.mode.param;
            LocalizedAbGroup l = localize(s.group.concrete(), sv);
            res.localized = l;
            res.value = SymGroup{l.free_rank(), l.torsion(), {}};
            for (const auto& sym : s.group.symbols) res.value.symbols.push_back(sym + "[1/" + to_string(sv) + "]");
            res.display = "(" + shown + ")[1/" + to_string(sv) + "]";
            break;
        }
        case CoeffMode::Kind::ModP: {
            const Integer& p = e.mode.param;
            const std::string zp = "Z/" + to_string(p);
            SymGroup tensor = from_fg(mod_p(s.group.concrete(), p).tensor);
            for (const auto& sym : s.group.symbols) tensor.symbols.push_back(sym + "⊗" + zp);
            SymGroup tor;
            Degree prev = d;
            prev.b -= 1;
            if (d.is_concrete() && d.b == 0) {
                notes.push_back("K_{-1} taken as 0");
            } else {
                if (!d.is_concrete() && d.min_m * d.a + prev.b < 0) prev.min_m = (-prev.b + d.a - 1) / d.a;
                Summed q = sum_terms(e, prev, facts, params, res.provenance, notes);
                res.missing.insert(res.missing.end(), q.missing.begin(), q.missing.end());
                tor = from_fg(mod_p(q.group.concrete(), p).tor);
                for (const auto& sym : q.group.symbols) tor.symbols.push_back("Tor(" + sym + "," + zp + ")");
            }
            res.tensor = tensor;
            res.tor = tor;
            res.display = "(" + shown + ")⊗" + zp;
            if (p % 4 == 2 && !tor.is_zero()) {
                res.status = EvalResult::Status::Unsplit;
                res.note = "0 -> " + tensor.str() + " -> K(-;" + zp + ") -> " + tor.str() + " -> 0";
            } else {
                res.value = tensor;
                add_into(res.value, tor);
            }
            break;
        }
    }
    if (!res.missing.empty()) res.status = EvalResult::Status::Unknown;
    dedupe(res.provenance);
    dedupe(notes);
    if (!notes.empty()) res.note += (res.note.empty() ? "" : "; ") + join(notes, "; ");
    return res;
}

// ---- worked example ----

bool ExampleReport::ok() const {
    return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const ExampleLine& l) { return l.matches; });
}

ExampleReport reproduce_worked_example(const Integer& p, const FactTable& facts) {
    ExampleReport rep;
    rep.p = p;
    const std::string ring = "End(Z[x]+(p,x))";
    RuleBinding b;
    b.target = ring;
    b.shape = "chain";
    b.n = 2;
    b.labels = {{"B", "Z[x]"}, {"I_1", "Z[x]"}, {"I_2", "(p,x)"}, {"(I_1:I_2)", "(p,x)"}};
    rep.expression = apply_rule(KExpr::of(ring), "prop7.2", b, &facts);
    const Params params{{"p", p}};

    struct Want {
        std::string degree, display;
        int sample;
        SymGroup group;
    };
    const std::vector<Want> wants = {
        {"0", "Z ⊕ Z", 0, SymGroup{2, {}, {}}},
        {"1", "Z/2Z ⊕ (Z/pZ)^×", 1, SymGroup{0, {2, p - 1}, {}}},
        {"2m,m>=1", "K_{2m}(Z)", 4, SymGroup{0, {}, {"K_4(Z)"}}},
        {"2m-1,m>=2", "K_{2m-1}(Z) ⊕ Z/(p^m-1)Z", 3, SymGroup{0, {p * p - 1}, {"K_3(Z)"}}},
    };
    for (const auto& w : wants) {
        Degree fam = *Degree::parse(w.degree);
        ExampleLine line;
        line.degree = fam.str();
        line.expected = w.display;
        line.sample_degree = w.sample;
        line.reference = w.group;
        EvalResult sym = evaluate(rep.expression, fam, facts, params);
        EvalResult val = evaluate(rep.expression, Degree::concrete(w.sample), facts, params);
        line.produced = sym.display;
        if (val.status == EvalResult::Status::Value) line.group = val.value;
        line.matches = sym.status == EvalResult::Status::Value && line.produced == line.expected && line.group &&
                       *line.group == *line.reference;
        for (const auto& pr : sym.provenance)
            if (std::find(rep.provenance.begin(), rep.provenance.end(), pr) == rep.provenance.end())
                rep.provenance.push_back(pr);
        rep.lines.push_back(std::move(line));
    }
    return rep;
}

}  // namespace kmatrix
