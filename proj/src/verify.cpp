#include "kmatrix/verify.hpp"

#include "kmatrix/error.hpp"
#include "kmatrix/gvtools.hpp"
#include "kmatrix/kdirect.hpp"

#include <map>

namespace kmatrix {

namespace {

struct Summand {
    std::string label;
    RingPtr ring;
};

struct Plan {
    std::string lhs_label;
    RingPtr lhs;
    std::vector<Summand> rhs;
    std::string note;
};

std::string ij(std::size_t i, std::size_t j) { return "{" + std::to_string(i) + "," + std::to_string(j) + "}"; }

void hypothesis(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::HypothesisFailed, what);
}

void require_conditions(const MatrixPattern& p) {
    ConditionReport rep = check_conditions(p);
    if (rep.pass()) return;
    const Violation& v = rep.violations.front();
    std::string msg = v.condition;
    if (v.witness) msg += ": witness " + vec_str(*v.witness);
    if (!v.detail.empty()) msg += " (" + v.detail + ")";
    fail(ErrorKind::HypothesisFailed, msg);
}

MatrixRing build_checked(const MatrixPattern& p) {
    require_conditions(p);
    return build_subring(p);
}

const Ideal& need_ideal(const std::optional<Ideal>& x, const char* name) {
    if (!x) fail(ErrorKind::InvalidArgument, std::string("instance is missing ideal ") + name);
    return *x;
}

const Ideal& need_ideal(const std::map<Pos, Ideal>& m, std::size_t i, std::size_t j) {
    auto it = m.find({int(i), int(j)});
    if (it == m.end()) fail(ErrorKind::InvalidArgument, "instance is missing ideal I_" + ij(i, j));
    return it->second;
}

const Ideal& need_ideal(const std::map<int, Ideal>& m, std::size_t j) {
    auto it = m.find(int(j));
    if (it == m.end()) fail(ErrorKind::InvalidArgument, "instance is missing ideal I_" + std::to_string(j));
    return it->second;
}

RingPtr quotient(const Ideal& I) { return quotient_ring(I).ring; }

// Witness x in a with x not in b.
std::optional<Elem> outside(const Subgroup& a, const Subgroup& b) {
    for (const auto& x : a.generators())
        if (!b.contains(x)) return x;
    return std::nullopt;
}

void require_inside(const Ideal& a, const Ideal& b, const std::string& what) {
    if (auto w = outside(a.sub, b.sub)) fail(ErrorKind::HypothesisFailed, what + ": witness " + vec_str(*w));
}

void require_idempotent(const Ideal& I) {
    Ideal sq = ideal_product(I, I);
    if (auto w = outside(I.sub, sq.sub))
        fail(ErrorKind::HypothesisFailed, "I² ≠ I: " + vec_str(*w) + " lies in I but not in I²");
}

// The ideal J of the subring S (given by its inclusion) as an ideal of S.
Ideal restrict_ideal(const SubringResult& S, const Subgroup& J) {
    LinMap inc = S.inclusion.linear();
    std::vector<Vec> gens;
    for (const auto& x : J.generators()) {
        auto y = solve(inc, x);
        if (!y) fail(ErrorKind::HypothesisFailed, "I_j ⊆ R_j: witness " + vec_str(x));
        gens.push_back(*y);
    }
    return Ideal{S.ring, Subgroup::generated(S.ring->orders(), gens), Side::Two};
}


std::vector<Summand> subring_quotients(const RingPtr& R, std::size_t n, const ShapeData& d) {
    std::vector<Summand> out;
    for (std::size_t j = 2; j <= n; ++j) {
        auto it = d.Ri.find(int(j));
        if (it == d.Ri.end()) fail(ErrorKind::InvalidArgument, "instance is missing subring R_" + std::to_string(j));
        SubringResult Rj = ring_on_subgroup(R, it->second, R->one());
        Ideal Ij = restrict_ideal(Rj, need_ideal(d.Ii, j).sub);
        out.push_back({"R_" + std::to_string(j) + "/I_" + std::to_string(j), quotient(Ij)});
    }
    return out;
}

// R / I_{j-1,j} for j = 2..n.
std::vector<Summand> superdiagonal_quotients(std::size_t n, const ShapeData& d) {
    std::vector<Summand> out;
    for (std::size_t j = 2; j <= n; ++j) out.push_back({"R/I_" + ij(j - 1, j), quotient(need_ideal(d.Iij, j - 1, j))});
    return out;
}

Plan with_base(std::string lhs_label, RingPtr lhs, const RingPtr& R, std::vector<Summand> rest) {
    Plan p{std::move(lhs_label), std::move(lhs), {{"R", R}}, {}};
    for (auto& s : rest) p.rhs.push_back(std::move(s));
    return p;
}

std::vector<Summand> copies(const std::string& label, const RingPtr& r, std::size_t k) {
    return std::vector<Summand>(k, Summand{label, r});
}

ShapeData cor46_data(const RuleInstance& in, bool s_variant) {
    const RingPtr& R = in.R;
    ShapeData d;
    for (std::size_t j = 2; j <= in.n; ++j) {
        d.Ri.emplace(int(j), R->whole());
        d.Ii.emplace(int(j), need_ideal(in.data.Ii, j));
    }
    for (std::size_t i = 2; i <= in.n; ++i)
        for (std::size_t j = 2; j < i; ++j)
            d.Iij.emplace(Pos{int(i), int(j)}, s_variant ? need_ideal(in.data.Ii, j) : unit_ideal(R));
    return d;
}

// B = [R on the diagonal, I above, J below] together with checks shared by
// the rules on this shape.
MatrixRing ij_ring(const RuleInstance& in, const Ideal& J) {
    return build_checked(ij_pattern(in.R, in.n, need_ideal(in.data.I, "I"), J));
}

// M_n(I) inside a matrix ring with every entry containing I.
Ideal full_matrix_ideal(const MatrixRing& m, const Ideal& I) {
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            for (const auto& x : I.basis()) gens.push_back(m.embed(i, j, x));
    return Ideal{m.ring(), Subgroup::generated(m.ring()->orders(), gens), Side::Two};
}

// Inclusion of matrix rings over the same base, entrywise.
RingHom matrix_inclusion(const MatrixRing& b, const MatrixRing& a) {
    std::vector<Elem> imgs;
    for (std::size_t g = 0; g < b.ring()->ngens(); ++g) {
        Elem x = a.ring()->zero();
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                x = a.ring()->add(x, a.embed(i, j, b.entry(b.ring()->gen(g), i, j)));
        imgs.push_back(x);
    }
    return RingHom(b.ring(), a.ring(), imgs);
}

Plan plan_for(const std::string& rule, const RuleInstance& in, std::uint64_t cap) {
    const RingPtr& R = in.R;
    if (!R) fail(ErrorKind::InvalidArgument, "instance has no base ring");
    const std::size_t n = in.n;
    if (n == 0) fail(ErrorKind::InvalidArgument, "matrix size must be positive");

    if (rule == "lemma4.1" || rule == "bimodule") {
        if (!in.S || !in.M) fail(ErrorKind::InvalidArgument, "instance needs S and M");
        Bimodule N = rule == "bimodule" ? (in.N ? *in.N : Bimodule::zero(in.S, R)) : Bimodule::zero(in.S, R);
        BimoduleRing b = bimodule_ring(R, in.S, *in.M, N);
        return Plan{rule == "bimodule" ? "[[R, M],[N, S]]" : "[[R, M],[0, S]]", b.A, {{"R", R}, {"S", in.S}}, {}};
    }
    if (rule == "lemma4.2") {
        MatrixRing B = build_checked(make_pattern(ShapeKind::B_lemma32, R, n, in.data));
        std::vector<Summand> rest;
        for (std::size_t j = 1; j < n; ++j) rest.push_back({"R/I_" + ij(j, j + 1), quotient(need_ideal(in.data.Iij, j, j + 1))});
        return with_base("B", B.ring(), R, std::move(rest));
    }
    if (rule == "cor4.3") {
        MatrixRing S = build_checked(make_pattern(ShapeKind::B_powers, R, n, in.data));
        std::vector<Summand> rest;
        for (std::size_t j = 2; j <= n; ++j) {
            int t = in.data.t.at({int(j - 1), int(j)});
            rest.push_back({"R/I^" + std::to_string(t), quotient(ideal_power(*in.data.I, unsigned(t)))});
        }
        return with_base("S", S.ring(), R, std::move(rest));
    }
    if (rule == "lemma4.5") {
        MatrixRing B = build_checked(make_pattern(ShapeKind::B_lemma34, R, n, in.data));
        return with_base("B", B.ring(), R, subring_quotients(R, n, in.data));
    }
    if (rule == "cor4.6") {
        const bool s_variant = in.shape == ShapeKind::S_thm2;
        MatrixRing X = build_checked(make_pattern(ShapeKind::T_thm2, R, n, cor46_data(in, s_variant)));
        std::vector<Summand> rest;
        for (std::size_t j = 2; j <= n; ++j) rest.push_back({"R/I_" + std::to_string(j), quotient(need_ideal(in.data.Ii, j))});
        return with_base(s_variant ? "S" : "T", X.ring(), R, std::move(rest));
    }
    if (rule == "thm1.1" || rule == "thm1.2") {
        const bool one = rule == "thm1.1";
        ShapeKind s = one ? ShapeKind::S_thm1 : ShapeKind::S_thm2;
        ShapeKind t = one ? ShapeKind::T_thm1 : ShapeKind::T_thm2;
        if (in.shape != s && in.shape != t)
            fail(ErrorKind::ShapeMismatch, rule + " needs shape " + shape_kind_name(s) + " or " + shape_kind_name(t));
        MatrixRing X = build_checked(make_pattern(in.shape, R, n, in.data));
        if (in.shape == s) return with_base("S", X.ring(), R, superdiagonal_quotients(n, in.data));
        return with_base("T", X.ring(), R, subring_quotients(R, n, in.data));
    }
    if (rule == "cor4.8" || rule == "poset") {
        const Ideal& I = need_ideal(in.data.I, "I");
        MatrixRing X;
        std::size_t k = n;
        if (rule == "cor4.8") {
            const Ideal& J = need_ideal(in.data.J, "J");
            require_inside(ideal_product(I, I), J, "I² ⊆ J");
            X = ij_ring(in, J);
        } else {
            X = poset_ring(R, I, in.order);
            k = in.order.size();
        }
        return with_base(rule == "poset" ? "B(R,I,P)" : "S", X.ring(), R, copies("R/I", quotient(I), k - 1));
    }
    if (rule == "prop5.1") {
        if (in.shape == ShapeKind::S_thm1 || in.shape == ShapeKind::T_thm1) {
            MatrixRing X = build_checked(make_pattern(in.shape, R, n, in.data));
            if (in.shape == ShapeKind::S_thm1) return with_base("S", X.ring(), R, superdiagonal_quotients(n, in.data));
            return with_base("T", X.ring(), R, subring_quotients(R, n, in.data));
        }
        const Ideal& I = need_ideal(in.data.I, "I");
        const Ideal& J = need_ideal(in.data.J, "J");
        require_inside(ideal_product(I, I), J, "I² ⊆ J");
        return with_base("S", ij_ring(in, J).ring(), R, copies("R/I", quotient(I), n - 1));
    }
    if (rule == "prop5.3" || rule == "lemma5.2") {
        const Ideal& I = need_ideal(in.data.I, "I");
        const Ideal& J = need_ideal(in.data.J, "J");
        require_inside(I, J, "I ⊆ J");
        require_idempotent(I);
        MatrixRing B = ij_ring(in, J);
        if (rule == "prop5.3") return with_base("B", B.ring(), R, copies("R/I", quotient(I), n - 1));
        MatrixRing A = ij_ring(in, unit_ideal(R));
        Quotient qb = quotient_ring(full_matrix_ideal(B, I));
        Quotient qa = quotient_ring(full_matrix_ideal(A, I));
        RingHom inc = matrix_inclusion(B, A);
        std::vector<Elem> imgs;
        for (std::size_t g = 0; g < qb.ring->ngens(); ++g) imgs.push_back(qa.proj(inc(qb.lift(qb.ring->gen(g)))));
        AbMap g1 = induced_k1(RingHom(qb.ring, qa.ring, imgs), cap);
        hypothesis(is_injective(g1) && is_surjective(g1), "γ1: K1(B/I) -> K1(A/I) is not an isomorphism");
        return Plan{"B", B.ring(), {{"A", A.ring()}}, "γ2 on K2 is assumed, not computed"};
    }
    if (rule == "prop7.2") {
        if (in.chain.empty()) fail(ErrorKind::InvalidArgument, "instance needs an ideal chain");
        hypothesis(is_gv(R, in.chain.back()).gv, "I_n is not a GV-ideal");
        ChainEndReport ce = chain_end_ring(R, in.chain);
        std::vector<Summand> rest;
        for (std::size_t j = 0; j + 1 < in.chain.size(); ++j)
            rest.push_back({"B/(I_" + std::to_string(j + 1) + ":I_" + std::to_string(j + 2) + ")",
                            quotient(colon_ideal(in.chain[j], in.chain[j + 1]))});
        Plan p{"End(I_1+...+I_n)", ce.hom_ring, {{"B", R}}, {}};
        for (auto& s : rest) p.rhs.push_back(std::move(s));
        return p;
    }
    if (rule == "opposite") {
        std::vector<Subgroup> entries(n * n, R->whole());
        std::vector<std::string> names(n * n, "R");
        std::vector<Summand> rest;
        for (std::size_t i = 1; i < n; ++i) {
            const Ideal& Ii = need_ideal(in.data.Ii, i);
            for (std::size_t j = 1; j <= n; ++j)
                if (j != i) {
                    entries[(i - 1) * n + j - 1] = Ii.sub;
                    names[(i - 1) * n + j - 1] = "I_" + std::to_string(i);
                }
            hypothesis(is_closed(R, Ii.sub, Side::Two), "I_" + std::to_string(i) + " is an ideal");
            rest.push_back({"R/I_" + std::to_string(i), quotient(Ii)});
        }
        return with_base("S'", build_checked(generic_pattern(R, n, entries, names)).ring(), R, std::move(rest));
    }
    if (rule == "corner") {
        if (!in.idempotent) fail(ErrorKind::InvalidArgument, "instance needs an idempotent e");
        MatrixPattern p = make_pattern(ShapeKind::B_lemma32, R, n, in.data);
        require_conditions(p);
        MatrixPattern c = corner_pattern(p, *in.idempotent);
        MatrixRing B1 = build_subring(c);
        Plan plan{"B_1", B1.ring(), {{"eRe", c.R}}, {}};
        for (std::size_t j = 0; j + 1 < n; ++j)
            plan.rhs.push_back({"eRe/eI_" + ij(j + 1, j + 2) + "e", quotient(Ideal{c.R, c.entry(j, j + 1), Side::Two})});
        return plan;
    }
    if (rule == "radical-full") {
        if (!in.subring) fail(ErrorKind::InvalidArgument, "instance needs the subring B of A");
        const RingPtr& A = R;
        SubringResult B = ring_on_subgroup(A, *in.subring, A->one());
        Ideal radB = jacobson_radical(B.ring);
        std::vector<Vec> in_a, prods;
        for (const auto& x : radB.basis()) {
            Elem y = B.inclusion(x);
            in_a.push_back(y);
            for (std::size_t g = 0; g < A->ngens(); ++g) prods.push_back(A->mul(y, A->gen(g)));
        }
        Subgroup radB_a = Subgroup::generated(A->orders(), in_a);
        hypothesis(is_closed(A, radB_a, Side::Left), "rad(B) is a left ideal of A");
        hypothesis(jacobson_radical(A).sub == Subgroup::generated(A->orders(), prods), "rad(A) = rad(B)A");
        MatrixRing C = build_checked(generic_pattern(A, 2, {A->whole(), radB_a, A->whole(), *in.subring},
                                                     {"A", "rad(B)", "A", "B"}));
        return Plan{"C", C.ring(), {{"A", A}, {"B/rad(B)", quotient(radB)}}, {}};
    }
    if (rule == "lemma3.2" || rule == "lemma3.4") {
        const bool s = rule == "lemma3.2";
        ShapeKind kind = in.shape;
        if (kind == ShapeKind::Generic) kind = s ? ShapeKind::B_lemma32 : ShapeKind::B_lemma34;
        const bool ok = s ? (kind == ShapeKind::B_lemma32 || kind == ShapeKind::S_thm2)
                          : (kind == ShapeKind::B_lemma34 || kind == ShapeKind::T_thm2);
        if (!ok) fail(ErrorKind::ShapeMismatch, rule + " does not apply to shape " + shape_kind_name(kind));
        MatrixPattern p = make_pattern(kind, R, n, in.data);
        MatrixRing B = build_checked(p);
        return Plan{"C", companion_C(p).ring(), {{"B", B.ring()}}, {}};
    }
    fail(ErrorKind::UnknownRule, "unknown rule " + rule);
}

// Prime p with exp(R) = p^m, or nullopt; 1 for the zero ring.
std::optional<i64> prime_power_base(const RingPtr& R) {
    i64 e = R->exponent();
    if (e <= 1) return 1;
    i64 p = 2;
    while (e % p != 0) ++p;
    while (e % p == 0) e /= p;
    if (e != 1) return std::nullopt;
    return p;
}

void check_mode(const RuleInfo& info, const RuleInstance& in, const CoeffMode& mode) {
    using K = CoeffMode::Kind;
    if (mode.kind == K::Localized && mode.param <= 0)
        fail(ErrorKind::InvalidArgument, "localized mode needs a positive s");
    if (mode.kind == K::ModP && mode.param < 2) fail(ErrorKind::InvalidArgument, "mod-p mode needs p >= 2");
    if (!info.localized) return;
    if (mode.kind == K::Integral)
        fail(ErrorKind::ModeConflict, info.id + " is a statement after inverting s; integral mode is refused");
    auto p = prime_power_base(in.R);
    if (!p) fail(ErrorKind::HypothesisFailed, "R is not a Z/p^m-algebra: exponent " + std::to_string(in.R->exponent()));
    if (mode.kind == K::Localized && *p > 1 && mode.param % *p != 0)
        fail(ErrorKind::ModeConflict, "s = " + to_string(mode.param) + " is not divisible by p = " + std::to_string(*p));
    if (mode.kind == K::ModP) {
        if (mode.param % 4 == 2)
            fail(ErrorKind::ModeConflict, "mod-p form needs p not congruent to 2 mod 4");
        if (gcd(Integer(in.R->exponent()), mode.param) != 1)
            fail(ErrorKind::ModeConflict, "mod-p form needs p invertible in R");
    }
}

}  // namespace

std::optional<CoeffMode> CoeffMode::parse(const std::string& s) {
    if (s == "integral") return integral();
    auto colon = s.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string head = s.substr(0, colon), tail = s.substr(colon + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    Integer v(tail);
    if (head == "localized") return localized(v);
    if (head == "modp") return mod_p(v);
    return std::nullopt;
}

std::string CoeffMode::str() const {
    switch (kind) {
        case Kind::Integral: return "integral";
        case Kind::Localized: return "localized:" + to_string(param);
        case Kind::ModP: return "modp:" + to_string(param);
    }
    return "?";
}

std::string value_str(const KValue& v) {
    return std::visit([](const auto& g) { return g.str(); }, v);
}

bool value_iso(const KValue& a, const KValue& b) {
    if (a.index() != b.index()) return false;
    if (a.index() == 0) return iso_test(std::get<0>(a), std::get<0>(b));
    return iso_test(std::get<1>(a), std::get<1>(b));
}

KValue apply_mode(const FgAbGroup& k, const CoeffMode& mode) {
    switch (mode.kind) {
        case CoeffMode::Kind::Integral: return k;
        case CoeffMode::Kind::Localized: return localize(k, mode.param);
        case CoeffMode::Kind::ModP: return mod_p(k, mode.param).tensor;
    }
    return k;
}

const char* verdict_name(KReport::Verdict v) {
    switch (v) {
        case KReport::Verdict::Iso: return "iso";
        case KReport::Verdict::Mismatch: return "mismatch";
        case KReport::Verdict::SymbolicOnly: return "symbolic-only";
    }
    return "?";
}

const std::vector<RuleInfo>& rule_table() {
    static const std::vector<RuleInfo> table = {
        {"lemma4.1", "K([[R, M],[0, S]]) = K(R) + K(S)", false, {0, 1}},
        {"lemma4.2", "K(B) = K(R) + sum_{j<n} K(R/I_{j,j+1})", false, {0, 1}},
        {"cor4.3", "K(S) = K(R) + sum_{j>=2} K(R/I^{t_{j-1,j}})", false, {0, 1}},
        {"lemma4.5", "K(B) = K(R) + sum_{j>=2} K(R_j/I_j)", false, {0, 1}},
        {"cor4.6", "K(S) = K(R) + sum_{j>=2} K(R/I_j) = K(T)", false, {0, 1}},
        {"thm1.1", "K(S)[1/s] = K(R)[1/s] + sum K(R/I_{j-1,j})[1/s]; T: sum K(R_j/I_j)[1/s]", true, {0, 1}},
        {"thm1.2", "K(S) = K(R) + sum K(R/I_{j-1,j}); K(T) = K(R) + sum K(R_j/I_j)", false, {0, 1}},
        {"cor4.8", "K(S)[1/s] = K(R)[1/s] + (n-1) K(R/I)[1/s] when I² ⊆ J", true, {0, 1}},
        {"prop5.1", "K_0(S) = K_0(R) + sum K_0(R/I_{j-1,j}); K_0(T) = K_0(R) + sum K_0(R_j/I_j); I/J shape: (n-1) K_0(R/I)",
         false, {0}},
        {"prop5.3", "K_1(B) = K_1(R) + (n-1) K_1(R/I) for idempotent I ⊆ J", false, {1}},
        {"lemma5.2", "K_1(B) = K_1(A) for B ⊆ A sharing the idempotent ideal M_n(I)", false, {1}},
        {"prop7.2", "K(End(I_1+...+I_n)) = K(B) + sum K(B/(I_j:I_{j+1})) when I_n is GV", false, {0, 1}},
        {"opposite", "K(S') = K(R) + sum_{j<n} K(R/I_j)", false, {0, 1}},
        {"corner", "K(B_1) = K(eRe) + sum K(eRe/eI_{j,j+1}e)", false, {0, 1}},
        {"radical-full", "K([[A, rad B],[A, B]]) = K(A) + K(B/rad B)", false, {0, 1}},
        {"poset", "K(B(R,I,P))[1/s] = K(R)[1/s] + (n-1) K(R/I)[1/s]", true, {0, 1}},
        {"bimodule", "K([[R, M],[N, S]]) = K(R) + K(S) when MN = NM = 0", false, {0, 1}},
        {"lemma3.2", "K(C) = K(B) for the companion of an S-type ring", false, {0, 1}},
        {"lemma3.4", "K(C) = K(B) for the companion of a T-type ring", false, {0, 1}},
    };
    return table;
}

const RuleInfo& rule_info(const std::string& id) {
    for (const auto& r : rule_table())
        if (r.id == id) return r;
    fail(ErrorKind::UnknownRule, "unknown rule " + id);
}

std::vector<KReport> verify_decomposition(const std::string& rule, const RuleInstance& inst,
                                          const std::vector<int>& degrees, const CoeffMode& mode,
                                          std::uint64_t cap) {
    const RuleInfo& info = rule_info(rule);
    for (int d : degrees)
        if (d < 0) fail(ErrorKind::InvalidArgument, "negative degrees are not supported");
    check_mode(info, inst, mode);
    Plan plan = plan_for(rule, inst, cap);

    std::map<const FiniteRing*, FgAbGroup> k0s, k1s;
    auto kd = [&](const RingPtr& r, int d) -> const FgAbGroup& {
        auto& cache = d == 0 ? k0s : k1s;
        auto it = cache.find(r.get());
        if (it == cache.end()) it = cache.emplace(r.get(), d == 0 ? k0(r) : k1(r, cap)).first;
        return it->second;
    };

    std::vector<KReport> out;
    for (int d : degrees) {
        KReport rep;
        rep.instance = inst.id;
        rep.rule = rule;
        rep.degree = d;
        rep.mode = mode;
        rep.lhs_label = "K_" + std::to_string(d) + "(" + plan.lhs_label + ")";
        for (const auto& s : plan.rhs) rep.rhs_labels.push_back("K_" + std::to_string(d) + "(" + s.label + ")");
        rep.claimed = d >= 2 || info.degrees.count(d) > 0;
        rep.note = plan.note;
        if (d >= 2) {
            rep.verdict = KReport::Verdict::SymbolicOnly;
            rep.note = "no direct oracle above degree 1; use ksym";
            out.push_back(std::move(rep));
            continue;
        }
        if (!rep.claimed) rep.note = "evidence only: " + rule + " makes no claim in degree " + std::to_string(d);
        rep.lhs = apply_mode(kd(plan.lhs, d), mode);
        std::vector<FgAbGroup> parts;
        for (const auto& s : plan.rhs) parts.push_back(kd(s.ring, d));
        rep.rhs = apply_mode(direct_sum(parts), mode);
        rep.verdict = value_iso(*rep.lhs, *rep.rhs) ? KReport::Verdict::Iso : KReport::Verdict::Mismatch;
        out.push_back(std::move(rep));
    }
    return out;
}

bool all_iso(const std::vector<KReport>& reports) {
    for (const auto& r : reports)
        if (r.claimed && r.verdict == KReport::Verdict::Mismatch) return false;
    return true;
}

}  // namespace kmatrix
