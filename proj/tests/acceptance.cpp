// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "kmatrix/error.hpp"
#include "kmatrix/gvtools.hpp"
#include "kmatrix/kdirect.hpp"
#include "kmatrix/ksymbolic.hpp"
#include "kmatrix/verify.hpp"
#include "test_rings.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace kmatrix;
using namespace kmatrix::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

Ideal principal(const RingPtr& r, const Elem& x) { return ideal_closure(r, {x}, Side::Two); }

std::string show(const std::optional<KValue>& v) { return v ? value_str(*v) : "-"; }

// ---- 1 ----
void cor46_t_shape(Outcome& o) {
    RingPtr r = zmod_ring(4);
    RuleInstance in;
    in.R = r;
    in.n = 2;
    in.shape = ShapeKind::T_thm2;
    in.data.Ii.emplace(2, principal(r, {2}));
    in.data.Ri.emplace(2, r->whole());
    MatrixPattern p = make_pattern(ShapeKind::T_thm2, r, 2, in.data);
    o.require(build_subring(p).ring()->order() == 128, "|T| = 128");
    auto reps = verify_decomposition("cor4.6", in, {0, 1}, CoeffMode::integral());
    o.require(reps.size() == 2 && all_iso(reps), "both degrees iso");
    if (reps.size() == 2) {
        o.require(value_iso(*reps[0].lhs, KValue(FgAbGroup::free(2))), "K0(T) = Z^2");
        o.require(value_iso(*reps[1].lhs, KValue(FgAbGroup::cyclic(2))), "K1(T) = Z/2");
        o.detail << "K0: " << show(reps[0].lhs) << " vs " << show(reps[0].rhs) << "; K1: " << show(reps[1].lhs)
                 << " vs " << show(reps[1].rhs);
    }
}

// ---- 2 ----
RuleInstance chain_instance(std::size_t n) {
    RingPtr r = zmod_ring(4);
    RuleInstance in;
    in.R = r;
    in.n = n;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) in.data.Iij.emplace(Pos{int(i), int(j)}, principal(r, {2}));
    return in;
}

void lemma42_chain(Outcome& o) {
    try {
        auto reps = verify_decomposition("lemma4.2", chain_instance(3), {0, 1}, CoeffMode::integral());
        o.require(reps.size() == 2 && all_iso(reps), "both sides iso at n = 3");
        for (const auto& r : reps)
            o.detail << "K" << r.degree << ": " << show(r.lhs) << " vs " << show(r.rhs) << "; ";
        o.detail << "no degradation";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SizeCapExceeded) throw;
        o.detail << "unit cap reached at n = 3, degraded to K0 (n = 3) + K1 (n = 2); ";
        auto k0 = verify_decomposition("lemma4.2", chain_instance(3), {0}, CoeffMode::integral());
        auto k1 = verify_decomposition("lemma4.2", chain_instance(2), {1}, CoeffMode::integral());
        o.require(all_iso(k0) && all_iso(k1), "degraded checks iso");
        o.detail << "K0: " << show(k0[0].lhs) << "; K1(n=2): " << show(k1[0].lhs);
    }
}

// ---- 3, 4 ----
MatrixPattern s_thm1_pattern(RuleInstance& in) {
    RingPtr r = zmod_ring(4);
    in.R = r;
    in.n = 2;
    in.shape = ShapeKind::S_thm1;
    in.data.I = principal(r, {2});
    in.data.Iij.emplace(Pos{1, 2}, principal(r, {2}));
    return make_pattern(ShapeKind::S_thm1, r, 2, in.data);
}

void thm11_localized(Outcome& o) {
    RuleInstance in;
    s_thm1_pattern(in);
    auto reps = verify_decomposition("thm1.1", in, {0, 1}, CoeffMode::localized(2));
    o.require(reps.size() == 2 && all_iso(reps), "both degrees iso");
    if (reps.size() != 2) return;
    const auto& l0 = std::get<LocalizedAbGroup>(*reps[0].lhs);
    const auto& r0 = std::get<LocalizedAbGroup>(*reps[0].rhs);
    o.require(l0.free_rank() == 2 && r0.free_rank() == 2, "rank 2 on both sides");
    o.require(std::get<LocalizedAbGroup>(*reps[1].lhs).is_trivial() &&
                  std::get<LocalizedAbGroup>(*reps[1].rhs).is_trivial(),
              "localized K1 trivial");
    o.detail << "K0[1/2]: " << l0.str() << " vs " << r0.str() << "; K1[1/2]: " << show(reps[1].lhs) << " vs "
             << show(reps[1].rhs);
}

void mv_thm1(Outcome& o) {
    RuleInstance in;
    ThmSquare sq = milnor_square_thm1(s_thm1_pattern(in));
    o.require(check_pullback(sq.square).ok(), "pullback square");
    MvReport rep = mv_exactness(sq.square);
    std::set<std::string> needed{"K1(R0)", "K0(R)", "K0(R1)+K0(R2)"};
    for (const auto& c : rep.checks) {
        if (needed.erase(c.position)) o.detail << c.position << " " << (c.holds ? "exact" : "NOT exact") << "; ";
        o.require(c.holds, c.position + ": " + c.detail);
    }
    o.require(needed.empty(), "all three positions checked");
    o.detail << "K0(B) = " << rep.k0[0].str();
}

// ---- 5 ----
void worked_example(Outcome& o) {
    for (int p : {3, 5}) {
        ExampleReport rep = reproduce_worked_example(p);
        o.require(rep.ok(), "report ok for p = " + std::to_string(p));
        const std::vector<std::pair<std::string, std::string>> display{
            {"0", "Z ⊕ Z"},
            {"1", "Z/2Z ⊕ (Z/pZ)^×"},
            {"2m", "K_{2m}(Z)"},
            {"2m-1", "K_{2m-1}(Z) ⊕ Z/(p^m-1)Z"},
        };
        o.require(rep.lines.size() == display.size(), "four degree classes");
        for (std::size_t i = 0; i < rep.lines.size() && i < display.size(); ++i) {
            const ExampleLine& l = rep.lines[i];
            o.require(l.degree == display[i].first && l.produced == display[i].second,
                      "p = " + std::to_string(p) + " degree " + l.degree + " display '" + l.produced + "'");
        }
        // values at the sample degrees, computed here without the fact table
        if (rep.lines.size() == 4) {
            auto value = [&](std::size_t i) { return rep.lines[i].group ? rep.lines[i].group->str() : std::string("-"); };
            o.require(value(0) == FgAbGroup::free(2).str(), "K0 value");
            o.require(value(1) == FgAbGroup(0, {2, p - 1}).str(), "K1 value");
            o.require(value(2) == "K_4(Z)", "K4 value");
            o.require(value(3) == FgAbGroup::cyclic(p * p - 1).str() + " ⊕ K_3(Z)", "K3 value");
            o.detail << "p=" << p << ": K1 = " << value(1) << ", K3 = " << value(3) << "; ";
        }
    }
}

// ---- 6 ----
void dsplit(Outcome& o) {
    RingPtr m2 = matrix_ring(zmod_ring(2), 2);
    ExtensionSequence s = extension_sequence(upper_in_m2(m2));
    FgAbGroup e = ext1(s.a, s.b);
    o.require(e.is_trivial(), "Ext^1_B(A, B) = 0");
    DsplitReport good = is_dsplit(s.inclusion, s.projection, s.a);
    o.require(good.holds, "B -> A -> A/B is D-split: " + good.failed);
    o.detail << "Ext^1_B(A,B) = " << e.str() << ", extension sequence D-split; ";

    RingPtr r = lower_f2_with(2);
    Elem ee = unit_elem(4, 3), f = unit_elem(4, 0), a = unit_elem(4, 1);
    o.require(!erf_criterion(r, ee, f, a), "eRf != afRf");
    RightMulSequence seq = right_multiplication_sequence(r, ee, f, a);
    DsplitReport bad = is_dsplit(seq.mult, seq.proj, seq.rf.module);
    o.require(!bad.holds && bad.witness.has_value(), "counterexample rejected with witness");
    o.detail << "counterexample: " << bad.failed;
}

// ---- 7 ----
void companions(Outcome& o) {
    struct Case {
        std::string name;
        MatrixPattern p;
    };
    std::vector<Case> cases;
    {
        RingPtr r = zmod_ring(4);
        ShapeData d;
        d.Iij.emplace(Pos{1, 2}, principal(r, {2}));
        cases.push_back({"S-type over Z/4", make_pattern(ShapeKind::B_lemma32, r, 2, d)});
        ShapeData t;
        t.Ri.emplace(2, r->whole());
        t.Ii.emplace(2, principal(r, {2}));
        cases.push_back({"T-type over Z/4", make_pattern(ShapeKind::B_lemma34, r, 2, t)});
    }
    {
        RingPtr r = f2xf2();
        ShapeData d;
        d.Iij.emplace(Pos{1, 2}, principal(r, {1, 0}));
        cases.push_back({"S-type over F2xF2", make_pattern(ShapeKind::B_lemma32, r, 2, d)});
    }
    for (const Case& c : cases) {
        RingPtr B = build_subring(c.p).ring();
        RingPtr C = companion_C(c.p).ring();
        FgAbGroup b0 = k0(B), c0 = k0(C), b1 = k1(B), c1 = k1(C);
        o.require(iso_test(b0, c0) && iso_test(b1, c1), c.name);
        o.detail << c.name << ": K0 " << b0.str() << "/" << c0.str() << ", K1 " << b1.str() << "/" << c1.str()
                 << "; ";
    }
}

// ---- 8 ----
void idempotent_ideal(Outcome& o) {
    RingPtr r = f2xf2();
    RuleInstance in;
    in.R = r;
    in.n = 2;
    in.data.I = principal(r, {1, 0});
    in.data.J = unit_ideal(r);
    auto reps = verify_decomposition("prop5.3", in, {1}, CoeffMode::integral());
    o.require(reps.size() == 1 && all_iso(reps), "K1(B) = K1(R) + K1(R/I)");
    if (!reps.empty()) o.detail << "K1: " << show(reps[0].lhs) << " vs " << show(reps[0].rhs) << "; ";

    RingPtr z4 = zmod_ring(4);
    RuleInstance bad;
    bad.R = z4;
    bad.data.I = principal(z4, {2});
    bad.data.J = unit_ideal(z4);
    try {
        verify_decomposition("lemma5.2", bad, {1}, CoeffMode::integral());
        o.require(false, "non-idempotent ideal rejected");
    } catch (const Error& e) {
        const std::string msg = e.what();
        o.require(e.kind() == ErrorKind::HypothesisFailed, "HypothesisFailed");
        o.require(msg.find("witness") != std::string::npos || msg.find("[2]") != std::string::npos, "witness given");
        o.detail << "rejected: " << msg;
    }
}

// ---- 9 ----
RingPtr random_commutative(std::mt19937& rng) {
    static const std::vector<i64> moduli{2, 3, 4, 5, 8, 9};
    std::uniform_int_distribution<std::size_t> pick(0, moduli.size() - 1);
    const i64 n = moduli[pick(rng)];
    std::size_t deg = 1 + rng() % 3;
    while (deg > 1 && std::pow(double(n), double(deg)) > 128) --deg;
    std::vector<i64> low(deg);
    for (auto& c : low) c = static_cast<i64>(rng() % static_cast<std::uint64_t>(n));
    RingPtr r = poly_quotient(n, low);
    if (r->order() <= 16 && rng() % 3 == 0) r = product_ring(r, zmod_ring(2 + static_cast<i64>(rng() % 3)));
    return r;
}

void gv_suite(Outcome& o) {
    std::mt19937 rng(2024);
    int instances = 0, gv = 0, not_gv = 0, chains = 0;
    while (instances < 24) {
        RingPtr r = random_commutative(rng);
        const std::uint64_t size = r->size_checked(1u << 12);
        std::vector<Elem> gens;
        for (std::uint64_t k = 1 + rng() % 2; k > 0; --k) gens.push_back(r->element_at(rng() % size));
        Ideal I = ideal_closure(r, gens, Side::Two);
        GvCertificate c = is_gv(r, I);
        ++instances;
        (c.gv ? gv : not_gv)++;
        o.require(c.routes_agree, "mu route = Ext route on instance " + std::to_string(instances));
        o.require(c.reverify(), "certificate re-verifies on instance " + std::to_string(instances));
        if (c.gv) o.require(right_annihilator(r, I).is_zero(), "GV ideal has zero annihilator");
        if (r->order() <= 16) {
            ChainEndReport ch = chain_end_ring(r, {unit_ideal(r), unit_ideal(r)});
            ++chains;
            o.require(ch.last_is_gv && ch.isomorphic(), "trivial chain end ring = colon matrix ring");
        }
    }
    o.detail << instances << " instances (" << gv << " GV, " << not_gv << " not), routes agree on all; " << chains
             << " trivial chains matched";
}

// ---- 10 ----
bool unimodular(const IntMatrix& m) {
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

// |{x : p x = 0}| and |G / pG| by enumerating the finite group.
std::pair<std::uint64_t, std::uint64_t> brute_p_parts(const FgAbGroup& g, i64 p) {
    std::vector<i64> d;
    for (const auto& x : g.invariant_factors()) d.push_back(x.convert_to<i64>());
    std::uint64_t total = 1;
    for (i64 x : d) total *= static_cast<std::uint64_t>(x);
    std::uint64_t killed = 0;
    std::set<std::vector<i64>> multiples;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t c = idx;
        std::vector<i64> px(d.size());
        bool zero = true;
        for (std::size_t i = 0; i < d.size(); ++i) {
            i64 digit = static_cast<i64>(c % static_cast<std::uint64_t>(d[i]));
            c /= static_cast<std::uint64_t>(d[i]);
            px[i] = (digit * p) % d[i];
            zero = zero && px[i] == 0;
        }
        if (zero) ++killed;
        multiples.insert(px);
    }
    return {killed, total / multiples.size()};
}

std::uint64_t order_of(const FgAbGroup& g) { return g.torsion_order().convert_to<std::uint64_t>(); }

void abgroup_kernel(Outcome& o) {
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> val(-20, 20), dim(1, 6);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        IntMatrix m(dim(rng), dim(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = val(rng);
        SnfResult s = snf(m);
        bool ok = s.U * m * s.V == s.D && unimodular(s.U) && unimodular(s.V);
        for (std::size_t i = 0; i < s.D.rows() && ok; ++i)
            for (std::size_t j = 0; j < s.D.cols() && ok; ++j)
                ok = i == j ? s.D(i, j) >= 0 : s.D(i, j) == 0;
        auto inv = s.invariants();
        for (std::size_t i = 1; i < inv.size() && ok; ++i) ok = inv[i] % inv[i - 1] == 0;
        if (!ok) ++bad;
    }
    o.require(bad == 0, std::to_string(bad) + " SNF certificates wrong");
    o.detail << "1000 SNF certificates checked; ";

    // random groups: localize idempotence, mod-p orders by brute force, direct-sum symmetry
    std::uniform_int_distribution<int> factor(1, 12), rank(0, 2), count(0, 3);
    const std::vector<i64> primes{2, 3, 5};
    int groups = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Integer> orders;
        for (int k = count(rng); k > 0; --k) orders.push_back(factor(rng));
        FgAbGroup g(static_cast<std::size_t>(rank(rng)), orders);
        FgAbGroup h(0, {Integer(factor(rng))});
        for (Integer s : {2, 3, 6, 10}) {
            LocalizedAbGroup l = localize(g, s);
            o.require(localize(l, s) == l, "localize idempotent on " + g.str());
            for (const auto& t : l.torsion()) o.require(gcd(t, s) == 1, "localized torsion coprime to s");
        }
        o.require(iso_test(direct_sum({g, h}), direct_sum({h, g})), "direct sum commutes");
        if (g.is_finite() && order_of(g) <= 10000) {
            for (i64 p : primes) {
                ModP m = mod_p(g, p);
                auto [killed, cok] = brute_p_parts(g, p);
                o.require(order_of(m.tensor) == cok && order_of(m.tor) == killed && cok == killed,
                          "mod " + std::to_string(p) + " orders on " + g.str());
            }
            ++groups;
        }
    }
    o.detail << "localize/mod_p identities on 200 groups (" << groups << " brute-forced)";
}

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "cor4.6 integral, T-shape over Z/4", 1, cor46_t_shape},
        {2, "lemma4.2 chain, n = 3 over Z/4", 30, lemma42_chain},
        {3, "thm1.1 localized at 2, S-shape over Z/4", 1, thm11_localized},
        {4, "Mayer-Vietoris exactness on the S-shape square", 5, mv_thm1},
        {5, "worked example, p = 3 and 5", 5, worked_example},
        {6, "D-split extension and eRf counterexample", 1, dsplit},
        {7, "companion rings keep K0 and K1", 10, companions},
        {8, "idempotent ideal over F2xF2 and guard", 5, idempotent_ideal},
        {9, "GV routes, annihilator, trivial chain", 30, gv_suite},
        {10, "SNF certificates, localize and mod-p identities", 10, abgroup_kernel},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail << " [over budget]";
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s  %s (%.3f s / %.0f s): %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                    c.budget_s, o.detail.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
