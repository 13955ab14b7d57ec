#include "kmatrix/error.hpp"
#include "kmatrix/verify.hpp"
#include "test_rings.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace kmatrix;
using namespace kmatrix::testing;

namespace {

Ideal principal(const RingPtr& r, const Elem& x) { return ideal_closure(r, {x}, Side::Two); }

FgAbGroup Z(std::size_t r) { return FgAbGroup::free(r); }

ErrorKind kind_of(const std::function<void()>& f, std::string* msg = nullptr) {
    try {
        f();
    } catch (const Error& e) {
        if (msg) *msg = e.what();
        return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ErrorKind::InvalidArgument;
}

void expect_all_iso(const std::vector<KReport>& reps) {
    for (const auto& r : reps) {
        EXPECT_EQ(r.verdict, KReport::Verdict::Iso)
            << r.rule << " degree " << r.degree << ": " << value_str(*r.lhs) << " vs " << value_str(*r.rhs);
    }
    EXPECT_TRUE(all_iso(reps));
}

RuleInstance cor46(const RingPtr& r, std::size_t n, ShapeKind shape, const Elem& gen = {2}) {
    RuleInstance in;
    in.id = "cor4.6";
    in.R = r;
    in.n = n;
    in.shape = shape;
    for (std::size_t j = 2; j <= n; ++j) in.data.Ii.emplace(int(j), principal(r, gen));
    return in;
}

RuleInstance s_thm1_z4() {
    RingPtr r = zmod_ring(4);
    RuleInstance in;
    in.id = "s-thm1";
    in.R = r;
    in.shape = ShapeKind::S_thm1;
    in.data.I = principal(r, {2});
    in.data.Iij.emplace(Pos{1, 2}, principal(r, {2}));
    return in;
}

RuleInstance ij_instance(const RingPtr& r, const Ideal& I, const Ideal& J, std::size_t n = 2) {
    RuleInstance in;
    in.id = "ij";
    in.R = r;
    in.n = n;
    in.data.I = I;
    in.data.J = J;
    return in;
}

}  // namespace

TEST(CoeffMode, ParseAndPrint) {
    EXPECT_EQ(CoeffMode::parse("integral"), CoeffMode::integral());
    EXPECT_EQ(CoeffMode::parse("localized:6"), CoeffMode::localized(6));
    EXPECT_EQ(CoeffMode::parse("modp:3"), CoeffMode::mod_p(3));
    EXPECT_FALSE(CoeffMode::parse("localized:"));
    EXPECT_FALSE(CoeffMode::parse("modp:x"));
    EXPECT_FALSE(CoeffMode::parse("rational"));
    EXPECT_EQ(CoeffMode::localized(10).str(), "localized:10");
}

TEST(ApplyMode, LocalizeAndModP) {
    FgAbGroup g(1, {2, 3});
    EXPECT_EQ(value_str(apply_mode(g, CoeffMode::integral())), g.str());
    KValue l = apply_mode(g, CoeffMode::localized(2));
    EXPECT_TRUE(value_iso(l, KValue(LocalizedAbGroup(2, 1, {3}))));
    KValue m = apply_mode(g, CoeffMode::mod_p(3));
    EXPECT_TRUE(value_iso(m, KValue(FgAbGroup(0, {3, 3}))));
}

TEST(Verify, Cor46TShapeOverZ4) {
    auto reps = verify_decomposition("cor4.6", cor46(zmod_ring(4), 2, ShapeKind::T_thm2), {0, 1}, CoeffMode::integral());
    ASSERT_EQ(reps.size(), 2u);
    expect_all_iso(reps);
    EXPECT_TRUE(value_iso(*reps[0].lhs, KValue(Z(2))));
    EXPECT_TRUE(value_iso(*reps[1].lhs, KValue(FgAbGroup::cyclic(2))));
    EXPECT_EQ(reps[1].rhs_labels, (std::vector<std::string>{"K_1(R)", "K_1(R/I_2)"}));
}

TEST(Verify, Cor46BothRoutesAgree) {
    RingPtr r = zmod_ring(4);
    auto s = verify_decomposition("cor4.6", cor46(r, 3, ShapeKind::S_thm2), {0, 1}, CoeffMode::integral());
    auto t = verify_decomposition("cor4.6", cor46(r, 3, ShapeKind::T_thm2), {0, 1}, CoeffMode::integral());
    expect_all_iso(s);
    expect_all_iso(t);
    for (std::size_t d = 0; d < 2; ++d) EXPECT_TRUE(value_iso(*s[d].lhs, *t[d].lhs));
}

TEST(Verify, Thm11Localized) {
    auto reps = verify_decomposition("thm1.1", s_thm1_z4(), {0, 1}, CoeffMode::localized(2));
    expect_all_iso(reps);
    const auto& l0 = std::get<LocalizedAbGroup>(*reps[0].lhs);
    EXPECT_EQ(l0.free_rank(), 2u);
    EXPECT_TRUE(std::get<LocalizedAbGroup>(*reps[1].lhs).is_trivial());
    EXPECT_TRUE(std::get<LocalizedAbGroup>(*reps[1].rhs).is_trivial());
}

TEST(Verify, Thm11ModeGuards) {
    EXPECT_EQ(kind_of([] { verify_decomposition("thm1.1", s_thm1_z4(), {0}, CoeffMode::integral()); }),
              ErrorKind::ModeConflict);
    EXPECT_EQ(kind_of([] { verify_decomposition("thm1.1", s_thm1_z4(), {0}, CoeffMode::localized(3)); }),
              ErrorKind::ModeConflict);
    EXPECT_EQ(kind_of([] { verify_decomposition("thm1.1", s_thm1_z4(), {0}, CoeffMode::mod_p(2)); }),
              ErrorKind::ModeConflict);
    EXPECT_EQ(kind_of([] { verify_decomposition("thm1.1", s_thm1_z4(), {0}, CoeffMode::mod_p(6)); }),
              ErrorKind::ModeConflict);
    RuleInstance bad = s_thm1_z4();
    RingPtr r6 = zmod_ring(6);
    bad.R = r6;
    bad.data.I = principal(r6, {2});
    bad.data.Iij.clear();
    bad.data.Iij.emplace(Pos{1, 2}, principal(r6, {2}));
    EXPECT_EQ(kind_of([&] { verify_decomposition("thm1.1", bad, {0}, CoeffMode::localized(6)); }),
              ErrorKind::HypothesisFailed);
}

TEST(Verify, Thm11ModPWithInvertiblePrime) {
    auto reps = verify_decomposition("thm1.1", s_thm1_z4(), {0, 1}, CoeffMode::mod_p(3));
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_TRUE(value_iso(*reps[0].lhs, KValue(FgAbGroup(0, {3, 3}))));
    expect_all_iso(reps);
}

TEST(Verify, Thm12BothShapes) {
    RingPtr r = zmod_ring(4);
    RuleInstance s;
    s.R = r;
    s.shape = ShapeKind::S_thm2;
    s.data.Iij.emplace(Pos{1, 2}, principal(r, {2}));
    expect_all_iso(verify_decomposition("thm1.2", s, {0, 1}, CoeffMode::integral()));
    RuleInstance t;
    t.R = r;
    t.shape = ShapeKind::T_thm2;
    t.data.Ri.emplace(2, r->whole());
    t.data.Ii.emplace(2, principal(r, {2}));
    expect_all_iso(verify_decomposition("thm1.2", t, {0, 1}, CoeffMode::integral()));
    t.shape = ShapeKind::S_thm1;
    EXPECT_EQ(kind_of([&] { verify_decomposition("thm1.2", t, {0}, CoeffMode::integral()); }), ErrorKind::ShapeMismatch);
}

TEST(Verify, Lemma42Chain) {
    RingPtr r = zmod_ring(4);
    RuleInstance in;
    in.R = r;
    in.n = 3;
    for (auto p : {Pos{1, 2}, Pos{1, 3}, Pos{2, 3}}) in.data.Iij.emplace(p, principal(r, {2}));
    auto reps = verify_decomposition("lemma4.2", in, {0, 1}, CoeffMode::integral());
    expect_all_iso(reps);
    EXPECT_TRUE(value_iso(*reps[0].lhs, KValue(Z(3))));
    EXPECT_TRUE(value_iso(*reps[1].lhs, KValue(FgAbGroup::cyclic(2))));
}

TEST(Verify, Lemma42ViolatedHypothesis) {
    RingPtr r = zmod_ring(4);
    RuleInstance in;
    in.R = r;
    in.n = 3;
    in.data.Iij.emplace(Pos{1, 2}, principal(r, {2}));
    in.data.Iij.emplace(Pos{1, 3}, unit_ideal(r));  // I_13 is not inside I_12
    in.data.Iij.emplace(Pos{2, 3}, unit_ideal(r));
    std::string msg;
    EXPECT_EQ(kind_of([&] { verify_decomposition("lemma4.2", in, {0}, CoeffMode::integral()); }, &msg),
              ErrorKind::HypothesisFailed);
    EXPECT_NE(msg.find("witness"), std::string::npos) << msg;
}

TEST(Verify, Cor43Powers) {
    RingPtr r = zmod_ring(8);
    RuleInstance in;
    in.R = r;
    in.data.I = principal(r, {2});
    in.data.t.emplace(Pos{1, 2}, 2);
    expect_all_iso(verify_decomposition("cor4.3", in, {0, 1}, CoeffMode::integral()));
}

TEST(Verify, Lemma45) {
    RingPtr r = f2xf2();
    RuleInstance in;
    in.R = r;
    in.data.Ri.emplace(2, r->whole());
    in.data.Ii.emplace(2, principal(r, {1, 0}));
    expect_all_iso(verify_decomposition("lemma4.5", in, {0, 1}, CoeffMode::integral()));
}

TEST(Verify, Cor48AndPoset) {
    RingPtr r = zmod_ring(4);
    Ideal I = principal(r, {2});
    expect_all_iso(verify_decomposition("cor4.8", ij_instance(r, I, zero_ideal(r)), {0, 1}, CoeffMode::localized(2)));
    RingPtr r9 = zmod_ring(9);
    Ideal I3 = principal(r9, {3});
    expect_all_iso(verify_decomposition("cor4.8", ij_instance(r9, I3, zero_ideal(r9)), {0, 1}, CoeffMode::localized(3)));
    EXPECT_EQ(kind_of([&] {
                  verify_decomposition("cor4.8", ij_instance(r9, unit_ideal(r9), zero_ideal(r9)), {0},
                                       CoeffMode::localized(3));
              }),
              ErrorKind::HypothesisFailed);
    RuleInstance p;
    p.R = r;
    p.data.I = I;
    p.order = {{true, true}, {false, true}};
    expect_all_iso(verify_decomposition("poset", p, {0, 1}, CoeffMode::localized(2)));
}

TEST(Verify, Prop51IsDegreeZeroOnly) {
    auto reps = verify_decomposition("prop5.1", s_thm1_z4(), {0, 1}, CoeffMode::integral());
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_TRUE(reps[0].claimed);
    EXPECT_EQ(reps[0].verdict, KReport::Verdict::Iso);
    EXPECT_FALSE(reps[1].claimed);
    EXPECT_NE(reps[1].note.find("evidence"), std::string::npos);
}

TEST(Verify, Prop53AndLemma52) {
    RingPtr r = f2xf2();
    Ideal I = principal(r, {1, 0});
    auto p = verify_decomposition("prop5.3", ij_instance(r, I, unit_ideal(r)), {1}, CoeffMode::integral());
    expect_all_iso(p);
    auto l = verify_decomposition("lemma5.2", ij_instance(r, I, unit_ideal(r)), {1}, CoeffMode::integral());
    expect_all_iso(l);
    EXPECT_NE(l[0].note.find("assumed"), std::string::npos);
}

TEST(Verify, Lemma52RejectsNonIdempotentIdeal) {
    RingPtr r = zmod_ring(4);
    std::string msg;
    EXPECT_EQ(kind_of(
                  [&] {
                      verify_decomposition("lemma5.2", ij_instance(r, principal(r, {2}), unit_ideal(r)), {1},
                                           CoeffMode::integral());
                  },
                  &msg),
              ErrorKind::HypothesisFailed);
    EXPECT_EQ(msg.rfind("I² ≠ I", 0), 0u) << msg;
    EXPECT_NE(msg.find("[2]"), std::string::npos) << msg;
}

TEST(Verify, Prop72) {
    RingPtr f = zmod_ring(2);
    RuleInstance in;
    in.R = f;
    in.chain = {unit_ideal(f), unit_ideal(f)};
    expect_all_iso(verify_decomposition("prop7.2", in, {0, 1}, CoeffMode::integral()));
    RingPtr r = zmod_ring(4);
    in.R = r;
    in.chain = {unit_ideal(r), principal(r, {2})};
    std::string msg;
    EXPECT_EQ(kind_of([&] { verify_decomposition("prop7.2", in, {0}, CoeffMode::integral()); }, &msg),
              ErrorKind::HypothesisFailed);
    EXPECT_NE(msg.find("GV"), std::string::npos);
}

TEST(Verify, OppositeCornerRadicalFull) {
    RingPtr r = zmod_ring(4);
    RuleInstance op;
    op.R = r;
    op.n = 3;
    op.data.Ii.emplace(1, principal(r, {2}));
    op.data.Ii.emplace(2, unit_ideal(r));
    expect_all_iso(verify_decomposition("opposite", op, {0, 1}, CoeffMode::integral()));

    RingPtr p = f2xf2();
    RuleInstance c;
    c.R = p;
    c.data.Iij.emplace(Pos{1, 2}, principal(p, {1, 0}));
    c.idempotent = Elem{1, 0};
    expect_all_iso(verify_decomposition("corner", c, {0, 1}, CoeffMode::integral()));

    RingPtr q = f4();
    RuleInstance rf;
    rf.R = q;
    rf.subring = Subgroup::generated(q->orders(), {q->one()});
    expect_all_iso(verify_decomposition("radical-full", rf, {0, 1}, CoeffMode::integral()));

    RingPtr m = matrix_ring(zmod_ring(2), 2);
    RuleInstance bad;
    bad.R = m;
    bad.subring = upper_in_m2(m).image_subgroup();
    EXPECT_EQ(kind_of([&] { verify_decomposition("radical-full", bad, {0}, CoeffMode::integral()); }),
              ErrorKind::HypothesisFailed);
}

TEST(Verify, BimoduleAndTriangular) {
    RingPtr f = zmod_ring(2);
    RuleInstance in;
    in.R = f;
    in.S = f;
    in.M = Bimodule::regular(f);
    expect_all_iso(verify_decomposition("lemma4.1", in, {0, 1}, CoeffMode::integral()));
    in.N = Bimodule::regular(f);
    expect_all_iso(verify_decomposition("bimodule", in, {0, 1}, CoeffMode::integral()));
}

TEST(Verify, Companions) {
    RingPtr r = zmod_ring(4);
    RuleInstance s;
    s.R = r;
    s.data.Iij.emplace(Pos{1, 2}, principal(r, {2}));
    expect_all_iso(verify_decomposition("lemma3.2", s, {0, 1}, CoeffMode::integral()));
    RuleInstance t;
    t.R = r;
    t.data.Ri.emplace(2, r->whole());
    t.data.Ii.emplace(2, principal(r, {2}));
    expect_all_iso(verify_decomposition("lemma3.4", t, {0, 1}, CoeffMode::integral()));
}

TEST(Verify, HigherDegreesAreSymbolicOnly) {
    auto reps = verify_decomposition("cor4.6", cor46(zmod_ring(4), 2, ShapeKind::T_thm2), {2, 3}, CoeffMode::integral());
    ASSERT_EQ(reps.size(), 2u);
    for (const auto& r : reps) {
        EXPECT_EQ(r.verdict, KReport::Verdict::SymbolicOnly);
        EXPECT_FALSE(r.lhs);
    }
}

TEST(Verify, UnknownRule) {
    EXPECT_EQ(kind_of([] { verify_decomposition("lemma9.9", s_thm1_z4(), {0}, CoeffMode::integral()); }),
              ErrorKind::UnknownRule);
}

TEST(Verify, InsensitiveToGeneratorOrder) {
    RingPtr a = zmod_ring(4), b = zmod_ring(2);
    RingPtr ab = product_ring(a, b), ba = product_ring(b, a);
    RuleInstance x = cor46(ab, 2, ShapeKind::T_thm2, {2, 1});
    RuleInstance y = cor46(ba, 2, ShapeKind::T_thm2, {1, 2});
    auto rx = verify_decomposition("cor4.6", x, {0, 1}, CoeffMode::integral());
    auto ry = verify_decomposition("cor4.6", y, {0, 1}, CoeffMode::integral());
    for (std::size_t d = 0; d < 2; ++d) {
        EXPECT_EQ(rx[d].verdict, ry[d].verdict);
        EXPECT_TRUE(value_iso(*rx[d].lhs, *ry[d].lhs));
        EXPECT_TRUE(value_iso(*rx[d].rhs, *ry[d].rhs));
    }
}
