#include "kmatrix/error.hpp"
#include "kmatrix/matshape.hpp"
#include "test_rings.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace kmatrix;
using namespace kmatrix::testing;

namespace {

Ideal principal(const RingPtr& r, const Elem& x) { return ideal_closure(r, {x}, Side::Two); }

ShapeData s_data(const RingPtr& r, std::size_t n, const std::map<Pos, Elem>& gens) {
    ShapeData d;
    for (int i = 1; i <= int(n); ++i)
        for (int j = i + 1; j <= int(n); ++j) d.Iij.emplace(Pos{i, j}, principal(r, gens.at({i, j})));
    return d;
}

Integer component_product(const MatrixPattern& p) {
    Integer o = 1;
    for (const auto& e : p.entries) o *= e.order();
    return o;
}

void expect_kind(ErrorKind k, const std::function<void()>& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << error_kind_name(k);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), k) << e.what();
    }
}

bool has_violation(const ConditionReport& rep, const std::string& cond) {
    for (const auto& v : rep.violations)
        if (v.condition == cond) return true;
    return false;
}

}  // namespace

// ==== Conditions ====

TEST(Conditions, SThm2PassesOverZ4) {
    RingPtr r = zmod_ring(4);
    MatrixPattern p = make_pattern(ShapeKind::S_thm2, r, 2, s_data(r, 2, {{{1, 2}, {2}}}));
    EXPECT_TRUE(check_conditions(p).pass());
    EXPECT_TRUE(check_closure(p).pass());
}

TEST(Conditions, PowerExponentsViolateTriangleInequality) {
    RingPtr r = zmod_ring(8);
    ShapeData d;
    d.I = principal(r, {2});
    d.t = {{{1, 2}, 1}, {{1, 3}, 3}, {{2, 3}, 1}};
    MatrixPattern p = make_pattern(ShapeKind::B_powers, r, 3, d);
    ConditionReport rep = check_conditions(p);
    ASSERT_FALSE(rep.pass());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.condition == "t_ij ≤ t_ik + t_kj") {
            found = true;
            EXPECT_EQ(v.i, 1);
            EXPECT_EQ(v.k, 2);
            EXPECT_EQ(v.j, 3);
        }
    EXPECT_TRUE(found);
    // the ring itself is not closed: I * I = 4R is not inside I^3 = 0
    EXPECT_FALSE(check_closure(p).pass());
    expect_kind(ErrorKind::ConditionsNotVerified, [&] { build_subring(p); });
}

TEST(Conditions, FullMatrixRingPassesTrivially) {
    RingPtr r = zmod_ring(3);
    MatrixPattern p = generic_pattern(r, 3, std::vector<Subgroup>(9, r->whole()));
    EXPECT_TRUE(check_conditions(p).pass());
}

TEST(Conditions, ContainmentViolationHasWitness) {
    RingPtr r = zmod_ring(8);
    // I_13 = 2R is not inside I_23 = 4R although 1 <= 2
    MatrixPattern p = make_pattern(ShapeKind::S_thm2, r, 3, s_data(r, 3, {{{1, 2}, {2}}, {{1, 3}, {2}}, {{2, 3}, {4}}}));
    ConditionReport rep = check_conditions(p);
    ASSERT_FALSE(rep.pass());
    const Violation& v = rep.violations.front();
    EXPECT_EQ(v.condition, "I_kj ⊆ I_ij for k ≤ i");
    EXPECT_EQ(v.i, 2);
    EXPECT_EQ(v.k, 1);
    EXPECT_EQ(v.j, 3);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ((*v.witness)[0] % 4, 2);
}

TEST(Conditions, MissingParameterIsShapeMismatch) {
    RingPtr r = zmod_ring(4);
    expect_kind(ErrorKind::ShapeMismatch, [&] { make_pattern(ShapeKind::S_thm2, r, 3, ShapeData{}); });
}

TEST(Conditions, TShapeSideRequirements) {
    // over upper triangular F_2 matrices, span{e11} is a left ideal but not a
    // right one (e11 e12 = e12); as I_2 with R_2 = R it fails
    RingPtr u = upper_f2();
    ShapeData d;
    d.Ri.emplace(2, u->whole());
    d.Ii.emplace(2, Ideal{u, Subgroup::generated(u->orders(), {{1, 0, 0}}), Side::Left});
    MatrixPattern p = make_pattern(ShapeKind::T_thm2, u, 2, d);
    ConditionReport rep = check_conditions(p);
    ASSERT_FALSE(rep.pass());
    EXPECT_TRUE(has_violation(rep, "I_i is a right ideal of R_i"));
    // with R_2 = F_2 e11 + F_2 e22 the right ideal condition holds
    ShapeData d2 = d;
    d2.Ri.clear();
    d2.Ri.emplace(2, Subgroup::generated(u->orders(), {{1, 0, 0}, {0, 0, 1}}));
    d2.Ii.clear();
    d2.Ii.emplace(2, Ideal{u, Subgroup::generated(u->orders(), {{0, 0, 1}}), Side::Left});
    ConditionReport rep2 = check_conditions(make_pattern(ShapeKind::T_thm2, u, 2, d2));
    // span{e22} is not a left ideal of R: e12 e22 = e12
    ASSERT_FALSE(rep2.pass());
    EXPECT_TRUE(has_violation(rep2, "I_i is a left ideal of R"));
}

// ==== Construction ====

TEST(Build, TShapeOverZ4HasOrder128) {
    RingPtr r = zmod_ring(4);
    ShapeData d;
    d.Ri.emplace(2, r->whole());
    d.Ii.emplace(2, principal(r, {2}));
    MatrixPattern p = make_pattern(ShapeKind::T_thm2, r, 2, d);
    MatrixRing m = build_subring(p);
    EXPECT_EQ(m.ring()->order(), Integer(128));
    EXPECT_EQ(m.ring()->order(), component_product(p));
    EXPECT_EQ(m.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(is_idempotent(m.ring(), m.idempotent(i)));
    EXPECT_EQ(m.ring()->add(m.idempotent(0), m.idempotent(1)), m.ring()->one());
    EXPECT_EQ(m.block(0, 1).order(), Integer(2));
}

TEST(Build, SizeOneGivesBaseRing) {
    RingPtr r = truncated_poly(2, 2);
    MatrixRing m = build_subring(generic_pattern(r, 1, {r->whole()}));
    EXPECT_EQ(m.ring()->order(), r->order());
    RingHom iso(r, m.ring(), [&] {
        std::vector<Elem> im;
        for (std::size_t g = 0; g < r->ngens(); ++g) im.push_back(m.embed(0, 0, r->gen(g)));
        return im;
    }());
    EXPECT_TRUE(iso.is_injective());
    EXPECT_TRUE(iso.is_surjective());
}

TEST(Build, FullMatrixRingOverF2) {
    RingPtr r = zmod_ring(2);
    MatrixRing m = build_subring(generic_pattern(r, 2, std::vector<Subgroup>(4, r->whole())));
    EXPECT_EQ(m.ring()->order(), Integer(16));
    EXPECT_EQ(UnitGroup(m.ring()).size(), 6u);
}

TEST(Build, EntryRoundTrip) {
    RingPtr r = zmod_ring(4);
    MatrixPattern p = make_pattern(ShapeKind::S_thm2, r, 2, s_data(r, 2, {{{1, 2}, {2}}}));
    MatrixRing m = build_subring(p);
    Elem x = m.embed(1, 0, {3});
    EXPECT_EQ(m.entry(x, 1, 0), Elem{3});
    EXPECT_EQ(m.entry(x, 0, 1), Elem{0});
    // (e_21 * 3) (e_12 * 2) = e_22 * 6 = e_22 * 2
    Elem y = m.ring()->mul(x, m.embed(0, 1, {2}));
    EXPECT_EQ(m.entry(y, 1, 1), Elem{2});
}

TEST(Build, MultiplicativeOnEntries) {
    // the built multiplication is the matrix product on base representatives
    RingPtr r = upper_f2();
    MatrixPattern p = generic_pattern(r, 2, {r->whole(), r->whole(), Subgroup::generated(r->orders(), {{0, 1, 0}}), r->whole()});
    ASSERT_TRUE(check_conditions(p).pass());
    MatrixRing m = build_subring(p);
    const RingPtr& s = m.ring();
    for (std::uint64_t a = 0; a < 64; ++a)
        for (std::uint64_t b = 0; b < 64; b += 7) {
            Elem x = s->element_at(a * 13 % s->order().convert_to<std::uint64_t>());
            Elem y = s->element_at((b * 31 + 5) % s->order().convert_to<std::uint64_t>());
            Elem xy = s->mul(x, y);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    Elem want = r->zero();
                    for (std::size_t k = 0; k < 2; ++k) want = r->add(want, r->mul(m.entry(x, i, k), m.entry(y, k, j)));
                    EXPECT_EQ(m.entry(xy, i, j), want);
                }
        }
}

// ==== Companions ====

TEST(Companion, Lemma32SizeTwo) {
    RingPtr r = zmod_ring(4);
    MatrixPattern p = make_pattern(ShapeKind::B_lemma32, r, 2, s_data(r, 2, {{{1, 2}, {2}}}));
    MatrixRing c = companion_C(p);
    EXPECT_EQ(c.ring()->order(), Integer(16));
    EXPECT_EQ(c.block(0, 0).order(), Integer(4));
    EXPECT_EQ(c.block(0, 1).order(), Integer(2));
    EXPECT_EQ(c.block(1, 0).order(), Integer(1));
    EXPECT_EQ(c.block(1, 1).order(), Integer(2));
}

TEST(Companion, Lemma32DegenerateQuotient) {
    RingPtr r = zmod_ring(4);
    MatrixPattern p = make_pattern(ShapeKind::B_lemma32, r, 2, s_data(r, 2, {{{1, 2}, {1}}}));
    MatrixRing c = companion_C(p);
    EXPECT_EQ(c.block(0, 1).order(), Integer(1));
    EXPECT_EQ(c.block(1, 1).order(), Integer(1));
    EXPECT_EQ(c.ring()->order(), Integer(4));
}

TEST(Companion, Lemma32SizeThree) {
    RingPtr r = zmod_ring(4);
    MatrixPattern p =
        make_pattern(ShapeKind::B_lemma32, r, 3, s_data(r, 3, {{{1, 2}, {2}}, {{1, 3}, {2}}, {{2, 3}, {2}}}));
    MatrixRing c = companion_C(p);
    // upper-left block of B (4*2*4*4) times last column (2/2, 4/2) and corner 4/2
    EXPECT_EQ(c.ring()->order(), Integer(4 * 2 * 4 * 4) * 1 * 2 * 2);
}

TEST(Companion, Lemma34SizeTwo) {
    RingPtr r = zmod_ring(4);
    ShapeData d;
    d.Ri.emplace(2, r->whole());
    d.Ii.emplace(2, principal(r, {2}));
    MatrixRing c = companion_C(make_pattern(ShapeKind::B_lemma34, r, 2, d));
    EXPECT_EQ(c.block(0, 0).order(), Integer(2));
    EXPECT_EQ(c.block(0, 1).order(), Integer(1));
    EXPECT_EQ(c.block(1, 0).order(), Integer(2));
    EXPECT_EQ(c.block(1, 1).order(), Integer(4));
}

TEST(Companion, Lemma34SizeThree) {
    RingPtr r = zmod_ring(4);
    ShapeData d;
    for (int i = 2; i <= 3; ++i) {
        d.Ri.emplace(i, r->whole());
        d.Ii.emplace(i, principal(r, {2}));
    }
    d.Iij.emplace(Pos{3, 2}, principal(r, {2}));
    MatrixPattern p = make_pattern(ShapeKind::B_lemma34, r, 3, d);
    ASSERT_TRUE(check_conditions(p).pass());
    MatrixRing c = companion_C(p);
    EXPECT_GT(c.ring()->order(), Integer(1));
}

TEST(Companion, UnsupportedShape) {
    RingPtr r = zmod_ring(2);
    expect_kind(ErrorKind::ShapeMismatch,
                [&] { companion_C(generic_pattern(r, 2, std::vector<Subgroup>(4, r->whole()))); });
}

// ==== Milnor squares ====

namespace {

MatrixPattern sthm1(const RingPtr& r, const Elem& i, const Elem& i12) {
    ShapeData d = s_data(r, 2, {{{1, 2}, i12}});
    d.I = principal(r, i);
    return make_pattern(ShapeKind::S_thm1, r, 2, d);
}

// |{(a, b) : h1(a) = f2(b)}| and injectivity of R -> R1 x R2, by enumeration.
void brute_pullback(const MilnorSquare& sq) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    const std::uint64_t n = sq.R->size_checked(1 << 16);
    for (std::uint64_t x = 0; x < n; ++x) {
        Elem e = sq.R->element_at(x);
        seen.insert({sq.R1->index_of(sq.f1(e)), sq.R2->index_of(sq.h2(e))});
    }
    EXPECT_EQ(seen.size(), n);
    std::uint64_t pairs = 0;
    const std::uint64_t n1 = sq.R1->size_checked(1 << 16), n2 = sq.R2->size_checked(1 << 16);
    for (std::uint64_t a = 0; a < n1; ++a) {
        Elem ha = sq.h1(sq.R1->element_at(a));
        for (std::uint64_t b = 0; b < n2; ++b)
            if (sq.f2(sq.R2->element_at(b)) == ha) ++pairs;
    }
    EXPECT_EQ(pairs, n);
}

}  // namespace

TEST(MilnorSquare, Thm1OverZ4) {
    RingPtr r = zmod_ring(4);
    ThmSquare s = milnor_square_thm1(sthm1(r, {2}, {2}));
    EXPECT_EQ(s.square.R->order(), Integer(4 * 2 * 2 * 4));
    EXPECT_EQ(s.square.R2->order(), Integer(4));  // diag(Z/2, Z/2)
    EXPECT_EQ(s.square.R0->order(), Integer(8));  // lower triangular over Z/2
    EXPECT_TRUE(s.square.R2->is_commutative());
    EXPECT_FALSE(s.square.R0->is_commutative());
    EXPECT_TRUE(check_pullback(s.square).ok());
    brute_pullback(s.square);
}

TEST(MilnorSquare, WholeIdealCollapses) {
    RingPtr r = zmod_ring(4);
    ThmSquare s = milnor_square_thm1(sthm1(r, {1}, {2}));
    EXPECT_TRUE(s.square.R2->is_zero_ring());
    EXPECT_TRUE(s.square.R0->is_zero_ring());
    brute_pullback(s.square);
}

TEST(MilnorSquare, ZeroIdealIsDegenerate) {
    RingPtr r = zmod_ring(4);
    ThmSquare s = milnor_square_thm1(sthm1(r, {0}, {0}));
    EXPECT_EQ(s.square.R2->order(), s.square.R->order());
    EXPECT_EQ(s.square.R0->order(), s.square.R1->order());
    EXPECT_TRUE(check_pullback(s.square).ok());
}

TEST(MilnorSquare, RejectsWrongShape) {
    RingPtr r = zmod_ring(4);
    expect_kind(ErrorKind::ShapeMismatch,
                [&] { milnor_square_thm1(make_pattern(ShapeKind::S_thm2, r, 2, s_data(r, 2, {{{1, 2}, {2}}}))); });
    // I_12 = R is not inside I = 2R
    expect_kind(ErrorKind::ConditionsNotVerified, [&] { milnor_square_thm1(sthm1(r, {2}, {1})); });
}

// ==== Poset rings ====

TEST(Poset, ChainIsTriangular) {
    RingPtr r = zmod_ring(4);
    Ideal I = principal(r, {2});
    MatrixPattern p = poset_pattern(r, I, {{true, true}, {false, true}});
    EXPECT_EQ(p.entry(0, 1), I.sub);
    EXPECT_TRUE(p.entry(1, 0).is_whole());
    EXPECT_EQ(build_subring(p).ring()->order(), Integer(128));
}

TEST(Poset, AntichainHasIdealOffDiagonal) {
    RingPtr r = zmod_ring(4);
    Ideal I = principal(r, {2});
    MatrixPattern p = poset_pattern(r, I, {{true, false}, {false, true}});
    EXPECT_EQ(p.entry(0, 1), I.sub);
    EXPECT_EQ(p.entry(1, 0), I.sub);
    EXPECT_EQ(build_subring(p).ring()->order(), Integer(64));
}

TEST(Poset, RequiresLinearExtensionOrder) {
    RingPtr r = zmod_ring(4);
    expect_kind(ErrorKind::NotLinearlyExtended,
                [&] { poset_pattern(r, principal(r, {2}), {{true, false}, {true, true}}); });
}

// ==== Bimodule rings ====

TEST(BimoduleRing, ZeroBimodulesGiveProduct) {
    RingPtr r = zmod_ring(4), s = zmod_ring(3);
    BimoduleRing b = bimodule_ring(r, s, Bimodule::zero(r, s), Bimodule::zero(s, r));
    EXPECT_EQ(b.A->order(), Integer(12));
    EXPECT_TRUE(check_pullback(b.square).ok());
}

TEST(BimoduleRing, F2WithF2Bimodules) {
    RingPtr f = zmod_ring(2);
    Bimodule m = Bimodule::regular(f);
    BimoduleRing b = bimodule_ring(f, f, m, m);
    EXPECT_EQ(b.A->order(), Integer(16));
    EXPECT_EQ(b.Mprime.order(), Integer(2));
    EXPECT_TRUE(check_pullback(b.square).ok());
    brute_pullback(b.square);
}

TEST(BimoduleRing, ActionMismatch) {
    RingPtr f = zmod_ring(2), g = zmod_ring(4);
    expect_kind(ErrorKind::ActionMismatch,
                [&] { bimodule_ring(f, g, Bimodule::regular(f), Bimodule::zero(g, f)); });
}

// ==== Corners and opposites ====

TEST(Corner, IdempotentRestriction) {
    RingPtr r = f2xf2();
    MatrixPattern p = make_pattern(ShapeKind::B_lemma32, r, 2, s_data(r, 2, {{{1, 2}, {1, 0}}}));
    MatrixRing c = corner_ring(p, {1, 0});
    EXPECT_EQ(c.base()->order(), Integer(2));
    EXPECT_EQ(c.ring()->order(), Integer(16));
    MatrixRing c2 = corner_ring(p, {0, 1});
    EXPECT_EQ(c2.ring()->order(), Integer(8));
    EXPECT_EQ(corner_ring(p, {1, 1}).ring()->order(), build_subring(p).ring()->order());
    EXPECT_TRUE(corner_ring(p, {0, 0}).ring()->is_zero_ring());
    RingPtr z4 = zmod_ring(4);
    MatrixPattern q = make_pattern(ShapeKind::B_lemma32, z4, 2, s_data(z4, 2, {{{1, 2}, {2}}}));
    expect_kind(ErrorKind::NotIdempotent, [&] { corner_ring(q, {2}); });
}

TEST(Opposite, TransposedShape) {
    RingPtr r = zmod_ring(4);
    MatrixRing m = build_subring(make_pattern(ShapeKind::S_thm2, r, 2, s_data(r, 2, {{{1, 2}, {2}}})));
    RingPtr op = opposite_shape(m);
    EXPECT_EQ(op->order(), m.ring()->order());
    EXPECT_FALSE(op->is_commutative());
}
