#include "kmatrix/error.hpp"
#include "kmatrix/finring.hpp"
#include "test_rings.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace kmatrix;
using namespace kmatrix::testing;

namespace {

std::vector<Elem> all_elements(const RingPtr& r) {
    std::vector<Elem> v;
    std::uint64_t n = r->size_checked(1 << 16);
    for (std::uint64_t i = 0; i < n; ++i) v.push_back(r->element_at(i));
    return v;
}

// x is a unit iff some y has xy = yx = 1, by search.
std::set<std::uint64_t> brute_units(const RingPtr& r) {
    auto el = all_elements(r);
    std::set<std::uint64_t> u;
    for (const auto& x : el)
        for (const auto& y : el)
            if (r->mul(x, y) == r->one() && r->mul(y, x) == r->one()) {
                u.insert(r->index_of(x));
                break;
            }
    return u;
}

// x in J iff 1 - rx is a unit for every r.
std::set<std::uint64_t> brute_radical(const RingPtr& r) {
    auto el = all_elements(r);
    auto units = brute_units(r);
    std::set<std::uint64_t> j;
    for (const auto& x : el) {
        bool in = true;
        for (const auto& a : el)
            if (!units.count(r->index_of(r->sub(r->one(), r->mul(a, x))))) {
                in = false;
                break;
            }
        if (in) j.insert(r->index_of(x));
    }
    return j;
}

std::vector<RingPtr> sample_rings() {
    return {zmod_ring(4),        zmod_ring(6),           zmod_ring(9),          f2xf2(),
            upper_f2(),          matrix_ring(zmod_ring(2), 2), f4(),         truncated_poly(2, 3),
            truncated_poly(4, 2), product_ring(zmod_ring(4), zmod_ring(3)), opposite_ring(upper_f2()),
            product_ring(upper_f2(), zmod_ring(3))};
}

}  // namespace

// ==== Construction ====

TEST(MakeRing, IntegersModFour) {
    auto r = make_ring({4}, {{{1}}}, {1});
    EXPECT_EQ(r->order(), 4);
    EXPECT_TRUE(r->is_commutative());
}

TEST(MakeRing, ProductOfFields) {
    auto r = make_ring({2, 2}, {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}}, {1, 1});
    EXPECT_EQ(block_count(r), 2u);
}

TEST(MakeRing, IdentityLawViolationNamesGenerator) {
    // e^2 = e, x^2 = 0, ex = x, xe = 0, one = e
    std::vector<std::vector<Elem>> t = {{{1, 0}, {0, 1}}, {{0, 0}, {0, 0}}};
    try {
        make_ring({2, 2}, t, {1, 0});
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IdentityViolation);
        EXPECT_NE(std::string(e.what()).find("(1)"), std::string::npos);
    }
}

TEST(MakeRing, AssociativityViolation) {
    // a*a = b, everything else zero except the identity u: (aa)a = ba = 0 but
    // a(aa) = ab = u breaks associativity
    std::vector<std::vector<Elem>> t(3, std::vector<Elem>(3, Elem(3, 0)));
    for (int i = 0; i < 3; ++i) {
        t[0][i] = Elem(3, 0);
        t[0][i][i] = 1;
        t[i][0] = t[0][i];
    }
    t[1][1] = {0, 0, 1};
    t[1][2] = {1, 0, 0};
    try {
        make_ring({2, 2, 2}, t, {1, 0, 0});
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AssociativityViolation);
    }
}

TEST(MakeRing, OrderInconsistency) {
    // g1 of order 2 with g1*g1 = g0 where g0 has order 4
    std::vector<std::vector<Elem>> t = {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
    try {
        make_ring({4, 2}, t, {1, 0});
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OrderInconsistency);
    }
}

TEST(MakeRing, ZeroRingIsLegal) {
    auto z = zmod_ring(1);
    EXPECT_TRUE(z->is_zero_ring());
    EXPECT_EQ(z->order(), 1);
}

TEST(MakeRing, FullTripleLoopOnSamples) {
    for (const auto& r : sample_rings())
        for (std::size_t i = 0; i < r->ngens(); ++i)
            for (std::size_t j = 0; j < r->ngens(); ++j)
                for (std::size_t k = 0; k < r->ngens(); ++k)
                    EXPECT_EQ(r->mul(r->table(i, j), r->gen(k)), r->mul(r->gen(i), r->table(j, k)));
}

// ==== Ideals and quotients ====

TEST(Ideal, ClosureExamples) {
    auto z4 = zmod_ring(4);
    auto i = ideal_closure(z4, {{2}}, Side::Two);
    EXPECT_EQ(i.order(), 2);
    EXPECT_TRUE(i.contains({2}));

    auto p = f2xf2();
    auto first = ideal_closure(p, {{1, 0}}, Side::Two);
    EXPECT_EQ(first.order(), 2);
    EXPECT_TRUE(first.contains({1, 0}));

    auto u = upper_f2();
    auto n = ideal_closure(u, {{0, 1, 0}}, Side::Two);
    EXPECT_EQ(n.order(), 2);
    EXPECT_TRUE(is_nilpotent(u, n.sub));
}

TEST(Ideal, LeftIdealIsNotTwoSided) {
    auto m = matrix_ring(zmod_ring(2), 2);
    // column of e11: left ideal M e11 has order 4, its two-sided closure is M
    Elem e11(4, 0);
    e11[0] = 1;
    auto l = ideal_closure(m, {e11}, Side::Left);
    EXPECT_EQ(l.order(), 4);
    EXPECT_FALSE(is_closed(m, l.sub, Side::Two));
    EXPECT_THROW(quotient_ring(l), Error);
    EXPECT_EQ(ideal_closure(m, {e11}, Side::Two).order(), 16);
}

TEST(Quotient, Examples) {
    auto z4 = zmod_ring(4);
    auto q = quotient_ring(ideal_closure(z4, {{2}}, Side::Two));
    EXPECT_EQ(q.ring->order(), 2);
    EXPECT_EQ(q.proj({3}), (Elem{1}));

    auto all = quotient_ring(unit_ideal(z4));
    EXPECT_TRUE(all.ring->is_zero_ring());

    auto z8 = zmod_ring(8);
    auto q8 = quotient_ring(ideal_closure(z8, {{4}}, Side::Two));
    EXPECT_EQ(q8.ring->order(), 4);
    EXPECT_EQ(q8.ring->exponent(), 4);
    EXPECT_EQ(q8.proj(z8->gen(0)), q8.ring->one());
}

TEST(Quotient, OrdersMultiply) {
    for (const auto& r : sample_rings()) {
        auto j = jacobson_radical(r);
        auto q = quotient_ring(j);
        EXPECT_EQ(q.ring->order() * j.order(), r->order());
    }
}

TEST(Quotient, QuotientsCompose) {
    // (R/I)/(J/I) and R/J agree on order and block count
    auto r = product_ring(zmod_ring(8), truncated_poly(2, 3));
    auto I = ideal_closure(r, {{4, 0, 0, 0}}, Side::Two);
    auto J = ideal_closure(r, {{2, 0, 0, 0}, {0, 0, 1, 0}}, Side::Two);
    auto qi = quotient_ring(I);
    std::vector<Elem> img;
    for (auto& g : J.basis()) img.push_back(qi.proj(g));
    auto JmodI = ideal_closure(qi.ring, img, Side::Two);
    auto twice = quotient_ring(JmodI);
    auto once = quotient_ring(J);
    EXPECT_EQ(twice.ring->order(), once.ring->order());
    EXPECT_EQ(block_count(twice.ring), block_count(once.ring));
}

TEST(Colon, LeftAndRightConventions) {
    auto r = zmod_ring(8);
    auto I = ideal_closure(r, {{2}}, Side::Two), J = ideal_closure(r, {{4}}, Side::Two);
    auto R = unit_ideal(r);
    EXPECT_TRUE(colon_ideal(I, R).is_whole());
    EXPECT_EQ(colon_ideal(R, I).sub, I.sub);
    // {x | 2x in 4R} = 2R
    auto c = colon_ideal(I, J);
    EXPECT_EQ(c.sub, I.sub);
    for (i64 x = 0; x < 8; ++x) EXPECT_EQ(c.contains({x}), (2 * x) % 4 == 0);
}

TEST(Colon, ParentMismatch) {
    auto a = unit_ideal(zmod_ring(4)), b = unit_ideal(zmod_ring(4));
    EXPECT_THROW(colon_ideal(a, b), Error);
}

TEST(Colon, MatchesEnumerationNoncommutative) {
    auto u = upper_f2();
    auto n = ideal_closure(u, {{0, 1, 0}}, Side::Two);
    auto z = zero_ideal(u);
    auto c = colon_ideal(n, z);  // {x | e12 x = 0}
    for (const auto& x : all_elements(u)) EXPECT_EQ(c.contains(x), u->is_zero(u->mul({0, 1, 0}, x)));
}

// ==== Radical, units, blocks ====

TEST(Radical, Examples) {
    EXPECT_TRUE(jacobson_radical(f2xf2()).is_zero());
    auto j4 = jacobson_radical(zmod_ring(4));
    EXPECT_EQ(j4.order(), 2);
    EXPECT_TRUE(j4.contains({2}));
    auto ju = jacobson_radical(upper_f2());
    EXPECT_EQ(ju.order(), 2);
    EXPECT_TRUE(ju.contains({0, 1, 0}));
}

TEST(Radical, AgreesWithQuasiRegularity) {
    for (const auto& r : sample_rings()) {
        auto j = jacobson_radical(r);
        auto brute = brute_radical(r);
        EXPECT_EQ(j.order(), Integer(brute.size()));
        for (auto idx : brute) EXPECT_TRUE(j.contains(r->element_at(idx)));
        EXPECT_TRUE(is_closed(r, j.sub, Side::Two));
        EXPECT_TRUE(is_nilpotent(r, j.sub));
        auto q = quotient_ring(j);
        EXPECT_TRUE(jacobson_radical(q.ring).is_zero());
    }
}

TEST(Units, Examples) {
    UnitGroup u4(zmod_ring(4));
    EXPECT_EQ(u4.size(), 2u);
    EXPECT_TRUE(u4.is_unit({3}));
    EXPECT_FALSE(u4.is_unit({2}));
    EXPECT_EQ(UnitGroup(f2xf2()).size(), 1u);
    EXPECT_EQ(UnitGroup(matrix_ring(zmod_ring(2), 2)).size(), 6u);
}

TEST(Units, AgreeWithSearch) {
    for (const auto& r : sample_rings()) {
        UnitGroup u(r);
        auto brute = brute_units(r);
        EXPECT_EQ(u.size(), brute.size());
        for (auto idx : brute) EXPECT_GE(u.number_at(idx), 0);
        for (std::int32_t a = 0; a < static_cast<std::int32_t>(u.size()); ++a)
            EXPECT_EQ(u.mul(a, u.inverse(a)), u.identity());
    }
}

TEST(Units, ProductLaw) {
    auto a = upper_f2(), b = zmod_ring(9);
    EXPECT_EQ(UnitGroup(product_ring(a, b)).size(), UnitGroup(a).size() * UnitGroup(b).size());
}

TEST(Units, CapIsEnforced) {
    try {
        UnitGroup u(matrix_ring(zmod_ring(2), 2), 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SizeCapExceeded);
    }
}

TEST(Blocks, Examples) {
    EXPECT_EQ(block_count(zmod_ring(4)), 1u);
    EXPECT_EQ(block_count(f2xf2()), 2u);
    EXPECT_EQ(block_count(matrix_ring(zmod_ring(2), 2)), 1u);
    EXPECT_EQ(block_count(product_ring(zmod_ring(2), zmod_ring(3))), 2u);
    EXPECT_EQ(block_count(zmod_ring(1)), 0u);
    auto bd = block_data(f4());
    ASSERT_EQ(bd.field_order.size(), 1u);
    EXPECT_EQ(bd.field_order[0], 4);
    auto bm = block_data(matrix_ring(zmod_ring(2), 2));
    EXPECT_EQ(bm.matrix_size[0], 2);
}

TEST(Blocks, CountMatchesCentralIdempotents) {
    for (const auto& r : sample_rings()) {
        auto q = quotient_ring(jacobson_radical(r));
        std::size_t central = 0;
        for (const auto& x : all_elements(q.ring)) {
            if (!is_idempotent(q.ring, x)) continue;
            bool c = true;
            for (std::size_t i = 0; i < q.ring->ngens() && c; ++i)
                c = q.ring->mul(x, q.ring->gen(i)) == q.ring->mul(q.ring->gen(i), x);
            if (c) ++central;
        }
        EXPECT_EQ(std::size_t{1} << block_count(r), central);
    }
}

TEST(Product, Examples) {
    auto p = product_ring(zmod_ring(2), zmod_ring(3));
    EXPECT_EQ(p->order(), 6);
    EXPECT_EQ(block_count(p), 2u);
    auto withzero = product_ring(zmod_ring(4), zmod_ring(1));
    EXPECT_EQ(withzero->order(), 4);
    EXPECT_EQ(UnitGroup(f2xf2()).size(), 1u);
}

TEST(RingHom, RejectsNonMultiplicative) {
    auto z4 = zmod_ring(4), z2 = zmod_ring(2);
    EXPECT_NO_THROW(RingHom(z4, z2, {{1}}));
    EXPECT_THROW(RingHom(z2, z4, {{2}}), Error);  // 2*2 != 2
    EXPECT_THROW(RingHom(z2, z4, {{1}}), Error);  // order 2 generator to order 4
}

TEST(LiftIdempotent, ModRadical) {
    auto r = truncated_poly(4, 2);
    // 1 + x is idempotent modulo the radical (2, x); lifting returns 1
    Elem e = lift_idempotent(r, {1, 1});
    EXPECT_TRUE(is_idempotent(r, e));
    EXPECT_EQ(e, r->one());
}
