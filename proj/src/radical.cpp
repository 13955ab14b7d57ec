// Jacobson radical, unit groups and block decomposition of finite rings.

#include "kmatrix/error.hpp"
#include "kmatrix/finring.hpp"

#include <algorithm>

namespace kmatrix {

namespace {

constexpr std::uint64_t kRadicalSearchCap = std::uint64_t{1} << 24;

std::vector<i64> prime_divisors(i64 n) {
    std::vector<i64> ps;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

// Number of prime factors of |R| with multiplicity: bounds nilpotency indices.
unsigned composition_length(const RingPtr& r) {
    unsigned L = 0;
    for (i64 d : r->orders())
        for (i64 p : prime_divisors(d))
            while (d % p == 0) {
                d /= p;
                ++L;
            }
    return L;
}

}  // namespace

bool is_nilpotent_element(const RingPtr& r, const Elem& x) {
    unsigned L = composition_length(r);
    Elem y = x;
    for (unsigned e = 1; e < L; e *= 2) y = r->mul(y, y);
    return r->is_zero(y);
}

bool is_nilpotent(const RingPtr& r, const Subgroup& s) {
    Subgroup p = s;
    for (;;) {
        if (p.is_zero()) return true;
        Subgroup next = product_span(r, p, s);
        if (next == p) return false;
        if (!p.contains(next)) fail(ErrorKind::InvalidArgument, "nilpotency test needs a multiplicatively closed subgroup");
        p = std::move(next);
    }
}

Ideal jacobson_radical(const RingPtr& r) {
    if (r->is_zero_ring()) return zero_ideal(r);
    i64 s = 1;
    for (i64 p : prime_divisors(r->exponent())) s *= p;
    Ideal sR = ideal_closure(r, {r->scale(r->one(), s)}, Side::Two);
    Quotient q = quotient_ring(sR);
    const RingPtr& rb = q.ring;

    // J' grows by nilpotent left ideals R'x; it ends as the radical of R/sR.
    Subgroup jb = rb->zero_subgroup();
    std::vector<Elem> gens;
    for (std::size_t i = 0; i < rb->ngens(); ++i) gens.push_back(rb->gen(i));
    for (bool grew = true; grew && !rb->is_zero_ring();) {
        grew = false;
        Subquotient qq(rb->whole(), jb);
        Integer n = qq.order();
        if (n > kRadicalSearchCap)
            fail(ErrorKind::SizeCapExceeded, "radical search over " + n.str() + " classes exceeds the cap");
        const std::uint64_t N = n.convert_to<std::uint64_t>();
        for (std::uint64_t idx = 1; idx < N && !grew; ++idx) {
            Elem x = qq.embed(mixed_digits(idx, qq.orders()));
            if (!is_nilpotent_element(rb, x)) continue;
            std::vector<Elem> left;
            bool ok = true;
            for (const auto& g : gens) {
                Elem gx = rb->mul(g, x);
                if (!is_nilpotent_element(rb, gx)) {
                    ok = false;
                    break;
                }
                left.push_back(gx);
            }
            if (!ok) continue;
            Subgroup cand = jb;
            for (auto& v : left) cand.insert(v);
            if (is_nilpotent(rb, cand)) {
                jb = std::move(cand);
                grew = true;
            }
        }
    }
    std::vector<Elem> lifts = sR.basis();
    for (const auto& y : jb.generators()) lifts.push_back(q.lift(y));
    Ideal J = ideal_closure(r, lifts, Side::Two);
    if (!is_nilpotent(r, J.sub)) fail(ErrorKind::InvalidArgument, "internal: radical candidate is not nilpotent");
    return J;
}

UnitGroup::UnitGroup(RingPtr r, std::uint64_t cap) : ring_(std::move(r)) {
    const std::uint64_t n = ring_->size_checked(cap);
    number_.assign(n, -1);
    if (ring_->is_zero_ring()) {
        // 0 = 1 is the only unit
        number_[0] = 0;
        elems_.push_back(0);
        return;
    }
    Ideal J = jacobson_radical(ring_);
    Quotient q = quotient_ring(J);
    const RingPtr& s = q.ring;
    const std::uint64_t ns = s->size_checked(cap);
    std::vector<char> unit_bar(ns, 0);
    for (std::uint64_t i = 0; i < ns; ++i) {
        if (s->is_zero_ring()) break;
        Elem x = s->element_at(i);
        unit_bar[i] = kernel(s->left_mul(x)).is_zero() ? 1 : 0;
    }
    // walk R in mixed-radix order, tracking the image in R/J incrementally
    const Vec& d = ring_->orders();
    const std::size_t k = d.size();
    const Vec& ds = s->orders();
    std::vector<Elem> step(k);
    Elem acc(ds.size(), 0);
    for (std::size_t t = 0; t < k; ++t) {
        acc = s->add(acc, q.proj.images()[t]);
        step[t] = acc;
    }
    Vec digits(k, 0);
    Elem img(ds.size(), 0);
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        if (unit_bar[s->index_of(img)]) {
            number_[idx] = static_cast<std::int32_t>(elems_.size());
            elems_.push_back(idx);
        }
        std::size_t t = 0;
        while (t < k && ++digits[t] == d[t]) digits[t++] = 0;
        if (t < k) img = s->add(img, step[t]);
    }
}

std::int32_t UnitGroup::mul(std::int32_t a, std::int32_t b) const {
    return number(ring_->mul(element(a), element(b)));
}

std::int32_t UnitGroup::inverse(std::int32_t a) const { return number(inverse_of(ring_, element(a))); }

Elem inverse_of(const RingPtr& r, const Elem& x) {
    auto y = solve(r->left_mul(x), r->one());
    if (!y) fail(ErrorKind::InvalidArgument, "element is not a unit");
    return *y;
}

bool is_idempotent(const RingPtr& r, const Elem& e) { return r->mul(e, e) == r->reduce(e); }

Elem lift_idempotent(const RingPtr& r, Elem e) {
    for (int it = 0; it < 128; ++it) {
        Elem e2 = r->mul(e, e);
        if (e2 == e) return e;
        Elem e3 = r->mul(e2, e);
        e = r->sub(r->scale(e2, 3), r->scale(e3, 2));
    }
    fail(ErrorKind::NotIdempotent, "idempotent lifting did not converge");
}

BlockData block_data(const RingPtr& r) {
    BlockData bd{jacobson_radical(r), {}, {}, {}, {}};
    bd.semisimple = quotient_ring(bd.radical);
    const RingPtr& s = bd.semisimple.ring;
    if (s->is_zero_ring()) return bd;
    const std::size_t k = s->ngens();

    // centre of R/J
    LinMap comm{s->orders(), {}, {}};
    for (std::size_t i = 0; i < k; ++i) comm.dst.insert(comm.dst.end(), s->orders().begin(), s->orders().end());
    for (std::size_t j = 0; j < k; ++j) {
        Vec img;
        for (std::size_t i = 0; i < k; ++i) {
            Elem c = s->sub(s->table(j, i), s->table(i, j));
            img.insert(img.end(), c.begin(), c.end());
        }
        comm.images.push_back(img);
    }
    Subgroup centre = kernel(comm);

    std::vector<Elem> prim;
    for (i64 p : prime_divisors(s->exponent())) {
        // p-part of the centre, an F_p-algebra on which z -> z^p is additive
        LinMap byp{s->orders(), s->orders(), {}};
        for (std::size_t j = 0; j < k; ++j) byp.images.push_back(s->scale(s->gen(j), p));
        Subgroup zp = intersect(centre, kernel(byp));
        Subquotient bz(zp, s->zero_subgroup());
        LinMap frob{bz.orders(), bz.orders(), {}};
        for (std::size_t a = 0; a < bz.dim(); ++a) {
            Vec e(bz.dim(), 0);
            e[a] = 1;
            Elem b = bz.embed(e);
            frob.images.push_back(bz.coords(s->sub(s->pow(b, static_cast<std::uint64_t>(p)), b)));
        }
        Subgroup fixed = kernel(frob);
        Subquotient fe(fixed, Subgroup(bz.orders()));
        const std::uint64_t N = fe.order().convert_to<std::uint64_t>();
        std::vector<Elem> idem;
        for (std::uint64_t i = 1; i < N; ++i) {
            Elem x = bz.embed(fe.embed(mixed_digits(i, fe.orders())));
            if (is_idempotent(s, x)) idem.push_back(x);
        }
        for (const auto& e : idem) {
            bool minimal = true;
            for (const auto& f : idem)
                if (f != e && s->mul(f, e) == f) {
                    minimal = false;
                    break;
                }
            if (minimal) prim.push_back(e);
        }
    }
    std::sort(prim.begin(), prim.end());
    for (const auto& c : prim) {
        Subgroup cz = s->zero_subgroup();
        for (const auto& z : centre.generators()) cz.insert(s->mul(c, z));
        Subgroup blk = s->zero_subgroup();
        for (std::size_t i = 0; i < k; ++i) blk.insert(s->mul(c, s->gen(i)));
        i64 q = cz.order().convert_to<i64>();
        Integer size = blk.order(), pw = 1;
        int e = 0;
        while (pw < size) {
            pw *= q;
            ++e;
        }
        int m = 0;
        while (m * m < e) ++m;
        if (pw != size || m * m != e) fail(ErrorKind::InvalidArgument, "internal: block is not a matrix algebra");
        bd.central_idempotents.push_back(c);
        bd.field_order.push_back(q);
        bd.matrix_size.push_back(m);
    }
    return bd;
}

std::size_t block_count(const RingPtr& r) { return block_data(r).central_idempotents.size(); }

}  // namespace kmatrix
