#include "kmatrix/kdirect.hpp"

#include "kmatrix/error.hpp"

#include <algorithm>
#include <deque>

namespace kmatrix {

namespace {

Integer subgroup_order_of_image(const LinMap& m) { return image(m).order(); }

// log_q(n) when n is an exact power of q.
std::optional<long> exact_log(Integer n, const Integer& q) {
    long e = 0;
    while (n > 1) {
        if (n % q != 0) return std::nullopt;
        n /= q;
        ++e;
    }
    return e;
}

Elem find_primitive(const RingPtr& s, const Elem& c, i64 q, int m) {
    if (m == 1) return c;
    // a minimal idempotent of the block M_m(F_q): |s x| = q^m
    Subgroup block = image(s->right_mul(c));
    Subquotient sq(block, s->zero_subgroup());
    const Integer want = boost::multiprecision::pow(Integer(q), static_cast<unsigned>(m));
    const std::uint64_t n = static_cast<std::uint64_t>(sq.order());
    for (std::uint64_t idx = 1; idx < n; ++idx) {
        Elem x = sq.embed(mixed_digits(idx, sq.orders()));
        if (!is_idempotent(s, x)) continue;
        if (subgroup_order_of_image(s->right_mul(x)) == want) return x;
    }
    fail(ErrorKind::InvalidArgument, "internal: no primitive idempotent in a simple block");
}

void add_into(Elem& a, const Elem& b, const Vec& d) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        i64 v = a[i] + b[i];
        if (v >= d[i]) v -= d[i];
        a[i] = v;
    }
}

std::vector<Integer> to_integers(const Vec& v) { return {v.begin(), v.end()}; }

}  // namespace

// ---- K_0 ----

K0Data::K0Data(RingPtr r) : ring_(std::move(r)), blocks_(block_data(ring_)) {
    const RingPtr& s = blocks_.semisimple.ring;
    for (std::size_t i = 0; i < blocks_.central_idempotents.size(); ++i) {
        Elem e = find_primitive(s, blocks_.central_idempotents[i], blocks_.field_order[i], blocks_.matrix_size[i]);
        primitive_.push_back(lift_idempotent(ring_, blocks_.semisimple.lift(e)));
    }
}

std::vector<Integer> K0Data::decompose(const Elem& e) const {
    const RingPtr& s = blocks_.semisimple.ring;
    Elem y = blocks_.semisimple.proj(e);
    std::vector<Integer> out;
    for (std::size_t j = 0; j < rank(); ++j) {
        Elem z = s->mul(blocks_.central_idempotents[j], y);
        Integer size = subgroup_order_of_image(s->right_mul(z));
        auto lg = exact_log(size, blocks_.field_order[j]);
        if (!lg || *lg % blocks_.matrix_size[j] != 0)
            fail(ErrorKind::InvalidArgument, "internal: projective size is not a multiple of the simple module");
        out.push_back(*lg / blocks_.matrix_size[j]);
    }
    return out;
}

FgAbGroup k0(const RingPtr& r) { return K0Data(r).group(); }

AbMap induced_k0(const K0Data& src, const K0Data& dst, const RingHom& f) {
    if (f.source() != src.ring() || f.target() != dst.ring())
        fail(ErrorKind::RingMismatch, "induced map: rings do not match the homomorphism");
    IntMatrix m(dst.rank(), src.rank());
    for (std::size_t i = 0; i < src.rank(); ++i) {
        // S (x)_R R e = S f(e)
        auto col = dst.decompose(f(src.primitive(i)));
        for (std::size_t j = 0; j < dst.rank(); ++j) m(j, i) = col[j];
    }
    return AbMap::between(src.group(), dst.group(), std::move(m));
}

AbMap induced_k0(const RingHom& f) { return induced_k0(K0Data(f.source()), K0Data(f.target()), f); }

// ---- K_1 ----

K1Data::K1Data(RingPtr r, std::uint64_t cap) : ring_(std::move(r)) {
    units_ = std::make_shared<UnitGroup>(ring_, cap);
    const UnitGroup& U = *units_;
    const RingPtr& R = ring_;
    const std::size_t nu = U.size();
    auto elem = [&](std::int32_t u) { return U.element(u); };
    auto mulu = [&](std::int32_t a, std::int32_t b) { return U.number(R->mul(elem(a), elem(b))); };
    auto inv = [&](std::int32_t a) { return U.inverse(a); };
    const std::int32_t one = U.identity();

    // closure of a subgroup under right multiplication by gens
    auto close = [&](std::vector<char>& in, std::vector<std::int32_t>& list, const std::vector<std::int32_t>& gens) {
        for (std::size_t i = 0; i < list.size(); ++i)
            for (auto g : gens) {
                std::int32_t y = mulu(list[i], g);
                if (!in[y]) {
                    in[y] = 1;
                    list.push_back(y);
                }
            }
    };

    // generators of U
    {
        std::vector<char> in(nu, 0);
        std::vector<std::int32_t> list{one};
        in[one] = 1;
        for (std::int32_t u = 0; u < static_cast<std::int32_t>(nu); ++u) {
            if (in[u]) continue;
            gens_.push_back(u);
            close(in, list, gens_);
        }
    }

    // commutator subgroup as the normal closure of the generator commutators
    std::vector<char> inD(nu, 0);
    std::vector<std::int32_t> D{one};
    inD[one] = 1;
    if (!R->is_commutative()) {
        std::vector<std::int32_t> T;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            for (std::size_t j = i + 1; j < gens_.size(); ++j) {
                std::int32_t a = gens_[i], b = gens_[j];
                std::int32_t c = mulu(mulu(a, b), mulu(inv(a), inv(b)));
                if (!inD[c]) {
                    T.push_back(c);
                    inD[c] = 1;
                    D.push_back(c);
                }
            }
        close(inD, D, T);
        for (std::size_t t = 0; t < T.size(); ++t)
            for (auto g : gens_) {
                std::int32_t c = mulu(mulu(g, T[t]), inv(g));
                if (inD[c]) continue;
                T.push_back(c);
                inD[c] = 1;
                D.push_back(c);
                close(inD, D, T);
            }
    }

    // cosets of D
    coset_.assign(nu, -1);
    std::vector<std::int32_t> rep;
    for (std::int32_t u = 0; u < static_cast<std::int32_t>(nu); ++u) {
        if (coset_[u] >= 0) continue;
        const std::int32_t id = static_cast<std::int32_t>(rep.size());
        rep.push_back(u);
        for (auto d : D) coset_[mulu(u, d)] = id;
    }
    const std::size_t nq = rep.size();

    // presentation of U/D on the generators
    const std::size_t k = gens_.size();
    for (auto g : gens_) {
        i64 o = 1;
        std::int32_t c = coset_[g], x = g;
        while (c != coset_[one]) {
            x = mulu(x, g);
            c = coset_[x];
            ++o;
        }
        gen_orders_.push_back(o);
    }
    coset_vec_.assign(nq, Vec());
    Subgroup rel(gen_orders_);
    {
        std::deque<std::int32_t> queue{coset_[one]};
        coset_vec_[coset_[one]] = Vec(k, 0);
        while (!queue.empty()) {
            std::int32_t c = queue.front();
            queue.pop_front();
            for (std::size_t t = 0; t < k; ++t) {
                std::int32_t c2 = coset_[mulu(rep[c], gens_[t])];
                Vec cand = coset_vec_[c];
                cand[t] = (cand[t] + 1) % gen_orders_[t];
                if (coset_vec_[c2].empty()) {
                    coset_vec_[c2] = cand;
                    queue.push_back(c2);
                } else if (cand != coset_vec_[c2]) {
                    Vec diff(k);
                    for (std::size_t i = 0; i < k; ++i) diff[i] = cand[i] - coset_vec_[c2][i];
                    rel.insert(reduce_mod(diff, gen_orders_));
                }
            }
        }
    }
    const Subgroup whole = Subgroup::whole(gen_orders_);
    q_ = Subquotient(whole, rel);
    if (q_.order() != Integer(nq)) fail(ErrorKind::InvalidArgument, "internal: abelianization order mismatch");

    // relations (1+ab)(1+ba)^-1 for nonunits a, b. Units a give commutators,
    // and v(ua, b) = v(a, bu), v(au, b) = v(a, ub) modulo commutators, so a
    // runs over two-sided unit orbits of nonunits.
    Subgroup bottom = rel;
    if (!R->is_commutative() && nq > 1 && !R->is_zero_ring()) {
        Subquotient cur(whole, bottom);
        std::vector<std::uint64_t> label(nq);
        auto relabel = [&] {
            cur = Subquotient(whole, bottom);
            for (std::size_t c = 0; c < nq; ++c) label[c] = mixed_index(cur.coords(coset_vec_[c]), cur.orders());
        };
        relabel();

        const Vec& d = R->orders();
        const std::size_t kr = d.size();
        const std::uint64_t nr = R->size_checked(cap);
        std::vector<Elem> ugens;
        for (auto g : gens_) ugens.push_back(elem(g));
        std::vector<char> seen(nr, 0);
        std::vector<Elem> reps;
        for (std::uint64_t idx = 1; idx < nr; ++idx) {
            if (seen[idx] || U.number_at(idx) >= 0) continue;
            seen[idx] = 1;
            reps.push_back(R->element_at(idx));
            std::vector<std::uint64_t> queue{idx};
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                Elem x = R->element_at(queue[qi]);
                for (const auto& g : ugens)
                    for (const Elem& y : {R->mul(g, x), R->mul(x, g)}) {
                        std::uint64_t j = R->index_of(y);
                        if (!seen[j]) {
                            seen[j] = 1;
                            queue.push_back(j);
                        }
                    }
            }
        }

        bool done = cur.order() == 1;
        for (const Elem& a : reps) {
            if (done) break;
            std::vector<Elem> stepL(kr), stepR(kr);
            Elem accL = R->zero(), accR = R->zero();
            for (std::size_t t = 0; t < kr; ++t) {
                Elem la = R->mul(a, R->gen(t)), ra = R->mul(R->gen(t), a);
                stepL[t] = R->add(la, R->neg(accL));
                stepR[t] = R->add(ra, R->neg(accR));
                accL = R->add(accL, R->scale(la, d[t] - 1));
                accR = R->add(accR, R->scale(ra, d[t] - 1));
            }
            Elem oneab = R->one(), oneba = R->one();
            Vec digits(kr, 0);
            for (;;) {
                ++scanned_;
                std::int32_t u1 = U.number_at(mixed_index(oneab, d));
                if (u1 >= 0) {
                    std::int32_t u2 = U.number_at(mixed_index(oneba, d));
                    if (u2 < 0) fail(ErrorKind::InvalidArgument, "internal: 1+ab unit but 1+ba not");
                    std::int32_t c1 = coset_[u1], c2 = coset_[u2];
                    if (label[c1] != label[c2]) {
                        Vec diff(k);
                        for (std::size_t i = 0; i < k; ++i) diff[i] = coset_vec_[c1][i] - coset_vec_[c2][i];
                        bottom.insert(reduce_mod(diff, gen_orders_));
                        relabel();
                        if (cur.order() == 1) {
                            done = true;
                            break;
                        }
                    }
                }
                std::size_t t = 0;
                while (t < kr && digits[t] == d[t] - 1) digits[t++] = 0;
                if (t == kr) break;
                ++digits[t];
                add_into(oneab, stepL[t], d);
                add_into(oneba, stepR[t], d);
            }
        }
    }
    k1_ = Subquotient(whole, bottom);
}

std::vector<Integer> K1Data::moduli() const { return to_integers(k1_.orders()); }

Vec K1Data::class_of(const Elem& u) const {
    std::int32_t n = units_->number(ring_->reduce(u));
    if (n < 0) fail(ErrorKind::InvalidArgument, "class_of needs a unit");
    return k1_.coords(coset_vec_[coset_[n]]);
}

Elem K1Data::representative(std::size_t i) const {
    Vec z(k1_.dim(), 0);
    z.at(i) = 1;
    Vec v = k1_.embed(z);
    Elem x = ring_->one();
    for (std::size_t t = 0; t < v.size(); ++t)
        for (i64 j = 0; j < v[t]; ++j) x = ring_->mul(x, units_->element(gens_[t]));
    return x;
}

FgAbGroup k1(const RingPtr& r, std::uint64_t cap) { return K1Data(r, cap).group(); }

AbMap induced_k1(const K1Data& src, const K1Data& dst, const RingHom& f) {
    if (f.source() != src.ring() || f.target() != dst.ring())
        fail(ErrorKind::RingMismatch, "induced map: rings do not match the homomorphism");
    const auto sm = src.moduli(), dm = dst.moduli();
    IntMatrix m(dm.size(), sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) {
        Vec c = dst.class_of(f(src.representative(i)));
        for (std::size_t j = 0; j < dm.size(); ++j) m(j, i) = c[j];
    }
    AbMap out{sm, dm, std::move(m)};
    out.check_well_defined();
    return out;
}

AbMap induced_k1(const RingHom& f, std::uint64_t cap) {
    return induced_k1(K1Data(f.source(), cap), K1Data(f.target(), cap), f);
}

// ---- Mayer-Vietoris ----

namespace {

// (f; g): A -> B + C
AbMap stack_rows(const AbMap& f, const AbMap& g) {
    AbMap out;
    out.src = f.src;
    out.dst = f.dst;
    out.dst.insert(out.dst.end(), g.dst.begin(), g.dst.end());
    out.matrix = IntMatrix(out.dst.size(), out.src.size());
    for (std::size_t j = 0; j < out.src.size(); ++j) {
        for (std::size_t i = 0; i < f.dst.size(); ++i) out.matrix(i, j) = f.matrix(i, j);
        for (std::size_t i = 0; i < g.dst.size(); ++i) out.matrix(f.dst.size() + i, j) = g.matrix(i, j);
    }
    return out;
}

// (f, -g): B + C -> D
AbMap difference(const AbMap& f, const AbMap& g) {
    AbMap out;
    out.src = f.src;
    out.src.insert(out.src.end(), g.src.begin(), g.src.end());
    out.dst = f.dst;
    out.matrix = IntMatrix(out.dst.size(), out.src.size());
    for (std::size_t i = 0; i < out.dst.size(); ++i) {
        for (std::size_t j = 0; j < f.src.size(); ++j) out.matrix(i, j) = f.matrix(i, j);
        for (std::size_t j = 0; j < g.src.size(); ++j) out.matrix(i, f.src.size() + j) = -g.matrix(i, j);
    }
    return out;
}

}  // namespace

bool MvReport::exact() const {
    return std::all_of(checks.begin(), checks.end(), [](const MvCheck& c) { return c.holds; });
}

MvReport mv_exactness(const MilnorSquare& sq, std::uint64_t cap) {
    PullbackCheck pc = check_pullback(sq);
    if (!pc.ok()) {
        std::string why = !pc.commutes ? "square does not commute"
                          : !pc.milnor ? "neither h1 nor f2 is surjective"
                                       : "square is not a pullback";
        fail(ErrorKind::NotMilnor, why);
    }
    const std::vector<RingPtr> rings{sq.R, sq.R1, sq.R2, sq.R0};
    std::vector<K0Data> z;
    std::vector<K1Data> o;
    MvReport rep;
    for (const auto& r : rings) {
        z.emplace_back(r);
        o.emplace_back(r, cap);
        rep.k0.push_back(z.back().group());
        rep.k1.push_back(o.back().group());
    }
    AbMap a1 = stack_rows(induced_k1(o[0], o[1], sq.f1), induced_k1(o[0], o[2], sq.h2));
    AbMap b1 = difference(induced_k1(o[1], o[3], sq.h1), induced_k1(o[2], o[3], sq.f2));
    AbMap a0 = stack_rows(induced_k0(z[0], z[1], sq.f1), induced_k0(z[0], z[2], sq.h2));
    AbMap b0 = difference(induced_k0(z[1], z[3], sq.h1), induced_k0(z[2], z[3], sq.f2));

    rep.checks.push_back({"K1 composite", is_zero_map(b1.compose_after(a1)), "beta1 o alpha1 = 0"});
    rep.checks.push_back({"K0 composite", is_zero_map(b0.compose_after(a0)), "beta0 o alpha0 = 0"});
    rep.checks.push_back({"K1(R1)+K1(R2)", is_exact_at(a1, b1), "im alpha1 = ker beta1"});
    // Units lift along surjections of finite rings, so beta1 is onto and the
    // connecting map K1(R0) -> K0(R) vanishes; exactness at its two ends is
    // then surjectivity of beta1 and injectivity of alpha0.
    const bool onto = is_surjective(b1);
    rep.checks.push_back({"K1(R0)", onto, onto ? "beta1 onto, connecting map zero" : "beta1 not onto"});
    rep.checks.push_back({"K0(R)", onto && is_injective(a0), "ker alpha0 = im of the connecting map = 0"});
    rep.checks.push_back({"K0(R1)+K0(R2)", is_exact_at(a0, b0), "im alpha0 = ker beta0"});
    return rep;
}

}  // namespace kmatrix
