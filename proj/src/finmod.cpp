#include "kmatrix/finmod.hpp"

#include "kmatrix/error.hpp"

#include <deque>

namespace kmatrix {

namespace {

Vec unit(std::size_t k, std::size_t i) {
    Vec v(k, 0);
    v[i] = 1;
    return v;
}

LinMap identity_lin(const Vec& d) {
    LinMap f{d, d, {}};
    for (std::size_t i = 0; i < d.size(); ++i) f.images.push_back(unit(d.size(), i));
    return f;
}

bool respects_orders(const LinMap& f) {
    for (std::size_t j = 0; j < f.src.size(); ++j)
        for (std::size_t t = 0; t < f.dst.size(); ++t)
            if (static_cast<__int128>(f.src[j]) * mod64(f.images[j][t], f.dst[t]) % f.dst[t] != 0) return false;
    return true;
}

Vec slice(const Vec& v, std::size_t from, std::size_t len) {
    return Vec(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + len));
}

Vec repeat(const Vec& d, std::size_t k) {
    Vec out;
    for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), d.begin(), d.end());
    return out;
}

}  // namespace

FinModule::FinModule(RingPtr ring, Vec orders, std::vector<LinMap> action)
    : ring_(std::move(ring)), d_(std::move(orders)), action_(std::move(action)) {
    const std::size_t k = d_.size();
    if (action_.size() != ring_->ngens())
        fail(ErrorKind::ActionMismatch, "module needs one action matrix per ring generator");
    for (auto& a : action_) {
        if (a.src != d_ || a.dst != d_ || a.images.size() != k)
            fail(ErrorKind::ActionMismatch, "action matrix has the wrong shape");
        for (auto& im : a.images) {
            if (im.size() != k) fail(ErrorKind::ActionMismatch, "action matrix has the wrong shape");
            im = reduce_mod(std::move(im), d_);
        }
        if (!respects_orders(a)) fail(ErrorKind::ActionMismatch, "action ignores additive orders");
    }
    for (std::size_t i = 0; i < k; ++i) {
        Vec m = unit(k, i);
        for (std::size_t g = 0; g < ring_->ngens(); ++g) {
            Vec gm = action_[g].apply(m);
            // the additive order of g_g must kill g_g m
            Vec t = gm;
            for (auto& x : t) x *= ring_->orders()[g];
            if (reduce_mod(t, d_) != zero()) fail(ErrorKind::ActionMismatch, "action ignores the order of a ring generator");
            for (std::size_t h = 0; h < ring_->ngens(); ++h) {
                Vec lhs = action_[h].apply(gm);  // g_h (g_g m)
                if (lhs != act(ring_->table(h, g), m))
                    fail(ErrorKind::ActionMismatch, "action is not multiplicative on generators (" + std::to_string(h) +
                                                        "," + std::to_string(g) + ")");
            }
        }
        if (act(ring_->one(), m) != m) fail(ErrorKind::ActionMismatch, "identity does not act trivially");
    }
}

FinModule FinModule::regular(const RingPtr& r) {
    std::vector<LinMap> act;
    for (std::size_t g = 0; g < r->ngens(); ++g) act.push_back(r->left_mul(r->gen(g)));
    return FinModule(r, r->orders(), std::move(act));
}

FinModule FinModule::free(const RingPtr& r, std::size_t rank) {
    FinModule m = regular(r);
    FinModule out = m;
    for (std::size_t i = 1; i < rank; ++i) out = direct_sum(out, m);
    if (rank == 0) {
        std::vector<LinMap> act(r->ngens(), LinMap{{}, {}, {}});
        return FinModule(r, {}, std::move(act));
    }
    return out;
}

Vec FinModule::act(const Elem& r, const Vec& m) const {
    Vec out(d_.size(), 0);
    for (std::size_t g = 0; g < r.size(); ++g) {
        if (r[g] == 0) continue;
        Vec gm = action_[g].apply(m);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = mod64(out[t] + r[g] % d_[t] * gm[t], d_[t]);
    }
    return out;
}

bool is_submodule(const FinModule& m, const Subgroup& s) {
    for (const auto& v : s.generators())
        for (std::size_t g = 0; g < m.ring()->ngens(); ++g)
            if (!s.contains(m.action(g).apply(v))) return false;
    return true;
}

Subgroup submodule_closure(const FinModule& m, const std::vector<Vec>& gens) {
    Subgroup s(m.orders());
    std::deque<Vec> queue(gens.begin(), gens.end());
    while (!queue.empty()) {
        Vec v = std::move(queue.front());
        queue.pop_front();
        if (!s.insert(v)) continue;
        for (std::size_t g = 0; g < m.ring()->ngens(); ++g) queue.push_back(m.action(g).apply(v));
    }
    return s;
}

SubquotientModule subquotient(const FinModule& m, const Subgroup& top, const Subgroup& bottom) {
    if (!is_submodule(m, top) || !is_submodule(m, bottom))
        fail(ErrorKind::ActionMismatch, "subquotient of non-submodules");
    if (!top.contains(bottom)) fail(ErrorKind::InvalidArgument, "subquotient bottom is not inside top");
    Subquotient q(top, bottom);
    const std::size_t k = q.dim();
    std::vector<LinMap> act;
    for (std::size_t g = 0; g < m.ring()->ngens(); ++g) {
        LinMap a{q.orders(), q.orders(), {}};
        for (std::size_t i = 0; i < k; ++i) a.images.push_back(q.coords(m.action(g).apply(q.embed(unit(k, i)))));
        act.push_back(std::move(a));
    }
    return SubquotientModule{FinModule(m.ring(), q.orders(), std::move(act)), q};
}

FinModule direct_sum(const FinModule& a, const FinModule& b) {
    if (!same_module_ring(a, b)) fail(ErrorKind::RingMismatch, "direct sum over different rings");
    const std::size_t ka = a.ngens(), kb = b.ngens();
    Vec d = a.orders();
    d.insert(d.end(), b.orders().begin(), b.orders().end());
    std::vector<LinMap> act;
    for (std::size_t g = 0; g < a.ring()->ngens(); ++g) {
        LinMap f{d, d, {}};
        for (std::size_t i = 0; i < ka; ++i) {
            Vec v = a.action(g).images[i];
            v.resize(ka + kb, 0);
            f.images.push_back(v);
        }
        for (std::size_t i = 0; i < kb; ++i) {
            Vec v(ka, 0);
            const Vec& w = b.action(g).images[i];
            v.insert(v.end(), w.begin(), w.end());
            f.images.push_back(v);
        }
        act.push_back(std::move(f));
    }
    return FinModule(a.ring(), d, std::move(act));
}

FinModule restrict_scalars(const FinModule& m, const RingHom& f) {
    if (f.target() != m.ring()) fail(ErrorKind::RingMismatch, "restriction along a map into another ring");
    std::vector<LinMap> act;
    for (std::size_t g = 0; g < f.source()->ngens(); ++g) {
        LinMap a{m.orders(), m.orders(), {}};
        for (std::size_t i = 0; i < m.ngens(); ++i) a.images.push_back(m.act(f.images()[g], unit(m.ngens(), i)));
        act.push_back(std::move(a));
    }
    return FinModule(f.source(), m.orders(), std::move(act));
}

bool same_module_ring(const FinModule& a, const FinModule& b) { return a.ring() == b.ring(); }

ModuleMap::ModuleMap(FinModule src, FinModule dst, LinMap f)
    : source(std::move(src)), target(std::move(dst)), map(std::move(f)) {
    if (!same_module_ring(source, target)) fail(ErrorKind::RingMismatch, "module map between modules over different rings");
    if (map.src != source.orders() || map.dst != target.orders() || map.images.size() != source.ngens())
        fail(ErrorKind::NotModuleMap, "map shape does not match the modules");
    for (auto& im : map.images) {
        if (im.size() != target.ngens()) fail(ErrorKind::NotModuleMap, "map shape does not match the modules");
        im = reduce_mod(std::move(im), target.orders());
    }
    if (!respects_orders(map)) fail(ErrorKind::NotModuleMap, "map ignores additive orders");
    for (std::size_t i = 0; i < source.ngens(); ++i)
        for (std::size_t g = 0; g < source.ring()->ngens(); ++g)
            if (map.apply(source.action(g).images[i]) != target.action(g).apply(map.images[i]))
                fail(ErrorKind::NotModuleMap, "map does not commute with generator " + std::to_string(g));
}

ModuleMap ModuleMap::then(const ModuleMap& g) const {
    if (g.source.orders() != target.orders()) fail(ErrorKind::ShapeMismatch, "maps are not composable");
    LinMap h{source.orders(), g.target.orders(), {}};
    for (const auto& im : map.images) h.images.push_back(g.map.apply(im));
    return ModuleMap(source, g.target, std::move(h));
}

ModuleMap identity_map(const FinModule& m) { return ModuleMap(m, m, identity_lin(m.orders())); }

ModuleMap induced_map(const SubquotientModule& a, const SubquotientModule& b, const LinMap& ambient) {
    LinMap f{a.module.orders(), b.module.orders(), {}};
    for (std::size_t i = 0; i < a.module.ngens(); ++i)
        f.images.push_back(b.coords.coords(ambient.apply(a.coords.embed(unit(a.module.ngens(), i)))));
    return ModuleMap(a.module, b.module, std::move(f));
}

HomGroup hom_group(const FinModule& m, const FinModule& n) {
    if (!same_module_ring(m, n)) fail(ErrorKind::RingMismatch, "Hom between modules over different rings");
    const std::size_t k = m.ngens(), l = n.ngens(), G = m.ring()->ngens();
    const Vec amb = repeat(n.orders(), k);
    // constraints: d_a y_a = 0 and phi(g m_a) = g phi(m_a)
    LinMap c{amb, repeat(n.orders(), k * (1 + G)), {}};
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t t = 0; t < l; ++t) {
            Vec img(c.dst.size(), 0);
            img[a * l + t] = m.orders()[a];
            Vec et = unit(l, t);
            for (std::size_t g = 0; g < G; ++g) {
                Vec gt = n.action(g).apply(et);
                for (std::size_t a2 = 0; a2 < k; ++a2) {
                    const std::size_t base = (k + g * k + a2) * l;
                    i64 coef = m.action(g).images[a2][a];
                    if (coef != 0) img[base + t] += coef;
                    if (a2 == a)
                        for (std::size_t u = 0; u < l; ++u) img[base + u] -= gt[u];
                }
            }
            c.images.push_back(reduce_mod(std::move(img), c.dst));
        }
    Subgroup h = kernel(c);
    Subquotient q(h, Subgroup(amb));
    return HomGroup{m, n, std::move(h), std::move(q)};
}

ModuleMap HomGroup::map_of(const Vec& images) const {
    const std::size_t l = target.ngens();
    LinMap f{source.orders(), target.orders(), {}};
    for (std::size_t a = 0; a < source.ngens(); ++a) f.images.push_back(slice(images, a * l, l));
    return ModuleMap(source, target, std::move(f));
}

ModuleMap HomGroup::basis(std::size_t i) const { return map_of(coords.embed(unit(coords.dim(), i))); }

std::vector<ModuleMap> HomGroup::basis() const {
    std::vector<ModuleMap> out;
    for (std::size_t i = 0; i < coords.dim(); ++i) out.push_back(basis(i));
    return out;
}

Vec HomGroup::flatten(const ModuleMap& f) {
    Vec out;
    for (const auto& im : f.map.images) out.insert(out.end(), im.begin(), im.end());
    return out;
}

std::vector<Vec> module_generators(const FinModule& m) {
    std::vector<Vec> gens;
    Subgroup span(m.orders());
    for (std::size_t i = 0; i < m.ngens() && !span.is_whole(); ++i) {
        Vec e = unit(m.ngens(), i);
        if (span.contains(e)) continue;
        gens.push_back(e);
        span = submodule_closure(m, gens);
    }
    return gens;
}

FgAbGroup ext1(const FinModule& m, const FinModule& n, PresentationKind kind) {
    if (!same_module_ring(m, n)) fail(ErrorKind::RingMismatch, "Ext between modules over different rings");
    const RingPtr& r = m.ring();
    std::vector<Vec> gens;
    if (kind == PresentationKind::Minimal)
        gens = module_generators(m);
    else
        for (std::size_t i = 0; i < m.ngens(); ++i) gens.push_back(unit(m.ngens(), i));
    const std::size_t k = gens.size(), G = r->ngens(), l = n.ngens();
    if (k == 0) return FgAbGroup::trivial();

    FinModule f0 = FinModule::free(r, k);
    LinMap pi{f0.orders(), m.orders(), {}};
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t g = 0; g < G; ++g) pi.images.push_back(m.action(g).apply(gens[t]));
    SubquotientModule K = subquotient(f0, kernel(pi), f0.zero_subgroup());
    HomGroup hk = hom_group(K.module, n);

    // restriction Hom(F0, N) = N^k -> Hom(K, N)
    const std::size_t kk = K.module.ngens();
    std::vector<Vec> kappa;
    for (std::size_t c = 0; c < kk; ++c) kappa.push_back(K.coords.embed(unit(kk, c)));
    LinMap res{repeat(n.orders(), k), repeat(n.orders(), kk), {}};
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t u = 0; u < l; ++u) {
            Vec img;
            Vec eu = unit(l, u);
            for (std::size_t c = 0; c < kk; ++c) {
                Vec v = n.act(slice(kappa[c], t * G, G), eu);
                img.insert(img.end(), v.begin(), v.end());
            }
            res.images.push_back(std::move(img));
        }
    Subgroup im = image(res);
    if (!hk.sub.contains(im)) fail(ErrorKind::InvalidArgument, "internal: restricted maps are not module maps");
    return Subquotient(hk.sub, im).group();
}

ApproxResult is_approximation(const ModuleMap& f, const FinModule& m, ApproxSide side) {
    ApproxResult res;
    HomGroup big = side == ApproxSide::Left ? hom_group(f.target, m) : hom_group(m, f.source);
    HomGroup small = side == ApproxSide::Left ? hom_group(f.source, m) : hom_group(m, f.target);
    Subgroup reached(small.sub.orders());
    for (const auto& psi : big.basis())
        reached.insert(HomGroup::flatten(side == ApproxSide::Left ? f.then(psi) : psi.then(f)));
    for (std::size_t i = 0; i < small.rank(); ++i) {
        ModuleMap b = small.basis(i);
        if (!reached.contains(HomGroup::flatten(b))) {
            res.holds = false;
            res.witness = b;
            break;
        }
    }
    return res;
}

bool in_add(const FinModule& mprime, const FinModule& m) {
    if (mprime.is_zero()) return true;
    HomGroup to = hom_group(mprime, m), from = hom_group(m, mprime);
    Subgroup span(repeat(mprime.orders(), mprime.ngens()));
    Vec id = HomGroup::flatten(identity_map(mprime));
    for (const auto& g : to.basis())
        for (const auto& f : from.basis()) {
            span.insert(HomGroup::flatten(g.then(f)));
            if (span.contains(id)) return true;
        }
    return span.contains(id);
}

DsplitReport is_dsplit(const ModuleMap& f, const ModuleMap& g, const FinModule& m) {
    if (f.target.orders() != g.source.orders() || !same_module_ring(f.target, m))
        fail(ErrorKind::ShapeMismatch, "sequence maps are not composable over one ring");
    DsplitReport rep;
    auto fail_with = [&](const char* what, std::optional<ModuleMap> w = std::nullopt) {
        rep.holds = false;
        rep.failed = what;
        rep.witness = std::move(w);
        return rep;
    };
    if (!in_add(f.target, m)) return fail_with("middle term not in add(M)");
    if (!kernel(f.map).is_zero()) return fail_with("first map not injective");
    if (!image(g.map).is_whole()) return fail_with("second map not surjective");
    if (!(image(f.map) == kernel(g.map))) return fail_with("image of first map differs from kernel of second");
    ApproxResult l = is_approximation(f, m, ApproxSide::Left);
    if (!l.holds) return fail_with("first map not a left add(M)-approximation", l.witness);
    ApproxResult r = is_approximation(g, m, ApproxSide::Right);
    if (!r.holds) return fail_with("second map not a right add(M)-approximation", r.witness);
    return rep;
}

void Bimodule::validate() const {
    std::vector<LinMap> la = left_action, ra = right_action;
    FinModule lm(left, orders, la);
    FinModule rm(opposite_ring(right), orders, ra);
    for (std::size_t i = 0; i < orders.size(); ++i) {
        Vec e = unit(orders.size(), i);
        for (std::size_t g = 0; g < left->ngens(); ++g)
            for (std::size_t h = 0; h < right->ngens(); ++h)
                if (lm.action(g).apply(rm.action(h).images[i]) != rm.action(h).apply(lm.action(g).images[i]))
                    fail(ErrorKind::ActionMismatch, "left and right actions do not commute");
    }
}

Bimodule Bimodule::zero(RingPtr l, RingPtr r) {
    Bimodule b{l, r, {}, {}, {}};
    b.left_action.assign(l->ngens(), LinMap{{}, {}, {}});
    b.right_action.assign(r->ngens(), LinMap{{}, {}, {}});
    return b;
}

Bimodule Bimodule::regular(const RingPtr& r) {
    Bimodule b{r, r, r->orders(), {}, {}};
    for (std::size_t g = 0; g < r->ngens(); ++g) {
        b.left_action.push_back(r->left_mul(r->gen(g)));
        b.right_action.push_back(r->right_mul(r->gen(g)));
    }
    return b;
}

Vec Bimodule::act_left(const Elem& r, const Vec& m) const {
    Vec out(orders.size(), 0);
    for (std::size_t g = 0; g < r.size(); ++g) {
        if (r[g] == 0) continue;
        Vec gm = left_action[g].apply(m);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = mod64(out[t] + r[g] % orders[t] * gm[t], orders[t]);
    }
    return out;
}

Vec Bimodule::act_right(const Vec& m, const Elem& s) const {
    Vec out(orders.size(), 0);
    for (std::size_t g = 0; g < s.size(); ++g) {
        if (s[g] == 0) continue;
        Vec mg = right_action[g].apply(m);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = mod64(out[t] + s[g] % orders[t] * mg[t], orders[t]);
    }
    return out;
}

RightMulSequence right_multiplication_sequence(const RingPtr& r, const Elem& e, const Elem& f, const Elem& a) {
    if (!is_idempotent(r, e) || !is_idempotent(r, f)) fail(ErrorKind::NotIdempotent, "e and f must be idempotents");
    if (r->mul(r->mul(e, a), f) != r->reduce(a)) fail(ErrorKind::InvalidArgument, "a is not in eRf");
    FinModule reg = FinModule::regular(r);
    std::vector<Vec> ge, gf, gea;
    for (std::size_t i = 0; i < r->ngens(); ++i) {
        ge.push_back(r->mul(r->gen(i), e));
        gf.push_back(r->mul(r->gen(i), f));
        gea.push_back(r->mul(ge.back(), a));
    }
    Subgroup Re = Subgroup::generated(r->orders(), ge), Rf = Subgroup::generated(r->orders(), gf),
             Rea = Subgroup::generated(r->orders(), gea);
    SubquotientModule re = subquotient(reg, Re, r->zero_subgroup());
    SubquotientModule rf = subquotient(reg, Rf, r->zero_subgroup());
    SubquotientModule cok = subquotient(reg, Rf, Rea);
    ModuleMap mult = induced_map(re, rf, r->right_mul(a));
    ModuleMap proj = induced_map(rf, cok, identity_lin(r->orders()));
    return RightMulSequence{re, rf, cok, mult, proj};
}

bool erf_criterion(const RingPtr& r, const Elem& e, const Elem& f, const Elem& a) {
    std::vector<Vec> lhs, rhs;
    Elem af = r->mul(a, f);
    for (std::size_t i = 0; i < r->ngens(); ++i) {
        lhs.push_back(r->mul(r->mul(e, r->gen(i)), f));
        rhs.push_back(r->mul(af, r->mul(r->gen(i), f)));
    }
    return Subgroup::generated(r->orders(), lhs) == Subgroup::generated(r->orders(), rhs);
}

ExtensionSequence extension_sequence(const RingHom& inclusion) {
    if (!inclusion.is_injective()) fail(ErrorKind::InvalidArgument, "extension map is not injective");
    const RingPtr& A = inclusion.target();
    FinModule b = FinModule::regular(inclusion.source());
    FinModule a = restrict_scalars(FinModule::regular(A), inclusion);
    SubquotientModule q = subquotient(a, a.whole(), inclusion.image_subgroup());
    ModuleMap inc(b, a, inclusion.linear());
    LinMap p{a.orders(), q.module.orders(), {}};
    for (std::size_t i = 0; i < a.ngens(); ++i) p.images.push_back(q.coords.coords(unit(a.ngens(), i)));
    ModuleMap proj(a, q.module, std::move(p));
    return ExtensionSequence{b, a, q, inc, proj};
}

}  // namespace kmatrix
