#include "kmatrix/gvtools.hpp"

#include "kmatrix/error.hpp"

#include <algorithm>

namespace kmatrix {

namespace {

Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

// Generators of an ideal viewed as a submodule of the regular module, as
// ring elements, in the order used by the subquotient module.
std::vector<Elem> module_gens(const SubquotientModule& m) {
    std::vector<Elem> out;
    for (std::size_t a = 0; a < m.coords.dim(); ++a) out.push_back(m.coords.embed(unit_vec(m.coords.dim(), a)));
    return out;
}

// Flattened images of x -> x r on the generators xs, in target coordinates.
Vec right_mult_images(const RingPtr& R, const std::vector<Elem>& xs, const Elem& r, const SubquotientModule* target) {
    Vec flat;
    for (const auto& x : xs) {
        Elem y = R->mul(x, r);
        Vec c = target ? target->coords.coords(y) : y;
        flat.insert(flat.end(), c.begin(), c.end());
    }
    return flat;
}

// b -> (x -> x b) from the additive group `src` (coordinates of a subgroup
// of R) into Hom(J, target).
LinMap right_mult_map(const RingPtr& R, const Subquotient& src, const SubquotientModule& J,
                      const SubquotientModule* target, const HomGroup& hom) {
    LinMap f{src.orders(), hom.coords.orders(), {}};
    auto xs = module_gens(J);
    for (std::size_t s = 0; s < src.dim(); ++s) {
        Elem b = src.embed(unit_vec(src.dim(), s));
        f.images.push_back(hom.coords.coords(right_mult_images(R, xs, b, target)));
    }
    return f;
}

bool bijective(const LinMap& f) {
    bool inj = f.dst.empty() ? product_of(f.src) == 1 : kernel(f).is_zero();
    bool onto = f.dst.empty() || image(f).is_whole();
    return inj && onto;
}

SubquotientModule ideal_module(const RingPtr& R, const Ideal& I) {
    FinModule reg = FinModule::regular(R);
    return subquotient(reg, I.sub, reg.zero_subgroup());
}

void check_ideal(const RingPtr& R, const Ideal& I) {
    if (I.parent != R) fail(ErrorKind::ParentMismatch, "ideal belongs to another ring");
    if (!is_closed(R, I.sub, Side::Left) || !is_closed(R, I.sub, Side::Right))
        fail(ErrorKind::NotTwoSided, "GV test needs a two-sided ideal");
}

}  // namespace

const char* evidence_name(GvCertificate::Evidence e) {
    switch (e) {
        case GvCertificate::Evidence::Inverse: return "inverse";
        case GvCertificate::Evidence::Annihilator: return "annihilator";
        case GvCertificate::Evidence::Unreachable: return "unreachable";
    }
    return "?";
}

Subgroup right_annihilator(const RingPtr& R, const Ideal& I) {
    auto gens = I.basis();
    LinMap f{R->orders(), {}, {}};
    for (std::size_t b = 0; b < gens.size(); ++b) f.dst.insert(f.dst.end(), R->orders().begin(), R->orders().end());
    if (f.dst.empty()) return R->whole();
    for (std::size_t g = 0; g < R->ngens(); ++g) f.images.push_back(right_mult_images(R, gens, R->gen(g), nullptr));
    return kernel(f);
}

GvCertificate is_gv(const RingPtr& R, const Ideal& I) {
    check_ideal(R, I);
    GvCertificate c;
    c.ring = R;
    c.ideal = I;
    FinModule reg = FinModule::regular(R);
    SubquotientModule im = ideal_module(R, I);
    c.hom = hom_group(im.module, reg);

    // mu: R -> Hom(I, R)
    Subquotient rcoords(R->whole(), R->zero_subgroup());
    LinMap mu{R->orders(), c.hom.coords.orders(), {}};
    auto xs = module_gens(im);
    for (std::size_t g = 0; g < R->ngens(); ++g)
        mu.images.push_back(c.hom.coords.coords(right_mult_images(R, xs, R->gen(g), nullptr)));

    Subgroup ker = mu.dst.empty() ? R->whole() : kernel(mu);
    Subgroup img = mu.dst.empty() ? Subgroup(mu.dst) : image(mu);
    if (!ker.is_zero()) {
        c.evidence = GvCertificate::Evidence::Annihilator;
        c.annihilator = ker.generators().front();
    } else if (!img.is_whole()) {
        c.evidence = GvCertificate::Evidence::Unreachable;
        for (std::size_t i = 0; i < c.hom.rank(); ++i)
            if (!img.contains(unit_vec(c.hom.rank(), i))) {
                c.unreachable = c.hom.basis(i);
                break;
            }
    } else {
        c.gv = true;
        c.evidence = GvCertificate::Evidence::Inverse;
        for (std::size_t i = 0; i < c.hom.rank(); ++i) c.inverse.push_back(*solve(mu, unit_vec(c.hom.rank(), i)));
    }

    // 0 -> Hom(R/I, R) -> R -> Hom(I, R) -> Ext^1(R/I, R) -> 0
    FinModule quo = subquotient(reg, reg.whole(), I.sub).module;
    c.ext0 = hom_group(quo, reg).group();
    c.ext1 = ext1(quo, reg);
    c.routes_agree = c.gv == (c.ext0.is_trivial() && c.ext1.is_trivial());
    return c;
}

bool GvCertificate::reverify() const {
    const RingPtr& R = ring;
    SubquotientModule im = ideal_module(R, ideal);
    auto xs = module_gens(im);
    switch (evidence) {
        case Evidence::Annihilator: {
            if (!annihilator || R->is_zero(*annihilator)) return false;
            for (const auto& b : ideal.basis())
                if (!R->is_zero(R->mul(b, *annihilator))) return false;
            return !gv;
        }
        case Evidence::Unreachable: {
            if (!unreachable || gv) return false;
            Vec target = HomGroup::flatten(*unreachable);
            const std::uint64_t n = R->size_checked(kDefaultUnitCap);
            for (std::uint64_t idx = 0; idx < n; ++idx)
                if (right_mult_images(R, xs, R->element_at(idx), nullptr) == target) return false;
            return true;
        }
        case Evidence::Inverse: {
            if (!gv || inverse.size() != hom.rank()) return false;
            if (!right_annihilator(R, ideal).is_zero()) return false;
            for (std::size_t i = 0; i < inverse.size(); ++i)
                if (right_mult_images(R, xs, inverse[i], nullptr) != HomGroup::flatten(hom.basis(i))) return false;
            return hom.coords.order() == R->order();
        }
    }
    return false;
}

ChainEndReport chain_end_ring(const RingPtr& B, const std::vector<Ideal>& chain) {
    if (chain.empty()) fail(ErrorKind::InvalidArgument, "empty ideal chain");
    for (const auto& I : chain) check_ideal(B, I);
    for (std::size_t j = 0; j + 1 < chain.size(); ++j)
        if (!chain[j].sub.contains(chain[j + 1].sub))
            fail(ErrorKind::ChainBroken, "I_" + std::to_string(j + 2) + " is not inside I_" + std::to_string(j + 1));
    const std::size_t n = chain.size();

    std::vector<SubquotientModule> mods;
    std::vector<std::size_t> off;
    FinModule M;
    for (std::size_t j = 0; j < n; ++j) {
        mods.push_back(ideal_module(B, chain[j]));
        off.push_back(j == 0 ? 0 : M.ngens());
        M = j == 0 ? mods[0].module : direct_sum(M, mods[j].module);
    }
    HomGroup H = hom_group(M, M);
    auto basis = H.basis();
    const std::size_t k = basis.size();
    std::vector<std::vector<Elem>> table(k, std::vector<Elem>(k));
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t t = 0; t < k; ++t) table[s][t] = H.coords.coords(HomGroup::flatten(basis[s].then(basis[t])));
    Elem one = H.coords.coords(HomGroup::flatten(identity_map(M)));

    ChainEndReport rep{make_ring(H.coords.orders(), table, one), {}, {}};

    std::vector<Subgroup> entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            entries.push_back(i < j ? colon_ideal(chain[i], chain[j]).sub : B->whole());
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            names.push_back(i < j ? "(I_" + std::to_string(i + 1) + ":I_" + std::to_string(j + 1) + ")" : "B");
    rep.colon_ring = build_subring(generic_pattern(B, n, entries, names));
    const RingPtr& C = rep.colon_ring.ring();

    // generator of C -> endomorphism acting on summand i by right multiplication
    auto endo = [&](const Elem& c) {
        Vec flat;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& x : module_gens(mods[i])) {
                Vec img(M.ngens(), 0);
                for (std::size_t j = 0; j < n; ++j) {
                    Vec cj = mods[j].coords.coords(B->mul(x, rep.colon_ring.entry(c, i, j)));
                    std::copy(cj.begin(), cj.end(), img.begin() + static_cast<std::ptrdiff_t>(off[j]));
                }
                flat.insert(flat.end(), img.begin(), img.end());
            }
        return H.coords.coords(flat);
    };
    rep.embedding = LinMap{C->orders(), H.coords.orders(), {}};
    for (std::size_t g = 0; g < C->ngens(); ++g) rep.embedding.images.push_back(endo(C->gen(g)));

    const RingPtr& E = rep.hom_ring;
    bool mult = endo(C->one()) == E->reduce(one);
    for (std::size_t s = 0; s < C->ngens() && mult; ++s)
        for (std::size_t t = 0; t < C->ngens() && mult; ++t)
            mult = endo(C->mul(C->gen(s), C->gen(t))) ==
                   E->mul(rep.embedding.images[s], rep.embedding.images[t]);
    rep.multiplicative = mult;
    rep.injective = rep.embedding.dst.empty() ? C->order() == 1 : kernel(rep.embedding).is_zero();
    rep.surjective = rep.embedding.dst.empty() || image(rep.embedding).is_whole();
    rep.last_is_gv = is_gv(B, chain.back()).gv;
    return rep;
}

bool GvPropertyReport::consistent() const {
    return std::all_of(items.begin(), items.end(), [](const GvPropertyItem& i) { return !i.applicable || i.holds; });
}

GvPropertyReport gv_property_check(const RingPtr& B, const std::vector<Ideal>& ideals) {
    GvPropertyReport rep;
    for (const auto& I : ideals) rep.certificates.push_back(is_gv(B, I));
    Subquotient bcoords(B->whole(), B->zero_subgroup());
    for (std::size_t i = 0; i < ideals.size(); ++i) {
        const Ideal& J = ideals[i];
        const bool gv = rep.certificates[i].gv;
        SubquotientModule jm = ideal_module(B, J);

        {
            GvPropertyItem it{"annihilator", i, std::nullopt, gv, true, std::nullopt, "Jx = 0 forces x = 0"};
            Subgroup ann = right_annihilator(B, J);
            if (!ann.is_zero()) {
                it.holds = false;
                it.witness = ann.generators().front();
            }
            rep.items.push_back(it);
        }
        {
            // B -> End_B(J), b -> (x -> x b)
            HomGroup end = hom_group(jm.module, jm.module);
            LinMap f = right_mult_map(B, bcoords, jm, &jm, end);
            bool mult = true;
            auto as_map = [&](const Elem& b) { return end.map_of(right_mult_images(B, module_gens(jm), b, &jm)); };
            for (std::size_t s = 0; s < B->ngens() && mult; ++s)
                for (std::size_t t = 0; t < B->ngens() && mult; ++t)
                    mult = HomGroup::flatten(as_map(B->mul(B->gen(s), B->gen(t)))) ==
                           HomGroup::flatten(as_map(B->gen(s)).then(as_map(B->gen(t))));
            rep.items.push_back({"end-ring", i, std::nullopt, gv, mult && bijective(f), std::nullopt,
                                 "right multiplication B -> End(J) is a ring isomorphism"});
        }
        for (std::size_t o = 0; o < ideals.size(); ++o) {
            const Ideal& I = ideals[o];
            SubquotientModule imod = ideal_module(B, I);
            HomGroup h = hom_group(jm.module, imod.module);
            Ideal col = colon_ideal(J, I);
            Subquotient cc(col.sub, B->zero_subgroup());
            LinMap f = right_mult_map(B, cc, jm, &imod, h);
            rep.items.push_back({"hom-colon", i, o, gv, bijective(f), std::nullopt, "Hom(J, I) = (J : I)"});
            if (o != i && I.sub.contains(J.sub))
                rep.items.push_back({"superset", i, o, gv, rep.certificates[o].gv, std::nullopt, "ideals above J are GV"});
            if (o >= i) {
                const bool both = gv && rep.certificates[o].gv;
                bool holds = both ? is_gv(B, ideal_product(J, I)).gv : false;
                rep.items.push_back({"product", i, o, both, holds, std::nullopt, "products of GV-ideals are GV"});
            }
        }
    }
    return rep;
}

}  // namespace kmatrix
