#include "kmatrix/matshape.hpp"

#include "kmatrix/error.hpp"

#include <algorithm>

namespace kmatrix {

namespace {

Vec unit(std::size_t k, std::size_t i) {
    Vec v(k, 0);
    v[i] = 1;
    return v;
}

std::string idx(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

Condition contains_cond(std::string text, const Subgroup& a, const Subgroup& c, int i = 0, int k = 0, int j = 0) {
    Condition x;
    x.type = Condition::Type::Contains;
    x.text = std::move(text);
    x.a = a;
    x.c = c;
    x.i = i;
    x.k = k;
    x.j = j;
    return x;
}

Condition product_cond(std::string text, const Subgroup& a, const Subgroup& b, const Subgroup& c, int i, int k,
                       int j) {
    Condition x = contains_cond(std::move(text), a, c, i, k, j);
    x.type = Condition::Type::Product;
    x.b = b;
    return x;
}

Condition closed_cond(std::string text, const Subgroup& a, Side side, int i = 0, int j = 0) {
    Condition x;
    x.type = Condition::Type::Closed;
    x.text = std::move(text);
    x.a = a;
    x.side = side;
    x.i = i;
    x.j = j;
    return x;
}

Condition subring_cond(std::string text, const Subgroup& a, int i) {
    Condition x;
    x.type = Condition::Type::Subring;
    x.text = std::move(text);
    x.a = a;
    x.i = i;
    return x;
}

Condition arith_cond(std::string text, bool ok, std::string detail, int i, int k, int j) {
    Condition x;
    x.type = Condition::Type::Arith;
    x.text = std::move(text);
    x.arith_ok = ok;
    x.detail = std::move(detail);
    x.i = i;
    x.k = k;
    x.j = j;
    return x;
}

std::optional<Violation> evaluate(const RingPtr& R, const Condition& c) {
    auto viol = [&](std::optional<Elem> w, std::string detail = {}) {
        return Violation{c.text, c.i, c.k, c.j, std::move(w), std::move(detail)};
    };
    switch (c.type) {
        case Condition::Type::Contains:
            for (const auto& g : c.a.generators())
                if (!c.c.contains(g)) return viol(g);
            return std::nullopt;
        case Condition::Type::Product:
            for (const auto& x : c.a.generators())
                for (const auto& y : c.b.generators()) {
                    Elem p = R->mul(x, y);
                    if (!c.c.contains(p)) return viol(p);
                }
            return std::nullopt;
        case Condition::Type::Closed:
            for (const auto& x : c.a.generators())
                for (std::size_t g = 0; g < R->ngens(); ++g) {
                    if (c.side != Side::Right) {
                        Elem p = R->mul(R->gen(g), x);
                        if (!c.a.contains(p)) return viol(p, "left multiple leaves the subgroup");
                    }
                    if (c.side != Side::Left) {
                        Elem p = R->mul(x, R->gen(g));
                        if (!c.a.contains(p)) return viol(p, "right multiple leaves the subgroup");
                    }
                }
            return std::nullopt;
        case Condition::Type::Subring:
            if (!c.a.contains(R->one())) return viol(R->one(), "identity missing");
            for (const auto& x : c.a.generators())
                for (const auto& y : c.a.generators()) {
                    Elem p = R->mul(x, y);
                    if (!c.a.contains(p)) return viol(p, "not closed under multiplication");
                }
            return std::nullopt;
        case Condition::Type::Arith:
            if (!c.arith_ok) return viol(std::nullopt, c.detail);
            return std::nullopt;
    }
    return std::nullopt;
}

std::vector<Condition> closure_conditions(const MatrixPattern& p) {
    std::vector<Condition> out;
    const int n = static_cast<int>(p.n);
    Subgroup ones = Subgroup::generated(p.R->orders(), {p.R->one()});
    for (int i = 0; i < n; ++i)
        out.push_back(contains_cond("1 ∈ E_ii", ones, p.entry(i, i), i + 1, 0, i + 1));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                out.push_back(product_cond("E_ik E_kj ⊆ E_ij", p.entry(i, k), p.entry(k, j), p.entry(i, j), i + 1,
                                           k + 1, j + 1));
    return out;
}

const Ideal& need(const std::map<Pos, Ideal>& m, int i, int j, const char* what) {
    auto it = m.find({i, j});
    if (it == m.end()) fail(ErrorKind::ShapeMismatch, std::string("missing ") + what + "_" + idx(i, j));
    return it->second;
}

template <class T>
const T& need(const std::map<int, T>& m, int i, const char* what) {
    auto it = m.find(i);
    if (it == m.end()) fail(ErrorKind::ShapeMismatch, std::string("missing ") + what + "_" + std::to_string(i));
    return it->second;
}

void check_parent(const RingPtr& R, const Ideal& I) {
    if (I.parent != R) fail(ErrorKind::ParentMismatch, "ideal belongs to another ring");
}

MatrixPattern empty_pattern(ShapeKind kind, const RingPtr& R, std::size_t n) {
    if (n == 0) fail(ErrorKind::ShapeMismatch, "pattern size must be positive");
    MatrixPattern p;
    p.kind = kind;
    p.n = n;
    p.R = R;
    p.entries.assign(n * n, R->whole());
    p.names.assign(n * n, "R");
    return p;
}

void set(MatrixPattern& p, int i, int j, const Subgroup& s, std::string name) {
    p.entries[static_cast<std::size_t>((i - 1)) * p.n + static_cast<std::size_t>(j - 1)] = s;
    p.names[static_cast<std::size_t>((i - 1)) * p.n + static_cast<std::size_t>(j - 1)] = std::move(name);
}

// Hypotheses on the ideals I_ij (i < j) of the S shapes.
void upper_chain_conditions(MatrixPattern& p, const ShapeData& d) {
    const int n = static_cast<int>(p.n);
    auto I = [&](int i, int j) -> const Subgroup& { return need(d.Iij, i, j, "I").sub; };
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            check_parent(p.R, need(d.Iij, i, j, "I"));
            p.conditions.push_back(closed_cond("I_ij is an ideal", I(i, j), Side::Two, i, j));
        }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = 1; k < i; ++k)
                p.conditions.push_back(contains_cond("I_kj ⊆ I_ij for k ≤ i", I(k, j), I(i, j), i, k, j));
    for (int k = 1; k <= n; ++k)
        for (int j = k + 1; j <= n; ++j)
            for (int i = j + 1; i <= n; ++i)
                p.conditions.push_back(contains_cond("I_ki ⊆ I_kj for j ≤ i", I(k, i), I(k, j), i, k, j));
    for (int i = 1; i <= n; ++i)
        for (int k = i + 1; k <= n; ++k)
            for (int j = k + 1; j <= n; ++j)
                p.conditions.push_back(product_cond("I_ik I_kj ⊆ I_ij for i < k < j", I(i, k), I(k, j), I(i, j), i, k, j));
}

MatrixPattern s_shape(ShapeKind kind, const RingPtr& R, std::size_t n, const ShapeData& d, bool thm1) {
    MatrixPattern p = empty_pattern(kind, R, n);
    const int N = static_cast<int>(n);
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) set(p, i, j, need(d.Iij, i, j, "I").sub, "I_" + idx(i, j));
    if (thm1) {
        if (!d.I) fail(ErrorKind::ShapeMismatch, "missing I");
        check_parent(R, *d.I);
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j < i; ++j) set(p, i, j, d.I->sub, "I");
        p.conditions.push_back(closed_cond("I is an ideal", d.I->sub, Side::Two));
        for (int i = 1; i <= N; ++i)
            for (int j = i + 1; j <= N; ++j)
                p.conditions.push_back(contains_cond("I_ij ⊆ I", d.Iij.at({i, j}).sub, d.I->sub, i, 0, j));
    }
    upper_chain_conditions(p, d);
    return p;
}

MatrixPattern t_shape(ShapeKind kind, const RingPtr& R, std::size_t n, const ShapeData& d, bool thm1) {
    MatrixPattern p = empty_pattern(kind, R, n);
    const int N = static_cast<int>(n);
    auto Ii = [&](int i) -> const Ideal& { return need(d.Ii, i, "I"); };
    auto Ri = [&](int i) -> const Subgroup& { return need(d.Ri, i, "R"); };
    auto Iij = [&](int i, int j) -> const Ideal& { return need(d.Iij, i, j, "I"); };
    if (thm1) {
        if (!d.I) fail(ErrorKind::ShapeMismatch, "missing I");
        check_parent(R, *d.I);
    }
    for (int i = 2; i <= N; ++i) {
        check_parent(R, Ii(i));
        set(p, i, i, Ri(i), "R_" + std::to_string(i));
        for (int r = 1; r < i; ++r) set(p, r, i, Ii(i).sub, "I_" + std::to_string(i));
        if (thm1) set(p, i, 1, d.I->sub, "I");
        for (int j = 2; j < i; ++j) {
            check_parent(R, Iij(i, j));
            set(p, i, j, Iij(i, j).sub, "I_" + idx(i, j));
        }
    }
    if (thm1) p.conditions.push_back(closed_cond("I is an ideal", d.I->sub, Side::Two));
    for (int i = 2; i <= N; ++i) {
        p.conditions.push_back(subring_cond("R_i is a subring with the identity of R", Ri(i), i));
        if (thm1) {
            p.conditions.push_back(closed_cond("I_i is an ideal", Ii(i).sub, Side::Two, i));
        } else {
            p.conditions.push_back(closed_cond("I_i is a left ideal of R", Ii(i).sub, Side::Left, i));
            p.conditions.push_back(product_cond("I_i is a right ideal of R_i", Ii(i).sub, Ri(i), Ii(i).sub, i, 0, 0));
        }
        p.conditions.push_back(contains_cond("I_i ⊆ R_i", Ii(i).sub, Ri(i), i));
        if (i + 1 <= N) p.conditions.push_back(contains_cond("I_{i+1} ⊆ I_i", Ii(i + 1).sub, Ii(i).sub, i));
    }
    for (int i = 2; i <= N; ++i)
        for (int j = 2; j < i; ++j) {
            p.conditions.push_back(closed_cond("I_ij is an ideal", Iij(i, j).sub, Side::Two, i, j));
            p.conditions.push_back(contains_cond("I_j ⊆ I_ij", Ii(j).sub, Iij(i, j).sub, i, 0, j));
            if (thm1) p.conditions.push_back(contains_cond("I_ij ⊆ I", Iij(i, j).sub, d.I->sub, i, 0, j));
            for (int k = j + 1; k < i; ++k)
                p.conditions.push_back(product_cond("I_ik I_kj ⊆ I_ij for j < k < i", Iij(i, k).sub, Iij(k, j).sub,
                                                    Iij(i, j).sub, i, k, j));
        }
    return p;
}

MatrixPattern powers_shape(const RingPtr& R, std::size_t n, const ShapeData& d) {
    if (!d.I) fail(ErrorKind::ShapeMismatch, "missing I");
    check_parent(R, *d.I);
    const int N = static_cast<int>(n);
    auto t = [&](int i, int j) {
        auto it = d.t.find({i, j});
        if (it == d.t.end()) fail(ErrorKind::ShapeMismatch, "missing t_" + idx(i, j));
        return it->second;
    };
    MatrixPattern p = empty_pattern(ShapeKind::B_powers, R, n);
    p.conditions.push_back(closed_cond("I is an ideal", d.I->sub, Side::Two));
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            int e = t(i, j);
            p.conditions.push_back(arith_cond("t_ij ≥ 1", e >= 1, "t_" + idx(i, j) + " = " + std::to_string(e), i, 0, j));
            Ideal pw = ideal_power(*d.I, static_cast<unsigned>(std::max(e, 1)));
            set(p, i, j, pw.sub, "I^" + std::to_string(e));
        }
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            if (j + 1 <= N)
                p.conditions.push_back(arith_cond("t_ij ≤ t_i,j+1", t(i, j) <= t(i, j + 1),
                                                  "t_" + idx(i, j) + " = " + std::to_string(t(i, j)) + ", t_" +
                                                      idx(i, j + 1) + " = " + std::to_string(t(i, j + 1)),
                                                  i, 0, j));
            if (i + 1 < j)
                p.conditions.push_back(arith_cond("t_i+1,j ≤ t_ij", t(i + 1, j) <= t(i, j),
                                                  "t_" + idx(i + 1, j) + " = " + std::to_string(t(i + 1, j)) + ", t_" +
                                                      idx(i, j) + " = " + std::to_string(t(i, j)),
                                                  i, 0, j));
            for (int k = i + 1; k < j; ++k)
                p.conditions.push_back(arith_cond("t_ij ≤ t_ik + t_kj", t(i, j) <= t(i, k) + t(k, j),
                                                  "t_" + idx(i, j) + " = " + std::to_string(t(i, j)) + " > " +
                                                      std::to_string(t(i, k)) + " + " + std::to_string(t(k, j)),
                                                  i, k, j));
        }
    return p;
}

Elem place(const Vec& orders, std::size_t off, const Vec& v) {
    Elem x(orders.size(), 0);
    for (std::size_t a = 0; a < v.size(); ++a) x[off + a] = v[a];
    return x;
}

}  // namespace

const char* shape_kind_name(ShapeKind k) {
    switch (k) {
        case ShapeKind::S_thm1: return "S-thm1";
        case ShapeKind::T_thm1: return "T-thm1";
        case ShapeKind::S_thm2: return "S-thm2";
        case ShapeKind::T_thm2: return "T-thm2";
        case ShapeKind::B_lemma32: return "B-lemma32";
        case ShapeKind::B_lemma34: return "B-lemma34";
        case ShapeKind::B_powers: return "B-powers";
        case ShapeKind::Poset: return "poset";
        case ShapeKind::Bimodule: return "bimodule";
        case ShapeKind::Corner: return "corner";
        case ShapeKind::Generic: return "generic";
    }
    return "?";
}

std::optional<ShapeKind> parse_shape_kind(const std::string& s) {
    for (auto k : {ShapeKind::S_thm1, ShapeKind::T_thm1, ShapeKind::S_thm2, ShapeKind::T_thm2, ShapeKind::B_lemma32,
                   ShapeKind::B_lemma34, ShapeKind::B_powers, ShapeKind::Poset, ShapeKind::Bimodule,
                   ShapeKind::Corner, ShapeKind::Generic})
        if (s == shape_kind_name(k)) return k;
    return std::nullopt;
}

MatrixPattern generic_pattern(const RingPtr& R, std::size_t n, const std::vector<Subgroup>& entries,
                              std::vector<std::string> names) {
    if (entries.size() != n * n) fail(ErrorKind::ShapeMismatch, "pattern needs n*n entries");
    MatrixPattern p = empty_pattern(ShapeKind::Generic, R, n);
    p.entries = entries;
    for (auto& e : p.entries)
        if (e.orders() != R->orders()) fail(ErrorKind::ShapeMismatch, "entry is not a subgroup of the base ring");
    if (!names.empty()) {
        if (names.size() != n * n) fail(ErrorKind::ShapeMismatch, "pattern needs n*n names");
        p.names = std::move(names);
    } else {
        for (std::size_t i = 0; i < n * n; ++i) p.names[i] = "E_" + idx(int(i / n) + 1, int(i % n) + 1);
    }
    p.conditions = closure_conditions(p);
    return p;
}

MatrixPattern make_pattern(ShapeKind kind, const RingPtr& R, std::size_t n, const ShapeData& data) {
    switch (kind) {
        case ShapeKind::S_thm1: return s_shape(kind, R, n, data, true);
        case ShapeKind::S_thm2:
        case ShapeKind::B_lemma32: return s_shape(kind, R, n, data, false);
        case ShapeKind::T_thm1: return t_shape(kind, R, n, data, true);
        case ShapeKind::T_thm2:
        case ShapeKind::B_lemma34: return t_shape(kind, R, n, data, false);
        case ShapeKind::B_powers: return powers_shape(R, n, data);
        default: break;
    }
    fail(ErrorKind::ShapeMismatch, std::string("shape ") + shape_kind_name(kind) + " has its own builder");
}

MatrixPattern ij_pattern(const RingPtr& R, std::size_t n, const Ideal& I, const Ideal& J) {
    check_parent(R, I);
    check_parent(R, J);
    MatrixPattern p = empty_pattern(ShapeKind::Generic, R, n);
    const int N = static_cast<int>(n);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (i < j) set(p, i, j, I.sub, "I");
            if (i > j) set(p, i, j, J.sub, "J");
        }
    p.conditions.push_back(closed_cond("I is an ideal", I.sub, Side::Two));
    p.conditions.push_back(closed_cond("J is an ideal", J.sub, Side::Two));
    return p;
}

ConditionReport check_conditions(const MatrixPattern& p) {
    ConditionReport rep;
    for (const auto& c : p.conditions) {
        ++rep.checked;
        if (auto v = evaluate(p.R, c)) rep.violations.push_back(std::move(*v));
    }
    return rep;
}

ConditionReport check_closure(const MatrixPattern& p) {
    ConditionReport rep;
    for (const auto& c : closure_conditions(p)) {
        ++rep.checked;
        if (auto v = evaluate(p.R, c)) rep.violations.push_back(std::move(*v));
    }
    return rep;
}

Subgroup MatrixRing::block(std::size_t i, std::size_t j) const {
    std::vector<Vec> gens;
    for (std::size_t a = 0; a < width(i, j); ++a) gens.push_back(unit(ring_->ngens(), offset(i, j) + a));
    return Subgroup::generated(ring_->orders(), gens);
}

Elem MatrixRing::embed(std::size_t i, std::size_t j, const Elem& x) const {
    return place(ring_->orders(), offset(i, j), sq_[i * n_ + j].coords(x));
}

Elem MatrixRing::entry(const Elem& a, std::size_t i, std::size_t j) const {
    const std::size_t w = width(i, j), off = offset(i, j);
    return sq_[i * n_ + j].embed(Vec(a.begin() + static_cast<std::ptrdiff_t>(off),
                                     a.begin() + static_cast<std::ptrdiff_t>(off + w)));
}

Elem MatrixRing::idempotent(std::size_t i) const {
    Elem x = ring_->zero();
    for (std::size_t a = 0; a < width(i, i); ++a) x[offset(i, i) + a] = ring_->one()[offset(i, i) + a];
    return x;
}

MatrixRing build_matrix_ring(const RingPtr& base, std::size_t n, std::vector<Component> comps,
                             const std::vector<Elem>& diag_ones) {
    if (comps.size() != n * n || diag_ones.size() != n) fail(ErrorKind::ShapeMismatch, "component table has wrong size");
    auto bad = [](const std::string& what, std::size_t i, std::size_t k, std::size_t j) {
        fail(ErrorKind::ConditionsNotVerified,
             what + " at (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "," + std::to_string(j + 1) + ")");
    };
    auto C = [&](std::size_t i, std::size_t j) -> const Component& { return comps[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!C(i, j).top.contains(C(i, j).bottom)) bad("bottom not inside top", i, i, j);
    std::vector<std::vector<Vec>> tg(n * n), bg(n * n);
    for (std::size_t a = 0; a < n * n; ++a) {
        tg[a] = comps[a].top.generators();
        bg[a] = comps[a].bottom.generators();
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const Component& out = C(i, j);
                for (const auto& x : tg[i * n + k])
                    for (const auto& y : tg[k * n + j])
                        if (!out.top.contains(base->mul(x, y))) bad("product leaves the entry", i, k, j);
                for (const auto& x : bg[i * n + k])
                    for (const auto& y : tg[k * n + j])
                        if (!out.bottom.contains(base->mul(x, y))) bad("quotient not compatible on the left", i, k, j);
                for (const auto& x : tg[i * n + k])
                    for (const auto& y : bg[k * n + j])
                        if (!out.bottom.contains(base->mul(x, y))) bad("quotient not compatible on the right", i, k, j);
            }
    for (std::size_t i = 0; i < n; ++i) {
        const Elem& e = diag_ones[i];
        if (!C(i, i).top.contains(e)) bad("diagonal identity outside the entry", i, i, i);
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& x : tg[i * n + j])
                if (!C(i, j).bottom.contains(base->sub(base->mul(e, x), x))) bad("left identity fails", i, i, j);
            for (const auto& x : tg[j * n + i])
                if (!C(j, i).bottom.contains(base->sub(base->mul(x, e), x))) bad("right identity fails", j, i, i);
        }
    }

    MatrixRing m;
    m.base_ = base;
    m.n_ = n;
    m.comps_ = std::move(comps);
    Vec orders;
    std::vector<std::string> labels;
    std::vector<std::vector<Vec>> reps(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Component& c = m.comps_[i * n + j];
            m.sq_.emplace_back(c.top, c.bottom);
            const Subquotient& q = m.sq_.back();
            m.off_.push_back(orders.size());
            for (std::size_t a = 0; a < q.dim(); ++a) {
                orders.push_back(q.orders()[a]);
                labels.push_back(std::to_string(i + 1) + "," + std::to_string(j + 1) + ":" + std::to_string(a));
                reps[i * n + j].push_back(q.embed(unit(q.dim(), a)));
            }
        }
    const std::size_t K = orders.size();
    std::vector<std::vector<Elem>> t(K, std::vector<Elem>(K, Elem(K, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const Subquotient& q = m.sq_[i * n + j];
                for (std::size_t a = 0; a < reps[i * n + k].size(); ++a)
                    for (std::size_t b = 0; b < reps[k * n + j].size(); ++b)
                        t[m.off_[i * n + k] + a][m.off_[k * n + j] + b] =
                            place(orders, m.off_[i * n + j], q.coords(base->mul(reps[i * n + k][a], reps[k * n + j][b])));
            }
    Elem one(K, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Vec c = m.sq_[i * n + i].coords(diag_ones[i]);
        for (std::size_t a = 0; a < c.size(); ++a) one[m.off_[i * n + i] + a] = c[a];
    }
    m.ring_ = make_ring(orders, std::move(t), one, std::move(labels));
    return m;
}

MatrixRing build_subring(const MatrixPattern& p) {
    for (const ConditionReport& rep : {check_conditions(p), check_closure(p)})
        if (!rep.pass()) {
            const Violation& v = rep.violations.front();
            fail(ErrorKind::ConditionsNotVerified, std::string(shape_kind_name(p.kind)) + ": " + v.condition + " fails at (" +
                                                       std::to_string(v.i) + "," + std::to_string(v.k) + "," +
                                                       std::to_string(v.j) + ")");
        }
    std::vector<Component> comps;
    for (const auto& e : p.entries) comps.push_back(Component{e, p.R->zero_subgroup()});
    return build_matrix_ring(p.R, p.n, std::move(comps), std::vector<Elem>(p.n, p.R->one()));
}

MatrixRing companion_C(const MatrixPattern& p) {
    const std::size_t n = p.n;
    if (n < 2) fail(ErrorKind::ShapeMismatch, "companion ring needs n >= 2");
    for (const ConditionReport& rep : {check_conditions(p), check_closure(p)})
        if (!rep.pass()) fail(ErrorKind::ConditionsNotVerified, "companion of a pattern whose hypotheses fail: " +
                                                                    rep.violations.front().condition);
    const Subgroup zero = p.R->zero_subgroup();
    std::vector<Component> comps(n * n, Component{zero, zero});
    std::vector<Elem> ones(n, p.R->one());
    auto B = [&](std::size_t i, std::size_t j) -> const Subgroup& { return p.entry(i, j); };
    switch (p.kind) {
        case ShapeKind::S_thm2:
        case ShapeKind::B_lemma32:
        case ShapeKind::B_powers:
            // Be_1, ..., Be_{n-1}, Q = coker(Be_n -> Be_{n-1})
            for (std::size_t i = 0; i + 1 < n; ++i) {
                for (std::size_t j = 0; j + 1 < n; ++j) comps[i * n + j] = Component{B(i, j), zero};
                comps[i * n + n - 1] = Component{B(i, n - 2), B(i, n - 1)};
            }
            comps[n * n - 1] = Component{B(n - 2, n - 2), B(n - 2, n - 1)};
            break;
        case ShapeKind::T_thm2:
        case ShapeKind::B_lemma34: {
            // Q = coker(Be_2 -> Be_1), Be_1, Be_3, ..., Be_n
            auto q = [](std::size_t a) { return a == 1 ? std::size_t{0} : a; };
            comps[0] = Component{B(1, 1), B(0, 1)};
            for (std::size_t a = 1; a < n; ++a) {
                comps[a * n] = Component{B(q(a), 0), B(q(a), 1)};
                for (std::size_t b = 1; b < n; ++b) comps[a * n + b] = Component{B(q(a), q(b)), zero};
            }
            break;
        }
        default:
            fail(ErrorKind::ShapeMismatch, std::string("no companion ring for shape ") + shape_kind_name(p.kind));
    }
    return build_matrix_ring(p.R, n, std::move(comps), ones);
}

PullbackCheck check_pullback(const MilnorSquare& sq) {
    PullbackCheck c;
    c.commutes = true;
    for (std::size_t i = 0; i < sq.R->ngens(); ++i)
        if (sq.h1(sq.f1(sq.R->gen(i))) != sq.f2(sq.h2(sq.R->gen(i)))) c.commutes = false;
    c.milnor = sq.h1.is_surjective() || sq.f2.is_surjective();
    c.injective = intersect(sq.f1.kernel_subgroup(), sq.h2.kernel_subgroup()).is_zero();
    Integer pairs = sq.h1.kernel_subgroup().order() * sq.f2.kernel_subgroup().order() *
                    intersect(sq.h1.image_subgroup(), sq.f2.image_subgroup()).order();
    c.counts_match = pairs == sq.R->order();
    return c;
}

ThmSquare inclusion_square(const RingPtr& R, std::size_t n, const std::vector<Subgroup>& B,
                           const std::vector<Subgroup>& A, const std::vector<Subgroup>& J) {
    if (B.size() != n * n || A.size() != n * n || J.size() != n * n) fail(ErrorKind::ShapeMismatch, "square needs n*n entries");
    MatrixRing mb = build_subring(generic_pattern(R, n, B));
    MatrixRing ma = build_subring(generic_pattern(R, n, A));
    std::vector<Elem> fim;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!A[i * n + j].contains(B[i * n + j]) || !B[i * n + j].contains(J[i * n + j]))
                fail(ErrorKind::ConditionsNotVerified, "square entries are not nested at (" + idx(int(i) + 1, int(j) + 1) + ")");
        }
    for (std::size_t g = 0; g < mb.ring()->ngens(); ++g) {
        Elem x = mb.ring()->gen(g), y = ma.ring()->zero();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) y = ma.ring()->add(y, ma.embed(i, j, mb.entry(x, i, j)));
        fim.push_back(y);
    }
    RingHom f1(mb.ring(), ma.ring(), fim);
    std::vector<Elem> jb, ja;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& x : J[i * n + j].generators()) {
                jb.push_back(mb.embed(i, j, x));
                ja.push_back(ma.embed(i, j, x));
            }
    Ideal JB{mb.ring(), Subgroup::generated(mb.ring()->orders(), jb), Side::Two};
    Ideal JA{ma.ring(), Subgroup::generated(ma.ring()->orders(), ja), Side::Two};
    if (!is_closed(ma.ring(), JA.sub, Side::Two)) fail(ErrorKind::ConditionsNotVerified, "J is not an ideal of A");
    Quotient qb = quotient_ring(JB), qa = quotient_ring(JA);
    std::vector<Elem> f2im;
    for (std::size_t a = 0; a < qb.ring->ngens(); ++a) f2im.push_back(qa.proj(f1(qb.lift(qb.ring->gen(a)))));
    RingHom f2(qb.ring, qa.ring, f2im);
    MilnorSquare sq{mb.ring(), ma.ring(), qb.ring, qa.ring, f1, qb.proj, qa.proj, f2};
    if (!check_pullback(sq).ok()) fail(ErrorKind::NotPullback, "constructed square is not a Milnor square");
    return ThmSquare{mb, ma, JB, JA, sq};
}

ThmSquare milnor_square_thm1(const MatrixPattern& p) {
    if (p.kind != ShapeKind::S_thm1) fail(ErrorKind::ShapeMismatch, "square needs an S-thm1 pattern");
    ConditionReport rep = check_conditions(p);
    if (!rep.pass()) fail(ErrorKind::ConditionsNotVerified, "S-thm1 hypotheses fail: " + rep.violations.front().condition);
    const std::size_t n = p.n;
    // the entries below the diagonal of p are I
    const Subgroup I = n >= 2 ? p.entry(1, 0) : Subgroup();
    std::vector<Subgroup> A = p.entries, J = p.entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) A[i * n + j] = p.R->whole();
    if (n == 1) {
        // no entry records I when n = 1; J is then zero
        J[0] = p.R->zero_subgroup();
    } else {
        for (std::size_t i = 0; i < n; ++i) J[i * n + i] = I;
    }
    return inclusion_square(p.R, n, p.entries, A, J);
}

MatrixPattern poset_pattern(const RingPtr& R, const Ideal& I, const std::vector<std::vector<bool>>& le) {
    check_parent(R, I);
    const std::size_t n = le.size();
    for (const auto& row : le)
        if (row.size() != n) fail(ErrorKind::InvalidArgument, "poset relation must be square");
    for (std::size_t i = 0; i < n; ++i) {
        if (!le[i][i]) fail(ErrorKind::InvalidArgument, "poset relation is not reflexive");
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && le[i][j] && le[j][i]) fail(ErrorKind::InvalidArgument, "poset relation is not antisymmetric");
            for (std::size_t k = 0; k < n; ++k)
                if (le[i][j] && le[j][k] && !le[i][k]) fail(ErrorKind::InvalidArgument, "poset relation is not transitive");
            if (le[i][j] && i > j)
                fail(ErrorKind::NotLinearlyExtended,
                     "a_" + std::to_string(i + 1) + " <= a_" + std::to_string(j + 1) + " but " + std::to_string(i + 1) +
                         " > " + std::to_string(j + 1));
        }
    }
    MatrixPattern p = empty_pattern(ShapeKind::Poset, R, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!le[j][i]) set(p, int(i) + 1, int(j) + 1, I.sub, "I");
    p.conditions.push_back(closed_cond("I is an ideal", I.sub, Side::Two));
    return p;
}

MatrixRing poset_ring(const RingPtr& R, const Ideal& I, const std::vector<std::vector<bool>>& less_eq) {
    return build_subring(poset_pattern(R, I, less_eq));
}

BimoduleRing bimodule_ring(const RingPtr& R, const RingPtr& S, const Bimodule& M, const Bimodule& N) {
    if (M.left != R || M.right != S || N.left != S || N.right != R)
        fail(ErrorKind::ActionMismatch, "bimodules are not over the given rings");
    M.validate();
    N.validate();
    const std::size_t kr = R->ngens(), km = M.orders.size(), kn = N.orders.size(), ks = S->ngens();
    const std::size_t om = kr, on = kr + km, os = kr + km + kn, K = os + ks;
    Vec d = R->orders();
    d.insert(d.end(), M.orders.begin(), M.orders.end());
    d.insert(d.end(), N.orders.begin(), N.orders.end());
    d.insert(d.end(), S->orders().begin(), S->orders().end());
    std::vector<std::vector<Elem>> t(K, std::vector<Elem>(K, Elem(K, 0)));
    for (std::size_t a = 0; a < kr; ++a) {
        for (std::size_t b = 0; b < kr; ++b) t[a][b] = place(d, 0, R->table(a, b));
        for (std::size_t b = 0; b < km; ++b) t[a][om + b] = place(d, om, M.left_action[a].images[b]);
        for (std::size_t b = 0; b < kn; ++b) t[on + b][a] = place(d, on, N.right_action[a].images[b]);
    }
    for (std::size_t a = 0; a < ks; ++a) {
        for (std::size_t b = 0; b < ks; ++b) t[os + a][os + b] = place(d, os, S->table(a, b));
        for (std::size_t b = 0; b < km; ++b) t[om + b][os + a] = place(d, om, M.right_action[a].images[b]);
        for (std::size_t b = 0; b < kn; ++b) t[os + a][on + b] = place(d, on, N.left_action[a].images[b]);
    }
    Elem one(K, 0);
    for (std::size_t a = 0; a < kr; ++a) one[a] = R->one()[a];
    for (std::size_t a = 0; a < ks; ++a) one[os + a] = S->one()[a];
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < kr; ++a) labels.push_back("R:" + std::to_string(a));
    for (std::size_t a = 0; a < km; ++a) labels.push_back("M:" + std::to_string(a));
    for (std::size_t a = 0; a < kn; ++a) labels.push_back("N:" + std::to_string(a));
    for (std::size_t a = 0; a < ks; ++a) labels.push_back("S:" + std::to_string(a));
    RingPtr A = make_ring(d, std::move(t), one, std::move(labels));

    std::vector<Vec> mg, ng;
    for (std::size_t b = 0; b < km; ++b) mg.push_back(unit(K, om + b));
    for (std::size_t b = 0; b < kn; ++b) ng.push_back(unit(K, on + b));
    Ideal Mp{A, Subgroup::generated(d, mg), Side::Two}, Np{A, Subgroup::generated(d, ng), Side::Two};
    if (!is_closed(A, Mp.sub, Side::Two) || !is_closed(A, Np.sub, Side::Two))
        fail(ErrorKind::ActionMismatch, "M' or N' is not an ideal");
    Quotient qm = quotient_ring(Mp), qn = quotient_ring(Np), qmn = quotient_ring(ideal_sum(Mp, Np));
    std::vector<Elem> h1, f2;
    for (std::size_t a = 0; a < qm.ring->ngens(); ++a) h1.push_back(qmn.proj(qm.lift(qm.ring->gen(a))));
    for (std::size_t a = 0; a < qn.ring->ngens(); ++a) f2.push_back(qmn.proj(qn.lift(qn.ring->gen(a))));
    MilnorSquare sq{A, qm.ring, qn.ring, qmn.ring, qm.proj, qn.proj, RingHom(qm.ring, qmn.ring, h1),
                    RingHom(qn.ring, qmn.ring, f2)};
    if (!check_pullback(sq).ok()) fail(ErrorKind::NotPullback, "bimodule square is not a Milnor square");
    return BimoduleRing{A, Mp, Np, sq, kr, km, kn, ks};
}

MatrixPattern corner_pattern(const MatrixPattern& p, const Elem& e) {
    const RingPtr& R = p.R;
    if (!is_idempotent(R, e)) fail(ErrorKind::NotIdempotent, "corner needs an idempotent");
    std::vector<Vec> gens;
    for (std::size_t g = 0; g < R->ngens(); ++g) gens.push_back(R->mul(R->mul(e, R->gen(g)), e));
    SubringResult eRe = ring_on_subgroup(R, Subgroup::generated(R->orders(), gens), e);
    LinMap inc = eRe.inclusion.linear();
    MatrixPattern c = empty_pattern(ShapeKind::Corner, eRe.ring, p.n);
    for (std::size_t a = 0; a < p.n * p.n; ++a) {
        std::vector<Vec> sub;
        for (const auto& x : p.entries[a].generators()) {
            auto y = solve(inc, R->mul(R->mul(e, x), e));
            if (!y) fail(ErrorKind::InvalidArgument, "internal: corner element outside eRe");
            sub.push_back(*y);
        }
        c.entries[a] = Subgroup::generated(eRe.ring->orders(), sub);
        c.names[a] = "e" + p.names[a] + "e";
    }
    c.conditions = closure_conditions(c);
    return c;
}

MatrixRing corner_ring(const MatrixPattern& p, const Elem& e) { return build_subring(corner_pattern(p, e)); }

RingPtr opposite_shape(const MatrixRing& m) { return opposite_ring(m.ring()); }

}  // namespace kmatrix
