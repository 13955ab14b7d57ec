#include "kmatrix/finring.hpp"

#include "kmatrix/error.hpp"

#include <sstream>

namespace kmatrix {

namespace {

std::string gens_str(std::initializer_list<std::size_t> ids) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (auto i : ids) {
        if (!first) os << ",";
        os << i;
        first = false;
    }
    os << ")";
    return os.str();
}

Elem linear_image(const std::vector<Elem>& images, const Vec& dst, const Elem& a) {
    Elem y(dst.size(), 0);
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0) continue;
        for (std::size_t t = 0; t < dst.size(); ++t)
            if (images[j][t] != 0) y[t] = (y[t] + (a[j] % dst[t]) * images[j][t]) % dst[t];
    }
    return y;
}

}  // namespace

Elem FiniteRing::gen(std::size_t i) const {
    Elem e = zero();
    e[i] = 1 % d_[i];
    return e;
}

Elem FiniteRing::add(const Elem& a, const Elem& b) const {
    Elem c(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) {
        c[i] = a[i] + b[i];
        if (c[i] >= d_[i]) c[i] -= d_[i];
    }
    return c;
}

Elem FiniteRing::sub(const Elem& a, const Elem& b) const {
    Elem c(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) {
        c[i] = a[i] - b[i];
        if (c[i] < 0) c[i] += d_[i];
    }
    return c;
}

Elem FiniteRing::neg(const Elem& a) const {
    Elem c(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) c[i] = a[i] == 0 ? 0 : d_[i] - a[i];
    return c;
}

Elem FiniteRing::scale(const Elem& a, i64 n) const {
    Elem c(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) c[i] = mod64((a[i] % d_[i]) * mod64(n, d_[i]), d_[i]);
    return c;
}

Elem FiniteRing::mul(const Elem& a, const Elem& b) const {
    Elem r(d_.size(), 0);
    for (std::size_t i = 0; i < d_.size(); ++i) {
        const i64 ai = a[i];
        if (ai == 0) continue;
        for (const Term& t : sparse_[i]) {
            const i64 bj = b[t.j];
            if (bj == 0) continue;
            const i64 ab = ai * bj;
            for (const auto& [o, c] : t.out) r[o] = (r[o] + (ab % d_[o]) * c) % d_[o];
        }
    }
    return r;
}

Elem FiniteRing::pow(Elem a, std::uint64_t n) const {
    Elem r = one_;
    while (n) {
        if (n & 1) r = mul(r, a);
        n >>= 1;
        if (n) a = mul(a, a);
    }
    return r;
}

bool FiniteRing::is_zero(const Elem& a) const {
    for (auto x : a)
        if (x != 0) return false;
    return true;
}

i64 FiniteRing::exponent() const {
    i64 e = 1;
    for (auto d : d_) e = lcm64(e, d);
    return e;
}

bool FiniteRing::is_commutative() const {
    for (std::size_t i = 0; i < d_.size(); ++i)
        for (std::size_t j = i + 1; j < d_.size(); ++j)
            if (table_[i][j] != table_[j][i]) return false;
    return true;
}

std::uint64_t FiniteRing::size_checked(std::uint64_t cap) const {
    Integer n = order();
    if (n > cap)
        fail(ErrorKind::SizeCapExceeded,
             "ring of order " + n.str() + " exceeds the enumeration cap " + std::to_string(cap));
    return n.convert_to<std::uint64_t>();
}

LinMap FiniteRing::left_mul(const Elem& a) const {
    LinMap f{d_, d_, {}};
    for (std::size_t j = 0; j < d_.size(); ++j) f.images.push_back(mul(a, gen(j)));
    return f;
}

LinMap FiniteRing::right_mul(const Elem& a) const {
    LinMap f{d_, d_, {}};
    for (std::size_t j = 0; j < d_.size(); ++j) f.images.push_back(mul(gen(j), a));
    return f;
}

RingPtr make_ring(Vec orders, std::vector<std::vector<Elem>> mul, Elem one, std::vector<std::string> labels) {
    const std::size_t k = orders.size();
    for (std::size_t i = 0; i < k; ++i)
        if (orders[i] < 2)
            fail(ErrorKind::OrderInconsistency, "generator " + std::to_string(i) + " has order below 2");
    if (mul.size() != k || one.size() != k)
        fail(ErrorKind::InvalidArgument, "structure constants do not match the number of generators");
    for (auto& row : mul) {
        if (row.size() != k) fail(ErrorKind::InvalidArgument, "structure constant table is not square");
        for (auto& c : row) {
            if (c.size() != k) fail(ErrorKind::InvalidArgument, "structure constant has wrong length");
            c = reduce_mod(std::move(c), orders);
        }
    }
    if (!labels.empty() && labels.size() != k) fail(ErrorKind::InvalidArgument, "label count mismatch");
    auto r = std::make_shared<FiniteRing>();
    r->d_ = orders;
    r->one_ = reduce_mod(std::move(one), orders);
    r->table_ = std::move(mul);
    r->labels_ = std::move(labels);
    r->sparse_.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const Elem& c = r->table_[i][j];
            // bilinearity needs gcd(d_i, d_j) * (g_i g_j) = 0
            i64 g = gcd64(orders[i], orders[j]);
            for (std::size_t t = 0; t < k; ++t)
                if ((g % orders[t]) * c[t] % orders[t] != 0)
                    fail(ErrorKind::OrderInconsistency,
                         "product of generators " + gens_str({i, j}) + " violates additive orders");
            FiniteRing::Term term{static_cast<std::uint32_t>(j), {}};
            for (std::size_t t = 0; t < k; ++t)
                if (c[t] != 0) term.out.emplace_back(static_cast<std::uint32_t>(t), c[t]);
            if (!term.out.empty()) r->sparse_[i].push_back(std::move(term));
        }
    for (std::size_t i = 0; i < k; ++i) {
        Elem g = r->gen(i);
        if (r->mul(r->one_, g) != g || r->mul(g, r->one_) != g)
            fail(ErrorKind::IdentityViolation, "identity law fails at generator " + gens_str({i}));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const Elem& ij = r->table_[i][j];
            for (std::size_t l = 0; l < k; ++l) {
                Elem left = r->mul(ij, r->gen(l));
                Elem right = r->mul(r->gen(i), r->table_[j][l]);
                if (left != right)
                    fail(ErrorKind::AssociativityViolation,
                         "associativity fails on generators " + gens_str({i, j, l}));
            }
        }
    return r;
}

RingPtr zmod_ring(i64 n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "Z/n needs n >= 1");
    if (n == 1) return make_ring({}, {}, {});
    return make_ring({n}, {{{1}}}, {1});
}

RingPtr product_ring(const RingPtr& a, const RingPtr& b) {
    const std::size_t ka = a->ngens(), kb = b->ngens(), k = ka + kb;
    Vec d = a->orders();
    d.insert(d.end(), b->orders().begin(), b->orders().end());
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k, Elem(k, 0)));
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < ka; ++j)
            for (std::size_t l = 0; l < ka; ++l) t[i][j][l] = a->table(i, j)[l];
    for (std::size_t i = 0; i < kb; ++i)
        for (std::size_t j = 0; j < kb; ++j)
            for (std::size_t l = 0; l < kb; ++l) t[ka + i][ka + j][ka + l] = b->table(i, j)[l];
    Elem one = a->one();
    one.insert(one.end(), b->one().begin(), b->one().end());
    std::vector<std::string> labels;
    if (!a->labels().empty() || !b->labels().empty()) {
        for (std::size_t i = 0; i < ka; ++i)
            labels.push_back("L." + (a->labels().empty() ? std::to_string(i) : a->labels()[i]));
        for (std::size_t i = 0; i < kb; ++i)
            labels.push_back("R." + (b->labels().empty() ? std::to_string(i) : b->labels()[i]));
    }
    return make_ring(d, std::move(t), one, labels);
}

RingPtr opposite_ring(const RingPtr& r) {
    const std::size_t k = r->ngens();
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) t[i][j] = r->table(j, i);
    return make_ring(r->orders(), std::move(t), r->one(), r->labels());
}

RingPtr matrix_ring(const RingPtr& r, std::size_t n) {
    const std::size_t k = r->ngens(), K = n * n * k;
    auto idx = [&](std::size_t i, std::size_t j, std::size_t l) { return (i * n + j) * k + l; };
    Vec d(K);
    std::vector<std::string> labels(K);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                d[idx(i, j, l)] = r->orders()[l];
                labels[idx(i, j, l)] = std::to_string(i + 1) + "," + std::to_string(j + 1) + ":" + std::to_string(l);
            }
    std::vector<std::vector<Elem>> t(K, std::vector<Elem>(K, Elem(K, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t l = 0; l < k; ++l)
                    for (std::size_t m = 0; m < k; ++m)
                        for (std::size_t o = 0; o < k; ++o) t[idx(i, j, l)][idx(j, c, m)][idx(i, c, o)] = r->table(l, m)[o];
    Elem one(K, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) one[idx(i, i, l)] = r->one()[l];
    return make_ring(d, std::move(t), one, labels);
}

const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Two: return "two";
    }
    return "two";
}

Ideal ideal_closure(const RingPtr& r, const std::vector<Elem>& gens, Side side) {
    Subgroup s = r->zero_subgroup();
    std::vector<Elem> pending = gens;
    while (!pending.empty()) {
        Elem v = r->reduce(std::move(pending.back()));
        pending.pop_back();
        if (!s.insert(v)) continue;
        for (std::size_t i = 0; i < r->ngens(); ++i) {
            Elem g = r->gen(i);
            if (side != Side::Right) pending.push_back(r->mul(g, v));
            if (side != Side::Left) pending.push_back(r->mul(v, g));
        }
    }
    return Ideal{r, std::move(s), side};
}

Ideal zero_ideal(const RingPtr& r) { return Ideal{r, r->zero_subgroup(), Side::Two}; }
Ideal unit_ideal(const RingPtr& r) { return Ideal{r, r->whole(), Side::Two}; }

bool is_closed(const RingPtr& r, const Subgroup& s, Side side) {
    for (const auto& b : s.generators())
        for (std::size_t i = 0; i < r->ngens(); ++i) {
            Elem g = r->gen(i);
            if (side != Side::Right && !s.contains(r->mul(g, b))) return false;
            if (side != Side::Left && !s.contains(r->mul(b, g))) return false;
        }
    return true;
}

Subgroup product_span(const RingPtr& r, const Subgroup& a, const Subgroup& b) {
    Subgroup s = r->zero_subgroup();
    auto gb = b.generators();
    for (const auto& x : a.generators())
        for (const auto& y : gb) s.insert(r->mul(x, y));
    return s;
}

bool same_parent(const Ideal& a, const Ideal& b) { return a.parent == b.parent || (a.parent && b.parent && a.parent.get() == b.parent.get()); }

Ideal ideal_product(const Ideal& a, const Ideal& b) {
    if (!same_parent(a, b)) fail(ErrorKind::ParentMismatch, "ideals of different rings");
    Subgroup s = product_span(a.parent, a.sub, b.sub);
    Side side = Side::Two;
    if (a.side != Side::Two || b.side != Side::Two) {
        bool l = is_closed(a.parent, s, Side::Left), rr = is_closed(a.parent, s, Side::Right);
        side = l && rr ? Side::Two : (l ? Side::Left : Side::Right);
    }
    return Ideal{a.parent, std::move(s), side};
}

Ideal ideal_power(const Ideal& a, unsigned t) {
    if (t == 0) return unit_ideal(a.parent);
    Ideal p = a;
    for (unsigned i = 1; i < t; ++i) p = ideal_product(p, a);
    return p;
}

Ideal ideal_sum(const Ideal& a, const Ideal& b) {
    if (!same_parent(a, b)) fail(ErrorKind::ParentMismatch, "ideals of different rings");
    Subgroup s = a.sub;
    s.insert_all(b.sub);
    Side side = a.side == b.side ? a.side : Side::Two;
    if (a.side != b.side) {
        bool l = is_closed(a.parent, s, Side::Left), rr = is_closed(a.parent, s, Side::Right);
        side = l && rr ? Side::Two : (l ? Side::Left : Side::Right);
    }
    return Ideal{a.parent, std::move(s), side};
}

Ideal colon_ideal(const Ideal& I, const Ideal& J) {
    if (!same_parent(I, J)) fail(ErrorKind::ParentMismatch, "colon of ideals in different rings");
    const RingPtr& r = I.parent;
    Subquotient qj(r->whole(), J.sub);
    auto gi = I.basis();
    LinMap f;
    f.src = r->orders();
    for (std::size_t b = 0; b < gi.size(); ++b) f.dst.insert(f.dst.end(), qj.orders().begin(), qj.orders().end());
    for (std::size_t j = 0; j < r->ngens(); ++j) {
        Vec img;
        Elem g = r->gen(j);
        for (const auto& b : gi) {
            Vec c = qj.coords(r->mul(b, g));
            img.insert(img.end(), c.begin(), c.end());
        }
        f.images.push_back(img);
    }
    Subgroup k = f.dst.empty() ? r->whole() : kernel(f);
    Side side = Side::Two;
    if (I.side != Side::Two || J.side != Side::Two) {
        bool l = is_closed(r, k, Side::Left), rr = is_closed(r, k, Side::Right);
        side = l && rr ? Side::Two : (l ? Side::Left : Side::Right);
    }
    return Ideal{r, std::move(k), side};
}

RingHom::RingHom(RingPtr src, RingPtr dst, std::vector<Elem> images, bool unital)
    : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)) {
    const std::size_t k = src_->ngens();
    if (images_.size() != k) fail(ErrorKind::InvalidArgument, "ring map needs one image per generator");
    for (auto& im : images_) {
        if (im.size() != dst_->ngens()) fail(ErrorKind::InvalidArgument, "ring map image has wrong length");
        im = dst_->reduce(std::move(im));
    }
    for (std::size_t i = 0; i < k; ++i)
        if (!dst_->is_zero(dst_->scale(images_[i], src_->orders()[i])))
            fail(ErrorKind::InvalidArgument, "ring map ignores the order of generator " + std::to_string(i));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if ((*this)(src_->table(i, j)) != dst_->mul(images_[i], images_[j]))
                fail(ErrorKind::InvalidArgument,
                     "ring map not multiplicative on generators " + gens_str({i, j}));
    if (unital && (*this)(src_->one()) != dst_->one())
        fail(ErrorKind::InvalidArgument, "ring map does not preserve the identity");
}

RingHom RingHom::identity(const RingPtr& r) {
    std::vector<Elem> im;
    for (std::size_t i = 0; i < r->ngens(); ++i) im.push_back(r->gen(i));
    return RingHom(r, r, im);
}

Elem RingHom::operator()(const Elem& a) const { return linear_image(images_, dst_->orders(), a); }

LinMap RingHom::linear() const { return LinMap{src_->orders(), dst_->orders(), images_}; }

Subgroup RingHom::kernel_subgroup() const { return kernel(linear()); }
Subgroup RingHom::image_subgroup() const { return image(linear()); }
bool RingHom::is_surjective() const { return image_subgroup().is_whole(); }
bool RingHom::is_injective() const { return kernel_subgroup().is_zero(); }

RingHom RingHom::then(const RingHom& other) const {
    if (other.src_.get() != dst_.get()) fail(ErrorKind::InvalidArgument, "composition of incompatible ring maps");
    std::vector<Elem> im;
    for (const auto& x : images_) im.push_back(other(x));
    return RingHom(src_, other.dst_, im, false);
}

Quotient quotient_ring(const Ideal& I) {
    const RingPtr& r = I.parent;
    if (!is_closed(r, I.sub, Side::Two)) fail(ErrorKind::NotTwoSided, "quotient by an ideal that is not two-sided");
    Subquotient q(r->whole(), I.sub);
    const std::size_t k = q.dim();
    std::vector<Elem> basis;
    for (std::size_t a = 0; a < k; ++a) {
        Vec z(k, 0);
        z[a] = 1;
        basis.push_back(q.embed(z));
    }
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) t[a][b] = q.coords(r->mul(basis[a], basis[b]));
    RingPtr qr = make_ring(q.orders(), std::move(t), q.coords(r->one()));
    std::vector<Elem> im;
    for (std::size_t i = 0; i < r->ngens(); ++i) im.push_back(q.coords(r->gen(i)));
    return Quotient{qr, RingHom(r, qr, im), q};
}

SubringResult ring_on_subgroup(const RingPtr& r, const Subgroup& s, const Elem& one) {
    Subquotient q(s, r->zero_subgroup());
    const std::size_t k = q.dim();
    std::vector<Elem> basis;
    for (std::size_t a = 0; a < k; ++a) {
        Vec z(k, 0);
        z[a] = 1;
        basis.push_back(q.embed(z));
    }
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            Elem p = r->mul(basis[a], basis[b]);
            if (!s.contains(p)) fail(ErrorKind::InvalidArgument, "subgroup is not closed under multiplication");
            t[a][b] = q.coords(p);
        }
    if (!s.contains(one)) fail(ErrorKind::InvalidArgument, "identity candidate outside the subgroup");
    RingPtr sr = make_ring(q.orders(), std::move(t), q.coords(one));
    bool unital = r->reduce(one) == r->one();
    return SubringResult{sr, RingHom(sr, r, basis, unital)};
}

}  // namespace kmatrix
