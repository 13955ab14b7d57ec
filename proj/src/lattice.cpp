#include "kmatrix/lattice.hpp"

#include "kmatrix/error.hpp"

namespace kmatrix {

namespace {

using i128 = __int128;

inline i64 mulmod(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

inline i64 norm(i128 v, i64 m) {
    i128 r = v % m;
    if (r < 0) r += m;
    return static_cast<i64>(r);
}

}  // namespace

Vec reduce_mod(Vec v, const Vec& d) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod64(v[i], d[i]);
    return v;
}

Subgroup::Subgroup(Vec orders) : d_(std::move(orders)), h_(d_.size(), Vec(d_.size(), 0)) {
    for (std::size_t i = 0; i < d_.size(); ++i) {
        if (d_[i] < 1) fail(ErrorKind::InvalidArgument, "additive orders must be positive");
        h_[i][i] = d_[i];
    }
}

Subgroup Subgroup::whole(Vec orders) {
    Subgroup s(std::move(orders));
    for (std::size_t i = 0; i < s.d_.size(); ++i) s.h_[i][i] = 1;
    return s;
}

Subgroup Subgroup::generated(Vec orders, const std::vector<Vec>& gens) {
    Subgroup s(std::move(orders));
    for (const auto& g : gens) s.insert(g);
    return s;
}

bool Subgroup::insert(Vec v) {
    const std::size_t k = d_.size();
    if (v.size() != k) fail(ErrorKind::InvalidArgument, "vector length does not match group");
    v = reduce_mod(std::move(v), d_);
    bool grew = false;
    for (std::size_t i = 0; i < k; ++i) {
        if (v[i] == 0) continue;
        Vec& r = h_[i];
        i64 q = v[i] / r[i];
        if (q != 0)
            for (std::size_t j = i; j < k; ++j) v[j] = norm(static_cast<i128>(v[j]) - static_cast<i128>(q) * r[j], d_[j]);
        if (v[i] == 0) continue;
        i64 x, y;
        i64 g = xgcd64(r[i], v[i], x, y);
        i64 a = v[i] / g, b = r[i] / g;
        for (std::size_t j = i; j < k; ++j) {
            i128 rj = r[j], vj = v[j];
            r[j] = norm(x * rj + y * vj, d_[j]);
            v[j] = norm(a * rj - b * vj, d_[j]);
        }
        grew = true;
    }
    if (grew) canonicalize();
    return grew;
}

bool Subgroup::insert_all(const Subgroup& o) {
    bool grew = false;
    for (const auto& g : o.generators()) grew = insert(g) || grew;
    return grew;
}

void Subgroup::canonicalize() {
    const std::size_t k = d_.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            i64 q = h_[i][j] / h_[j][j];
            if (q == 0) continue;
            for (std::size_t l = j; l < k; ++l)
                h_[i][l] = norm(static_cast<i128>(h_[i][l]) - static_cast<i128>(q) * h_[j][l], d_[l]);
        }
}

Vec Subgroup::reduce(Vec v) const {
    const std::size_t k = d_.size();
    v = reduce_mod(std::move(v), d_);
    for (std::size_t i = 0; i < k; ++i) {
        i64 q = v[i] / h_[i][i];
        if (q == 0) continue;
        for (std::size_t j = i; j < k; ++j)
            v[j] = norm(static_cast<i128>(v[j]) - static_cast<i128>(q) * h_[i][j], d_[j]);
    }
    return v;
}

bool Subgroup::contains(const Vec& v) const {
    Vec r = reduce(v);
    for (auto x : r)
        if (x != 0) return false;
    return true;
}

bool Subgroup::contains(const Subgroup& o) const {
    if (o.d_ != d_) fail(ErrorKind::ParentMismatch, "subgroups of different groups");
    for (const auto& g : o.generators())
        if (!contains(g)) return false;
    return true;
}

bool Subgroup::is_zero() const {
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (h_[i][i] != d_[i]) return false;
    return true;
}

bool Subgroup::is_whole() const {
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (h_[i][i] != 1) return false;
    return true;
}

Integer Subgroup::order() const {
    Integer n = 1;
    for (std::size_t i = 0; i < d_.size(); ++i) n *= d_[i] / h_[i][i];
    return n;
}

Integer Subgroup::index() const {
    Integer n = 1;
    for (std::size_t i = 0; i < d_.size(); ++i) n *= h_[i][i];
    return n;
}

std::vector<Vec> Subgroup::generators() const {
    std::vector<Vec> g;
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (h_[i][i] != d_[i]) g.push_back(h_[i]);
    return g;
}

Vec LinMap::apply(const Vec& x) const {
    Vec y(dst.size(), 0);
    for (std::size_t j = 0; j < images.size(); ++j) {
        if (x[j] == 0) continue;
        for (std::size_t t = 0; t < dst.size(); ++t)
            if (images[j][t] != 0) y[t] = static_cast<i64>((y[t] + static_cast<i128>(x[j]) * images[j][t]) % dst[t]);
    }
    return reduce_mod(std::move(y), dst);
}

void LinMap::check_well_defined() const {
    if (images.size() != src.size()) fail(ErrorKind::InvalidArgument, "map needs one image per generator");
    for (std::size_t j = 0; j < src.size(); ++j) {
        if (images[j].size() != dst.size()) fail(ErrorKind::InvalidArgument, "image has wrong length");
        for (std::size_t t = 0; t < dst.size(); ++t)
            if (mulmod(src[j], mod64(images[j][t], dst[t]), dst[t]) != 0)
                fail(ErrorKind::OrderInconsistency,
                     "map ignores the order of generator " + std::to_string(j));
    }
}

Subgroup kernel(const LinMap& f) {
    f.check_well_defined();
    const std::size_t k = f.src.size();
    std::vector<Vec> gens(k, Vec(k, 0));
    for (std::size_t i = 0; i < k; ++i) gens[i][i] = 1;
    Vec c(k);
    for (std::size_t t = 0; t < f.dst.size(); ++t) {
        const i64 e = f.dst[t];
        if (e == 1) continue;
        bool any = false;
        for (std::size_t i = 0; i < k; ++i) {
            i128 s = 0;
            for (std::size_t j = 0; j < k; ++j)
                if (gens[i][j] != 0 && f.images[j][t] != 0) s = (s + static_cast<i128>(gens[i][j]) * mod64(f.images[j][t], e)) % e;
            c[i] = static_cast<i64>(s);
            any = any || c[i] != 0;
        }
        if (!any) continue;
        std::size_t p = 0;
        while (c[p] == 0) ++p;
        for (std::size_t i = p + 1; i < k; ++i) {
            if (c[i] == 0) continue;
            i64 x, y;
            i64 g = xgcd64(c[p], c[i], x, y);
            i64 a = c[i] / g, b = c[p] / g;
            for (std::size_t j = 0; j < k; ++j) {
                i128 u = gens[p][j], v = gens[i][j];
                gens[p][j] = norm(x * u + y * v, f.src[j]);
                gens[i][j] = norm(a * u - b * v, f.src[j]);
            }
            c[p] = g;
            c[i] = 0;
        }
        i64 m = e / gcd64(c[p], e);
        for (std::size_t j = 0; j < k; ++j) gens[p][j] = mulmod(gens[p][j], m, f.src[j]);
    }
    return Subgroup::generated(f.src, gens);
}

Subgroup image(const LinMap& f) {
    f.check_well_defined();
    return Subgroup::generated(f.dst, f.images);
}

std::optional<Vec> solve(const LinMap& f, const Vec& b0) {
    Vec b = reduce_mod(b0, f.dst);
    i64 E = 1;
    for (std::size_t t = 0; t < b.size(); ++t) E = lcm64(E, f.dst[t] / gcd64(b[t], f.dst[t]));
    if (E == 1) return Vec(f.src.size(), 0);
    LinMap g;
    g.src.push_back(E);
    g.src.insert(g.src.end(), f.src.begin(), f.src.end());
    g.dst = f.dst;
    Vec nb(b.size());
    for (std::size_t t = 0; t < b.size(); ++t) nb[t] = mod64(-b[t], f.dst[t]);
    g.images.push_back(nb);
    g.images.insert(g.images.end(), f.images.begin(), f.images.end());
    Subgroup K = kernel(g);
    if (K.pivot(0) != 1) return std::nullopt;
    const Vec& r = K.row(0);
    return Vec(r.begin() + 1, r.end());
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    if (a.orders() != b.orders()) fail(ErrorKind::ParentMismatch, "intersection of subgroups of different groups");
    const Vec& d = a.orders();
    Subquotient qa(Subgroup::whole(d), a), qb(Subgroup::whole(d), b);
    LinMap f;
    f.src = d;
    f.dst = qa.orders();
    f.dst.insert(f.dst.end(), qb.orders().begin(), qb.orders().end());
    for (std::size_t j = 0; j < d.size(); ++j) {
        Vec e(d.size(), 0);
        e[j] = 1 % d[j];
        Vec img = qa.coords(e);
        Vec ib = qb.coords(e);
        img.insert(img.end(), ib.begin(), ib.end());
        f.images.push_back(img);
    }
    return kernel(f);
}

Subquotient::Subquotient(const Subgroup& A, const Subgroup& Z) : d_(A.orders()) {
    if (!A.contains(Z)) fail(ErrorKind::InvalidArgument, "subquotient needs Z inside A");
    const std::size_t k = d_.size();
    for (std::size_t i = 0; i < k; ++i) ha_.push_back(A.row(i));
    // X: rows of Z in the basis of A
    IntMatrix X(k, k);
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<Integer> z(Z.row(r).begin(), Z.row(r).end());
        for (std::size_t i = 0; i < k; ++i) {
            if (z[i] == 0) continue;
            Integer y = z[i] / ha_[i][i];
            X(r, i) = y;
            for (std::size_t j = i; j < k; ++j) z[j] -= y * ha_[i][j];
        }
    }
    SnfResult s = snf(X);
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < k; ++j)
        if (s.diagonal[j] != 1) keep.push_back(j);
    for (auto j : keep) sigma_.push_back(static_cast<i64>(s.diagonal[j]));
    vmod_.assign(k, Vec(keep.size(), 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < keep.size(); ++c) {
            Integer v = s.V(i, keep[c]) % sigma_[c];
            if (v < 0) v += sigma_[c];
            vmod_[i][c] = static_cast<i64>(v);
        }
    for (auto j : keep) {
        Vec e(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (s.Vinv(j, i) == 0) continue;
            for (std::size_t l = i; l < k; ++l) {
                Integer t = (s.Vinv(j, i) * ha_[i][l]) % d_[l];
                e[l] = mod64(e[l] + static_cast<i64>(t), d_[l]);
            }
        }
        emb_.push_back(e);
    }
}

Integer Subquotient::order() const { return product_of(sigma_); }

FgAbGroup Subquotient::group() const {
    std::vector<Integer> o(sigma_.begin(), sigma_.end());
    return FgAbGroup(0, o);
}

Vec Subquotient::coords(const Vec& a0) const {
    const std::size_t k = d_.size();
    Vec a = reduce_mod(a0, d_);
    Vec z(sigma_.size(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        if (a[i] % ha_[i][i] != 0) fail(ErrorKind::InvalidArgument, "element outside the subgroup");
        i64 y = a[i] / ha_[i][i];
        for (std::size_t j = i; j < k; ++j)
            a[j] = norm(static_cast<i128>(a[j]) - static_cast<i128>(y) * ha_[i][j], d_[j]);
        for (std::size_t c = 0; c < sigma_.size(); ++c)
            z[c] = static_cast<i64>((z[c] + static_cast<i128>(y) * vmod_[i][c]) % sigma_[c]);
    }
    return z;
}

Vec Subquotient::embed(const Vec& z) const {
    Vec a(d_.size(), 0);
    for (std::size_t c = 0; c < z.size(); ++c) {
        i64 zc = mod64(z[c], sigma_[c]);
        if (zc == 0) continue;
        for (std::size_t l = 0; l < d_.size(); ++l)
            a[l] = static_cast<i64>((a[l] + static_cast<i128>(zc) * emb_[c][l]) % d_[l]);
    }
    return a;
}

Integer product_of(const Vec& orders) {
    Integer n = 1;
    for (auto d : orders) n *= d;
    return n;
}

std::uint64_t mixed_index(const Vec& x, const Vec& d) {
    std::uint64_t idx = 0;
    for (std::size_t i = d.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(d[i]) + static_cast<std::uint64_t>(x[i]);
    return idx;
}

Vec mixed_digits(std::uint64_t idx, const Vec& d) {
    Vec x(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        x[i] = static_cast<i64>(idx % static_cast<std::uint64_t>(d[i]));
        idx /= static_cast<std::uint64_t>(d[i]);
    }
    return x;
}

}  // namespace kmatrix
