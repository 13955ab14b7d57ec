#include "kmatrix/abgroup.hpp"

#include "kmatrix/error.hpp"

#include <algorithm>
#include <sstream>

namespace kmatrix {

namespace {

Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

// g = x*a + y*b, g >= 0
Integer xgcd(const Integer& a0, const Integer& b0, Integer& x, Integer& y) {
    Integer a = a0, b = b0, x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Integer q = a / b;
        Integer t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

Integer floor_mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

Integer floor_div(const Integer& a, const Integer& m) {
    return (a - floor_mod(a, m)) / m;
}

std::vector<Integer> normalize_orders(std::size_t& rank, const std::vector<Integer>& orders) {
    std::vector<Integer> finite;
    for (const auto& d : orders) {
        if (d < 0) fail(ErrorKind::InvalidArgument, "negative group order");
        if (d == 0)
            ++rank;
        else if (d > 1)
            finite.push_back(d);
    }
    if (finite.empty()) return {};
    IntMatrix m(finite.size(), finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) m(i, i) = finite[i];
    std::vector<Integer> out;
    for (const auto& d : snf(m).invariants())
        if (d > 1) out.push_back(d);
    return out;
}

std::string factors_str(std::size_t rank, const std::vector<Integer>& torsion, const std::string& ring) {
    std::vector<std::string> parts;
    if (rank == 1)
        parts.push_back(ring);
    else if (rank > 1)
        parts.push_back(ring + "^" + std::to_string(rank));
    for (const auto& d : torsion) parts.push_back("Z/" + d.str());
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += " ⊕ ";
        s += parts[i];
    }
    return s;
}

std::vector<Integer> coords_in_hnf(const IntMatrix& L, const std::vector<Integer>& v) {
    std::vector<Integer> rem = v, y(L.rows());
    std::size_t col = 0;
    for (std::size_t i = 0; i < L.rows(); ++i) {
        while (col < L.cols() && L(i, col) == 0) {
            if (rem[col] != 0) fail(ErrorKind::InvalidArgument, "vector outside lattice");
            ++col;
        }
        if (rem[col] % L(i, col) != 0) fail(ErrorKind::InvalidArgument, "vector outside lattice");
        y[i] = rem[col] / L(i, col);
        for (std::size_t j = col; j < L.cols(); ++j) rem[j] -= y[i] * L(i, j);
        ++col;
    }
    for (const auto& r : rem)
        if (r != 0) fail(ErrorKind::InvalidArgument, "vector outside lattice");
    return y;
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (c_ != o.r_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch in product");
    IntMatrix p(r_, o.c_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t l = 0; l < c_; ++l) {
            const Integer& a = (*this)(i, l);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.c_; ++j) p(i, j) += a * o(l, j);
        }
    return p;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<Integer> IntMatrix::row(std::size_t i) const {
    return {a_.begin() + static_cast<std::ptrdiff_t>(i * c_),
            a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c_)};
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMatrix::add_row(std::size_t i, std::size_t j, const Integer& k) {
    if (k == 0) return;
    for (std::size_t l = 0; l < c_; ++l)
        if ((*this)(j, l) != 0) (*this)(i, l) += k * (*this)(j, l);
}

void IntMatrix::add_col(std::size_t i, std::size_t j, const Integer& k) {
    if (k == 0) return;
    for (std::size_t l = 0; l < r_; ++l)
        if ((*this)(l, j) != 0) (*this)(l, i) += k * (*this)(l, j);
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t l = 0; l < c_; ++l) (*this)(i, l) = -(*this)(i, l);
}

void IntMatrix::negate_col(std::size_t i) {
    for (std::size_t l = 0; l < r_; ++l) (*this)(l, i) = -(*this)(l, i);
}

// Bareiss fraction-free elimination.
Integer determinant(const IntMatrix& m0) {
    if (m0.rows() != m0.cols()) fail(ErrorKind::InvalidArgument, "determinant of non-square matrix");
    std::size_t n = m0.rows();
    if (n == 0) return 1;
    IntMatrix m = m0;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

std::vector<Integer> SnfResult::invariants() const {
    std::vector<Integer> out;
    for (const auto& d : diagonal)
        if (d != 0) out.push_back(d);
    return out;
}

std::size_t SnfResult::rank() const { return invariants().size(); }

SnfResult snf(const IntMatrix& M) {
    const std::size_t m = M.rows(), n = M.cols();
    SnfResult r{M, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(n), {}};
    IntMatrix& D = r.D;

    auto swap_r = [&](std::size_t i, std::size_t j) {
        D.swap_rows(i, j);
        r.U.swap_rows(i, j);
    };
    auto swap_c = [&](std::size_t i, std::size_t j) {
        D.swap_cols(i, j);
        r.V.swap_cols(i, j);
        r.Vinv.swap_rows(i, j);
    };
    // row_i += k row_j
    auto add_r = [&](std::size_t i, std::size_t j, const Integer& k) {
        D.add_row(i, j, k);
        r.U.add_row(i, j, k);
    };
    // col_i += k col_j
    auto add_c = [&](std::size_t i, std::size_t j, const Integer& k) {
        D.add_col(i, j, k);
        r.V.add_col(i, j, k);
        r.Vinv.add_row(j, i, -k);
    };

    const std::size_t lim = std::min(m, n);
    for (std::size_t t = 0; t < lim; ++t) {
        bool found = false;
        std::size_t pi = t, pj = t;
        Integer best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (D(i, j) != 0 && (!found || iabs(D(i, j)) < best)) {
                    found = true;
                    best = iabs(D(i, j));
                    pi = i;
                    pj = j;
                }
        if (!found) break;
        swap_r(t, pi);
        swap_c(t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (D(i, t) != 0) {
                    add_r(i, t, -(D(i, t) / D(t, t)));
                    if (D(i, t) != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (D(t, j) != 0) {
                    add_c(j, t, -(D(t, j) / D(t, t)));
                    if (D(t, j) != 0) clean = false;
                }
            if (!clean) {
                // move the smallest remainder in row/column t to the pivot
                std::size_t bi = t, bj = t;
                Integer b = iabs(D(t, t));
                for (std::size_t i = t + 1; i < m; ++i)
                    if (D(i, t) != 0 && iabs(D(i, t)) < b) {
                        b = iabs(D(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(t, j) != 0 && iabs(D(t, j)) < b) {
                        b = iabs(D(t, j));
                        bi = t;
                        bj = j;
                    }
                swap_r(t, bi);
                swap_c(t, bj);
                continue;
            }
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        add_r(t, i, 1);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (D(t, t) < 0) {
            D.negate_row(t);
            r.U.negate_row(t);
        }
    }
    for (std::size_t i = 0; i < lim; ++i) r.diagonal.push_back(D(i, i));
    return r;
}

FgAbGroup::FgAbGroup(std::size_t free_rank, const std::vector<Integer>& orders) : rank_(free_rank) {
    torsion_ = normalize_orders(rank_, orders);
}

FgAbGroup FgAbGroup::cyclic(const Integer& n) { return FgAbGroup(0, {n}); }

Integer FgAbGroup::torsion_order() const {
    Integer p = 1;
    for (const auto& d : torsion_) p *= d;
    return p;
}

std::vector<Integer> FgAbGroup::moduli() const {
    std::vector<Integer> m(rank_, Integer(0));
    m.insert(m.end(), torsion_.begin(), torsion_.end());
    return m;
}

std::string FgAbGroup::str() const { return factors_str(rank_, torsion_, "Z"); }

LocalizedAbGroup::LocalizedAbGroup(Integer s, std::size_t rank, std::vector<Integer> torsion)
    : s_(std::move(s)), rank_(rank) {
    if (s_ < 1) fail(ErrorKind::InvalidArgument, "localization at a non-positive integer");
    std::vector<Integer> kept;
    for (const auto& d : torsion) {
        Integer c = d / part_supported_on(d, s_);
        if (c > 1) kept.push_back(c);
    }
    std::size_t extra = 0;
    torsion_ = normalize_orders(extra, kept);
}

std::string LocalizedAbGroup::str() const {
    return factors_str(rank_, torsion_, "Z[1/" + s_.str() + "]");
}

bool iso_test(const FgAbGroup& g, const FgAbGroup& h) { return g == h; }
bool iso_test(const LocalizedAbGroup& g, const LocalizedAbGroup& h) { return g == h; }

Integer part_supported_on(const Integer& d, const Integer& s) {
    if (d == 0) return 1;
    Integer rest = iabs(d), part = 1;
    for (;;) {
        Integer g = gcd(rest, s);
        if (g == 1) break;
        rest /= g;
        part *= g;
    }
    return part;
}

LocalizedAbGroup localize(const FgAbGroup& g, const Integer& s) {
    return LocalizedAbGroup(s, g.free_rank(), g.invariant_factors());
}

LocalizedAbGroup localize(const LocalizedAbGroup& g, const Integer& s) {
    return LocalizedAbGroup(g.inverted() * s / gcd(g.inverted(), s), g.free_rank(), g.torsion());
}

ModP mod_p(const FgAbGroup& g, const Integer& p) {
    if (p < 2) fail(ErrorKind::InvalidArgument, "mod_p needs p >= 2");
    std::vector<Integer> ten(g.free_rank(), p), tor;
    for (const auto& d : g.invariant_factors()) {
        Integer c = gcd(d, p);
        ten.push_back(c);
        tor.push_back(c);
    }
    return {FgAbGroup(0, ten), FgAbGroup(0, tor)};
}

FgAbGroup direct_sum(const std::vector<FgAbGroup>& gs) {
    std::size_t r = 0;
    std::vector<Integer> t;
    for (const auto& g : gs) {
        r += g.free_rank();
        t.insert(t.end(), g.invariant_factors().begin(), g.invariant_factors().end());
    }
    return FgAbGroup(r, t);
}

LocalizedAbGroup direct_sum(const std::vector<LocalizedAbGroup>& gs) {
    Integer s = 1;
    std::size_t r = 0;
    std::vector<Integer> t;
    for (const auto& g : gs) {
        s = lcm(s, g.inverted());
        r += g.free_rank();
        t.insert(t.end(), g.torsion().begin(), g.torsion().end());
    }
    return LocalizedAbGroup(s, r, t);
}

IntMatrix hnf_rows(const std::vector<std::vector<Integer>>& rows0, std::size_t cols) {
    std::vector<std::vector<Integer>> rows;
    for (const auto& r : rows0) {
        if (r.size() != cols) fail(ErrorKind::InvalidArgument, "row length mismatch in HNF");
        if (std::any_of(r.begin(), r.end(), [](const Integer& x) { return x != 0; })) rows.push_back(r);
    }
    std::size_t top = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
        // gcd-combine column c into rows[top]
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            if (rows[top][c] == 0) {
                std::swap(rows[top], rows[i]);
                continue;
            }
            Integer x, y;
            Integer a = rows[top][c], b = rows[i][c];
            Integer g = xgcd(a, b, x, y);
            Integer ag = a / g, bg = b / g;
            for (std::size_t j = c; j < cols; ++j) {
                Integer u = rows[top][j], v = rows[i][j];
                rows[top][j] = x * u + y * v;
                rows[i][j] = ag * v - bg * u;
            }
        }
        if (rows[top][c] == 0) continue;
        if (rows[top][c] < 0)
            for (auto& e : rows[top]) e = -e;
        pivots.push_back(c);
        ++top;
    }
    rows.resize(top);
    for (std::size_t i = 0; i < top; ++i) {
        std::size_t c = pivots[i];
        for (std::size_t k = 0; k < i; ++k) {
            Integer q = floor_div(rows[k][c], rows[i][c]);
            if (q == 0) continue;
            for (std::size_t j = c; j < cols; ++j) rows[k][j] -= q * rows[i][j];
        }
    }
    return IntMatrix::from_rows(rows, cols);
}

AbMap AbMap::between(const FgAbGroup& a, const FgAbGroup& b, IntMatrix m) {
    AbMap f{a.moduli(), b.moduli(), std::move(m)};
    f.check_well_defined();
    return f;
}

void AbMap::check_well_defined() const {
    if (matrix.rows() != dst.size() || matrix.cols() != src.size())
        fail(ErrorKind::InvalidArgument, "hom matrix shape does not match its groups");
    for (std::size_t j = 0; j < src.size(); ++j) {
        if (src[j] == 0) continue;
        for (std::size_t t = 0; t < dst.size(); ++t) {
            Integer v = src[j] * matrix(t, j);
            bool ok = dst[t] == 0 ? v == 0 : v % dst[t] == 0;
            if (!ok)
                fail(ErrorKind::InvalidArgument,
                     "hom not well defined at source generator " + std::to_string(j));
        }
    }
}

AbMap AbMap::compose_after(const AbMap& first) const {
    if (first.dst != src) fail(ErrorKind::InvalidArgument, "composition of incompatible homs");
    return AbMap{first.src, dst, matrix * first.matrix};
}

IntMatrix relation_lattice(const std::vector<Integer>& moduli) {
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (moduli[i] == 0) continue;
        std::vector<Integer> r(moduli.size());
        r[i] = moduli[i];
        rows.push_back(r);
    }
    return hnf_rows(rows, moduli.size());
}

IntMatrix kernel_lattice(const AbMap& f) {
    const std::size_t k = f.src.size(), l = f.dst.size();
    std::vector<std::size_t> tors;
    for (std::size_t t = 0; t < l; ++t)
        if (f.dst[t] != 0) tors.push_back(t);
    IntMatrix A(l, k + tors.size());
    for (std::size_t t = 0; t < l; ++t)
        for (std::size_t j = 0; j < k; ++j) A(t, j) = f.matrix(t, j);
    for (std::size_t s = 0; s < tors.size(); ++s) A(tors[s], k + s) = f.dst[tors[s]];
    std::vector<std::vector<Integer>> rows;
    if (l == 0) {
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Integer> e(k);
            e[j] = 1;
            rows.push_back(e);
        }
    } else {
        SnfResult s = snf(A);
        std::size_t rk = s.rank();
        for (std::size_t c = rk; c < A.cols(); ++c) {
            std::vector<Integer> v(k);
            for (std::size_t j = 0; j < k; ++j) v[j] = s.V(j, c);
            rows.push_back(v);
        }
    }
    for (std::size_t j = 0; j < k; ++j)
        if (f.src[j] != 0) {
            std::vector<Integer> e(k);
            e[j] = f.src[j];
            rows.push_back(e);
        }
    return hnf_rows(rows, k);
}

IntMatrix image_lattice(const AbMap& f) {
    const std::size_t l = f.dst.size();
    std::vector<std::vector<Integer>> rows;
    for (std::size_t j = 0; j < f.src.size(); ++j) {
        std::vector<Integer> v(l);
        for (std::size_t t = 0; t < l; ++t) v[t] = f.matrix(t, j);
        rows.push_back(v);
    }
    for (std::size_t t = 0; t < l; ++t)
        if (f.dst[t] != 0) {
            std::vector<Integer> e(l);
            e[t] = f.dst[t];
            rows.push_back(e);
        }
    return hnf_rows(rows, l);
}

bool is_injective(const AbMap& f) { return kernel_lattice(f) == relation_lattice(f.src); }

bool is_surjective(const AbMap& f) { return image_lattice(f) == IntMatrix::identity(f.dst.size()); }

bool is_exact_at(const AbMap& first, const AbMap& second) {
    if (first.dst != second.src) fail(ErrorKind::InvalidArgument, "exactness test on incompatible homs");
    return image_lattice(first) == kernel_lattice(second);
}

bool is_zero_map(const AbMap& f) { return image_lattice(f) == relation_lattice(f.dst); }

FgAbGroup lattice_quotient(const IntMatrix& L, const IntMatrix& M) {
    if (L.rows() == 0) return FgAbGroup::trivial();
    IntMatrix X(M.rows(), L.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        auto y = coords_in_hnf(L, M.row(i));
        for (std::size_t j = 0; j < L.rows(); ++j) X(i, j) = y[j];
    }
    if (M.rows() == 0) return FgAbGroup::free(L.rows());
    SnfResult s = snf(X);
    auto inv = s.invariants();
    return FgAbGroup(L.rows() - inv.size(), inv);
}

FgAbGroup kernel_group(const AbMap& f) { return lattice_quotient(kernel_lattice(f), relation_lattice(f.src)); }

FgAbGroup image_group(const AbMap& f) { return lattice_quotient(image_lattice(f), relation_lattice(f.dst)); }

FgAbGroup cokernel_group(const AbMap& f) {
    return lattice_quotient(IntMatrix::identity(f.dst.size()), image_lattice(f));
}

}  // namespace kmatrix
