#pragma once

// Small ring constructors shared by the unit tests.

#include "kmatrix/finring.hpp"

#include <vector>

namespace kmatrix::testing {

// Z/n[x] / (f) for monic f = x^k + c_{k-1} x^{k-1} + ... + c_0, given as
// {c_0, ..., c_{k-1}}.
inline RingPtr poly_quotient(i64 n, const std::vector<i64>& low) {
    const std::size_t k = low.size();
    // x^m for m < 2k reduced to the basis 1, x, ..., x^{k-1}
    std::vector<Vec> powers;
    for (std::size_t m = 0; m < k; ++m) {
        Vec v(k, 0);
        v[m] = 1;
        powers.push_back(v);
    }
    for (std::size_t m = k; m < 2 * k; ++m) {
        // x^m = x * x^{m-1}
        const Vec& prev = powers[m - 1];
        Vec v(k, 0);
        for (std::size_t i = 0; i + 1 < k; ++i) v[i + 1] = prev[i];
        i64 top = prev[k - 1];
        for (std::size_t i = 0; i < k; ++i) v[i] = mod64(v[i] - top * low[i], n);
        powers.push_back(v);
    }
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) t[i][j] = powers[i + j];
    Elem one(k, 0);
    one[0] = 1;
    return make_ring(Vec(k, n), t, one);
}

// Z/n[x]/(x^k)
inline RingPtr truncated_poly(i64 n, std::size_t k) { return poly_quotient(n, std::vector<i64>(k, 0)); }

inline RingPtr f4() { return poly_quotient(2, {1, 1}); }

inline RingPtr f2xf2() { return product_ring(zmod_ring(2), zmod_ring(2)); }

// Upper triangular 2x2 matrices over F_2 with basis e11, e12, e22.
inline RingPtr upper_f2() {
    std::vector<std::vector<Elem>> t(3, std::vector<Elem>(3, Elem(3, 0)));
    t[0][0] = {1, 0, 0};
    t[0][1] = {0, 1, 0};
    t[1][2] = {0, 1, 0};
    t[2][2] = {0, 0, 1};
    return make_ring({2, 2, 2}, t, {1, 0, 1});
}

// [[F_2, 0], [F_2^m, F_2]] with basis e11, m_1..m_m, e22; m_i e11 = e22 m_i = m_i.
inline RingPtr lower_f2_with(std::size_t m) {
    const std::size_t k = m + 2;
    std::vector<std::vector<Elem>> t(k, std::vector<Elem>(k, Elem(k, 0)));
    t[0][0][0] = 1;
    t[k - 1][k - 1][k - 1] = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        t[i][0][i] = 1;
        t[k - 1][i][i] = 1;
    }
    Elem one(k, 0);
    one[0] = one[k - 1] = 1;
    return make_ring(Vec(k, 2), t, one);
}

inline Elem unit_elem(std::size_t k, std::size_t i) {
    Elem e(k, 0);
    e[i] = 1;
    return e;
}

// Upper triangular F_2 matrices inside M_2(F_2).
inline RingHom upper_in_m2(const RingPtr& m2) {
    return RingHom(upper_f2(), m2, {unit_elem(4, 0), unit_elem(4, 1), unit_elem(4, 3)});
}

}  // namespace kmatrix::testing
