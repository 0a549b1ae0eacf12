#pragma once
// The deformed truncated ring Gamma(c)_l = C[z]/<prod (z - c_i)> and its module
// L(c)_l of principal parts, both in standard bases.
//
// TruncPoly:     f = sum_j f_j N_j,  N_j = (z - c_0)...(z - c_{j-1})
// PrincipalPart: g = sum_j g_j b_j,  b_j = 1 / ((z - c_0)...(z - c_j))
//
// Coefficients may be scalars or matrices (V); node values are scalars (T).

#include <stdexcept>
#include <vector>

#include "unfold/matrix.hpp"

namespace unfold {

template <class T>
T zero_like(const T&) {
    return T(0);
}
template <class T>
Mat<T> zero_like(const Mat<T>& m) {
    return Mat<T>(m.rows, m.cols);
}

template <class T, class V = T>
struct TruncPoly {
    std::vector<T> c;  // nodes c_0..c_l
    std::vector<V> f;  // f_0..f_l
    int l() const { return static_cast<int>(f.size()) - 1; }
};

template <class T, class V = T>
struct PrincipalPart {
    std::vector<T> c;
    std::vector<V> g;
    int l() const { return static_cast<int>(g.size()) - 1; }
};

/// Per-block data at a point p: Taylor coefficients (ring) or the coefficients
/// of (z-p)^{-nu-1}, nu = 0..m-1 (module).
template <class V>
struct LocalPart {
    std::vector<V> coeffs;
};

struct ParameterMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class T>
void check_prefix(const std::vector<T>& short_c, const std::vector<T>& long_c) {
    if (short_c.size() > long_c.size()) throw ParameterMismatch("laurent: parameter mismatch");
    for (size_t i = 0; i < short_c.size(); ++i)
        if (!(short_c[i] == long_c[i])) throw ParameterMismatch("laurent: parameter mismatch");
}

// (z - c_nu) * f in the Newton basis, reduced modulo N_{l+1}.
template <class T, class V>
std::vector<V> newton_shift(const std::vector<V>& f, const std::vector<T>& c, const T& cnu) {
    std::vector<V> r(f.size(), zero_like(f[0]));
    for (size_t j = 0; j < f.size(); ++j) {
        if (j + 1 < f.size()) r[j + 1] += f[j];
        r[j] += (c[j] - cnu) * f[j];
    }
    return r;
}

// (z - c_nu) * g in the b basis; z b_m = b_{m-1} + c_m b_m and b_{-1} is polynomial.
template <class T, class V>
std::vector<V> pp_shift(const std::vector<V>& g, const std::vector<T>& c, const T& cnu) {
    std::vector<V> r(g.size(), zero_like(g[0]));
    for (size_t m = 0; m < g.size(); ++m) {
        if (m >= 1) r[m - 1] += g[m];
        r[m] += (c[m] - cnu) * g[m];
    }
    return r;
}

}  // namespace detail

template <class T, class V>
TruncPoly<T, V> mul_gamma(const TruncPoly<T, V>& a, const TruncPoly<T, V>& b) {
    if (a.c != b.c || a.f.size() != b.f.size()) throw ParameterMismatch("mul_gamma: parameter mismatch");
    int l = a.l();
    auto times = [&](const V& x) {
        std::vector<V> r;
        for (auto& y : b.f) r.push_back(x * y);
        return r;
    };
    std::vector<V> r = times(a.f[l]);
    for (int j = l - 1; j >= 0; --j) {
        r = detail::newton_shift(r, a.c, a.c[j]);
        auto t = times(a.f[j]);
        for (size_t i = 0; i < r.size(); ++i) r[i] += t[i];
    }
    return {a.c, r};
}

/// f . xi with f acting from the left (for matrices, f xi).
template <class T, class V>
PrincipalPart<T, V> act(const TruncPoly<T, V>& f, const PrincipalPart<T, V>& xi) {
    detail::check_prefix(f.c, xi.c);
    int l = f.l();
    auto times = [&](const V& x) {
        std::vector<V> r;
        for (auto& y : xi.g) r.push_back(x * y);
        return r;
    };
    std::vector<V> r = times(f.f[l]);
    for (int j = l - 1; j >= 0; --j) {
        r = detail::pp_shift(r, xi.c, f.c[j]);
        auto t = times(f.f[j]);
        for (size_t i = 0; i < r.size(); ++i) r[i] += t[i];
    }
    return {xi.c, r};
}

/// xi . f with f acting from the right (for matrices, xi f).
template <class T, class V>
PrincipalPart<T, V> act_right(const PrincipalPart<T, V>& xi, const TruncPoly<T, V>& f) {
    detail::check_prefix(f.c, xi.c);
    int l = f.l();
    auto times = [&](const V& x) {
        std::vector<V> r;
        for (auto& y : xi.g) r.push_back(y * x);
        return r;
    };
    std::vector<V> r = times(f.f[l]);
    for (int j = l - 1; j >= 0; --j) {
        r = detail::pp_shift(r, xi.c, f.c[j]);
        auto t = times(f.f[j]);
        for (size_t i = 0; i < r.size(); ++i) r[i] += t[i];
    }
    return {xi.c, r};
}

template <class T, class V>
V total_residue(const PrincipalPart<T, V>& g) {
    return g.g.at(0);
}

template <class T, class V>
V pairing(const TruncPoly<T, V>& f, const PrincipalPart<T, V>& g) {
    if (f.c != g.c || f.f.size() != g.g.size()) throw ParameterMismatch("pairing: parameter mismatch");
    V s = f.f[0] * g.g[0];
    for (size_t i = 1; i < f.f.size(); ++i) s += f.f[i] * g.g[i];
    return s;
}

template <class T, class V>
PrincipalPart<T, V> operator+(PrincipalPart<T, V> a, const PrincipalPart<T, V>& b) {
    for (size_t i = 0; i < a.g.size(); ++i) a.g[i] += b.g[i];
    return a;
}

// ---- evaluation (used by oracles) ----

template <class T, class V>
V eval(const TruncPoly<T, V>& f, const T& z) {
    V r = f.f.back();
    for (int j = f.l() - 1; j >= 0; --j) r = f.f[j] + (z - f.c[j]) * r;
    return r;
}

template <class T, class V>
V eval(const PrincipalPart<T, V>& g, const T& z) {
    V r = zero_like(g.g[0]);
    T den(1);
    for (size_t j = 0; j < g.g.size(); ++j) {
        den *= (z - g.c[j]);
        r += (T(1) / den) * g.g[j];
    }
    return r;
}

// ---- monomial conversions ----

/// Monomial coefficients (ascending powers) of a Newton-basis polynomial.
template <class T, class V>
std::vector<V> to_monomial(const std::vector<V>& f, const std::vector<T>& c) {
    // Horner: p = f_l; p = f_j + (z - c_j) p
    std::vector<V> p{f.back()};
    for (int j = static_cast<int>(f.size()) - 2; j >= 0; --j) {
        std::vector<V> q(p.size() + 1, zero_like(f[0]));
        for (size_t t = 0; t < p.size(); ++t) {
            q[t + 1] += p[t];
            q[t] -= c[j] * p[t];
        }
        q[0] += f[j];
        p = std::move(q);
    }
    return p;
}

/// Divides p by (z - a): returns remainder, replaces p with the quotient.
template <class T, class V>
V synthetic_divide(std::vector<V>& p, const T& a) {
    if (p.size() == 1) {
        V r = p[0];
        p[0] = zero_like(r);
        return r;
    }
    std::vector<V> q(p.size() - 1, zero_like(p[0]));
    V carry = p.back();
    for (int t = static_cast<int>(p.size()) - 2; t >= 0; --t) {
        q[t] = carry;
        carry = p[t] + a * carry;
    }
    p = std::move(q);
    return carry;
}

/// Newton coefficients on nodes c_0..c_{l} of a polynomial of degree <= l.
template <class T, class V>
std::vector<V> from_monomial(std::vector<V> p, const std::vector<T>& c, int l) {
    std::vector<V> f;
    V z = zero_like(p[0]);
    p.resize(std::max<size_t>(p.size(), 1), z);
    for (int j = 0; j <= l; ++j) f.push_back(synthetic_divide(p, c[j]));
    return f;
}

/// Numerator P with g = P / prod_{nu<=l}(z - c_nu); monomial coefficients.
template <class T, class V>
std::vector<V> to_numerator(const PrincipalPart<T, V>& g) {
    int l = g.l();
    // P = g_l + (z - c_l)(g_{l-1} + (z - c_{l-1})(... + (z - c_1) g_0))
    std::vector<V> p{g.g[0]};
    for (int j = 1; j <= l; ++j) {
        std::vector<V> q(p.size() + 1, zero_like(g.g[0]));
        for (size_t t = 0; t < p.size(); ++t) {
            q[t + 1] += p[t];
            q[t] -= g.c[j] * p[t];
        }
        q[0] += g.g[j];
        p = std::move(q);
    }
    return p;
}

template <class T, class V>
PrincipalPart<T, V> from_numerator(std::vector<V> p, const std::vector<T>& c) {
    int l = static_cast<int>(c.size()) - 1;
    if (static_cast<int>(p.size()) > l + 1) throw std::invalid_argument("from_numerator: degree too large");
    V z = zero_like(p[0]);
    p.resize(l + 1, z);
    std::vector<V> g(l + 1, z);
    for (int j = l; j >= 1; --j) g[j] = synthetic_divide(p, c[j]);
    g[0] = p.empty() ? z : p[0];
    return {c, g};
}

// ---- Chinese remainder splitting ----

struct StratumBlocks {
    std::vector<std::vector<int>> blocks;  // equality classes of the nodes, by first index
};

template <class T>
StratumBlocks node_blocks(const std::vector<T>& c) {
    StratumBlocks s;
    std::vector<bool> used(c.size(), false);
    for (size_t i = 0; i < c.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> b;
        for (size_t j = i; j < c.size(); ++j)
            if (!used[j] && c[j] == c[i]) { used[j] = true; b.push_back(static_cast<int>(j)); }
        s.blocks.push_back(b);
    }
    return s;
}

template <class T>
bool is_zero_value(const T& x) {
    return is_zero(x);
}
template <class T>
bool is_zero_value(const Mat<T>& x) {
    return x.is_zero_matrix();
}

namespace detail {

// First m Taylor coefficients of p at a.
template <class T, class V>
std::vector<V> taylor_at(std::vector<V> p, const T& a, int m) {
    std::vector<V> out;
    V z = zero_like(p[0]);
    for (int t = 0; t < m; ++t) {
        if (p.empty()) { out.push_back(z); continue; }
        out.push_back(synthetic_divide(p, a));
    }
    return out;
}

template <class T>
std::vector<T> poly_from_roots(const std::vector<T>& roots) {
    std::vector<T> p{T(1)};
    for (auto& r : roots) {
        std::vector<T> q(p.size() + 1, T(0));
        for (size_t t = 0; t < p.size(); ++t) {
            q[t + 1] += p[t];
            q[t] -= r * p[t];
        }
        p = std::move(q);
    }
    return p;
}

}  // namespace detail

/// Images under the projections to C[z - p]_{m-1}, one per block of equal nodes.
template <class T, class V>
std::vector<LocalPart<V>> crt_split(const TruncPoly<T, V>& f) {
    auto blocks = node_blocks(f.c);
    auto mono = to_monomial(f.f, f.c);
    std::vector<LocalPart<V>> out;
    for (auto& b : blocks.blocks)
        out.push_back({detail::taylor_at(mono, f.c[b.front()], static_cast<int>(b.size()))});
    return out;
}

/// Partial-fraction components, one per block of equal nodes.
template <class T, class V>
std::vector<LocalPart<V>> crt_split(const PrincipalPart<T, V>& g) {
    auto blocks = node_blocks(g.c);
    auto num = to_numerator(g);
    std::vector<LocalPart<V>> out;
    for (auto& b : blocks.blocks) {
        const T& p = g.c[b.front()];
        int m = static_cast<int>(b.size());
        std::vector<T> others;
        for (size_t i = 0; i < g.c.size(); ++i)
            if (!(g.c[i] == p)) others.push_back(g.c[i]);
        auto r = detail::taylor_at(detail::poly_from_roots(others), p, m);
        auto s = detail::taylor_at(num, p, m);
        // series quotient s / r up to w^{m-1}
        std::vector<V> qt;
        for (int t = 0; t < m; ++t) {
            V acc = s[t];
            for (int u = 0; u < t; ++u) acc -= r[t - u] * qt[u];
            qt.push_back((T(1) / r[0]) * acc);
        }
        LocalPart<V> lp;
        for (int nu = 0; nu < m; ++nu) lp.coeffs.push_back(qt[m - 1 - nu]);
        out.push_back(std::move(lp));
    }
    return out;
}

/// Inverse of crt_split on the ring (Hermite interpolation by an exact linear solve).
template <class T, class V>
TruncPoly<T, V> crt_join_gamma(const std::vector<LocalPart<V>>& parts, const std::vector<T>& c) {
    int n = static_cast<int>(c.size());
    Mat<T> m(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<T> e(n, T(0));
        e[j] = T(1);
        auto sp = crt_split(TruncPoly<T, T>{c, e});
        int r = 0;
        for (auto& lp : sp)
            for (auto& x : lp.coeffs) m(r++, j) = x;
    }
    Mat<T> inv = inverse(m);
    std::vector<V> data;
    for (auto& lp : parts)
        for (auto& x : lp.coeffs) data.push_back(x);
    if (static_cast<int>(data.size()) != n) throw ParameterMismatch("crt_join: block data size");
    std::vector<V> f(n, zero_like(data[0]));
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r) f[j] += inv(j, r) * data[r];
    return {c, f};
}

/// Inverse of crt_split on the module: sums the components over a common denominator.
template <class T, class V>
PrincipalPart<T, V> crt_join_module(const std::vector<LocalPart<V>>& parts, const std::vector<T>& c) {
    auto blocks = node_blocks(c);
    if (blocks.blocks.size() != parts.size()) throw ParameterMismatch("crt_join: block count");
    V z = zero_like(parts[0].coeffs[0]);
    std::vector<V> num(c.size(), z);
    for (size_t j = 0; j < parts.size(); ++j) {
        const T& p = c[blocks.blocks[j].front()];
        int m = static_cast<int>(blocks.blocks[j].size());
        std::vector<T> others;
        for (auto& x : c)
            if (!(x == p)) others.push_back(x);
        for (int nu = 0; nu < m; ++nu) {
            // a_nu (z-p)^{-nu-1} = a_nu (z-p)^{m-1-nu} R(z) / Q(z)
            std::vector<T> roots = others;
            for (int t = 0; t < m - 1 - nu; ++t) roots.push_back(p);
            auto poly = detail::poly_from_roots(roots);
            for (size_t t = 0; t < poly.size(); ++t) num[t] += poly[t] * parts[j].coeffs[nu];
        }
    }
    return from_numerator(num, c);
}

// ---- basis helpers ----

template <class T, class V>
TruncPoly<T, V> newton_basis(const std::vector<T>& c, int j, const V& one) {
    std::vector<V> f(c.size(), zero_like(one));
    f.at(j) = one;
    return {c, f};
}

template <class T, class V>
PrincipalPart<T, V> b_basis(const std::vector<T>& c, int j, const V& one) {
    std::vector<V> g(c.size(), zero_like(one));
    g.at(j) = one;
    return {c, g};
}

/// 1 / ((z - c_hi)(z - c_{hi-1})...(z - c_lo)) as an element of L(c) with c of length k+1.
template <class T>
PrincipalPart<T, T> reversed_basis(const std::vector<T>& c, int lo, int hi) {
    std::vector<T> prefix(c.begin(), c.begin() + lo + 1);
    auto nm = newton_basis(prefix, lo, T(1));  // N_lo = (z - c_0)...(z - c_{lo-1})
    return act(nm, b_basis(c, hi, T(1)));
}

}  // namespace unfold
