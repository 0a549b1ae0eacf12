#pragma once
// Triangular coordinates on (deformed) truncated orbits of GL_n and the moment map.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "unfold/canonical.hpp"
#include "unfold/laurent.hpp"

namespace unfold {

template <class T>
using MatPoly = TruncPoly<T, Mat<T>>;
template <class T>
using MatPP = PrincipalPart<T, Mat<T>>;

using Support = std::vector<std::pair<int, int>>;

/// Block structure of the Levi chain L_1 <= ... <= L_{k+1} = G of a sorted form.
struct LevelStructure {
    int n = 0, k = 0;
    std::vector<std::vector<int>> block;  // block[l][i], l = 1..k+1 (index 0 unused)
    std::vector<Support> nsupp;           // nsupp[l], l = 1..k: strictly lower entries of n_{l,l+1}
    std::vector<Support> usupp;           // transposes
    Support l1;                           // entries of the Lie algebra of L_1

    explicit LevelStructure(const CanonicalForm& h);
    int dim_n(int l) const { return static_cast<int>(nsupp.at(l).size()); }
};

template <class T>
struct TriangularCoords {
    Mat<T> g;
    std::vector<std::vector<Mat<T>>> X;   // X[l-1][m-1]: coefficient of N_m in n_l
    std::vector<std::vector<Mat<T>>> nu;  // nu[l-1][m-1]: coefficient of 1/((z-c_l)...(z-c_m))
    Mat<T> h;                             // element of L_1
};

/// Flat parameter layout of the chart, used by solvers.
struct ChartLayout {
    LevelStructure lev;
    explicit ChartLayout(const CanonicalForm& h) : lev(h) {}
    size_t size() const;

    template <class T>
    TriangularCoords<T> unpack(const std::vector<T>& p) const;
    template <class T>
    std::vector<T> pack(const TriangularCoords<T>& t) const;
    /// Identity point: g = h = 1, all nilpotent and u-parts zero.
    template <class T>
    TriangularCoords<T> identity() const;
};

struct SupportViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---- exponentials and factorizations ----

template <class T>
bool is_zero_poly(const MatPoly<T>& x) {
    for (auto& m : x.f)
        if (!m.is_zero_matrix()) return false;
    return true;
}

template <class T>
MatPoly<T> identity_poly(const std::vector<T>& c, int n) {
    MatPoly<T> e{c, std::vector<Mat<T>>(c.size(), Mat<T>(n, n))};
    e.f[0] = Mat<T>::identity(n);
    return e;
}

/// exp(X) in Gamma(c)_l for X with nilpotent matrix coefficients; a finite sum.
template <class T>
MatPoly<T> exp_nilpotent(const MatPoly<T>& x) {
    int n = x.f[0].rows;
    auto r = identity_poly(x.c, n);
    auto term = r;
    int cap = n * static_cast<int>(x.f.size()) + 1;
    for (int p = 1; p <= cap; ++p) {
        term = mul_gamma(term, x);
        T inv = T(1) / T(p);
        for (auto& m : term.f) m *= inv;
        if (is_zero_poly(term)) return r;
        for (size_t i = 0; i < r.f.size(); ++i) r.f[i] += term.f[i];
    }
    throw std::invalid_argument("exp_nilpotent: argument is not nilpotent");
}

/// Inverse of exp_nilpotent for unipotent u.
template <class T>
MatPoly<T> log_unipotent(const MatPoly<T>& u) {
    int n = u.f[0].rows;
    MatPoly<T> y = u;
    y.f[0] -= Mat<T>::identity(n);
    MatPoly<T> r{u.c, std::vector<Mat<T>>(u.f.size(), Mat<T>(n, n))};
    auto term = y;
    int cap = n * static_cast<int>(u.f.size()) + 1;
    for (int p = 1; p <= cap; ++p) {
        if (is_zero_poly(term)) return r;
        T coef = T(p % 2 ? 1 : -1) / T(p);
        for (size_t i = 0; i < r.f.size(); ++i) r.f[i] += coef * term.f[i];
        term = mul_gamma(term, y);
    }
    throw std::invalid_argument("log_unipotent: argument is not unipotent");
}

/// X = sum_{m <= l} X_m N_m as an element of Gamma(c)_k, k+1 = |c|.
/// Exponentials must be taken there: modulo Q_l alone, e^X e^{-X} = 1 fails on b_i, i > l.
template <class T>
MatPoly<T> nilpotent_elem(const std::vector<Mat<T>>& xm, const std::vector<T>& c, int l, const Support* supp = nullptr) {
    int n = xm.empty() ? 0 : xm[0].rows;
    MatPoly<T> x{c, std::vector<Mat<T>>(c.size(), Mat<T>(n, n))};
    for (int m = 1; m <= l; ++m) {
        const auto& xmat = xm.at(m - 1);
        if (supp) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (is_zero(xmat(i, j))) continue;
                    if (std::find(supp->begin(), supp->end(), std::make_pair(i, j)) == supp->end())
                        throw SupportViolation("nilpotent element outside its support");
                }
        }
        x.f[m] = xmat;
    }
    return x;
}

/// Graded factors Z_1..Z_l with g = e^{Z_l z^l} ... e^{Z_1 z} over C[z]_l.
template <class T>
std::vector<Mat<T>> factor_graded(const MatPoly<T>& g) {
    int n = g.f[0].rows, l = g.l();
    for (auto& x : g.c)
        if (!is_zero(x)) throw std::invalid_argument("factor_graded: expects the undeformed ring C[z]_l");
    if (!(g.f[0] == Mat<T>::identity(n))) throw std::invalid_argument("factor_graded: input is not unipotent");
    MatPoly<T> cur = g;
    std::vector<Mat<T>> z;
    for (int s = 1; s <= l; ++s) {
        Mat<T> zs = cur.f[s];
        z.push_back(zs);
        MatPoly<T> e{g.c, std::vector<Mat<T>>(l + 1, Mat<T>(n, n))};
        e.f[s] = -zs;
        cur = mul_gamma(cur, exp_nilpotent(e));
    }
    return z;
}

template <class T>
MatPoly<T> graded_product(const std::vector<Mat<T>>& z, const std::vector<T>& c) {
    int n = z.empty() ? 1 : z[0].rows, l = static_cast<int>(c.size()) - 1;
    auto r = identity_poly(c, n);
    for (int s = l; s >= 1; --s) {
        MatPoly<T> e{c, std::vector<Mat<T>>(l + 1, Mat<T>(n, n))};
        e.f[s] = z.at(s - 1);
        r = mul_gamma(r, exp_nilpotent(e));
    }
    return r;
}

using Mask = std::vector<std::vector<bool>>;

/// g = g1 g2 with g_i in exp(h_i (z C[z]_l)) for a direct-sum split of gl_n into subalgebras.
template <class T>
std::pair<MatPoly<T>, MatPoly<T>> decompose_lu(const MatPoly<T>& g, const Mask& h1, const Mask& h2) {
    int n = g.f[0].rows, l = g.l();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (h1[i][j] == h2[i][j]) throw std::invalid_argument("decompose_lu: masks are not a direct-sum split");
    for (const Mask* m : {&h1, &h2})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int t = 0; t < n; ++t)
                    if ((*m)[i][j] && (*m)[j][t] && !(*m)[i][t])
                        throw std::invalid_argument("decompose_lu: mask is not a subalgebra");
    for (auto& x : g.c)
        if (!is_zero(x)) throw std::invalid_argument("decompose_lu: expects the undeformed ring C[z]_l");
    if (!(g.f[0] == Mat<T>::identity(n))) throw std::invalid_argument("decompose_lu: input is not unipotent");
    auto g1 = identity_poly(g.c, n), g2 = identity_poly(g.c, n);
    for (int s = 1; s <= l; ++s) {
        auto prod = mul_gamma(g1, g2);
        Mat<T> r = g.f[s] - prod.f[s];
        MatPoly<T> e1{g.c, std::vector<Mat<T>>(l + 1, Mat<T>(n, n))}, e2 = e1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) (h1[i][j] ? e1.f[s] : e2.f[s])(i, j) = r(i, j);
        g1 = mul_gamma(g1, exp_nilpotent(e1));
        g2 = mul_gamma(exp_nilpotent(e2), g2);
    }
    return {g1, g2};
}

// ---- orbit points ----

template <class T>
MatPP<T> conjugate_const(const Mat<T>& g, const Mat<T>& ginv, MatPP<T> x) {
    for (auto& m : x.g) m = g * m * ginv;
    return x;
}

/// Ad*(exp X) xi = exp(X) xi exp(-X) computed in L(c)_k.
template <class T>
MatPP<T> coadjoint_exp(const MatPoly<T>& x, const MatPP<T>& xi) {
    auto e = exp_nilpotent(x);
    MatPoly<T> mx = x;
    for (auto& m : mx.f) m = -m;
    auto einv = exp_nilpotent(mx);
    return act_right(act(e, xi), einv);
}

/// H_irr(c) + Ad(h)(H_res) b_0 on the nodes c_0..c_k.
template <class T>
MatPP<T> eta_tilde(const Mat<T>& h, const CanonicalForm& H, const std::vector<T>& c) {
    int n = H.n, k = H.k();
    MatPP<T> eta{c, std::vector<Mat<T>>(k + 1, Mat<T>(n, n))};
    for (int i = 1; i <= k; ++i)
        for (int j = 0; j < n; ++j) eta.g[i](j, j) = scalar_from<T>(H.H[i][j]);
    Mat<T> res = mat_cast<QQi, T>(residue(H));
    eta.g[0] = h * res * inverse(h);
    return eta;
}

template <class T>
MatPP<T> upart(const std::vector<Mat<T>>& nul, const std::vector<T>& c, int l, int n) {
    MatPP<T> u{c, std::vector<Mat<T>>(c.size(), Mat<T>(n, n))};
    for (int m = 1; m <= l; ++m) {
        auto rb = reversed_basis(c, m, l);
        for (size_t j = 0; j < c.size(); ++j)
            if (!is_zero(rb.g[j])) u.g[j] += rb.g[j] * nul.at(m - 1);
    }
    return u;
}

template <class T>
void check_coords(const TriangularCoords<T>& t, const CanonicalForm& H) {
    int n = H.n, k = H.k();
    if (t.g.rows != n || t.h.rows != n || static_cast<int>(t.X.size()) != k || static_cast<int>(t.nu.size()) != k)
        throw std::invalid_argument("triangular coordinates: shape mismatch");
    for (int l = 1; l <= k; ++l)
        if (static_cast<int>(t.X[l - 1].size()) != l || static_cast<int>(t.nu[l - 1].size()) != l)
            throw std::invalid_argument("triangular coordinates: level sizes");
}

/// The inductive orbit point iota(Xi) in gl_n(L(c)_k).
template <class T>
MatPP<T> eval_orbit_point(const TriangularCoords<T>& t, const CanonicalForm& H, const std::vector<T>& c,
                          const LevelStructure* lev = nullptr) {
    check_coords(t, H);
    int n = H.n, k = H.k();
    if (static_cast<int>(c.size()) != k + 1) throw std::invalid_argument("eval_orbit_point: parameter length");
    auto iota = eta_tilde(t.h, H, c);
    for (int l = 1; l <= k; ++l) {
        auto xi = iota + upart(t.nu[l - 1], c, l, n);
        auto x = nilpotent_elem(t.X[l - 1], c, l, lev ? &lev->nsupp[l] : nullptr);
        iota = coadjoint_exp(x, xi);
    }
    return conjugate_const(t.g, inverse(t.g), iota);
}

template <class T>
Mat<T> moment(const TriangularCoords<T>& t, const CanonicalForm& H, const std::vector<T>& c) {
    return total_residue(eval_orbit_point(t, H, c));
}

/// The same orbit point at c = 0 computed with plain Laurent series in z.
template <class T>
std::vector<Mat<T>> eval_orbit_point_undeformed(const TriangularCoords<T>& t, const CanonicalForm& H) {
    int n = H.n, k = H.k();
    check_coords(t, H);
    using Series = std::vector<Mat<T>>;  // coefficients of z^0..z^k
    auto smul = [&](const Series& a, const Series& b) {
        Series r(k + 1, Mat<T>(n, n));
        for (int i = 0; i <= k; ++i)
            for (int j = 0; i + j <= k; ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    auto sexp = [&](const Series& x) {
        Series r(k + 1, Mat<T>(n, n)), term(k + 1, Mat<T>(n, n));
        r[0] = term[0] = Mat<T>::identity(n);
        for (int p = 1; p <= n * (k + 1); ++p) {
            term = smul(term, x);
            for (auto& m : term) m *= T(1) / T(p);
            for (int i = 0; i <= k; ++i) r[i] += term[i];
        }
        return r;
    };
    // principal part: P[i] is the coefficient of z^{-i-1}
    auto conj = [&](const Series& e, const Series& einv, const Series& p) {
        Series r(k + 1, Mat<T>(n, n));
        for (int i = 0; i <= k; ++i)
            for (int a = 0; a <= k; ++a)
                for (int b = 0; i + a + b <= k; ++b) r[i] += e[a] * p[i + a + b] * einv[b];
        return r;
    };
    Series iota(k + 1, Mat<T>(n, n));
    for (int i = 1; i <= k; ++i)
        for (int j = 0; j < n; ++j) iota[i](j, j) = scalar_from<T>(H.H[i][j]);
    iota[0] = t.h * mat_cast<QQi, T>(residue(H)) * inverse(t.h);
    for (int l = 1; l <= k; ++l) {
        for (int m = 1; m <= l; ++m) iota[l - m] += t.nu[l - 1][m - 1];  // 1/z^{l-m+1}
        Series x(k + 1, Mat<T>(n, n)), mx(k + 1, Mat<T>(n, n));
        for (int m = 1; m <= l; ++m) {
            x[m] = t.X[l - 1][m - 1];
            mx[m] = -x[m];
        }
        iota = conj(sexp(x), sexp(mx), iota);
    }
    Mat<T> gi = inverse(t.g);
    for (auto& m : iota) m = t.g * m * gi;
    return iota;
}

/// (chart parameter count, delta(H)) for a sorted form.
std::pair<int, int> dim_check(const CanonicalForm& H);

// ---- stratum fibers ----

struct PoleReport {
    Complex pole;
    int order = 0;
    bool ok = false;
    double max_error = 0;
    std::vector<std::vector<Complex>> expected, got;  // coordinate tuples, top level first
};

struct FiberReport {
    bool ok = false;
    std::vector<PoleReport> poles;
};

/// Formal-reduction invariants of a principal part sum_nu A_nu w^{-nu-1}:
/// one coordinate tuple (a_{m-1}, ..., a_0) per basis direction.
std::vector<std::vector<Complex>> formal_tuples(const std::vector<Mat<Complex>>& coeffs, double tol = 1e-7);

/// Compares tuples as multisets; returns the largest mismatch (infinity if unmatched).
double match_tuples(const std::vector<std::vector<Complex>>& a, const std::vector<std::vector<Complex>>& b);

FiberReport check_principal_parts(const std::vector<std::vector<Mat<Complex>>>& per_pole,
                                  const std::vector<Complex>& poles, const CanonicalForm& H,
                                  const std::vector<QQi>& c, double tol);

FiberReport decompose_fiber(const TriangularCoords<Complex>& t, const CanonicalForm& H, const std::vector<QQi>& c,
                            double tol = 1e-8);

// ---- ChartLayout templates ----

template <class T>
TriangularCoords<T> ChartLayout::unpack(const std::vector<T>& p) const {
    int n = lev.n, k = lev.k;
    size_t pos = 0;
    TriangularCoords<T> t;
    t.g = Mat<T>(n, n);
    for (auto& x : t.g.a) x = p.at(pos++);
    t.X.resize(k);
    t.nu.resize(k);
    for (int l = 1; l <= k; ++l) {
        for (int m = 1; m <= l; ++m) {
            Mat<T> x(n, n);
            for (auto [i, j] : lev.nsupp[l]) x(i, j) = p.at(pos++);
            t.X[l - 1].push_back(x);
        }
        for (int m = 1; m <= l; ++m) {
            Mat<T> u(n, n);
            for (auto [i, j] : lev.usupp[l]) u(i, j) = p.at(pos++);
            t.nu[l - 1].push_back(u);
        }
    }
    t.h = Mat<T>(n, n);
    for (auto [i, j] : lev.l1) t.h(i, j) = p.at(pos++);
    return t;
}

template <class T>
std::vector<T> ChartLayout::pack(const TriangularCoords<T>& t) const {
    std::vector<T> p(t.g.a.begin(), t.g.a.end());
    for (int l = 1; l <= lev.k; ++l) {
        for (int m = 1; m <= l; ++m)
            for (auto [i, j] : lev.nsupp[l]) p.push_back(t.X[l - 1][m - 1](i, j));
        for (int m = 1; m <= l; ++m)
            for (auto [i, j] : lev.usupp[l]) p.push_back(t.nu[l - 1][m - 1](i, j));
    }
    for (auto [i, j] : lev.l1) p.push_back(t.h(i, j));
    return p;
}

template <class T>
TriangularCoords<T> ChartLayout::identity() const {
    std::vector<T> p(size(), T(0));
    auto t = unpack(p);
    t.g = Mat<T>::identity(lev.n);
    t.h = Mat<T>::identity(lev.n);
    return t;
}

}  // namespace unfold
