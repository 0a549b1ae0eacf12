#include "unfold/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace unfold {

std::vector<QQi> CanonicalForm::tuple(int j) const {
    std::vector<QQi> t;
    for (int i = k(); i >= 0; --i) t.push_back(H[i][j]);
    return t;
}

void CanonicalForm::validate() const {
    if (n < 1) throw std::invalid_argument("canonical form: n must be positive");
    if (H.empty()) throw std::invalid_argument("canonical form: no coefficients");
    for (auto& h : H)
        if (static_cast<int>(h.size()) != n) throw std::invalid_argument("canonical form: coefficient length");
    if (J0.rows != n || J0.cols != n) throw std::invalid_argument("canonical form: J0 shape");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (J0(a, b).is_zero()) continue;
            if (a >= b) throw std::invalid_argument("canonical form: J0 must be strictly upper triangular");
            if (tuple(a) != tuple(b)) throw std::invalid_argument("canonical form: J0 does not commute with H");
        }
}

CanonicalForm CanonicalForm::make(int n, std::vector<std::vector<QQi>> h, Mat<QQi> j0) {
    CanonicalForm f;
    f.n = n;
    f.H = std::move(h);
    f.J0 = (j0.rows == 0) ? Mat<QQi>(n, n) : std::move(j0);
    f.validate();
    return f;
}

static bool tuple_before(const std::vector<QQi>& a, const std::vector<QQi>& b) {
    for (size_t l = 0; l < a.size(); ++l) {
        if (a[l] == b[l]) continue;
        return precedes(a[l], b[l]);
    }
    return false;
}

SortedForm sort_with_permutation(const CanonicalForm& h) {
    std::vector<std::vector<QQi>> tuples;
    for (int j = 0; j < h.n; ++j) tuples.push_back(h.tuple(j));
    std::vector<int> perm(h.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return tuple_before(tuples[a], tuples[b]); });
    SortedForm s;
    s.perm = perm;
    s.form.n = h.n;
    s.form.H.assign(h.H.size(), std::vector<QQi>(h.n));
    for (size_t i = 0; i < h.H.size(); ++i)
        for (int j = 0; j < h.n; ++j) s.form.H[i][j] = h.H[i][perm[j]];
    s.form.J0 = Mat<QQi>(h.n, h.n);
    for (int a = 0; a < h.n; ++a)
        for (int b = 0; b < h.n; ++b) s.form.J0(a, b) = h.J0(perm[a], perm[b]);
    return s;
}

CanonicalForm sort_to_fundamental_domain(const CanonicalForm& h) { return sort_with_permutation(h).form; }

bool is_sorted_form(const CanonicalForm& h) {
    for (int j = 0; j + 1 < h.n; ++j)
        if (tuple_before(h.tuple(j + 1), h.tuple(j))) return false;
    return true;
}

std::vector<int> level_composition(const CanonicalForm& h, int i) {
    std::vector<int> comp;
    int cur = 1;
    for (int j = 0; j + 1 < h.n; ++j) {
        bool same = true;
        for (int l = i; l <= h.k(); ++l)
            if (h.H[l][j] != h.H[l][j + 1]) { same = false; break; }
        if (same) ++cur;
        else { comp.push_back(cur); cur = 1; }
    }
    comp.push_back(cur);
    return comp;
}

std::vector<int> jordan_type(const Mat<QQi>& j, int lo, int size) {
    Mat<QQi> b(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) b(r, c) = j(lo + r, lo + c);
    // ranks of powers: r[m] = rank(b^m)
    std::vector<int> r{size};
    Mat<QQi> p = Mat<QQi>::identity(size);
    while (r.back() > 0) {
        p = p * b;
        int rk = rank(p);
        if (rk == r.back()) throw std::invalid_argument("jordan_type: matrix is not nilpotent");
        r.push_back(rk);
    }
    // number of blocks of size >= m is r[m-1] - r[m]
    std::vector<int> atleast;
    for (size_t m = 1; m < r.size(); ++m) atleast.push_back(r[m - 1] - r[m]);
    std::vector<int> part;
    for (size_t m = 0; m < atleast.size(); ++m) {
        int next = (m + 1 < atleast.size()) ? atleast[m + 1] : 0;
        for (int t = 0; t < atleast[m] - next; ++t) part.push_back(static_cast<int>(m) + 1);
    }
    std::sort(part.rbegin(), part.rend());
    return part;
}

AbstractSpectralType spectral_type_of(const CanonicalForm& h) {
    if (!is_sorted_form(h)) throw std::invalid_argument("spectral_type_of: form is not sorted");
    std::vector<SimpleSubset> levels;  // top to bottom
    for (int i = h.k(); i >= 0; --i) levels.push_back(composition_to_subset(level_composition(h, i)));
    auto comp = level_composition(h, 0);
    NilpotentOrbitLabel lab;
    int lo = 0;
    for (int b : comp) {
        lab.push_back(jordan_type(h.J0, lo, b));
        lo += b;
    }
    return make_gl_type(h.n, levels, lab);
}

bool is_nonresonant(const CanonicalForm& h) {
    auto comp = level_composition(h, 1);
    int lo = 0;
    for (int b : comp) {
        for (int x = lo; x < lo + b; ++x)
            for (int y = x + 1; y < lo + b; ++y) {
                QQi d = h.H[0][x] - h.H[0][y];
                if (!d.is_zero() && d.is_integer()) return false;
            }
        lo += b;
    }
    return true;
}

Mat<QQi> residue(const CanonicalForm& h) {
    Mat<QQi> r = h.J0;
    for (int j = 0; j < h.n; ++j) r(j, j) += h.H[0][j];
    return r;
}

}  // namespace unfold
