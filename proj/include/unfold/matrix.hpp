#pragma once
// Small dense matrices over an arbitrary field-like scalar.

#include <cassert>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unfold/scalar.hpp"

namespace unfold {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T(0)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Mat diag(const std::vector<T>& d) {
        Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    Mat& operator+=(const Mat& o) {
        assert(rows == o.rows && cols == o.cols);
        for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        assert(rows == o.rows && cols == o.cols);
        for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat& operator*=(const T& s) {
        for (auto& x : a) x *= s;
        return *this;
    }
    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
    friend Mat operator-(Mat x) {
        for (auto& v : x.a) v = -v;
        return x;
    }
    friend Mat operator*(Mat x, const T& s) { return x *= s; }
    friend Mat operator*(const T& s, Mat x) { return x *= s; }
    friend Mat operator*(const Mat& x, const Mat& y) {
        assert(x.cols == y.rows);
        Mat r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                if (is_zero(x(i, k))) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        if (x.rows != y.rows || x.cols != y.cols) return false;
        for (size_t i = 0; i < x.a.size(); ++i)
            if (!(x.a[i] == y.a[i])) return false;
        return true;
    }

    bool is_zero_matrix() const {
        for (auto& v : a)
            if (!is_zero(v)) return false;
        return true;
    }
    T trace() const {
        T t(0);
        for (int i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
        return t;
    }
    Mat transpose() const {
        Mat r(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
};

template <class T>
Mat<T> commutator(const Mat<T>& x, const Mat<T>& y) {
    return x * y - y * x;
}

template <class T, class U>
Mat<U> mat_cast(const Mat<T>& m) {
    Mat<U> r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = scalar_from<U>(m.a[i]);
    return r;
}

inline Mat<Complex> to_complex(const Mat<QQi>& m) { return mat_cast<QQi, Complex>(m); }

/// Row echelon form in place with partial pivoting by magnitude; returns rank.
/// Pivot columns are appended to `pivots` when given.
template <class T>
int row_reduce(Mat<T>& m, std::vector<int>* pivots = nullptr, double tol = 0.0) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int best = -1;
        double bm = tol;
        for (int i = r; i < m.rows; ++i) {
            double v = magnitude(m(i, c));
            if (v > bm) { bm = v; best = i; }
        }
        if (best < 0) continue;
        if (best != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(r, j), m(best, j));
        T inv = T(1) / m(r, c);
        for (int j = c; j < m.cols; ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || is_zero(m(i, c))) continue;
            T f = m(i, c);
            for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    return r;
}

template <class T>
int rank(Mat<T> m, double tol = 0.0) {
    return row_reduce(m, nullptr, tol);
}

/// Solves a x = b for square invertible a; throws if singular.
template <class T>
Mat<T> solve(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows != a.cols || a.rows != b.rows) throw std::invalid_argument("solve: shape");
    Mat<T> aug(a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug(i, j) = a(i, j);
        for (int j = 0; j < b.cols; ++j) aug(i, a.cols + j) = b(i, j);
    }
    std::vector<int> piv;
    row_reduce(aug, &piv);
    if (static_cast<int>(piv.size()) < a.rows || piv.back() >= a.cols)
        throw std::domain_error("solve: singular matrix");
    Mat<T> x(a.cols, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) x(i, j) = aug(i, a.cols + j);
    return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& a) {
    return solve(a, Mat<T>::identity(a.rows));
}

/// Dimension of the null space of m (exact for exact scalars).
template <class T>
int nullity(const Mat<T>& m) {
    return m.cols - rank(m);
}

}  // namespace unfold
