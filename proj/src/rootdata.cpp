#include "unfold/rootdata.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "unfold/matrix.hpp"

namespace unfold {

RootSystemData gl_root_data(int n) {
    if (n < 1) throw std::invalid_argument("gl_root_data: n must be positive");
    RootSystemData d;
    d.cartan_dim = n;
    d.group_dim = n * n;
    d.center_dim = 1;
    d.gl_n = n;
    // simple roots first so that simple[i] = i
    for (int i = 0; i + 1 < n; ++i) {
        IntVec v(n, 0);
        v[i] = 1;
        v[i + 1] = -1;
        d.roots.push_back(v);
        d.simple.push_back(i);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || j == i + 1) continue;
            IntVec v(n, 0);
            v[i] = 1;
            v[j] = -1;
            d.roots.push_back(v);
        }
    return d;
}

void RootSystemData::validate() const {
    if (group_dim != cartan_dim + static_cast<int>(roots.size()))
        throw std::invalid_argument("root data: group_dim != cartan_dim + |roots|");
    for (auto& r : roots) {
        if (static_cast<int>(r.size()) != cartan_dim)
            throw std::invalid_argument("root data: root length");
        IntVec neg(r.size());
        std::transform(r.begin(), r.end(), neg.begin(), [](long long x) { return -x; });
        if (std::find(roots.begin(), roots.end(), neg) == roots.end())
            throw std::invalid_argument("root data: not closed under negation");
    }
    if (simple.size() > 64) throw std::invalid_argument("root data: rank above 64");
    for (int s : simple)
        if (s < 0 || s >= static_cast<int>(roots.size()))
            throw std::invalid_argument("root data: simple index");
    Mat<QQi> m(static_cast<int>(simple.size()), cartan_dim);
    for (size_t i = 0; i < simple.size(); ++i)
        for (int j = 0; j < cartan_dim; ++j) m(i, j) = QQi(static_cast<long long>(roots[simple[i]][j]));
    if (unfold::rank(m) != static_cast<int>(simple.size()))
        throw std::invalid_argument("root data: simple roots dependent");
}

std::vector<IntVec> simple_coordinates(const RootSystemData& d) {
    int r = d.rank(), n = d.cartan_dim;
    // Solve sum_i x_i simple_i = root via row reduction of [S^T | root].
    std::vector<IntVec> out;
    for (auto& root : d.roots) {
        Mat<QQi> aug(n, r + 1);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < r; ++i) aug(j, i) = QQi(static_cast<long long>(d.roots[d.simple[i]][j]));
            aug(j, r) = QQi(static_cast<long long>(root[j]));
        }
        std::vector<int> piv;
        row_reduce(aug, &piv);
        if (!piv.empty() && piv.back() == r)
            throw std::invalid_argument("root data: root outside span of simple roots");
        IntVec x(r, 0);
        for (size_t p = 0; p < piv.size(); ++p) {
            const QQi& v = aug(static_cast<int>(p), r);
            if (!v.is_integer()) throw std::invalid_argument("root data: non-integral root");
            x[piv[p]] = static_cast<long long>(boost::multiprecision::numerator(v.re));
        }
        out.push_back(x);
    }
    return out;
}

int levi_dim(const RootSystemData& d, SimpleSubset s) {
    int r = d.rank();
    if (r < 64 && (s >> r) != 0) throw std::out_of_range("levi_dim: subset index out of range");
    if (d.gl_n > 0) {
        int count = 0;
        for (int b : subset_to_composition(d.gl_n, s)) count += b * (b - 1);
        return d.cartan_dim + count;
    }
    auto coords = simple_coordinates(d);
    int count = 0;
    for (auto& x : coords) {
        bool in = true;
        for (int i = 0; i < r; ++i)
            if (x[i] != 0 && !((s >> i) & 1)) { in = false; break; }
        count += in;
    }
    return d.cartan_dim + count;
}

std::vector<int> subset_to_composition(int n, SimpleSubset s) {
    std::vector<int> comp;
    int cur = 1;
    for (int i = 0; i + 1 < n; ++i) {
        if ((s >> i) & 1) ++cur;
        else { comp.push_back(cur); cur = 1; }
    }
    comp.push_back(cur);
    return comp;
}

SimpleSubset composition_to_subset(const std::vector<int>& comp) {
    SimpleSubset s = 0;
    int pos = 0;
    for (int b : comp) {
        if (b < 1) throw std::invalid_argument("composition parts must be positive");
        for (int t = 0; t + 1 < b; ++t) s |= SimpleSubset(1) << (pos + t);
        pos += b;
    }
    return s;
}

std::vector<int> conjugate_partition(const std::vector<int>& p) {
    std::vector<int> q = p;
    std::sort(q.rbegin(), q.rend());
    std::vector<int> c;
    if (q.empty()) return c;
    for (int i = 1; i <= q.front(); ++i) {
        int cnt = 0;
        for (int x : q) cnt += (x >= i);
        c.push_back(cnt);
    }
    return c;
}

NilpotentOrbitLabel zero_label(const std::vector<int>& comp) {
    NilpotentOrbitLabel j;
    for (int b : comp) j.push_back(std::vector<int>(b, 1));
    return j;
}

bool is_zero_label(const NilpotentOrbitLabel& j) {
    for (auto& p : j)
        for (int x : p)
            if (x != 1) return false;
    return true;
}

int centralizer_dim(const RootSystemData& d, const std::vector<int>& levi0,
                    const NilpotentOrbitLabel& j) {
    if (d.gl_n == 0) throw std::invalid_argument("centralizer_dim: GL_n root data required");
    if (std::accumulate(levi0.begin(), levi0.end(), 0) != d.gl_n || j.size() != levi0.size())
        throw std::invalid_argument("centralizer_dim: incompatible composition");
    int total = 0;
    for (size_t b = 0; b < levi0.size(); ++b) {
        int sum = 0;
        for (int x : j[b]) {
            if (x < 1) throw std::invalid_argument("centralizer_dim: nonpositive part");
            sum += x;
        }
        if (sum != levi0[b]) throw std::invalid_argument("centralizer_dim: partition size mismatch");
        for (int x : conjugate_partition(j[b])) total += x * x;
    }
    return total;
}

}  // namespace unfold
