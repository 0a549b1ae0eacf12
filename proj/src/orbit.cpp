#include "unfold/orbit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "unfold/strata.hpp"

namespace unfold {

namespace {

std::vector<int> block_ids(const std::vector<int>& comp) {
    std::vector<int> id;
    for (size_t b = 0; b < comp.size(); ++b)
        for (int t = 0; t < comp[b]; ++t) id.push_back(static_cast<int>(b));
    return id;
}

int sum_squares(const std::vector<int>& comp) {
    int s = 0;
    for (int b : comp) s += b * b;
    return s;
}

}  // namespace

LevelStructure::LevelStructure(const CanonicalForm& h) : n(h.n), k(h.k()) {
    if (!is_sorted_form(h)) throw std::invalid_argument("LevelStructure: form is not sorted");
    block.assign(k + 2, {});
    for (int l = 1; l <= k; ++l) block[l] = block_ids(level_composition(h, l));
    block[k + 1].assign(n, 0);
    nsupp.assign(k + 1, {});
    usupp.assign(k + 1, {});
    for (int l = 1; l <= k; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j)
                if (block[l + 1][i] == block[l + 1][j] && block[l][i] != block[l][j]) {
                    nsupp[l].push_back({i, j});
                    usupp[l].push_back({j, i});
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (block[1][i] == block[1][j]) l1.push_back({i, j});
}

size_t ChartLayout::size() const {
    size_t s = static_cast<size_t>(lev.n) * lev.n + lev.l1.size();
    for (int l = 1; l <= lev.k; ++l) s += 2 * static_cast<size_t>(l) * lev.nsupp[l].size();
    return s;
}

std::pair<int, int> dim_check(const CanonicalForm& H) {
    LevelStructure lev(H);
    int n = H.n;
    int dim_l1 = H.k() >= 1 ? sum_squares(level_composition(H, 1)) : n * n;
    int count = n * n - dim_l1;
    for (int l = 1; l <= lev.k; ++l) count += 2 * l * lev.dim_n(l);
    auto s = spectral_type_of(H);
    int cent = centralizer_dim(*s.root, subset_to_composition(n, s.pi[0]), s.nilpotent);
    count += dim_l1 - cent;
    return {count, delta(s)};
}

// ---- numerical formal reduction ----

namespace {

using EM = Eigen::MatrixXcd;

std::vector<EM> series_conj(const std::vector<EM>& b, const EM& y, int s) {
    // B(w) -> e^{Y w^s} B(w) e^{-Y w^s}, B_t the coefficient of w^{t-m}
    int m = static_cast<int>(b.size()), d = static_cast<int>(y.rows());
    auto sexp = [&](const EM& x) {
        std::vector<EM> r(m, EM::Zero(d, d)), term(m, EM::Zero(d, d));
        r[0] = term[0] = EM::Identity(d, d);
        for (int p = 1; p * s < m; ++p) {
            std::vector<EM> nt(m, EM::Zero(d, d));
            for (int t = 0; t + s < m; ++t) nt[t + s] = term[t] * x / double(p);
            term = nt;
            for (int t = 0; t < m; ++t) r[t] += term[t];
        }
        return r;
    };
    auto e = sexp(y), ei = sexp(-y);
    std::vector<EM> out(m, EM::Zero(d, d));
    for (int t = 0; t < m; ++t)
        for (int a = 0; a <= t; ++a)
            for (int c = 0; a + c <= t; ++c) out[t] += e[a] * b[t - a - c] * ei[c];
    return out;
}

void reduce(const std::vector<EM>& b, double tol, std::vector<std::vector<Complex>>& out) {
    int d = static_cast<int>(b[0].rows()), m = static_cast<int>(b.size());
    Eigen::ComplexEigenSolver<EM> es(b[0]);
    Eigen::VectorXcd ev = es.eigenvalues();
    // cluster eigenvalues
    std::vector<int> cl(d, -1);
    std::vector<Complex> centers;
    double scale = 1.0 + ev.cwiseAbs().maxCoeff();
    for (int i = 0; i < d; ++i) {
        for (size_t c = 0; c < centers.size() && cl[i] < 0; ++c)
            if (std::abs(ev[i] - centers[c]) < tol * scale) cl[i] = static_cast<int>(c);
        if (cl[i] < 0) {
            cl[i] = static_cast<int>(centers.size());
            centers.push_back(ev[i]);
        }
    }
    if (centers.size() == 1) {
        Complex lam = b[0].trace() / double(d);
        if (m == 1) {
            for (int i = 0; i < d; ++i) out.push_back({lam});
            return;
        }
        std::vector<std::vector<Complex>> sub;
        reduce(std::vector<EM>(b.begin() + 1, b.end()), tol, sub);
        for (auto& t : sub) {
            t.insert(t.begin(), lam);
            out.push_back(t);
        }
        return;
    }
    // order the eigenvector basis by cluster
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return cl[x] < cl[y]; });
    EM p(d, d);
    for (int i = 0; i < d; ++i) p.col(i) = es.eigenvectors().col(order[i]);
    EM pinv = p.inverse();
    std::vector<EM> c(m);
    for (int t = 0; t < m; ++t) c[t] = pinv * b[t] * p;
    std::vector<int> cid(d);
    std::vector<Complex> diag(d);
    for (int i = 0; i < d; ++i) {
        cid[i] = cl[order[i]];
        diag[i] = c[0](i, i);
    }
    for (int s = 1; s < m; ++s) {
        EM y = EM::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (cid[i] != cid[j]) y(i, j) = c[s](i, j) / (diag[i] - diag[j]);
        c = series_conj(c, y, s);
    }
    for (size_t cc = 0; cc < centers.size(); ++cc) {
        std::vector<int> idx;
        for (int i = 0; i < d; ++i)
            if (cid[i] == static_cast<int>(cc)) idx.push_back(i);
        std::vector<EM> sub(m, EM(idx.size(), idx.size()));
        for (int t = 0; t < m; ++t)
            for (size_t a = 0; a < idx.size(); ++a)
                for (size_t e = 0; e < idx.size(); ++e) sub[t](a, e) = c[t](idx[a], idx[e]);
        reduce(sub, tol, out);
    }
}

}  // namespace

std::vector<std::vector<Complex>> formal_tuples(const std::vector<Mat<Complex>>& coeffs, double tol) {
    if (coeffs.empty()) return {};
    int d = coeffs[0].rows, m = static_cast<int>(coeffs.size());
    std::vector<EM> b(m, EM(d, d));
    for (int t = 0; t < m; ++t)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b[t](i, j) = coeffs[m - 1 - t](i, j);
    std::vector<std::vector<Complex>> out;
    reduce(b, tol, out);
    return out;
}

double match_tuples(const std::vector<std::vector<Complex>>& a, const std::vector<std::vector<Complex>>& b) {
    const double inf = std::numeric_limits<double>::infinity();
    if (a.size() != b.size()) return inf;
    std::vector<bool> used(b.size(), false);
    double worst = 0;
    for (auto& x : a) {
        int best = -1;
        double bd = inf;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j] || b[j].size() != x.size()) continue;
            double dist = 0;
            for (size_t t = 0; t < x.size(); ++t) dist = std::max(dist, std::abs(x[t] - b[j][t]));
            if (dist < bd) { bd = dist; best = static_cast<int>(j); }
        }
        if (best < 0) return inf;
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

FiberReport check_principal_parts(const std::vector<std::vector<Mat<Complex>>>& per_pole,
                                  const std::vector<Complex>& poles, const CanonicalForm& H,
                                  const std::vector<QQi>& c, double tol) {
    auto dec = partial_fractions(H, c);
    FiberReport rep;
    rep.ok = per_pole.size() == dec.pieces.size();
    for (size_t i = 0; i < per_pole.size(); ++i) {
        PoleReport pr;
        pr.pole = poles[i];
        pr.order = static_cast<int>(per_pole[i].size());
        const UnfoldedPiece* piece = nullptr;
        for (auto& pc : dec.pieces)
            if (std::abs(to_complex(pc.pole) - poles[i]) < 1e-12) piece = &pc;
        if (piece) {
            for (int j = 0; j < piece->form.n; ++j) {
                std::vector<Complex> t;
                for (auto& x : piece->form.tuple(j)) t.push_back(to_complex(x));
                pr.expected.push_back(t);
            }
        }
        pr.got = formal_tuples(per_pole[i], std::max(tol, 1e-6));
        pr.max_error = match_tuples(pr.expected, pr.got);
        pr.ok = piece && pr.max_error < tol;
        rep.ok = rep.ok && pr.ok;
        rep.poles.push_back(pr);
    }
    return rep;
}

FiberReport decompose_fiber(const TriangularCoords<Complex>& t, const CanonicalForm& H, const std::vector<QQi>& c,
                            double tol) {
    std::vector<Complex> cc;
    for (auto& x : c) cc.push_back(to_complex(x));
    auto iota = eval_orbit_point(t, H, cc);
    auto parts = crt_split(iota);
    auto blocks = node_blocks(cc);
    std::vector<std::vector<Mat<Complex>>> per;
    std::vector<Complex> poles;
    for (size_t b = 0; b < blocks.blocks.size(); ++b) {
        per.push_back(parts[b].coeffs);
        poles.push_back(cc[blocks.blocks[b].front()]);
    }
    return check_principal_parts(per, poles, H, c, tol);
}

}  // namespace unfold
