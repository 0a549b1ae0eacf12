#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "fixtures.hpp"
#include "unfold/orbit.hpp"
#include "unfold/strata.hpp"

using namespace unfold;
using fx::q;

namespace {

QQi rand_q(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> a(-3, 3), b(1, 3);
    return QQi(Rational(a(rng), b(rng)), Rational(a(rng), b(rng)));
}

template <class T>
TriangularCoords<T> random_coords(const ChartLayout& lay, std::mt19937_64& rng) {
    std::vector<QQi> p(lay.size());
    for (auto& x : p) x = rand_q(rng);
    auto t = lay.unpack(p);
    // keep g and h invertible
    for (int i = 0; i < lay.lev.n; ++i) {
        t.g(i, i) += q(7);
        t.h(i, i) += q(7);
    }
    TriangularCoords<T> r;
    r.g = mat_cast<QQi, T>(t.g);
    r.h = mat_cast<QQi, T>(t.h);
    r.X.resize(t.X.size());
    r.nu.resize(t.nu.size());
    for (size_t l = 0; l < t.X.size(); ++l) {
        for (auto& m : t.X[l]) r.X[l].push_back(mat_cast<QQi, T>(m));
        for (auto& m : t.nu[l]) r.nu[l].push_back(mat_cast<QQi, T>(m));
    }
    return r;
}

std::vector<QQi> zeros(int k) { return std::vector<QQi>(k + 1, q(0)); }

std::vector<CanonicalForm> sample_forms() {
    std::vector<CanonicalForm> f{fx::triconfluent_heun_form(), fx::gl4_triconfluent_form()};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 6; ++i) f.push_back(fx::random_form(rng, 2 + i % 3, 1 + i % 3));
    return f;
}

}  // namespace

TEST(Orbit, DimCountMatchesDelta) {
    EXPECT_EQ(dim_check(fx::triconfluent_heun_form()), std::make_pair(8, 8));
    EXPECT_EQ(dim_check(fx::gl4_triconfluent_form()), std::make_pair(34, 34));
    auto reg = CanonicalForm::make(2, {{q(1, 3), q(-1, 3)}});
    EXPECT_EQ(dim_check(reg), std::make_pair(2, 2));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        auto f = fx::random_form(rng, 1 + i % 5, i % 4);
        auto [cnt, d] = dim_check(f);
        EXPECT_EQ(cnt, d);
    }
}

TEST(Orbit, SupportsAreSubalgebraComplements) {
    LevelStructure lev(fx::gl4_triconfluent_form());
    EXPECT_EQ(lev.l1.size(), 8u);
    EXPECT_EQ(lev.dim_n(1), 0);
    EXPECT_EQ(lev.dim_n(2), 0);
    EXPECT_EQ(lev.dim_n(3), 4);
    LevelStructure heun(fx::triconfluent_heun_form());
    EXPECT_EQ(heun.dim_n(3), 1);
    EXPECT_EQ(heun.dim_n(1), 0);
}

TEST(Orbit, UndeformedAgreesWithSeriesComputation) {
    std::mt19937_64 rng(5);
    for (auto& f : sample_forms()) {
        ChartLayout lay(f);
        for (int rep = 0; rep < 3; ++rep) {
            auto t = random_coords<QQi>(lay, rng);
            auto a = eval_orbit_point(t, f, zeros(f.k()), &lay.lev);
            auto b = eval_orbit_point_undeformed(t, f);
            ASSERT_EQ(a.g.size(), b.size());
            for (size_t j = 0; j < b.size(); ++j) EXPECT_TRUE(a.g[j] == b[j]);
        }
    }
}

TEST(Orbit, TracesAreConserved) {
    std::mt19937_64 rng(6);
    for (auto& f : sample_forms()) {
        ChartLayout lay(f);
        std::vector<QQi> c;
        for (int i = 0; i <= f.k(); ++i) c.push_back(rand_q(rng));
        auto t = random_coords<QQi>(lay, rng);
        auto x = eval_orbit_point(t, f, c, &lay.lev);
        for (int j = 0; j <= f.k(); ++j) {
            QQi s(0);
            for (auto& v : f.H[j]) s += v;
            EXPECT_EQ(x.g[j].trace(), s);
        }
    }
}

TEST(Orbit, GaugeByLeviOneLeavesPointFixed) {
    std::mt19937_64 rng(7);
    for (auto& f : sample_forms()) {
        ChartLayout lay(f);
        std::vector<QQi> c;
        for (int i = 0; i <= f.k(); ++i) c.push_back(rand_q(rng));
        auto t = random_coords<QQi>(lay, rng);
        Mat<QQi> h0(f.n, f.n);
        for (auto [i, j] : lay.lev.l1) h0(i, j) = rand_q(rng);
        for (int i = 0; i < f.n; ++i) h0(i, i) += q(5);
        auto h0i = inverse(h0);
        auto t2 = t;
        t2.g = t.g * h0i;
        t2.h = h0 * t.h;
        for (auto& lv : t2.X)
            for (auto& m : lv) m = h0 * m * h0i;
        for (auto& lv : t2.nu)
            for (auto& m : lv) m = h0 * m * h0i;
        auto a = eval_orbit_point(t, f, c, &lay.lev);
        auto b = eval_orbit_point(t2, f, c, &lay.lev);
        for (size_t j = 0; j < a.g.size(); ++j) EXPECT_TRUE(a.g[j] == b.g[j]);
    }
}

TEST(Orbit, ConstantConjugationIsEquivariant) {
    std::mt19937_64 rng(8);
    auto f = fx::triconfluent_heun_form();
    ChartLayout lay(f);
    std::vector<QQi> c{q(1), q(-2), q(1), q(0)};
    auto t = random_coords<QQi>(lay, rng);
    Mat<QQi> a = Mat<QQi>::identity(2);
    a(0, 1) = q(2);
    a(1, 0) = fx::qi(1, 1, 1, 1);
    a(1, 1) = q(4);
    auto t2 = t;
    t2.g = a * t.g;
    auto x = eval_orbit_point(t, f, c);
    auto y = eval_orbit_point(t2, f, c);
    auto ai = inverse(a);
    for (size_t j = 0; j < x.g.size(); ++j) EXPECT_TRUE(y.g[j] == a * x.g[j] * ai);
    EXPECT_TRUE(moment(t2, f, c) == a * moment(t, f, c) * ai);
}

TEST(Orbit, MomentIsSumOfLocalResidues) {
    std::mt19937_64 rng(9);
    for (auto& f : sample_forms()) {
        ChartLayout lay(f);
        std::vector<QQi> c;
        for (int i = 0; i <= f.k(); ++i) c.push_back(i % 2 ? q(1) : rand_q(rng));
        auto t = random_coords<QQi>(lay, rng);
        auto x = eval_orbit_point(t, f, c);
        Mat<QQi> s(f.n, f.n);
        for (auto& p : crt_split(x)) s += p.coeffs[0];
        EXPECT_TRUE(s == moment(t, f, c));
    }
}

TEST(Orbit, OrbitPointIsPolynomialInParameters) {
    // k+1 finite differences in c of each standard coefficient vanish along a line only if
    // the coefficient is polynomial; check degree bound via an exact difference table
    std::mt19937_64 rng(10);
    auto f = fx::triconfluent_heun_form();
    ChartLayout lay(f);
    auto t = random_coords<QQi>(lay, rng);
    std::vector<QQi> c0{q(1), q(-1), q(2), q(0)}, dir{q(1), q(2), q(-1), q(3)};
    std::vector<std::vector<Mat<QQi>>> vals;
    int steps = 40;
    for (int s = 0; s <= steps; ++s) {
        std::vector<QQi> c;
        for (int i = 0; i < 4; ++i) c.push_back(c0[i] + QQi(s) * dir[i]);
        vals.push_back(eval_orbit_point(t, f, c).g);
    }
    // difference of order steps must vanish when the degree is below it
    for (int d = 0; d < steps; ++d)
        for (int s = 0; s + 1 < static_cast<int>(vals.size()); ++s)
            for (size_t j = 0; j < vals[s].size(); ++j) vals[s][j] = vals[s + 1][j] - vals[s][j];
    for (auto& m : vals[0]) EXPECT_TRUE(m.is_zero_matrix());
}

TEST(Orbit, DeformedTendsToUndeformed) {
    std::mt19937_64 rng(12);
    auto f = fx::gl4_triconfluent_form();
    ChartLayout lay(f);
    auto t = random_coords<Complex>(lay, rng);
    auto base = eval_orbit_point_undeformed(t, f);
    std::vector<Complex> dir{Complex(1, 0), Complex(-2, 1), Complex(0.5, 0), Complex(3, -1)};
    double prev = 1e300;
    for (double eps : {1e-1, 1e-3, 1e-5}) {
        std::vector<Complex> c;
        for (auto& d : dir) c.push_back(eps * d);
        auto x = eval_orbit_point(t, f, c);
        double err = 0;
        for (size_t j = 0; j < base.size(); ++j)
            for (size_t e = 0; e < base[j].a.size(); ++e) err = std::max(err, std::abs(x.g[j].a[e] - base[j].a[e]));
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-2);
}

TEST(Orbit, JacobianRankEqualsDelta) {
    std::mt19937_64 rng(13);
    auto forms = sample_forms();
    forms.push_back(CanonicalForm::make(2, {{q(1, 3), q(-1, 3)}}));
    for (auto& f : forms) {
        ChartLayout lay(f);
        auto tc = random_coords<Complex>(lay, rng);
        auto p0 = lay.pack(tc);
        for (int which = 0; which < 2; ++which) {
            std::vector<Dual> c;
            for (int i = 0; i <= f.k(); ++i)
                c.push_back(which == 0 ? Dual(0.0) : Dual(Complex(0.3 * i - 0.4, 0.17 * i * i)));
            std::vector<std::vector<Complex>> cols;
            for (size_t p = 0; p < p0.size(); ++p) {
                std::vector<Dual> pv;
                for (size_t r = 0; r < p0.size(); ++r) pv.push_back(Dual(p0[r], r == p ? 1.0 : 0.0));
                auto x = eval_orbit_point(lay.unpack(pv), f, c);
                std::vector<Complex> col;
                for (auto& m : x.g)
                    for (auto& e : m.a) col.push_back(e.d);
                cols.push_back(col);
            }
            Eigen::MatrixXcd J(cols[0].size(), cols.size());
            for (size_t p = 0; p < cols.size(); ++p)
                for (size_t r = 0; r < cols[p].size(); ++r) J(r, p) = cols[p][r];
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
            auto sv = svd.singularValues();
            int rk = 0;
            for (int i = 0; i < sv.size(); ++i)
                if (sv[i] > 1e-8 * std::max(1.0, sv[0])) ++rk;
            EXPECT_EQ(rk, dim_check(f).second) << "n=" << f.n << " k=" << f.k() << " which=" << which;
        }
    }
}

QQi det(Mat<QQi> m) {
    int n = m.rows;
    QQi d(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n && p < 0; ++r)
            if (!is_zero(m(r, c))) p = r;
        if (p < 0) return QQi(0);
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            QQi f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

TEST(Orbit, SimplePoleResiduesHaveExpectedCharacteristicPolynomial) {
    // exact: det(x - A_0) at each simple pole equals prod (x - piece residue eigenvalue)
    std::mt19937_64 rng(17);
    for (auto& f : sample_forms()) {
        ChartLayout lay(f);
        auto c = sample_stratum(f, SetPartition::finest(f.k() + 1), 3);
        auto dec = partial_fractions(f, c);
        auto t = random_coords<QQi>(lay, rng);
        auto parts = crt_split(eval_orbit_point(t, f, c));
        ASSERT_EQ(parts.size(), dec.pieces.size());
        for (size_t b = 0; b < parts.size(); ++b) {
            auto& pc = dec.pieces[b];
            for (QQi x : {q(0), q(1), fx::qi(1, 2, 1, 3), q(-5, 7)}) {
                Mat<QQi> m = Mat<QQi>::identity(f.n) * x - parts[b].coeffs[0];
                QQi expect(1);
                for (auto& lam : pc.form.H[0]) expect *= x - lam;
                EXPECT_EQ(det(m), expect);
            }
        }
    }
}

TEST(Orbit, FibersUnfoldIntoPieceOrbits) {
    std::mt19937_64 rng(14);
    std::normal_distribution<double> nd(0.0, 0.3);
    auto forms = sample_forms();
    for (auto& f : forms) {
        ChartLayout lay(f);
        for (auto& p : partitions(f.k())) {
            auto c = sample_stratum(f, p, 31);
            auto v = lay.pack(lay.identity<Complex>());
            for (auto& x : v) x += Complex(nd(rng), nd(rng));
            auto t = lay.unpack(v);
            auto rep = decompose_fiber(t, f, c, 1e-6);
            EXPECT_TRUE(rep.ok) << p.str() << " n=" << f.n << " k=" << f.k();
            for (auto& pr : rep.poles) EXPECT_LT(pr.max_error, 1e-6);
        }
    }
}

TEST(Orbit, FactorGradedRoundTrip) {
    std::mt19937_64 rng(15);
    for (int l = 1; l <= 4; ++l) {
        std::vector<Mat<QQi>> z;
        for (int s = 1; s <= l; ++s) {
            Mat<QQi> m(3, 3);
            for (auto& e : m.a) e = rand_q(rng);
            z.push_back(m);
        }
        auto c = zeros(l);
        auto g = graded_product(z, c);
        auto back = factor_graded(g);
        for (int s = 0; s < l; ++s) EXPECT_TRUE(back[s] == z[s]);
        // log/exp round trip
        auto lg = log_unipotent(g);
        auto e = exp_nilpotent(lg);
        for (int s = 0; s <= l; ++s) EXPECT_TRUE(e.f[s] == g.f[s]);
    }
    MatPoly<QQi> bad{zeros(2), std::vector<Mat<QQi>>(3, Mat<QQi>::identity(2))};
    bad.f[0](0, 0) = q(2);
    EXPECT_THROW(factor_graded(bad), std::invalid_argument);
}

TEST(Orbit, DecomposeLuRoundTrip) {
    std::mt19937_64 rng(16);
    int n = 4;
    Mask lower(n, std::vector<bool>(n)), upper = lower;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) (i > j ? lower : upper)[i][j] = true;
    for (int l = 1; l <= 3; ++l) {
        auto c = zeros(l);
        MatPoly<QQi> g = identity_poly(c, n);
        for (int s = 1; s <= l; ++s)
            for (auto& e : g.f[s].a) e = rand_q(rng);
        auto [g1, g2] = decompose_lu(g, lower, upper);
        auto prod = mul_gamma(g1, g2);
        for (int s = 0; s <= l; ++s) EXPECT_TRUE(prod.f[s] == g.f[s]);
        for (int s = 1; s <= l; ++s)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (!lower[i][j]) EXPECT_TRUE(is_zero(g1.f[s](i, j)));
                    if (!upper[i][j]) EXPECT_TRUE(is_zero(g2.f[s](i, j)));
                }
    }
    Mask bad(n, std::vector<bool>(n, true));
    EXPECT_THROW(decompose_lu(identity_poly(zeros(1), n), bad, upper), std::invalid_argument);
}

TEST(Orbit, SupportViolationsAreRejected) {
    auto f = fx::triconfluent_heun_form();
    ChartLayout lay(f);
    auto t = lay.identity<QQi>();
    t.X[0][0](1, 0) = q(1);  // n_{1,2} is empty for this form
    EXPECT_THROW(eval_orbit_point(t, f, zeros(3), &lay.lev), SupportViolation);
    auto t2 = lay.identity<QQi>();
    t2.X[2][1](1, 0) = q(1);
    EXPECT_NO_THROW(eval_orbit_point(t2, f, zeros(3), &lay.lev));
}

TEST(Orbit, IdentityPointIsTheNormalForm) {
    auto f = fx::gl4_triconfluent_form();
    ChartLayout lay(f);
    std::vector<QQi> c{q(1), q(2), q(3), q(-1)};
    auto x = eval_orbit_point(lay.identity<QQi>(), f, c);
    for (int i = 1; i <= 3; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(x.g[i](j, j), f.H[i][j]);
    EXPECT_TRUE(x.g[0] == residue(f));
}
