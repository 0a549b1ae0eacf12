#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "unfold/strata.hpp"

using namespace unfold;
using namespace fx;

namespace {

// H(c) evaluated at a point z directly from its defining product denominators.
Mat<QQi> eval_unfolded(const CanonicalForm& h, const std::vector<QQi>& c, const QQi& z) {
    Mat<QQi> r(h.n, h.n);
    QQi den(1);
    for (int i = 0; i <= h.k(); ++i) {
        den *= (z - c[i]);
        Mat<QQi> m = Mat<QQi>::diag(h.H[i]);
        if (i == 0) m += h.J0;
        r += m * (QQi(1) / den);
    }
    return r;
}

// The decomposition re-summed at z, with the stored (unsorted) coefficients.
Mat<QQi> eval_pieces(const UnfoldedDecomposition& d, int n, const QQi& z) {
    Mat<QQi> r(n, n);
    for (auto& p : d.pieces) {
        QQi w = QQi(1) / (z - p.pole), pw = w;
        for (auto& a : p.coeffs) {
            r += a * pw;
            pw *= w;
        }
    }
    return r;
}

}  // namespace

TEST(Strata, PartitionCounts) {
    EXPECT_EQ(partitions(0).size(), 1u);
    EXPECT_EQ(partitions(1).size(), 2u);
    EXPECT_EQ(partitions(3).size(), 15u);
    EXPECT_EQ(partitions(4).size(), 52u);
    for (auto& p : partitions(4)) {
        auto q2 = p;
        q2.normalize(5);
        EXPECT_EQ(q2, p);
    }
}

TEST(Strata, Refines) {
    auto fin = SetPartition::finest(3), triv = SetPartition::trivial(3);
    for (auto& p : partitions(2)) {
        EXPECT_TRUE(refines(fin, p));
        EXPECT_TRUE(refines(p, triv));
    }
    auto a = SetPartition::parse("{0,1}{2}"), b = SetPartition::parse("{0,2}{1}");
    EXPECT_TRUE(refines(a, triv));
    EXPECT_FALSE(refines(a, b));
    EXPECT_FALSE(refines(b, a));
    EXPECT_THROW(refines(a, SetPartition::finest(4)), std::invalid_argument);
    EXPECT_EQ(SetPartition::parse("0,1|2,3").str(), "{0,1}{2,3}");
}

TEST(Strata, StratumOf) {
    EXPECT_EQ(stratum_of({q(0), q(1), q(2)}), SetPartition::finest(3));
    EXPECT_EQ(stratum_of({q(5), q(5), q(5)}), SetPartition::trivial(3));
    EXPECT_EQ(stratum_of({q(0), q(1), q(0), q(1)}).str(), "{0,2}{1,3}");
}

TEST(Strata, HyperplanePolysK1) {
    auto h = CanonicalForm::make(2, {{q(3), q(1)}, {q(2), q(-1)}});  // alpha(H0) = 2, alpha(H1) = 3
    auto ps = hyperplane_polys(h);
    ASSERT_EQ(ps.size(), 2u);
    EXPECT_EQ(ps[0].level, 0);
    EXPECT_EQ(ps[0].d, 1);
    Poly f0{{{0, 0}, q(3)}, {{1, 0}, q(2)}, {{0, 1}, q(-2)}};
    Poly f1{{{0, 0}, q(3)}};
    EXPECT_EQ(ps[0].poly, f0);
    EXPECT_EQ(ps[1].poly, f1);
    for (auto& p : ps) EXPECT_EQ(eval_poly(p.poly, {q(0), q(0)}), q(3));
    EXPECT_TRUE(in_BH(h, {q(0), q(0)}));
    // root of f0: 2(x0 - x1) + 3 = 0
    EXPECT_FALSE(in_BH(h, {q(-3, 2), q(0)}));
    EXPECT_TRUE(in_BH(h, {q(-1), q(0)}));
}

TEST(Strata, HyperplanePolysDegenerate) {
    auto reg = CanonicalForm::make(2, {{q(1), q(0)}});
    EXPECT_TRUE(hyperplane_polys(reg).empty() || hyperplane_polys(reg).size() == 1);
    EXPECT_TRUE(in_BH(reg, {q(7)}));
    // all coefficients of the heun form evaluated at 0 equal alpha(H_d)
    auto h = triconfluent_heun_form();
    for (auto& p : hyperplane_polys(h)) EXPECT_EQ(eval_poly(p.poly, std::vector<QQi>(4, q(0))), q(2));
}

TEST(Strata, PartialFractionsTwoPoles) {
    auto h = CanonicalForm::make(2, {{q(1, 2), q(-1, 3)}, {q(2), q(-1)}});
    QQi c1 = q(3);
    auto d = partial_fractions(h, {q(0), c1});
    ASSERT_EQ(d.pieces.size(), 2u);
    EXPECT_EQ(d.pieces[0].coeffs[0](0, 0), q(1, 2) - q(2) / c1);
    EXPECT_EQ(d.pieces[1].coeffs[0](1, 1), q(-1) / c1);
    EXPECT_EQ(d.pieces[1].pole, c1);
}

TEST(Strata, TrivialStratumIsTranslate) {
    auto h = gl4_triconfluent_form();
    QQi g = qi(1, 2, 1, 3);
    auto d = partial_fractions(h, std::vector<QQi>(4, g));
    ASSERT_EQ(d.pieces.size(), 1u);
    EXPECT_EQ(d.pieces[0].pole, g);
    for (int nu = 0; nu <= 3; ++nu) EXPECT_EQ(d.pieces[0].coeffs[nu], Mat<QQi>::diag(h.H[nu]));
}

TEST(Strata, ResummationAndResidues) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        int n = 1 + static_cast<int>(rng() % 4), k = static_cast<int>(rng() % 5);
        auto h = random_form(rng, n, k);
        auto parts = partitions(k);
        auto p = parts[rng() % parts.size()];
        auto c = sample_stratum(h, p, static_cast<unsigned>(rng()));
        auto d = partial_fractions(h, c);
        Mat<QQi> rs(n, n);
        for (auto& pc : d.pieces) rs += pc.coeffs[0];
        EXPECT_EQ(rs, residue(h));
        for (int s = 0; s < k + 3; ++s) {
            QQi z = qi(static_cast<long long>(s) * 7 + 101, 13, s + 1, 5);
            EXPECT_EQ(eval_unfolded(h, c, z), eval_pieces(d, n, z));
        }
        for (size_t j = 0; j < d.pieces.size(); ++j)
            EXPECT_EQ(d.pieces[j].coeffs.size(), d.stratum.blocks[j].size());
    }
}

TEST(Strata, HeunWorkedStrata) {
    auto h = triconfluent_heun_form();
    auto check = [&](const char* part, const SpectralCollection& expect) {
        auto p = SetPartition::parse(part);
        auto c = sample_stratum(h, p, 5);
        auto r = verify_spectral_decomposition(h, c);
        ASSERT_TRUE(r.ok) << part << " " << (r.mismatch ? r.mismatch->got : "");
        EXPECT_EQ(canonicalize(r.collection), canonicalize(expect)) << part;
    };
    check("{0}{1}{2,3}", confluent_heun());
    check("{0,1}{2,3}", doubly_confluent_heun());
    check("{0}{1,2,3}", biconfluent_heun());
    check("{0,1,2,3}", triconfluent_heun());
    check("{0}{1}{2}{3}", heun());
}

TEST(Strata, Gl4WorkedStrata) {
    auto h = gl4_triconfluent_form();
    auto check = [&](const char* part, const SpectralCollection& expect) {
        auto p = SetPartition::parse(part);
        auto c = sample_stratum(h, p, 9);
        auto r = verify_spectral_decomposition(h, c);
        ASSERT_TRUE(r.ok) << part;
        EXPECT_EQ(canonicalize(r.collection), canonicalize(expect)) << part;
    };
    check("{0,1}{2,3}", gl4_doubly());
    check("{0}{1,2,3}", gl4_biconfluent1());
    check("{0,1,2}{3}", gl4_biconfluent2());
    check("{0}{1}{2,3}", gl4_confluent1());
    check("{0,1}{2}{3}", gl4_confluent2());
    check("{0}{1}{2}{3}", gl4_fuchsian());
}

TEST(Strata, DeltaSums) {
    auto h = triconfluent_heun_form();
    auto c = sample_stratum(h, SetPartition::finest(4), 1);
    EXPECT_EQ(delta_sum_check(h, c), std::make_pair(8, 8));
    auto g = gl4_triconfluent_form();
    auto cg = sample_stratum(g, SetPartition::finest(4), 1);
    EXPECT_EQ(delta_sum_check(g, cg), std::make_pair(34, 34));
    auto d = partial_fractions(g, cg);
    std::vector<int> ds;
    for (auto& p : d.pieces) ds.push_back(delta(spectral_type_of(p.form)));
    std::sort(ds.begin(), ds.end());
    EXPECT_EQ(ds, (std::vector<int>{8, 8, 8, 10}));
    EXPECT_EQ(delta_sum_check(g, std::vector<QQi>(4, q(2))), std::make_pair(34, 34));
}

TEST(Strata, OffBHIsDetected) {
    // c on a hypersurface f = 0 can break the corollary; verification must flag it
    auto h = CanonicalForm::make(2, {{q(3), q(1)}, {q(2), q(-1)}});
    std::vector<QQi> c{q(-3, 2), q(0)};
    EXPECT_FALSE(in_BH(h, c));
    auto r = verify_spectral_decomposition(h, c);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.mismatch.has_value());
}

TEST(Strata, Sampling) {
    auto h = gl4_triconfluent_form();
    for (auto& p : partitions(3)) {
        auto c = sample_stratum(h, p, 42);
        EXPECT_EQ(stratum_of(c), p);
        EXPECT_TRUE(in_BH(h, c));
        EXPECT_EQ(sample_stratum(h, p, 42), c);
    }
}

TEST(Strata, AllPartitionsRandomForms) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + static_cast<int>(rng() % 4), k = static_cast<int>(rng() % 5);
        auto h = random_form(rng, n, k);
        auto sp = spectral_type_of(h);
        for (auto& p : partitions(k)) {
            auto c = sample_stratum(h, p, static_cast<unsigned>(t));
            auto r = verify_spectral_decomposition(h, c);
            ASSERT_TRUE(r.ok) << p.str() << " " << to_string(sp) << " " << (r.mismatch ? r.mismatch->reason : "");
            auto ds = delta_sum_check(h, c);
            EXPECT_EQ(ds.first, ds.second);
        }
    }
}

// A point that passes the simple-root hypersurface test but where two
// non-adjacent coordinates of one piece coincide; delta constancy fails there.
TEST(Strata, SimpleRootsAloneAreNotEnough) {
    auto P = [](const char* s) { return QQi::parse(s); };
    auto h = CanonicalForm::make(4, {{P("2-i"), P("1+2 i"), P("1+2 i"), P("-1")},
                                     {P("1"), P("-2"), P("2+1/3 i"), P("2+1/3 i")},
                                     {P("-1"), P("1/3"), P("1/3"), P("-1")},
                                     {P("0"), P("-2"), P("2-1/3 i"), P("0")},
                                     {P("1"), P("1"), P("-1/3"), P("-1")}});
    ASSERT_TRUE(is_sorted_form(h));
    std::vector<QQi> c{P("4"), P("1"), P("-4/3"), P("-1/3"), P("-4/3")};
    EXPECT_TRUE(in_BH(h, c, RootSet::Simple));
    EXPECT_FALSE(in_BH(h, c, RootSet::Positive));
    auto ds = delta_sum_check(h, c);
    EXPECT_NE(ds.first, ds.second);
}
