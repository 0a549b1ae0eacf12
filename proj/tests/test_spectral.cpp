#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "unfold/spectral.hpp"
#include "unfold/strata.hpp"

using namespace unfold;
using namespace fx;

TEST(Spectral, Irregularity) {
    EXPECT_EQ(irregularity(gl2(1)), 0);
    EXPECT_EQ(irregularity(gl2(4)), 6);
    EXPECT_EQ(irregularity(g4({A, A, A, B})), 24);
}

TEST(Spectral, Delta) {
    EXPECT_EQ(delta(gl2(1)), 2);
    EXPECT_EQ(delta(gl2(4)), 8);
    EXPECT_EQ(delta(g4({B})), 10);
    EXPECT_EQ(delta(g4({A})), 8);
}

TEST(Spectral, DeltaWithNilpotent) {
    // GL2 regular nilpotent residue: stabilizer dim 2, so delta = 2
    auto s = make_gl_type(2, {0b1}, {{2}});
    EXPECT_EQ(delta(s), 2);
    auto z = make_gl_type(2, {0b1});
    EXPECT_EQ(delta(z), 0);
}

TEST(Spectral, RigidityHeunFamily) {
    for (auto c : {heun(), confluent_heun(), doubly_confluent_heun(), biconfluent_heun(), triconfluent_heun()})
        EXPECT_EQ(rigidity(c), 0);
    EXPECT_EQ(moduli_dim(heun()), 2);
}

TEST(Spectral, RigidityGl4Family) {
    for (auto c : {gl4_fuchsian(), gl4_confluent1(), gl4_confluent2(), gl4_doubly(), gl4_biconfluent1(),
                   gl4_biconfluent2(), gl4_triconfluent()})
        EXPECT_EQ(rigidity(c), -2);
    EXPECT_EQ(moduli_dim(gl4_fuchsian()), 4);
}

TEST(Spectral, RigidCase) {
    // hypergeometric: three regular GL2 points, rig 2, moduli dim 0
    SpectralCollection hyp{gl2(1), gl2(1), gl2(1)};
    EXPECT_EQ(rigidity(hyp), 2);
    EXPECT_EQ(moduli_dim(hyp), 0);
    EXPECT_THROW(rigidity({}), std::invalid_argument);
}

TEST(Spectral, UnfoldExamples) {
    auto s = gl2(4);
    auto triv = unfold_spectral(s, SetPartition::trivial(4));
    ASSERT_EQ(triv.size(), 1u);
    EXPECT_EQ(triv[0], s);
    auto fin = unfold_spectral(s, SetPartition::finest(4));
    ASSERT_EQ(fin.size(), 4u);
    for (auto& t : fin) {
        EXPECT_EQ(t.k(), 0);
        EXPECT_EQ(irregularity(t), 0);
    }
    auto dc = unfold_spectral(s, SetPartition::parse("{0,1}{2,3}"));
    EXPECT_EQ(canonicalize(dc), canonicalize(doubly_confluent_heun()));
}

TEST(Spectral, UnfoldKeepsNilpotentOnBlockZero) {
    auto s = make_gl_type(2, {0b1, 0b1}, {{2}});
    auto u = unfold_spectral(s, SetPartition::finest(2));
    ASSERT_EQ(u.size(), 2u);
    EXPECT_EQ(u[0].nilpotent, (NilpotentOrbitLabel{{2}}));
    EXPECT_EQ(u[1].nilpotent, (NilpotentOrbitLabel{{1, 1}}));
}

TEST(Spectral, CanonicalizeShapes211) {
    auto s = gl2(4);
    std::vector<SpectralCollection> got;
    for (auto& p : partitions(3)) {
        std::vector<size_t> sizes;
        for (auto& b : p.blocks) sizes.push_back(b.size());
        std::sort(sizes.begin(), sizes.end());
        if (sizes == std::vector<size_t>{1, 1, 2}) got.push_back(canonicalize(unfold_spectral(s, p)));
    }
    ASSERT_EQ(got.size(), 6u);
    for (auto& g : got) EXPECT_EQ(g, got.front());
    EXPECT_EQ(got.front(), canonicalize(confluent_heun()));
    EXPECT_EQ(canonicalize(got.front()), got.front());
}

// Delta constancy and rigidity constancy over every partition, exhaustively for random types.
TEST(Spectral, DeltaConstancyAllPartitions) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5), k = static_cast<int>(rng() % 6);
        std::vector<SimpleSubset> levels;  // top to bottom, nested
        SimpleSubset cur = (n > 1) ? (rng() & ((SimpleSubset(1) << (n - 1)) - 1)) : 0;
        for (int i = 0; i <= k; ++i) {
            levels.push_back(cur);
            cur &= rng();
        }
        auto comp0 = subset_to_composition(n, levels.back());
        NilpotentOrbitLabel lab;
        for (int b : comp0) {
            // random partition of b
            std::vector<int> p;
            int left = b;
            while (left > 0) {
                int x = 1 + static_cast<int>(rng() % left);
                p.push_back(x);
                left -= x;
            }
            lab.push_back(p);
        }
        auto s = make_gl_type(n, levels, lab);
        for (auto& p : partitions(k)) {
            auto u = unfold_spectral(s, p);
            int sum = 0;
            for (auto& t : u) sum += delta(t);
            EXPECT_EQ(sum, delta(s)) << to_string(s) << " " << p.str();
            SpectralCollection orig{s, gl2(1)};
            if (n == 2) {
                SpectralCollection uc = u;
                uc.push_back(gl2(1));
                EXPECT_EQ(rigidity(uc), rigidity(orig));
            }
        }
    }
}

TEST(Spectral, Validation) {
    EXPECT_THROW(make_gl_type(4, {B, A}), std::invalid_argument);  // not nested
    EXPECT_THROW(make_gl_type(2, {0}, {{2}}), std::invalid_argument);
    EXPECT_EQ(to_string(g4({A, B})), "({e12,e34}>{e12};[0])");
}
