#pragma once
// Shared test inputs: the Heun and GL(4) families and random canonical forms.

#include <random>
#include <vector>

#include "unfold/canonical.hpp"
#include "unfold/spectral.hpp"
#include "unfold/strata.hpp"

namespace fx {

using namespace unfold;

inline QQi q(long long a, long long b = 1) { return QQi(Rational(a, b)); }
inline QQi qi(long long a, long long b, long long c, long long d) { return QQi(Rational(a, b), Rational(c, d)); }

// GL2: empty subset only.
inline AbstractSpectralType gl2(int levels) {
    return make_gl_type(2, std::vector<SimpleSubset>(levels, 0));
}

inline SpectralCollection heun() { return {gl2(1), gl2(1), gl2(1), gl2(1)}; }
inline SpectralCollection confluent_heun() { return {gl2(1), gl2(1), gl2(2)}; }
inline SpectralCollection doubly_confluent_heun() { return {gl2(2), gl2(2)}; }
inline SpectralCollection biconfluent_heun() { return {gl2(1), gl2(3)}; }
inline SpectralCollection triconfluent_heun() { return {gl2(4)}; }

// GL4 with A = {e12,e34}, B = {e12}.
constexpr SimpleSubset A = 0b101, B = 0b001;
inline AbstractSpectralType g4(std::vector<SimpleSubset> top_to_bottom) { return make_gl_type(4, top_to_bottom); }

inline SpectralCollection gl4_fuchsian() { return {g4({A}), g4({A}), g4({A}), g4({B})}; }
inline SpectralCollection gl4_confluent1() { return {g4({A, A}), g4({A}), g4({B})}; }
inline SpectralCollection gl4_confluent2() { return {g4({A}), g4({A}), g4({A, B})}; }
inline SpectralCollection gl4_doubly() { return {g4({A, A}), g4({A, B})}; }
inline SpectralCollection gl4_biconfluent1() { return {g4({A, A, A}), g4({B})}; }
inline SpectralCollection gl4_biconfluent2() { return {g4({A}), g4({A, A, B})}; }
inline SpectralCollection gl4_triconfluent() { return {g4({A, A, A, B})}; }

inline CanonicalForm triconfluent_heun_form() {
    return CanonicalForm::make(2, {{q(1, 3), q(-1, 3)}, {q(-1), q(3)}, {q(2), q(1, 2)}, {q(1), q(-1)}});
}

inline CanonicalForm gl4_triconfluent_form() {
    return CanonicalForm::make(4, {{q(1, 4), q(1, 4), q(1, 2), q(-1)},
                                   {q(1, 2), q(1, 2), q(3), q(3)},
                                   {q(1), q(1), q(-1), q(-1)},
                                   {q(2), q(2), q(1), q(1)}});
}

/// Random sorted form with frequent coordinate coincidences and an optional J0.
inline CanonicalForm random_form(std::mt19937_64& rng, int n, int k, bool with_j0 = true) {
    std::uniform_int_distribution<int> small(-2, 2), coin(0, 2), den(1, 3);
    std::vector<std::vector<QQi>> h(k + 1, std::vector<QQi>(n));
    for (int i = k; i >= 0; --i)
        for (int j = 0; j < n; ++j) {
            // copy the previous coordinate at this level sometimes to create ties
            if (j > 0 && coin(rng) == 0) h[i][j] = h[i][j - 1];
            else if (coin(rng) == 0) h[i][j] = qi(small(rng), 1, small(rng), den(rng));
            else h[i][j] = q(small(rng), den(rng));
        }
    CanonicalForm f = sort_to_fundamental_domain(CanonicalForm::make(n, h));
    if (with_j0 && coin(rng) == 0) {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (f.tuple(a) == f.tuple(b) && coin(rng) != 0) f.J0(a, b) = q(small(rng));
        f.validate();
    }
    return f;
}

}  // namespace fx
