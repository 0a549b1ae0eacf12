#pragma once
// Set partitions, the set B_H and the unfolding H(c) with its partial fractions.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unfold/canonical.hpp"
#include "unfold/spectral.hpp"

namespace unfold {

struct SetPartition {
    std::vector<std::vector<int>> blocks;  // sorted blocks, ordered by minimum

    int ground_size() const;
    /// Block index of each element.
    std::vector<int> block_of() const;
    /// Sorts blocks and checks that they cover {0..size-1}; throws otherwise.
    void normalize(int size);

    friend bool operator==(const SetPartition& a, const SetPartition& b) { return a.blocks == b.blocks; }
    friend bool operator<(const SetPartition& a, const SetPartition& b) { return a.blocks < b.blocks; }
    std::string str() const;
    /// Parses "{0,1}{2,3}" or "0,1|2,3".
    static SetPartition parse(const std::string& s);
    static SetPartition finest(int size);
    static SetPartition trivial(int size);
};

std::vector<SetPartition> partitions(int k);
bool refines(const SetPartition& fine, const SetPartition& coarse);
/// True when `coarse` arises from `fine` by merging exactly two blocks.
bool covers(const SetPartition& fine, const SetPartition& coarse);
SetPartition stratum_of(const std::vector<QQi>& c);

/// Polynomial in x_0..x_k: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, QQi>;

struct HyperplanePoly {
    int alpha = 0;  // simple index, or -1 for a non-simple root
    int a = 0, b = 1;  // root e_a - e_b, a < b
    int level = 0;  // i
    int d = 0;      // d(alpha)
    Poly poly;
};

enum class RootSet { Simple, Positive };

/// f_alpha^{(i)} for alpha outside Pi_0; RootSet::Simple gives the simple roots only,
/// RootSet::Positive every positive root e_a - e_b not vanishing on all H_i.
std::vector<HyperplanePoly> hyperplane_polys(const CanonicalForm& h, RootSet roots = RootSet::Simple);
QQi eval_poly(const Poly& p, const std::vector<QQi>& x);
/// Membership in B_H, taken over all positive roots (the simple-root set alone
/// does not exclude coincidences between non-adjacent coordinates).
bool in_BH(const CanonicalForm& h, const std::vector<QQi>& c, RootSet roots = RootSet::Positive);
bool in_BH(const std::vector<HyperplanePoly>& polys, const std::vector<QQi>& c);

struct UnfoldedPiece {
    QQi pole;
    std::vector<int> indices;          // the block I_j
    std::vector<Mat<QQi>> coeffs;      // A_0..A_{m-1}: coefficient of (z-p)^{-nu-1}
    CanonicalForm form;                // sorted canonical form at the pole
    std::vector<int> perm;             // sorting permutation of the piece
};

struct UnfoldedDecomposition {
    std::vector<QQi> c;
    SetPartition stratum;
    std::vector<UnfoldedPiece> pieces;
};

UnfoldedDecomposition partial_fractions(const CanonicalForm& h, const std::vector<QQi>& c);

struct MismatchReport {
    int block = -1;
    std::string expected, got, reason;
};

struct SpecDecompResult {
    bool ok = false;
    SpectralCollection collection;
    std::optional<MismatchReport> mismatch;
};

SpecDecompResult verify_spectral_decomposition(const CanonicalForm& h, const std::vector<QQi>& c);
std::pair<int, int> delta_sum_check(const CanonicalForm& h, const std::vector<QQi>& c);

struct SamplingExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
std::vector<QQi> sample_stratum(const CanonicalForm& h, const SetPartition& p, unsigned seed,
                                int attempts = 200);

}  // namespace unfold
