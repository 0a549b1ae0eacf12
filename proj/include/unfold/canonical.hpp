#pragma once
// Unramified canonical forms over GL_n with Gaussian-rational coefficients.

#include <string>
#include <vector>

#include "unfold/matrix.hpp"
#include "unfold/spectral.hpp"

namespace unfold {

/// H = H_k/z^{k+1} + ... + H_1/z^2 + (H_0 + J0)/z, all H_i diagonal.
struct CanonicalForm {
    int n = 0;
    std::vector<std::vector<QQi>> H;  // H[i] = diagonal of H_i, i = 0..k
    Mat<QQi> J0;                      // strictly upper, supported on equal-coordinate blocks

    int k() const { return static_cast<int>(H.size()) - 1; }
    /// Coordinate tuple (h_k[j], ..., h_0[j]).
    std::vector<QQi> tuple(int j) const;
    /// Throws std::invalid_argument on shape or support violations.
    void validate() const;

    static CanonicalForm make(int n, std::vector<std::vector<QQi>> h_low_to_high, Mat<QQi> j0 = {});
};

/// Sorted form together with the permutation used: sorted coordinate j is perm[j] of the input.
struct SortedForm {
    CanonicalForm form;
    std::vector<int> perm;
};

SortedForm sort_with_permutation(const CanonicalForm& h);
CanonicalForm sort_to_fundamental_domain(const CanonicalForm& h);
bool is_sorted_form(const CanonicalForm& h);

AbstractSpectralType spectral_type_of(const CanonicalForm& h);
bool is_nonresonant(const CanonicalForm& h);
Mat<QQi> residue(const CanonicalForm& h);

/// Composition of n given by blocks of equal coordinates on levels >= i (sorted form).
std::vector<int> level_composition(const CanonicalForm& h, int i);
/// Jordan type of a nilpotent matrix restricted to the index range [lo, lo+size).
std::vector<int> jordan_type(const Mat<QQi>& j, int lo, int size);

}  // namespace unfold
