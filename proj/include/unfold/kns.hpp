#pragma once
// Parenthesized partition notation for GL_n spectral collections, e.g. "22,22,22,211"
// or "(((2)))(((11)))": leaves are block sizes of Pi_0, groups at nesting depth d
// give the blocks of Pi_{k-d+1}.

#include <stdexcept>
#include <string>

#include "unfold/spectral.hpp"

namespace unfold {

struct KnsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonUniformDepth : KnsError {
    using KnsError::KnsError;
};
struct SumMismatch : KnsError {
    using KnsError::KnsError;
};
struct BadCharacter : KnsError {
    using KnsError::KnsError;
};

/// n <= 0 takes n from the first point.
SpectralCollection parse_kns(const std::string& s, int n = 0);
/// Canonical string; throws KnsError for nonzero nilpotent labels or blocks above 9.
std::string to_kns(const AbstractSpectralType& t);
std::string to_kns(const SpectralCollection& c);

}  // namespace unfold
