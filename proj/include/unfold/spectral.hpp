#pragma once
// Abstract spectral types and their invariants.

#include <memory>
#include <string>
#include <vector>

#include "unfold/rootdata.hpp"

namespace unfold {

struct SetPartition;

/// (Pi_k >= ... >= Pi_0; [J0]). pi[i] holds Pi_i, so pi.back() is the top level.
struct AbstractSpectralType {
    std::vector<SimpleSubset> pi;
    NilpotentOrbitLabel nilpotent;  // per block of the Pi_0 composition
    std::shared_ptr<const RootSystemData> root;

    int k() const { return static_cast<int>(pi.size()) - 1; }
    /// Checks nesting and the nilpotent label; throws std::invalid_argument.
    void validate() const;

    friend bool operator==(const AbstractSpectralType& a, const AbstractSpectralType& b) {
        return a.pi == b.pi && a.nilpotent == b.nilpotent;
    }
    friend bool operator<(const AbstractSpectralType& a, const AbstractSpectralType& b);
};

using SpectralCollection = std::vector<AbstractSpectralType>;

std::shared_ptr<const RootSystemData> gl_root_ptr(int n);

/// Builds a GL_n type from levels listed top to bottom and a nilpotent label;
/// an empty label means the zero orbit.
AbstractSpectralType make_gl_type(int n, const std::vector<SimpleSubset>& top_to_bottom,
                                  NilpotentOrbitLabel nilpotent = {});

int irregularity(const AbstractSpectralType& s);
int delta(const AbstractSpectralType& s);
int rigidity(const SpectralCollection& c);
int moduli_dim(const SpectralCollection& c);

SpectralCollection unfold_spectral(const AbstractSpectralType& s, const SetPartition& p);
SpectralCollection canonicalize(SpectralCollection c);

/// Compact notation, e.g. "({1,3}>{1};[0])" with 1-based simple indices
/// (for GL_n, index i stands for e_{i,i+1}).
std::string to_string(const AbstractSpectralType& s);
std::string to_string(const SpectralCollection& c);

}  // namespace unfold
