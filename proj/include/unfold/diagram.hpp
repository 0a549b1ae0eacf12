#pragma once
// Unfolding diagrams of spectral collections and their reductions.

#include <string>
#include <utility>
#include <vector>

#include "unfold/spectral.hpp"
#include "unfold/strata.hpp"

namespace unfold {

struct UnfoldingDiagram {
    std::vector<std::vector<SetPartition>> vertices;  // one partition per point
    std::vector<SpectralCollection> labels;           // canonicalized attached collections
    std::vector<std::pair<int, int>> edges;           // finer -> coarser
};

struct ReducedDiagram {
    std::vector<SpectralCollection> labels;
    std::vector<std::vector<int>> members;  // full-diagram vertices in each class
    std::vector<std::pair<int, int>> edges;
};

struct DiagramTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Concatenation of the unfoldings of each point, canonicalized.
SpectralCollection unfold_collection(const SpectralCollection& c, const std::vector<SetPartition>& parts);

UnfoldingDiagram unfolding_diagram(const SpectralCollection& c, long long max_vertices = 200000);
ReducedDiagram reduced_diagram(const SpectralCollection& c, long long max_vertices = 200000);
ReducedDiagram reduce(const UnfoldingDiagram& d);

std::string to_dot(const UnfoldingDiagram& d);
std::string to_dot(const ReducedDiagram& d);

}  // namespace unfold
