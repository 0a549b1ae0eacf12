#pragma once
// Root data of a reductive group and Levi/centralizer dimensions.

#include <cstdint>
#include <optional>
#include <vector>

namespace unfold {

using IntVec = std::vector<long long>;

struct RootSystemData {
    int cartan_dim = 0;
    int group_dim = 0;
    int center_dim = 0;
    std::vector<IntVec> roots;
    std::vector<int> simple;  // indices into roots
    int gl_n = 0;             // nonzero when built by gl_root_data

    int rank() const { return static_cast<int>(simple.size()); }
    /// Throws std::invalid_argument if the invariants fail.
    void validate() const;
};

/// Subset of simple roots as a bitset over simple indices.
using SimpleSubset = std::uint64_t;

/// One integer partition per block of a reference composition.
using NilpotentOrbitLabel = std::vector<std::vector<int>>;

RootSystemData gl_root_data(int n);

/// Simple-root coordinates of each root (exact; rows indexed like roots).
std::vector<IntVec> simple_coordinates(const RootSystemData& d);

int levi_dim(const RootSystemData& d, SimpleSubset s);

// GL_n: subset of {e_i - e_{i+1}} <-> composition of n.
std::vector<int> subset_to_composition(int n, SimpleSubset s);
SimpleSubset composition_to_subset(const std::vector<int>& comp);

std::vector<int> conjugate_partition(const std::vector<int>& p);

/// Zero nilpotent label for a composition.
NilpotentOrbitLabel zero_label(const std::vector<int>& comp);
bool is_zero_label(const NilpotentOrbitLabel& j);

/// sum over blocks of sum_i (lambda'_i)^2.
int centralizer_dim(const RootSystemData& d, const std::vector<int>& levi0,
                    const NilpotentOrbitLabel& j);

}  // namespace unfold
