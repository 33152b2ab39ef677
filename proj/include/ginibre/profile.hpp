#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ginibre {

// Shape data (N; v_1..v_M) of the product X_M ... X_1, with v_0 = 0.
// Factor j has shape (N + v_j) x (N + v_{j-1}).
struct DimensionProfile {
    int N = 1;
    std::vector<int> v;

    DimensionProfile() = default;
    DimensionProfile(int n, std::vector<int> offsets);

    static DimensionProfile square(int n, int m);

    int depth() const { return static_cast<int>(v.size()); }
    // N + v_j for j = 0..M.
    int dim(int j) const { return j == 0 ? N : N + v[static_cast<std::size_t>(j - 1)]; }
    std::vector<double> dims() const;

    void validate() const;
    std::string describe() const;

    bool operator==(const DimensionProfile&) const = default;
};

}  // namespace ginibre
