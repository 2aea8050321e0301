#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace linboltz {

struct GridSpec {
    int dimension = 2;       // 1, 2 or 3
    int nodes_per_axis = 33; // odd, so the origin is a node
    double truncation_radius = 6.0;

    void validate() const;  // throws std::invalid_argument with a diagnostic
    std::size_t node_count() const;
};

// Uniform tensor lattice on [-R,R]^d with trapezoid tensor weights.
// Node ordering is lexicographic by axis index (axis 0 slowest).
// Immutable after construction; safe for concurrent reads.
class VelocityGrid {
public:
    static std::shared_ptr<const VelocityGrid> build(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int dim() const { return spec_.dimension; }
    std::size_t size() const { return weights_.size(); }
    double spacing() const { return spacing_; }
    double radius() const { return spec_.truncation_radius; }

    double coord(std::size_t i, int axis) const { return axis_[multi_[i * dim_ + axis]]; }
    std::array<double, 3> node(std::size_t i) const {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        for (int k = 0; k < dim_; ++k) v[k] = coord(i, k);
        return v;
    }
    double weight(std::size_t i) const { return weights_[i]; }
    double norm2(std::size_t i) const { return norm2_[i]; }
    std::span<const double> weights() const { return weights_; }

    int axis_index(std::size_t i, int axis) const { return multi_[i * dim_ + axis]; }
    std::size_t flat_index(std::span<const int> multi) const;
    bool is_boundary(std::size_t i) const;

    // Axis-aligned bounds of the quadrature cell of node i (clipped to the box).
    void cell_bounds(std::size_t i, double* lo, double* hi) const;

    // Lower corner cell indices and fractional coordinates of point p for
    // multilinear interpolation. Returns false if p is outside [-R,R]^d.
    bool locate(const std::array<double, 3>& p, std::array<int, 3>& cell, std::array<double, 3>& frac) const;

    std::uint64_t content_hash() const { return hash_; }

private:
    GridSpec spec_;
    int dim_ = 0;
    double spacing_ = 0.0;
    std::vector<double> axis_;     // per-axis coordinates, size N
    std::vector<int> multi_;      // n*d axis indices
    std::vector<double> weights_; // n tensor trapezoid weights
    std::vector<double> norm2_;   // n squared norms
    std::uint64_t hash_ = 0;
};

using GridPtr = std::shared_ptr<const VelocityGrid>;

}  // namespace linboltz
