#include "linboltz/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "linboltz/util.hpp"

namespace linboltz {

void GridSpec::validate() const {
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("GridSpec: dimension must be 1, 2 or 3, got " + std::to_string(dimension));
    if (nodes_per_axis < 3 || nodes_per_axis % 2 == 0)
        throw std::invalid_argument("GridSpec: nodes_per_axis must be an odd integer >= 3, got " +
                                    std::to_string(nodes_per_axis));
    if (!(truncation_radius > 0.0))
        throw std::invalid_argument("GridSpec: truncation_radius must be positive, got " +
                                    std::to_string(truncation_radius));
}

std::size_t GridSpec::node_count() const {
    std::size_t n = 1;
    for (int k = 0; k < dimension; ++k) n *= static_cast<std::size_t>(nodes_per_axis);
    return n;
}

std::shared_ptr<const VelocityGrid> VelocityGrid::build(const GridSpec& spec) {
    spec.validate();
    auto g = std::make_shared<VelocityGrid>();
    g->spec_ = spec;
    g->dim_ = spec.dimension;
    const int N = spec.nodes_per_axis;
    const double R = spec.truncation_radius;
    g->spacing_ = 2.0 * R / (N - 1);

    g->axis_.resize(N);
    for (int k = 0; k < N; ++k) g->axis_[k] = -R + g->spacing_ * k;
    g->axis_[(N - 1) / 2] = 0.0;  // exact origin

    const std::size_t n = spec.node_count();
    g->multi_.resize(n * g->dim_);
    g->weights_.resize(n);
    g->norm2_.resize(n);

    std::vector<double> axis_w(N, g->spacing_);
    axis_w.front() = 0.5 * g->spacing_;
    axis_w.back() = 0.5 * g->spacing_;

    std::vector<int> idx(g->dim_, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        double r2 = 0.0;
        for (int k = 0; k < g->dim_; ++k) {
            g->multi_[i * g->dim_ + k] = idx[k];
            w *= axis_w[idx[k]];
            const double c = g->axis_[idx[k]];
            r2 += c * c;
        }
        g->weights_[i] = w;
        g->norm2_[i] = r2;
        for (int k = g->dim_ - 1; k >= 0; --k) {  // axis 0 slowest
            if (++idx[k] < N) break;
            idx[k] = 0;
        }
    }

    std::uint64_t h = fnv1a(&spec.dimension, sizeof spec.dimension);
    h = fnv1a(&spec.nodes_per_axis, sizeof spec.nodes_per_axis, h);
    h = fnv1a(&spec.truncation_radius, sizeof spec.truncation_radius, h);
    g->hash_ = h;
    return g;
}

std::size_t VelocityGrid::flat_index(std::span<const int> multi) const {
    std::size_t i = 0;
    for (int k = 0; k < dim_; ++k) i = i * spec_.nodes_per_axis + static_cast<std::size_t>(multi[k]);
    return i;
}

bool VelocityGrid::is_boundary(std::size_t i) const {
    for (int k = 0; k < dim_; ++k) {
        const int a = multi_[i * dim_ + k];
        if (a == 0 || a == spec_.nodes_per_axis - 1) return true;
    }
    return false;
}

void VelocityGrid::cell_bounds(std::size_t i, double* lo, double* hi) const {
    const double R = spec_.truncation_radius;
    for (int k = 0; k < dim_; ++k) {
        const double c = coord(i, k);
        lo[k] = std::max(c - 0.5 * spacing_, -R);
        hi[k] = std::min(c + 0.5 * spacing_, R);
    }
}

bool VelocityGrid::locate(const std::array<double, 3>& p, std::array<int, 3>& cell,
                          std::array<double, 3>& frac) const {
    const double R = spec_.truncation_radius;
    const int N = spec_.nodes_per_axis;
    for (int k = 0; k < dim_; ++k) {
        const double x = p[k];
        if (x < -R || x > R) return false;
        double s = (x + R) / spacing_;
        int c = static_cast<int>(std::floor(s));
        if (c >= N - 1) c = N - 2;
        if (c < 0) c = 0;
        cell[k] = c;
        frac[k] = s - c;
    }
    return true;
}

}  // namespace linboltz
