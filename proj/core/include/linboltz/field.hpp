#pragma once

#include <string>
#include <vector>

#include "linboltz/grid.hpp"

namespace linboltz {

// Nonnegative nodal values of a distribution on a VelocityGrid.
// Immutable once constructed; mass is cached.
class DensityField {
public:
    DensityField(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    double mass() const { return mass_; }

    DensityField with_values(std::vector<double> values) const { return DensityField(grid_, std::move(values)); }

private:
    GridPtr grid_;
    std::vector<double> values_;
    double mass_ = 0.0;
};

struct WeightSpec {
    enum class Kind { Plain, Bracket, LogWeighted };
    Kind kind = Kind::Plain;
    double order = 0.0;

    static WeightSpec plain(double k) { return {Kind::Plain, k}; }
    static WeightSpec bracket(double k) { return {Kind::Bracket, k}; }
    static WeightSpec log_weighted(double s) { return {Kind::LogWeighted, s}; }
};

// The normalised Maxwellian (2*pi)^(-d/2) exp(-|v|^2/2) sampled on the grid.
// Not renormalised after truncation; the mass deficit is visible in mass().
DensityField maxwellian(const GridPtr& grid);

// m_k, M_k, or the log-weighted functional, depending on the weight kind.
// Nodes with f=0 contribute zero to the log-weighted kind.
double moment(const DensityField& f, const WeightSpec& w);

// (sum_i q_i <v_i>^s f_i^p)^(1/p); s=0 gives the plain L^p norm.
double lp_norm(const DensityField& f, double p, double s = 0.0);

// (1-delta) f + delta M. Requires unit mass (within 1e-6) and delta in [0,1].
DensityField mix_with_maxwellian(const DensityField& f, double delta);

// Initial-datum constructors; all are normalised to unit mass on the grid.
DensityField normalized(const DensityField& f);
DensityField shifted_maxwellian(const GridPtr& grid, const std::array<double, 3>& u);
DensityField tempered_maxwellian(const GridPtr& grid, double temperature);
DensityField heavy_tail(const GridPtr& grid, double exponent);  // f ~ <v>^(-exponent)
DensityField annulus(const GridPtr& grid, double r1, double r2);
struct MixtureComponent {
    double weight = 1.0;
    std::array<double, 3> shift{0.0, 0.0, 0.0};
    double temperature = 1.0;
};
DensityField gaussian_mixture(const GridPtr& grid, const std::vector<MixtureComponent>& parts);

class Rng;
// Smooth strictly positive random density: a seeded Gaussian mixture plus a
// small Maxwellian floor, normalised to unit mass.
DensityField random_density(const GridPtr& grid, Rng& rng, double floor_weight = 1e-3);

}  // namespace linboltz
