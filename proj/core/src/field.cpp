#include "linboltz/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linboltz/util.hpp"

namespace linboltz {

DensityField::DensityField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("DensityField: null grid");
    if (values_.size() != grid_->size()) throw std::invalid_argument("DensityField: size mismatch with grid");
    double scale = 0.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    double mass = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw std::invalid_argument("DensityField: non-finite value");
        if (values_[i] < -1e-9 * std::max(scale, 1.0))
            throw std::invalid_argument("DensityField: negative value beyond tolerance");
        mass += grid_->weight(i) * values_[i];
    }
    mass_ = mass;
}

DensityField maxwellian(const GridPtr& grid) {
    const int d = grid->dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = norm * std::exp(-0.5 * grid->norm2(i));
    return DensityField(grid, std::move(vals));
}

double moment(const DensityField& f, const WeightSpec& w) {
    const auto& g = *f.grid();
    double sum = 0.0;
    switch (w.kind) {
        case WeightSpec::Kind::Plain:
            for (std::size_t i = 0; i < f.size(); ++i)
                sum += g.weight(i) * std::pow(g.norm2(i), 0.5 * w.order) * f[i];
            break;
        case WeightSpec::Kind::Bracket:
            for (std::size_t i = 0; i < f.size(); ++i)
                sum += g.weight(i) * std::pow(1.0 + g.norm2(i), 0.5 * w.order) * f[i];
            break;
        case WeightSpec::Kind::LogWeighted:
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f[i] <= 0.0) continue;  // x log x -> 0
                sum += g.weight(i) * std::pow(1.0 + g.norm2(i), 0.5 * w.order) * f[i] * std::abs(std::log(f[i]));
            }
            break;
    }
    return sum;
}

double lp_norm(const DensityField& f, double p, double s) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto& g = *f.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        sum += g.weight(i) * std::pow(1.0 + g.norm2(i), 0.5 * s) * std::pow(f[i], p);
    return std::pow(sum, 1.0 / p);
}

DensityField mix_with_maxwellian(const DensityField& f, double delta) {
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("mix_with_maxwellian: delta outside [0,1]");
    if (std::abs(f.mass() - 1.0) > 1e-6)
        throw std::invalid_argument("mix_with_maxwellian: f must have unit mass");
    DensityField m = maxwellian(f.grid());
    std::vector<double> vals(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) vals[i] = (1.0 - delta) * f[i] + delta * m[i];
    return DensityField(f.grid(), std::move(vals));
}

DensityField normalized(const DensityField& f) {
    const double m = f.mass();
    if (!(m > 0.0)) throw std::invalid_argument("normalized: nonpositive mass");
    std::vector<double> vals(f.values());
    for (double& v : vals) v /= m;
    return DensityField(f.grid(), std::move(vals));
}

DensityField shifted_maxwellian(const GridPtr& grid, const std::array<double, 3>& u) {
    const int d = grid->dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double x = grid->coord(i, k) - u[k];
            r2 += x * x;
        }
        vals[i] = norm * std::exp(-0.5 * r2);
    }
    return normalized(DensityField(grid, std::move(vals)));
}

DensityField tempered_maxwellian(const GridPtr& grid, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("tempered_maxwellian: temperature must be positive");
    const int d = grid->dim();
    const double norm = std::pow(2.0 * M_PI * temperature, -0.5 * d);
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = norm * std::exp(-0.5 * grid->norm2(i) / temperature);
    return normalized(DensityField(grid, std::move(vals)));
}

DensityField heavy_tail(const GridPtr& grid, double exponent) {
    if (!(exponent > grid->dim()))
        throw std::invalid_argument("heavy_tail: exponent must exceed the dimension for integrability");
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = std::pow(1.0 + grid->norm2(i), -0.5 * exponent);
    return normalized(DensityField(grid, std::move(vals)));
}

DensityField annulus(const GridPtr& grid, double r1, double r2) {
    if (!(0.0 <= r1 && r1 < r2)) throw std::invalid_argument("annulus: need 0 <= r1 < r2");
    std::vector<double> vals(grid->size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double r = std::sqrt(grid->norm2(i));
        if (r >= r1 && r <= r2) {
            vals[i] = 1.0;
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("annulus: no grid node falls inside [r1,r2]");
    return normalized(DensityField(grid, std::move(vals)));
}

DensityField gaussian_mixture(const GridPtr& grid, const std::vector<MixtureComponent>& parts) {
    if (parts.empty()) throw std::invalid_argument("gaussian_mixture: empty component list");
    const int d = grid->dim();
    std::vector<double> vals(grid->size(), 0.0);
    for (const auto& c : parts) {
        if (!(c.weight > 0.0) || !(c.temperature > 0.0))
            throw std::invalid_argument("gaussian_mixture: weights and temperatures must be positive");
        const double norm = c.weight * std::pow(2.0 * M_PI * c.temperature, -0.5 * d);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double r2 = 0.0;
            for (int k = 0; k < d; ++k) {
                const double x = grid->coord(i, k) - c.shift[k];
                r2 += x * x;
            }
            vals[i] += norm * std::exp(-0.5 * r2 / c.temperature);
        }
    }
    return normalized(DensityField(grid, std::move(vals)));
}

DensityField random_density(const GridPtr& grid, Rng& rng, double floor_weight) {
    std::vector<MixtureComponent> parts;
    const int n_parts = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
    for (int c = 0; c < n_parts; ++c) {
        MixtureComponent mc;
        mc.weight = 0.2 + rng.uniform();
        for (int k = 0; k < grid->dim(); ++k) mc.shift[k] = rng.uniform(-1.5, 1.5);
        mc.temperature = rng.uniform(0.6, 1.8);
        parts.push_back(mc);
    }
    MixtureComponent floor;
    floor.weight = floor_weight;
    floor.temperature = 1.0;
    parts.push_back(floor);
    return gaussian_mixture(grid, parts);
}

}  // namespace linboltz
