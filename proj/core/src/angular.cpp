#include "linboltz/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "linboltz/quadrature.hpp"

namespace linboltz {

double sphere_area(int m) {
    if (m < 0) throw std::invalid_argument("sphere_area: negative dimension");
    return 2.0 * std::pow(M_PI, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

namespace {

// int_{-1}^{1} b(s) (1-s^2)^((d-3)/2) ds via s = sin t, which removes the
// endpoint singularity for every d >= 2.
double latitude_integral(const AngularKernel& b, int d, int order = 128) {
    const Quadrature1D q = gauss_legendre_on(order, -0.5 * M_PI, 0.5 * M_PI);
    double sum = 0.0;
    for (std::size_t k = 0; k < q.x.size(); ++k) {
        const double t = q.x[k];
        const double c = std::cos(t);
        sum += q.w[k] * b.eval_cos(std::sin(t)) * std::pow(c, d - 2);
    }
    return sum;
}

double grad_family_raw_mass(int d, double nu) {
    // |S^(d-2)| int cos^(nu+d-2) t dt, closed Beta form
    const double m = nu + d - 2.0;
    const double latitude = std::sqrt(M_PI) * std::tgamma(0.5 * (m + 1.0)) / std::tgamma(0.5 * m + 1.0);
    return sphere_area(d - 2) * latitude;
}

}  // namespace

AngularKernel AngularKernel::constant_normalized(int d) {
    if (d < 2) throw std::invalid_argument("AngularKernel: dimension must be >= 2");
    AngularKernel b;
    b.variant = Variant::ConstantNormalized;
    b.dimension = d;
    b.l1 = 1.0;
    b.sup = 1.0 / sphere_area(d - 1);
    return b;
}

AngularKernel AngularKernel::grad_family(int d, double nu) {
    if (d < 2) throw std::invalid_argument("AngularKernel: dimension must be >= 2");
    if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("AngularKernel: GradFamily needs nu in [0,1]");
    AngularKernel b;
    b.variant = Variant::GradFamily;
    b.dimension = d;
    b.nu = nu;
    b.b0 = 1.0 / grad_family_raw_mass(d, nu);  // normalisation constant; recorded as the coefficient
    b.l1 = 1.0;
    b.sup = b.b0;
    return b;
}

AngularKernel AngularKernel::non_cutoff(int d, double nu, double c0) {
    if (d < 2) throw std::invalid_argument("AngularKernel: dimension must be >= 2");
    if (!(nu > 0.0 && nu < 2.0)) throw std::invalid_argument("AngularKernel: NonCutoff needs nu in (0,2)");
    if (!(c0 > 0.0)) throw std::invalid_argument("AngularKernel: NonCutoff needs c0 > 0");
    AngularKernel b;
    b.variant = Variant::NonCutoff;
    b.dimension = d;
    b.nu = nu;
    b.c0 = c0;
    b.l1 = std::numeric_limits<double>::infinity();
    b.sup = std::numeric_limits<double>::infinity();
    return b;
}

double AngularKernel::eval_cos(double s) const {
    s = std::clamp(s, -1.0, 1.0);
    switch (variant) {
        case Variant::ConstantNormalized:
            return 1.0 / sphere_area(dimension - 1);
        case Variant::GradFamily:
            return b0 * std::pow(std::max(1.0 - s * s, 0.0), 0.5 * nu);
        case Variant::NonCutoff: {
            const double theta = std::acos(s);
            return c0 * std::pow(std::abs(theta), -(dimension - 1) - nu);
        }
    }
    return 0.0;
}

double AngularKernel::eval_theta(double theta) const {
    if (variant == Variant::NonCutoff)
        return c0 * std::pow(std::abs(theta), -(dimension - 1) - nu);
    return eval_cos(std::cos(theta));
}

std::string AngularKernel::name() const {
    switch (variant) {
        case Variant::ConstantNormalized: return "const";
        case Variant::GradFamily: return "grad_nu" + std::to_string(nu);
        case Variant::NonCutoff: return "noncutoff_nu" + std::to_string(nu);
    }
    return "?";
}

AngularMass angular_mass(const AngularKernel& b, int d) {
    if (d < 2) throw std::invalid_argument("angular_mass: dimension must be >= 2");
    if (!b.cutoff()) return {0.0, true};
    return {sphere_area(d - 2) * latitude_integral(b, d), false};
}

std::pair<double, double> lower_bound_constants(int d, double gamma, double nu) {
    if (d < 2) throw std::invalid_argument("lower_bound_constants: dimension must be >= 2");
    if (!(gamma > -d && gamma < 0.0))
        throw std::invalid_argument("lower_bound_constants: gamma must lie in (-d, 0)");
    if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("lower_bound_constants: nu must lie in [0,1]");
    const double ratio = (2.0 * nu + d - gamma - 2.0) / (d - gamma - 2.0);
    return {0.75 + ratio, 0.25 + ratio};
}

}  // namespace linboltz
