#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "linboltz/kernels.hpp"
#include "linboltz/quadrature.hpp"

namespace linboltz {

namespace {

// int |v-v*|^gamma |v*|^s M(v*) dv* for |v| = rho. Radial direction with the
// substitution r = R_inf u^2 which resolves the r^gamma endpoint; latitude via
// the sin substitution. The exponent is assembled jointly so the integrand
// never overflows.
double frequency_integral(double gamma, double s, int d, double rho) {
    const double r_inf = rho + 10.0;
    const int n_rad = 160;
    const int n_ang = 256;
    const Quadrature1D rad = gauss_legendre_on(n_rad, 0.0, 1.0);

    double total = 0.0;
    if (d == 1) {
        for (int ir = 0; ir < n_rad; ++ir) {
            const double u = rad.x[ir];
            const double r = r_inf * u * u;
            if (r <= 0.0) continue;
            const double jac = 2.0 * r_inf * u * rad.w[ir];
            const double rg = std::pow(r, gamma);
            double ang = 0.0;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                const double q2 = rho * rho + r * r + 2.0 * r * rho * (sgn > 0 ? 1.0 : -1.0);
                ang += std::exp(-0.5 * q2) * (s != 0.0 ? std::pow(q2, 0.5 * s) : 1.0);
            }
            total += jac * rg * ang;
        }
        return std::pow(2.0 * M_PI, -0.5) * total;
    }

    const Quadrature1D ang = gauss_legendre_on(n_ang, -0.5 * M_PI, 0.5 * M_PI);
    std::vector<double> sin_t(n_ang), cosw(n_ang);
    for (int it = 0; it < n_ang; ++it) {
        sin_t[it] = std::sin(ang.x[it]);
        cosw[it] = ang.w[it] * std::pow(std::cos(ang.x[it]), d - 2);
    }
    for (int ir = 0; ir < n_rad; ++ir) {
        const double u = rad.x[ir];
        const double r = r_inf * u * u;
        if (r <= 0.0) continue;
        const double jac = 2.0 * r_inf * u * rad.w[ir];
        const double rpow = std::pow(r, gamma + d - 1);
        double inner = 0.0;
        for (int it = 0; it < n_ang; ++it) {
            const double q2 = rho * rho + r * r + 2.0 * r * rho * sin_t[it];
            double term = std::exp(-0.5 * q2);
            if (s != 0.0) term *= std::pow(q2, 0.5 * s);
            inner += cosw[it] * term;
        }
        total += jac * rpow * inner;
    }
    return std::pow(2.0 * M_PI, -0.5 * d) * sphere_area(d - 2) * total;
}

struct Key {
    double gamma, s, rho;
    int d;
    bool operator<(const Key& o) const {
        return std::tie(gamma, s, rho, d) < std::tie(o.gamma, o.s, o.rho, o.d);
    }
};

double cached_frequency(double gamma, double s, int d, double rho) {
    static std::map<Key, double> cache;
    static std::mutex mtx;
    const Key key{gamma, s, rho, d};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = frequency_integral(gamma, s, d, rho);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, value);
    return value;
}

}  // namespace

double collision_frequency(double gamma, int d, double speed) {
    if (!(gamma > -d)) throw std::invalid_argument("collision_frequency: gamma <= -d is non-integrable");
    if (speed < 0.0) throw std::invalid_argument("collision_frequency: negative speed");
    return cached_frequency(gamma, 0.0, d, speed);
}

double weighted_frequency(double gamma, double s, int d, double speed) {
    if (!(gamma > -d)) throw std::invalid_argument("weighted_frequency: gamma <= -d is non-integrable");
    if (s < 0.0) throw std::invalid_argument("weighted_frequency: s must be >= 0");
    if (speed < 0.0) throw std::invalid_argument("weighted_frequency: negative speed");
    return cached_frequency(gamma, s, d, speed);
}

}  // namespace linboltz
