#pragma once

#include <vector>

namespace linboltz {

struct Quadrature1D {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre on [-1,1].
const Quadrature1D& gauss_legendre(int n);

// Gauss-Hermite for the weight exp(-x^2) on the real line (physicists').
const Quadrature1D& gauss_hermite(int n);

// Gauss-Legendre mapped to [a,b].
Quadrature1D gauss_legendre_on(int n, double a, double b);

}  // namespace linboltz
