#include "linboltz/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace linboltz {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix, weights
// mu0 times the squared first eigenvector components.
Quadrature1D golub_welsch(int n, const std::vector<double>& offdiag, double mu0) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        J(k - 1, k) = offdiag[k - 1];
        J(k, k - 1) = offdiag[k - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("quadrature: eigensolve failed");
    Quadrature1D q;
    q.x.resize(n);
    q.w.resize(n);
    for (int k = 0; k < n; ++k) {
        q.x[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        q.w[k] = mu0 * v0 * v0;
    }
    return q;
}

}  // namespace

const Quadrature1D& gauss_legendre(int n) {
    static std::map<int, Quadrature1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return cache.emplace(n, golub_welsch(n, off, 2.0)).first->second;
}

const Quadrature1D& gauss_hermite(int n) {
    static std::map<int, Quadrature1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
    return cache.emplace(n, golub_welsch(n, off, std::sqrt(M_PI))).first->second;
}

Quadrature1D gauss_legendre_on(int n, double a, double b) {
    const Quadrature1D& base = gauss_legendre(n);
    Quadrature1D q;
    q.x.resize(n);
    q.w.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k) {
        q.x[k] = mid + half * base.x[k];
        q.w[k] = half * base.w[k];
    }
    return q;
}

}  // namespace linboltz
