// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "superkit/linalg.hpp"

namespace superkit {

/// Positive unit-trace operator on a 2^n-dimensional register.
/// Basis convention everywhere: computational basis |00...0> first,
/// big-endian qubit ordering (qubit 1 is the most significant factor).
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw std::invalid_argument("DensityMatrix: not square");
        if (!is_hermitian(m_))
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(m_.trace() - Complex(1, 0)) > kHermTol)
            throw std::invalid_argument("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& entries() const { return m_; }

private:
    Matrix m_;
};

/// Nearest density matrix (hermitize, clip negative eigenvalues, renormalize
/// the trace); used to absorb rounding noise before wrapping in DensityMatrix.
inline Matrix project_density(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("project_density: not square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()));
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const double total = lam.sum();
    if (total <= 0) throw std::invalid_argument("project_density: zero matrix");
    lam /= total;
    return es.eigenvectors() * lam.asDiagonal().toDenseMatrix().cast<Complex>() *
           es.eigenvectors().adjoint();
}

class PureState {
public:
    explicit PureState(Vector amps) : v_(std::move(amps)) {
        if (v_.size() < 1) throw std::invalid_argument("PureState: empty");
        if (std::abs(v_.norm() - 1.0) > kHermTol)
            throw std::invalid_argument("PureState: not normalized");
    }

    Eigen::Index dim() const { return v_.size(); }
    const Vector& amplitudes() const { return v_; }
    DensityMatrix density() const { return DensityMatrix(v_ * v_.adjoint()); }

private:
    Vector v_;
};

struct BlochVector {
    double x = 0, y = 0, z = 0;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochVector to_bloch(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw std::invalid_argument("to_bloch: qubit states only");
    const Matrix& m = rho.entries();
    return {(m * pauli(1)).trace().real(), (m * pauli(2)).trace().real(),
            (m * pauli(3)).trace().real()};
}

inline DensityMatrix from_bloch(const BlochVector& b) {
    Matrix m = 0.5 * (pauli(0) + b.x * pauli(1) + b.y * pauli(2) + b.z * pauli(3));
    return DensityMatrix(m);
}

inline PureState qubit_state(double theta, double phi) {
    Vector v(2);
    v(0) = std::cos(theta / 2);
    v(1) = std::polar(std::sin(theta / 2), phi);
    return PureState(v);
}

// Tomography input set {|z>, |zbar>, |x>, |y>}.
enum class Basis { Z = 0, Zbar = 1, X = 2, Y = 3 };

inline PureState basis_state(Basis b) {
    using std::numbers::pi;
    switch (b) {
        case Basis::Z: return qubit_state(0, 0);
        case Basis::Zbar: return qubit_state(pi, 0);
        case Basis::X: return qubit_state(pi / 2, 0);
        default: return qubit_state(pi / 2, pi / 2);
    }
}

inline const char* basis_name(Basis b) {
    static const char* names[4] = {"z", "zbar", "x", "y"};
    return names[static_cast<int>(b)];
}

/// Deterministic quasi-uniform qubit states on the Bloch sphere:
/// z_k = 1 - 2(k+0.5)/n, azimuth_k = 2*pi*k / golden ratio.
inline std::vector<PureState> fibonacci_sphere(std::size_t n) {
    if (n == 0) throw std::invalid_argument("fibonacci_sphere: n must be >= 1");
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<PureState> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / static_cast<double>(n);
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / golden;
        out.push_back(qubit_state(std::acos(z), phi));
    }
    return out;
}

}  // namespace superkit
