// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace superkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kHermTol = 1e-10;
constexpr double kPsdTol = 1e-9;
constexpr double kTpTol = 1e-9;

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline const Matrix& pauli(int i) {
    static const Matrix p[4] = {
        (Matrix(2, 2) << 1, 0, 0, 1).finished(),
        (Matrix(2, 2) << 0, 1, 1, 0).finished(),
        (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
        (Matrix(2, 2) << 1, 0, 0, -1).finished()};
    return p[i];
}

/// Kronecker product, row-major composite index: idx = i_A * dim_B + i_B.
inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix tensor_product(const Matrix& a, const Matrix& b, const Matrix& c) {
    return tensor_product(tensor_product(a, b), c);
}

/// Reduced matrix on the factors listed in `keep` (original order preserved).
/// `dims` are the tensor-factor dimensions, most significant factor first.
inline Matrix partial_trace(const Matrix& m, const std::vector<Eigen::Index>& dims,
                            const std::vector<Eigen::Index>& keep) {
    Eigen::Index total = 1;
    for (auto d : dims) total *= d;
    if (m.rows() != total || m.cols() != total)
        throw std::invalid_argument("partial_trace: dims do not match matrix size");
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");

    const auto n = static_cast<Eigen::Index>(dims.size());
    std::vector<bool> kept(n, false);
    Eigen::Index dkeep = 1, dtrace = 1;
    for (auto k : keep) {
        if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: bad keep index");
        kept[k] = true;
    }
    for (Eigen::Index f = 0; f < n; ++f) (kept[f] ? dkeep : dtrace) *= dims[f];

    // strides, most significant factor first
    std::vector<Eigen::Index> stride(n, 1);
    for (Eigen::Index f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    std::vector<Eigen::Index> kfac, tfac;
    for (Eigen::Index f = 0; f < n; ++f) (kept[f] ? kfac : tfac).push_back(f);

    auto expand = [&](Eigen::Index flat, const std::vector<Eigen::Index>& facs) {
        Eigen::Index idx = 0;
        for (auto it = facs.rbegin(); it != facs.rend(); ++it) {
            idx += (flat % dims[*it]) * stride[*it];
            flat /= dims[*it];
        }
        return idx;
    };

    Matrix out = Matrix::Zero(dkeep, dkeep);
    for (Eigen::Index i = 0; i < dkeep; ++i) {
        const Eigen::Index bi = expand(i, kfac);
        for (Eigen::Index j = 0; j < dkeep; ++j) {
            const Eigen::Index bj = expand(j, kfac);
            Complex s = 0;
            for (Eigen::Index t = 0; t < dtrace; ++t) {
                const Eigen::Index bt = expand(t, tfac);
                s += m(bi + bt, bj + bt);
            }
            out(i, j) = s;
        }
    }
    return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double tol = kHermTol) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint().eval()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kTpTol) {
    return m.rows() == m.cols() &&
           max_abs(m.adjoint() * m - identity(m.cols())) <= tol;
}

/// 0.5 * sum |eigenvalue| of the Hermitian difference a - b.
inline double trace_distance_matrices(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// exp(iH) for Hermitian H, via eigendecomposition.
inline Matrix exp_i_hermitian(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, es.eigenvalues()(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(iH) together with its first-order derivative maps. For H = P L P^dag,
/// dU = P [Phi o (P^dag dH P)] P^dag with the Daleckii-Krein coefficients
/// Phi_jk = (e^{i l_j} - e^{i l_k}) / (l_j - l_k) (and i e^{i l_j} on the
/// diagonal). The adjoint of the same linear map pulls a cotangent of U back
/// to a cotangent of H.
class ExpIHermitian {
public:
    explicit ExpIHermitian(const Matrix& h) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        p_ = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();
        const Eigen::Index d = lam.size();
        Vector phase(d);
        for (Eigen::Index k = 0; k < d; ++k) phase(k) = std::polar(1.0, lam(k));
        u_ = p_ * phase.asDiagonal() * p_.adjoint();
        phi_.resize(d, d);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k) {
                const double dl = lam(j) - lam(k);
                phi_(j, k) = std::abs(dl) < 1e-9
                                 ? Complex(0, 1) * std::polar(1.0, 0.5 * (lam(j) + lam(k)))
                                 : (phase(j) - phase(k)) / dl;
            }
    }

    const Matrix& value() const { return u_; }

    /// dU for a Hermitian perturbation dH of the generator.
    Matrix forward(const Matrix& dh) const {
        return p_ * phi_.cwiseProduct(p_.adjoint() * dh * p_) * p_.adjoint();
    }

    /// Given G_U with df = Re tr(G_U^dag dU), returns G_H such that
    /// df = Re tr(G_H^dag dH).
    Matrix pullback(const Matrix& gu) const {
        return p_ * phi_.conjugate().cwiseProduct(p_.adjoint() * gu * p_) * p_.adjoint();
    }

private:
    Matrix p_, u_, phi_;
};

/// Nearest unitary in Frobenius norm (polar projection, via SVD).
inline Matrix project_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the R diagonal
/// phases folded back into Q.
template <class Rng>
Matrix haar_random_unitary(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

/// Extend k orthonormal columns (n x k, k <= n) to a full n x n unitary by
/// Gram-Schmidt over the standard basis.
inline Matrix complete_unitary(const Matrix& iso) {
    const Eigen::Index n = iso.rows();
    const Eigen::Index k = iso.cols();
    Matrix u(n, n);
    u.leftCols(k) = iso;
    Eigen::Index filled = k;
    for (Eigen::Index cand = 0; cand < n && filled < n; ++cand) {
        Vector v = Vector::Zero(n);
        v(cand) = 1.0;
        for (Eigen::Index j = 0; j < filled; ++j) v -= u.col(j).dot(v) * u.col(j);
        const double nrm = v.norm();
        if (nrm > 1e-7) u.col(filled++) = v / nrm;
    }
    if (filled != n) throw std::runtime_error("complete_unitary: completion failed");
    return u;
}

}  // namespace superkit
