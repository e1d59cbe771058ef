// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "superkit/states.hpp"

namespace superkit {

/// CPTP map given by Kraus operators {K_i}, sum_i K_i^dag K_i = 1.
class KrausChannel {
public:
    KrausChannel(Eigen::Index dim_in, Eigen::Index dim_out, std::vector<Matrix> kraus)
        : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
        if (kraus_.empty()) throw std::invalid_argument("KrausChannel: empty Kraus list");
        Matrix sum = Matrix::Zero(dim_in_, dim_in_);
        for (const auto& k : kraus_) {
            if (k.rows() != dim_out_ || k.cols() != dim_in_)
                throw std::invalid_argument("KrausChannel: Kraus shape mismatch");
            sum += k.adjoint() * k;
        }
        if (max_abs(sum - identity(dim_in_)) > kTpTol)
            throw std::invalid_argument("KrausChannel: not trace preserving");
    }

    static KrausChannel identity_channel(Eigen::Index d) {
        return KrausChannel(d, d, {identity(d)});
    }

    static KrausChannel unitary(const Matrix& u) {
        if (!is_unitary(u)) throw std::invalid_argument("unitary channel: not unitary");
        return KrausChannel(u.cols(), u.rows(), {u});
    }

    Eigen::Index dim_in() const { return dim_in_; }
    Eigen::Index dim_out() const { return dim_out_; }
    const std::vector<Matrix>& kraus() const { return kraus_; }

private:
    Eigen::Index dim_in_, dim_out_;
    std::vector<Matrix> kraus_;
};

/// Choi state of a channel on a d-dimensional system, normalized to unit trace.
class ChoiState {
public:
    explicit ChoiState(Matrix m) : m_(std::move(m)) {
        dim_ = static_cast<Eigen::Index>(std::llround(std::sqrt(double(m_.rows()))));
        if (dim_ * dim_ != m_.rows() || m_.rows() != m_.cols())
            throw std::invalid_argument("ChoiState: size is not d^2 x d^2");
        if (!is_hermitian(m_)) throw std::invalid_argument("ChoiState: not Hermitian");
        if (std::abs(m_.trace() - Complex(1, 0)) > kHermTol)
            throw std::invalid_argument("ChoiState: trace != 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("ChoiState: not positive semidefinite");
        // trace-preservation dual: reference marginal is 1/d
        Matrix marg = partial_trace(m_, {dim_, dim_}, {1});
        if (max_abs(marg - identity(dim_) / double(dim_)) > kTpTol)
            throw std::invalid_argument("ChoiState: channel marginal violated");
    }

    Eigen::Index dim() const { return dim_; }
    const Matrix& entries() const { return m_; }

private:
    Matrix m_;
    Eigen::Index dim_;
};

/// Qubit process matrix in the fixed operator basis {I, X, Y, Z}.
class ChiMatrix {
public:
    explicit ChiMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != 4 || m_.cols() != 4)
            throw std::invalid_argument("ChiMatrix: must be 4x4");
        if (!is_hermitian(m_)) throw std::invalid_argument("ChiMatrix: not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("ChiMatrix: not positive semidefinite");
    }

    const Matrix& entries() const { return m_; }

private:
    Matrix m_;
};

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return trace_distance_matrices(a.entries(), b.entries());
}

inline double trace_distance(const ChoiState& a, const ChoiState& b) {
    return trace_distance_matrices(a.entries(), b.entries());
}

inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
    if (rho.dim() != ch.dim_in())
        throw std::invalid_argument("apply_channel: dimension mismatch");
    Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
    for (const auto& k : ch.kraus()) out += k * rho.entries() * k.adjoint();
    return DensityMatrix(0.5 * (out + out.adjoint().eval()));
}

/// |omega> = (1/sqrt(d)) sum_i |i,i>.
inline Vector max_entangled(Eigen::Index d) {
    Vector v = Vector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
    return v;
}

/// omega_E = (E (x) 1)(|omega><omega|). Output factor first, reference second.
inline ChoiState channel_to_choi(const KrausChannel& ch) {
    if (ch.dim_in() != ch.dim_out())
        throw std::invalid_argument("channel_to_choi: square channels only");
    const Eigen::Index d = ch.dim_in();
    Matrix omega = Matrix::Zero(d * d, d * d);
    const Vector phi = max_entangled(d);
    for (const auto& k : ch.kraus()) {
        Vector col = tensor_product(k, identity(d)) * phi;
        omega += col * col.adjoint();
    }
    return ChoiState(0.5 * (omega + omega.adjoint().eval()));
}

/// Eigendecomposition of the Choi state; eigenvalues below 1e-10 (relative to
/// the largest) are discarded, so the Kraus count equals the channel rank.
inline KrausChannel choi_to_kraus(const ChoiState& choi) {
    const Eigen::Index d = choi.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(choi.entries());
    const double lmax = es.eigenvalues().maxCoeff();
    std::vector<Matrix> kraus;
    for (Eigen::Index j = d * d - 1; j >= 0; --j) {
        const double lam = es.eigenvalues()(j);
        if (lam < -kPsdTol) throw std::invalid_argument("choi_to_kraus: not PSD");
        if (lam <= 1e-10 * lmax) continue;
        // eigvec on (out, ref): K(i,j) = sqrt(d*lam) * v(i*d + j)
        Matrix k(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                k(r, c) = std::sqrt(lam * double(d)) * es.eigenvectors()(r * d + c, j);
        kraus.push_back(std::move(k));
    }
    return KrausChannel(d, d, std::move(kraus));
}

inline Eigen::Index channel_rank(const ChoiState& choi) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(choi.entries(), Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
        if (es.eigenvalues()(j) > 1e-10 * lmax) ++r;
    return r;
}

/// chi_{mn} = <<P_m| omega |P_n>> with |P_m>> = (P_m (x) 1)|omega>.
inline ChiMatrix choi_to_chi(const ChoiState& choi) {
    if (choi.dim() != 2) throw std::invalid_argument("choi_to_chi: qubit channels only");
    const Vector phi = max_entangled(2);
    Matrix chi(4, 4);
    std::vector<Vector> basis;
    for (int m = 0; m < 4; ++m)
        basis.push_back(tensor_product(pauli(m), identity(2)) * phi);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            chi(m, n) = basis[m].dot(choi.entries() * basis[n]);
    return ChiMatrix(0.5 * (chi + chi.adjoint().eval()));
}

inline ChoiState chi_to_choi(const ChiMatrix& chi) {
    const Vector phi = max_entangled(2);
    Matrix omega = Matrix::Zero(4, 4);
    std::vector<Vector> basis;
    for (int m = 0; m < 4; ++m)
        basis.push_back(tensor_product(pauli(m), identity(2)) * phi);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            omega += chi.entries()(m, n) * basis[m] * basis[n].adjoint();
    return ChoiState(0.5 * (omega + omega.adjoint().eval()));
}

inline ChiMatrix channel_to_chi(const KrausChannel& ch) {
    if (ch.dim_in() != 2 || ch.dim_out() != 2)
        throw std::invalid_argument("channel_to_chi: qubit channels only");
    return choi_to_chi(channel_to_choi(ch));
}

/// Unitary U on system (x) ancilla with (1 (x) <i|) U (1 (x) |0>) = K_i.
/// The ancilla is the second tensor factor; its dimension is the Kraus count
/// (at least 2).
inline Matrix stinespring_dilate(const KrausChannel& ch) {
    const Eigen::Index ds = ch.dim_in();
    const Eigen::Index da = std::max<Eigen::Index>(2, ch.kraus().size());
    const Eigen::Index n = ds * da;
    // isometry: columns indexed by (s_in, anc=0)
    Matrix iso = Matrix::Zero(n, ds);
    for (std::size_t i = 0; i < ch.kraus().size(); ++i)
        for (Eigen::Index r = 0; r < ds; ++r)
            for (Eigen::Index c = 0; c < ds; ++c)
                iso(r * da + static_cast<Eigen::Index>(i), c) = ch.kraus()[i](r, c);
    // columns of the full unitary at ancilla-in 0 are the isometry columns
    Matrix u = Matrix::Zero(n, n);
    Matrix rest = complete_unitary(iso).rightCols(n - ds);
    for (Eigen::Index c = 0; c < ds; ++c) u.col(c * da) = iso.col(c);
    Eigen::Index slot = 0;
    for (Eigen::Index c = 0; c < n; ++c)
        if (c % da != 0) u.col(c) = rest.col(slot++);
    return u;
}

/// Unattenuated overlap Tr[ab] / sqrt(Tr[a^2] Tr[b^2]).
inline double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("state_fidelity: dim mismatch");
    const double ta = (a.entries() * a.entries()).trace().real();
    const double tb = (b.entries() * b.entries()).trace().real();
    if (ta <= 0 || tb <= 0) throw std::invalid_argument("state_fidelity: zero input");
    return (a.entries() * b.entries()).trace().real() / std::sqrt(ta * tb);
}

/// |Tr[chi_a chi_b^dag]| / sqrt(Tr[chi_a chi_a^dag] Tr[chi_b chi_b^dag]).
inline double process_fidelity(const ChiMatrix& a, const ChiMatrix& b) {
    const double ta = (a.entries() * a.entries().adjoint()).trace().real();
    const double tb = (b.entries() * b.entries().adjoint()).trace().real();
    if (ta <= 0 || tb <= 0) throw std::invalid_argument("process_fidelity: zero matrix");
    return std::abs((a.entries() * b.entries().adjoint()).trace()) / std::sqrt(ta * tb);
}

/// Linear reconstruction of E(rho_in) from the four basis images E(B).
/// rho_in parameters: a = rho00 - 0.5, b = Re rho10, c = Im rho10.
inline DensityMatrix reconstruct_from_basis(const std::map<Basis, DensityMatrix>& outputs,
                                            const DensityMatrix& rho_in) {
    if (rho_in.dim() != 2)
        throw std::invalid_argument("reconstruct_from_basis: qubit input only");
    for (auto b : {Basis::Z, Basis::Zbar, Basis::X, Basis::Y})
        if (!outputs.contains(b))
            throw std::invalid_argument("reconstruct_from_basis: missing basis image");
    const double a = rho_in.entries()(0, 0).real() - 0.5;
    const double b = rho_in.entries()(1, 0).real();
    const double c = rho_in.entries()(1, 0).imag();
    Matrix out = (0.5 + a - b - c) * outputs.at(Basis::Z).entries() +
                 (0.5 - a - b - c) * outputs.at(Basis::Zbar).entries() +
                 2 * b * outputs.at(Basis::X).entries() +
                 2 * c * outputs.at(Basis::Y).entries();
    return DensityMatrix(0.5 * (out + out.adjoint().eval()));
}

inline std::map<Basis, DensityMatrix> basis_images(const KrausChannel& ch) {
    std::map<Basis, DensityMatrix> out;
    for (auto b : {Basis::Z, Basis::Zbar, Basis::X, Basis::Y})
        out.emplace(b, apply_channel(ch, basis_state(b).density()));
    return out;
}

}  // namespace superkit
