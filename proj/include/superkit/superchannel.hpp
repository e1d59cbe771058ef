// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "superkit/channels.hpp"

namespace superkit {

// Circuit form of a qubit gen-extreme superchannel: a pre-unitary V and a
// post-unitary W, both 8x8, acting on system (x) 2-qubit ancilla with the
// system as the first tensor factor. The ancilla starts in |00>, the input
// channel acts on the system between V and W, and the ancilla is traced out
// at the end.
//
// Block conventions (m, a run over the 4 ancilla basis states, computational
// order |00>,|01>,|10>,|11>):
//   K_v^m  = <m|V|0>   (2x2 system block of V, ancilla 0 -> m)
//   K_w^ma = <a|W|m>   (2x2 system block of W, ancilla m -> a)
//
// Output-channel Kraus operators:       F_i^a = sum_m K_w^ma K_i K_v^m
// Kraus of the action on Choi states:   S_a   = sum_m K_w^ma (x) (K_v^m)^t
// The transpose appears on the reference factor of the Choi state; with it,
// the Choi-state action and the output-channel Kraus describe the same map
// and every circuit built from unitary V, W produces a CPTP output channel.
class GenExtremeSuperchannel {
public:
    GenExtremeSuperchannel(Matrix v, Matrix w) : v_(std::move(v)), w_(std::move(w)) {
        if (v_.rows() != 8 || w_.rows() != 8 || !is_unitary(v_) || !is_unitary(w_))
            throw std::invalid_argument("GenExtremeSuperchannel: V, W must be 8x8 unitaries");
    }

    const Matrix& v() const { return v_; }
    const Matrix& w() const { return w_; }

    /// <m|V|0>
    Matrix kv(int m) const {
        Matrix k(2, 2);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) k(s, t) = v_(s * 4 + m, t * 4);
        return k;
    }

    /// <a|W|m>
    Matrix kw(int m, int a) const {
        Matrix k(2, 2);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) k(s, t) = w_(s * 4 + a, t * 4 + m);
        return k;
    }

private:
    Matrix v_, w_;
};

/// Kraus operators {S_a} of the superchannel action on qubit-channel Choi
/// states, indexed by the ancilla measurement outcome a.
class SuperchannelKraus {
public:
    explicit SuperchannelKraus(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
        if (kraus_.size() != 4)
            throw std::invalid_argument("SuperchannelKraus: expected 4 operators");
        Matrix sum = Matrix::Zero(4, 4);
        for (const auto& s : kraus_) {
            if (s.rows() != 4 || s.cols() != 4)
                throw std::invalid_argument("SuperchannelKraus: operators must be 4x4");
            sum += s.adjoint() * s;
        }
        // Trace preservation on channel Choi states: sum_a S_a^dag S_a must be
        // 1 (x) Y with Tr Y = 2, so Tr[S(omega)] = Tr[omega (1 (x) Y)] = 1
        // whenever the reference marginal of omega is 1/2.
        Matrix y = 0.5 * partial_trace(sum, {2, 2}, {1});
        if (max_abs(sum - tensor_product(identity(2), y)) > kTpTol ||
            std::abs(y.trace() - Complex(2, 0)) > kTpTol)
            throw std::invalid_argument("SuperchannelKraus: not trace preserving on Choi states");
    }

    const std::vector<Matrix>& kraus() const { return kraus_; }

private:
    std::vector<Matrix> kraus_;
};

/// 16x16 Choi operator of the map omega -> sum_a S_a omega S_a^dag on the
/// 4-dimensional Choi space.
class SuperchannelChoi {
public:
    explicit SuperchannelChoi(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != 16 || m_.cols() != 16)
            throw std::invalid_argument("SuperchannelChoi: must be 16x16");
        if (!is_hermitian(m_))
            throw std::invalid_argument("SuperchannelChoi: not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("SuperchannelChoi: not positive semidefinite");
    }

    const Matrix& entries() const { return m_; }

private:
    Matrix m_;
};

/// Block extraction of {S_a} straight from (approximately unitary) V, W,
/// without the SuperchannelKraus invariants; used for the verbatim reference
/// matrices, which carry 4-decimal rounding.
inline std::vector<Matrix> circuit_kraus_unchecked(const Matrix& v, const Matrix& w) {
    if (v.rows() != 8 || v.cols() != 8 || w.rows() != 8 || w.cols() != 8)
        throw std::invalid_argument("circuit_kraus_unchecked: V, W must be 8x8");
    auto kv = [&](int m) {
        Matrix k(2, 2);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) k(s, t) = v(s * 4 + m, t * 4);
        return k;
    };
    auto kw = [&](int m, int a) {
        Matrix k(2, 2);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) k(s, t) = w(s * 4 + a, t * 4 + m);
        return k;
    };
    std::vector<Matrix> ops;
    for (int a = 0; a < 4; ++a) {
        Matrix s = Matrix::Zero(4, 4);
        for (int m = 0; m < 4; ++m) s += tensor_product(kw(m, a), kv(m).transpose().eval());
        ops.push_back(std::move(s));
    }
    return ops;
}

inline SuperchannelKraus circuit_to_kraus(const GenExtremeSuperchannel& g) {
    std::vector<Matrix> ops;
    for (int a = 0; a < 4; ++a) {
        Matrix s = Matrix::Zero(4, 4);
        for (int m = 0; m < 4; ++m)
            s += tensor_product(g.kw(m, a), g.kv(m).transpose().eval());
        ops.push_back(std::move(s));
    }
    return SuperchannelKraus(std::move(ops));
}

inline ChoiState act_on_choi(const SuperchannelKraus& s, const ChoiState& omega) {
    if (omega.dim() != 2)
        throw std::invalid_argument("act_on_choi: qubit-channel Choi states only");
    Matrix out = Matrix::Zero(4, 4);
    for (const auto& k : s.kraus()) out += k * omega.entries() * k.adjoint();
    return ChoiState(0.5 * (out + out.adjoint().eval()));
}

/// Output channel of the circuit: Kraus {F_i^a} over all pairs (i, a).
inline KrausChannel output_channel(const GenExtremeSuperchannel& g,
                                   const KrausChannel& input) {
    if (input.dim_in() != 2 || input.dim_out() != 2)
        throw std::invalid_argument("output_channel: qubit channels only");
    std::vector<Matrix> out;
    for (const auto& k : input.kraus())
        for (int a = 0; a < 4; ++a) {
            Matrix f = Matrix::Zero(2, 2);
            for (int m = 0; m < 4; ++m) f += g.kw(m, a) * k * g.kv(m);
            out.push_back(std::move(f));
        }
    return KrausChannel(2, 2, std::move(out));
}

/// Controlled construction: V = |0><0| (x) v1 + |1><1| (x) v2 (system is the
/// control, the ancilla pair the target), likewise for W. The resulting
/// superchannel preserves the Choi-state diagonal of every input channel.
inline GenExtremeSuperchannel dephasing_superchannel(const Matrix& v1, const Matrix& v2,
                                                     const Matrix& w1, const Matrix& w2) {
    for (const auto* m : {&v1, &v2, &w1, &w2})
        if (m->rows() != 4 || !is_unitary(*m))
            throw std::invalid_argument("dephasing_superchannel: inputs must be 4x4 unitaries");
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    return GenExtremeSuperchannel(tensor_product(p0, v1) + tensor_product(p1, v2),
                                  tensor_product(p0, w1) + tensor_product(p1, w2));
}

/// Choi operator of the superchannel as a map on the 4-dim Choi space:
/// Omega = (1/4) sum_a vec(S_a) vec(S_a)^dag, row-major vec.
inline SuperchannelChoi superchannel_choi(const SuperchannelKraus& s) {
    Matrix omega = Matrix::Zero(16, 16);
    for (const auto& k : s.kraus()) {
        Vector v(16);
        for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l) v(j * 4 + l) = k(j, l);
        omega += 0.25 * v * v.adjoint();
    }
    return SuperchannelChoi(0.5 * (omega + omega.adjoint().eval()));
}

/// Apply the superchannel recovered from its 16x16 Choi operator.
inline ChoiState act_from_superchannel_choi(const SuperchannelChoi& sc,
                                            const ChoiState& omega) {
    Matrix out = Matrix::Zero(4, 4);
    const Matrix& big = sc.entries();
    const Matrix& w = omega.entries();
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            Complex s = 0;
            for (int l = 0; l < 4; ++l)
                for (int m = 0; m < 4; ++m) s += w(l, m) * big(j * 4 + l, k * 4 + m);
            out(j, k) = 4.0 * s;
        }
    return ChoiState(0.5 * (out + out.adjoint().eval()));
}

/// Deterministic Haar-random gen-extreme superchannel.
inline GenExtremeSuperchannel random_gen_extreme(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix v = haar_random_unitary(8, rng);
    Matrix w = haar_random_unitary(8, rng);
    return GenExtremeSuperchannel(std::move(v), std::move(w));
}

/// Brute-force 4-qubit circuit simulation of the gen-extreme form: dilation
/// ancilla (x) system (x) 2-qubit ancilla, V and W on the last two factors,
/// the dilated input channel on the first two, ancilla trace-out at the end.
inline DensityMatrix simulate_circuit(const GenExtremeSuperchannel& g,
                                      const KrausChannel& input,
                                      const DensityMatrix& rho_in) {
    if (input.dim_in() != 2 || rho_in.dim() != 2)
        throw std::invalid_argument("simulate_circuit: qubit channels only");
    const Matrix u = stinespring_dilate(input);  // system (x) dilation ancilla
    const Eigen::Index da = u.rows() / 2;

    // reorder the dilation to ancilla (x) system to match the register layout
    Matrix u_pair(2 * da, 2 * da);
    for (Eigen::Index a1 = 0; a1 < da; ++a1)
        for (int s1 = 0; s1 < 2; ++s1)
            for (Eigen::Index a2 = 0; a2 < da; ++a2)
                for (int s2 = 0; s2 < 2; ++s2)
                    u_pair(a1 * 2 + s1, a2 * 2 + s2) = u(s1 * da + a1, s2 * da + a2);

    Matrix anc0 = Matrix::Zero(da, da);
    anc0(0, 0) = 1;
    Matrix anc00 = Matrix::Zero(4, 4);
    anc00(0, 0) = 1;

    Matrix rho = tensor_product(anc0, rho_in.entries(), anc00);
    const Matrix v_full = tensor_product(identity(da), g.v());
    const Matrix w_full = tensor_product(identity(da), g.w());
    const Matrix u_full = tensor_product(u_pair, identity(4));

    rho = v_full * rho * v_full.adjoint();
    rho = u_full * rho * u_full.adjoint();
    rho = w_full * rho * w_full.adjoint();
    Matrix out = partial_trace(rho, {da, 2, 4}, {1});
    return DensityMatrix(0.5 * (out + out.adjoint().eval()));
}

}  // namespace superkit
