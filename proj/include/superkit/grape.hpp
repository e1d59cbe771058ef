// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "superkit/linalg.hpp"

namespace superkit {

/// Weak-coupling spin system: chemical shifts nu_i and scalar couplings
/// J_{ij} in Hz, both entering the internal Hamiltonian through pi factors.
struct SpinSystem {
    int n_spins = 0;
    std::vector<double> chemical_shifts_hz;
    std::map<std::pair<int, int>, double> j_couplings_hz;  // keys (i, j), i < j

    void check() const {
        if (n_spins < 1 || chemical_shifts_hz.size() != std::size_t(n_spins))
            throw std::invalid_argument("SpinSystem: need one chemical shift per spin");
        for (const auto& [key, j] : j_couplings_hz) {
            (void)j;
            if (key.first < 0 || key.first >= key.second || key.second >= n_spins)
                throw std::invalid_argument("SpinSystem: couplings require 0 <= i < j < n");
        }
    }

    Eigen::Index dim() const { return Eigen::Index(1) << n_spins; }
};

/// The 4 carbons of trans-crotonic acid.
inline SpinSystem trans_crotonic_acid() {
    SpinSystem sys;
    sys.n_spins = 4;
    sys.chemical_shifts_hz = {-1707.1, -14560.6, -12330.4, -16765.2};
    sys.j_couplings_hz = {{{0, 1}, 41.64}, {{0, 2}, 1.45},  {{0, 3}, 7.04},
                          {{1, 2}, 69.69}, {{1, 3}, 1.16},  {{2, 3}, 72.35}};
    return sys;
}

/// Restriction of a spin system to a subset of its spins (couplings to
/// dropped spins are discarded).
inline SpinSystem subsystem(const SpinSystem& sys, const std::vector<int>& spins) {
    sys.check();
    SpinSystem out;
    out.n_spins = int(spins.size());
    std::map<int, int> index;
    for (std::size_t k = 0; k < spins.size(); ++k) {
        out.chemical_shifts_hz.push_back(sys.chemical_shifts_hz.at(std::size_t(spins[k])));
        index[spins[k]] = int(k);
    }
    for (const auto& [key, j] : sys.j_couplings_hz) {
        auto a = index.find(key.first), b = index.find(key.second);
        if (a != index.end() && b != index.end())
            out.j_couplings_hz[{std::min(a->second, b->second),
                                std::max(a->second, b->second)}] = j;
    }
    out.check();
    return out;
}

/// Piecewise-constant x/y control amplitudes (Hz) per slice and per spin.
struct ControlPulse {
    int n_slices = 0;
    double slice_duration = 0;  // seconds
    // amplitudes[slice][spin] = {u_x, u_y}
    std::vector<std::vector<std::array<double, 2>>> amplitudes;

    void check() const {
        if (n_slices < 1 || slice_duration <= 0 ||
            amplitudes.size() != std::size_t(n_slices))
            throw std::invalid_argument("ControlPulse: malformed slice layout");
        for (const auto& s : amplitudes)
            if (s.size() != amplitudes.front().size() || s.empty())
                throw std::invalid_argument("ControlPulse: inconsistent spin count");
    }

    double total_duration() const { return n_slices * slice_duration; }
};

inline ControlPulse zero_pulse(int n_slices, double slice_duration, int n_spins) {
    ControlPulse p;
    p.n_slices = n_slices;
    p.slice_duration = slice_duration;
    p.amplitudes.assign(std::size_t(n_slices),
                        std::vector<std::array<double, 2>>(std::size_t(n_spins), {0, 0}));
    p.check();
    return p;
}

namespace detail {

inline Matrix single_spin_op(int n_spins, int spin, const Matrix& op) {
    Matrix out = identity(1);
    for (int k = 0; k < n_spins; ++k)
        out = tensor_product(out, k == spin ? op : identity(2));
    return out;
}

}  // namespace detail

/// H_int = sum_i pi nu_i sigma_z^i + sum_{i<j} (pi/2) J_ij sigma_z^i sigma_z^j
/// in rad/s; diagonal in the computational basis.
inline Matrix internal_hamiltonian(const SpinSystem& sys) {
    sys.check();
    const Eigen::Index d = sys.dim();
    Matrix h = Matrix::Zero(d, d);
    auto z_sign = [&](Eigen::Index state, int spin) {
        return (state >> (sys.n_spins - 1 - spin)) & 1 ? -1.0 : 1.0;
    };
    for (Eigen::Index s = 0; s < d; ++s) {
        double e = 0;
        for (int i = 0; i < sys.n_spins; ++i)
            e += kPi * sys.chemical_shifts_hz[std::size_t(i)] * z_sign(s, i);
        for (const auto& [key, j] : sys.j_couplings_hz)
            e += 0.5 * kPi * j * z_sign(s, key.first) * z_sign(s, key.second);
        h(s, s) = e;
    }
    return h;
}

namespace detail {

/// Slice Hamiltonian H_int + sum_j pi (u_x sigma_x^j + u_y sigma_y^j).
inline Matrix slice_hamiltonian(const SpinSystem& sys, const Matrix& h_int,
                                const std::vector<std::array<double, 2>>& amps,
                                const std::vector<Matrix>& sx,
                                const std::vector<Matrix>& sy) {
    Matrix h = h_int;
    for (int j = 0; j < sys.n_spins; ++j)
        h += kPi * amps[std::size_t(j)][0] * sx[std::size_t(j)] +
             kPi * amps[std::size_t(j)][1] * sy[std::size_t(j)];
    return h;
}

}  // namespace detail

/// Ordered product over slices of exp(-i dt (H_int + H_ctrl(slice))).
inline Matrix propagate(const SpinSystem& sys, const ControlPulse& pulse) {
    sys.check();
    pulse.check();
    if (pulse.amplitudes.front().size() != std::size_t(sys.n_spins))
        throw std::invalid_argument("propagate: pulse spin count mismatch");
    const Matrix h_int = internal_hamiltonian(sys);
    std::vector<Matrix> sx, sy;
    for (int j = 0; j < sys.n_spins; ++j) {
        sx.push_back(detail::single_spin_op(sys.n_spins, j, pauli(1)));
        sy.push_back(detail::single_spin_op(sys.n_spins, j, pauli(2)));
    }
    Matrix u = identity(sys.dim());
    for (const auto& amps : pulse.amplitudes) {
        const Matrix h = detail::slice_hamiltonian(sys, h_int, amps, sx, sy);
        u = exp_i_hermitian(-pulse.slice_duration * h) * u;
    }
    return u;
}

/// F = |Tr(u_target^dag u_actual)|^2 / dim^2, invariant under global phases.
inline double gate_fidelity(const Matrix& u_target, const Matrix& u_actual) {
    if (u_target.rows() != u_actual.rows() || u_target.cols() != u_actual.cols())
        throw std::invalid_argument("gate_fidelity: dimension mismatch");
    const double d = double(u_target.rows());
    return std::norm((u_target.adjoint() * u_actual).trace()) / (d * d);
}

struct GrapeConfig {
    int n_slices = 200;
    double total_duration = 0.02;  // seconds
    int restarts = 3;
    int max_iters = 4000;
    double target_fidelity = 0.995;
    double init_amplitude_hz = 100.0;  // stddev of the random initial controls
    double learning_rate = 150.0;      // Adam step, in Hz
    double lr_decay = 3e-4;
    std::uint64_t seed = 0;
    // optional robustness ensemble over control-amplitude scalings
    bool rf_robust = false;
    std::vector<double> rf_scalings = {0.95, 1.0, 1.05};
};

struct GrapeResult {
    ControlPulse pulse;
    double fidelity = 0;
    bool converged = false;
    std::vector<std::pair<int, double>> log;  // (iteration, fidelity) of accepted steps
};

namespace detail {

/// Fidelity and its exact gradient w.r.t. every control amplitude, via the
/// Daleckii-Krein directional derivative of each slice exponential.
inline double grape_fidelity_grad(const SpinSystem& sys, const Matrix& u_target,
                                  const ControlPulse& pulse, const Matrix& h_int,
                                  const std::vector<Matrix>& sx,
                                  const std::vector<Matrix>& sy,
                                  std::vector<double>* grad) {
    const int ns = pulse.n_slices, nq = sys.n_spins;
    const double dt = pulse.slice_duration;
    const Eigen::Index d = sys.dim();

    std::vector<ExpIHermitian> exps;
    exps.reserve(std::size_t(ns));
    std::vector<Matrix> fwd(std::size_t(ns) + 1);  // fwd[k] = U_k ... U_1
    fwd[0] = identity(d);
    for (int k = 0; k < ns; ++k) {
        exps.emplace_back(-dt * slice_hamiltonian(sys, h_int, pulse.amplitudes[std::size_t(k)],
                                                  sx, sy));
        fwd[std::size_t(k) + 1] = exps.back().value() * fwd[std::size_t(k)];
    }
    const Complex z = (u_target.adjoint() * fwd[std::size_t(ns)]).trace();
    const double dim2 = double(d) * double(d);
    if (!grad) return std::norm(z) / dim2;

    grad->assign(std::size_t(ns) * std::size_t(nq) * 2, 0.0);
    Matrix bwd = u_target.adjoint();  // bwd at slice k: u_target^dag U_ns ... U_{k+1}
    for (int k = ns - 1; k >= 0; --k) {
        const Matrix prefix = fwd[std::size_t(k)] * bwd;  // A_k B_k, cyclic trace order
        for (int j = 0; j < nq; ++j)
            for (int c = 0; c < 2; ++c) {
                const Matrix& s = c == 0 ? sx[std::size_t(j)] : sy[std::size_t(j)];
                const Matrix du = exps[std::size_t(k)].forward((-dt * kPi) * s);
                const Complex dz = (prefix * du).trace();
                (*grad)[(std::size_t(k) * std::size_t(nq) + std::size_t(j)) * 2 +
                        std::size_t(c)] = 2.0 * std::real(std::conj(z) * dz) / dim2;
            }
        bwd = bwd * exps[std::size_t(k)].value();
    }
    return std::norm(z) / dim2;
}

}  // namespace detail

/// Fidelity gradient of a pulse against a target gate (exposed for testing
/// against finite differences). Layout: [slice][spin][x,y] flattened.
inline std::vector<double> grape_gradient(const SpinSystem& sys, const Matrix& u_target,
                                          const ControlPulse& pulse) {
    sys.check();
    pulse.check();
    const Matrix h_int = internal_hamiltonian(sys);
    std::vector<Matrix> sx, sy;
    for (int j = 0; j < sys.n_spins; ++j) {
        sx.push_back(detail::single_spin_op(sys.n_spins, j, pauli(1)));
        sy.push_back(detail::single_spin_op(sys.n_spins, j, pauli(2)));
    }
    std::vector<double> g;
    detail::grape_fidelity_grad(sys, u_target, pulse, h_int, sx, sy, &g);
    return g;
}

/// Multi-start Adam ascent on the (ensemble) fidelity with best-point
/// tracking: an iteration is accepted into the convergence log only when it
/// improves on the incumbent best, so the log is monotone non-decreasing and
/// the returned pulse never scores below the initial one.
inline GrapeResult grape_optimize(const SpinSystem& sys, const Matrix& u_target,
                                  const GrapeConfig& cfg = {}) {
    sys.check();
    if (u_target.rows() != sys.dim() || !is_unitary(u_target))
        throw std::invalid_argument("grape_optimize: target must be a 2^n unitary");

    const Matrix h_int = internal_hamiltonian(sys);
    std::vector<Matrix> sx, sy;
    for (int j = 0; j < sys.n_spins; ++j) {
        sx.push_back(detail::single_spin_op(sys.n_spins, j, pauli(1)));
        sy.push_back(detail::single_spin_op(sys.n_spins, j, pauli(2)));
    }

    const std::vector<double> scalings =
        cfg.rf_robust ? cfg.rf_scalings : std::vector<double>{1.0};
    auto scaled = [&](const ControlPulse& p, double s) {
        ControlPulse q = p;
        for (auto& sl : q.amplitudes)
            for (auto& a : sl) {
                a[0] *= s;
                a[1] *= s;
            }
        return q;
    };
    auto evaluate = [&](const ControlPulse& p, std::vector<double>* grad) {
        double f = 0;
        if (grad) grad->assign(std::size_t(p.n_slices) * std::size_t(sys.n_spins) * 2, 0.0);
        std::vector<double> g;
        for (double s : scalings) {
            const double fs = detail::grape_fidelity_grad(sys, u_target, scaled(p, s), h_int,
                                                          sx, sy, grad ? &g : nullptr);
            f += fs / double(scalings.size());
            if (grad)  // d(scaled amp)/d(amp) = s
                for (std::size_t i = 0; i < g.size(); ++i)
                    (*grad)[i] += s * g[i] / double(scalings.size());
        }
        return f;
    };

    GrapeResult res;
    res.fidelity = -1;
    const std::size_t np = std::size_t(cfg.n_slices) * std::size_t(sys.n_spins) * 2;
    for (int r = 0; r < cfg.restarts && !res.converged; ++r) {
        ControlPulse pulse = zero_pulse(cfg.n_slices, cfg.total_duration / cfg.n_slices,
                                        sys.n_spins);
        std::mt19937_64 rng(cfg.seed * 6364136223846793005ULL + std::uint64_t(r));
        std::normal_distribution<double> gauss(0.0, cfg.init_amplitude_hz);
        if (cfg.init_amplitude_hz > 0)
            for (auto& s : pulse.amplitudes)
                for (auto& a : s) {
                    a[0] = gauss(rng);
                    a[1] = gauss(rng);
                }

        std::vector<double> grad(np), m(np, 0), v(np, 0);
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        double f = evaluate(pulse, &grad);
        ControlPulse best_pulse = pulse;
        double best_f = f;
        std::vector<std::pair<int, double>> log{{0, f}};
        for (int it = 1; it <= cfg.max_iters && best_f < cfg.target_fidelity; ++it) {
            const double c1 = 1.0 - std::pow(b1, it);
            const double c2 = 1.0 - std::pow(b2, it);
            const double lr = cfg.learning_rate / (1.0 + cfg.lr_decay * it);
            std::size_t i = 0;
            for (auto& s : pulse.amplitudes)
                for (auto& a : s)
                    for (int c = 0; c < 2; ++c, ++i) {
                        m[i] = b1 * m[i] + (1 - b1) * grad[i];
                        v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
                        a[std::size_t(c)] += lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
                    }
            f = evaluate(pulse, &grad);
            if (f > best_f) {
                best_f = f;
                best_pulse = pulse;
                log.emplace_back(it, f);
            }
        }
        if (best_f > res.fidelity) {
            res.fidelity = best_f;
            res.pulse = std::move(best_pulse);
            res.log = std::move(log);
            res.converged = best_f >= cfg.target_fidelity;
        }
    }
    return res;
}

}  // namespace superkit
