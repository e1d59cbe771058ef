// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "superkit/channels.hpp"
#include "superkit/decomp.hpp"
#include "superkit/grape.hpp"

namespace superkit::io {

using nlohmann::json;

/// Shortest exact decimal for a double (%.17g), used everywhere a number is
/// written to disk so that exports are byte-stable.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// --- matrices ---------------------------------------------------------------

/// {"dim": n, "data": [[re, im], ...]} row-major; square matrices only.
inline json matrix_to_json(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("matrix_to_json: square matrices only");
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"dim", m.rows()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
    const Eigen::Index n = j.at("dim").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (n < 1 || data.size() != std::size_t(n * n))
        throw std::invalid_argument("matrix_from_json: dim/data mismatch");
    Matrix m(n, n);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c, ++i)
            m(r, c) = Complex(data[i].at(0).get<double>(), data[i].at(1).get<double>());
    return m;
}

// --- channels ---------------------------------------------------------------

inline json channel_to_json(const KrausChannel& ch) {
    json kraus = json::array();
    for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
    return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(kraus)}};
}

inline KrausChannel channel_from_json(const json& j) {
    std::vector<Matrix> kraus;
    for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
    return KrausChannel(j.at("dim_in").get<Eigen::Index>(),
                        j.at("dim_out").get<Eigen::Index>(), std::move(kraus));
}

// --- decompositions ---------------------------------------------------------

inline json decomposition_to_json(const ConvexDecomposition& d) {
    d.check();
    json components = json::array();
    for (const auto& c : d.components)
        components.push_back({{"V", matrix_to_json(c.v())}, {"W", matrix_to_json(c.w())}});
    return {{"weights", d.weights},
            {"components", std::move(components)},
            {"achieved_distance", d.achieved_distance},
            {"converged", d.converged},
            {"seed", d.seed}};
}

inline ConvexDecomposition decomposition_from_json(const json& j) {
    ConvexDecomposition d;
    d.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& c : j.at("components"))
        d.components.emplace_back(matrix_from_json(c.at("V")), matrix_from_json(c.at("W")));
    d.achieved_distance = j.at("achieved_distance").get<double>();
    d.converged = j.at("converged").get<bool>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.check();
    return d;
}

// --- pulses and spin systems ------------------------------------------------

inline json pulse_to_json(const ControlPulse& p) {
    p.check();
    json slices = json::array();
    for (const auto& s : p.amplitudes) {
        json spins = json::array();
        for (const auto& a : s) spins.push_back({a[0], a[1]});
        slices.push_back(std::move(spins));
    }
    return {{"n_slices", p.n_slices},
            {"slice_duration_s", p.slice_duration},
            {"amplitudes_hz", std::move(slices)}};
}

inline ControlPulse pulse_from_json(const json& j) {
    ControlPulse p;
    p.n_slices = j.at("n_slices").get<int>();
    p.slice_duration = j.at("slice_duration_s").get<double>();
    for (const auto& s : j.at("amplitudes_hz")) {
        std::vector<std::array<double, 2>> spins;
        for (const auto& a : s)
            spins.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        p.amplitudes.push_back(std::move(spins));
    }
    p.check();
    return p;
}

inline json spin_system_to_json(const SpinSystem& sys) {
    sys.check();
    json couplings = json::array();
    for (const auto& [key, v] : sys.j_couplings_hz)
        couplings.push_back({key.first, key.second, v});
    return {{"n_spins", sys.n_spins},
            {"chemical_shifts_hz", sys.chemical_shifts_hz},
            {"j_couplings_hz", std::move(couplings)}};
}

inline SpinSystem spin_system_from_json(const json& j) {
    SpinSystem sys;
    sys.n_spins = j.at("n_spins").get<int>();
    sys.chemical_shifts_hz = j.at("chemical_shifts_hz").get<std::vector<double>>();
    for (const auto& c : j.at("j_couplings_hz"))
        sys.j_couplings_hz[{c.at(0).get<int>(), c.at(1).get<int>()}] = c.at(2).get<double>();
    sys.check();
    return sys;
}

// --- files ------------------------------------------------------------------

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_text: cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write_text: write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_json: cannot open " + path.string());
    return json::parse(in);
}

/// CSV writer with a fixed header; all numeric fields must be pre-formatted.
inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string text = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            text += (i ? "," : "") + row[i];
        text += "\n";
    }
    write_text(path, text);
}

/// FNV-1a over the %.17g renderings of a list of matrices; identifies a
/// matrix bundle in exported metadata.
inline std::uint64_t bundle_hash(const std::vector<Matrix>& ms) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& m : ms)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                mix(format_double(m(r, c).real()));
                mix(format_double(m(r, c).imag()));
            }
    return h;
}

}  // namespace superkit::io
