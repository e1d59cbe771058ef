// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
//
// Replication CLI. Subcommands:
//   superkit run <experiment> --spec file.json --out dir [--samples N]
//                             [--seed S] [--raw-matrices]
//   superkit decompose --target choi.json --components K [--out file.json]
//   superkit qec-scan  --lambdas start:stop:step [--out file.csv]
//   superkit grape     --system sys.json --target u.json [--out dir]
//
// Exit code 0 on success; on failure a one-line JSON object
// {"error": "...", "command": "..."} is written to stderr.

#include <iostream>

#include "CLI11.hpp"
#include "superkit/qec_ad.hpp"
#include "superkit/replication.hpp"

namespace {

using superkit::io::json;

std::vector<double> parse_lambda_range(const std::string& text) {
    double start = 0, stop = 0, step = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &tail) != 3 ||
        step <= 0 || stop < start)
        throw std::invalid_argument("--lambdas expects start:stop:step with step > 0");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = start + step * i;
        if (v > stop + 1e-12) break;
        out.push_back(std::min(v, stop));
    }
    return out;
}

int cmd_run(const std::string& experiment, const std::string& spec_path,
            const std::string& out_dir, int samples, std::uint64_t seed,
            bool raw, bool samples_set, bool seed_set) {
    superkit::ExperimentSpec spec;
    spec.name = experiment;
    if (!spec_path.empty()) {
        const json j = superkit::io::read_json(spec_path);
        if (j.contains("name")) spec.name = j.at("name").get<std::string>();
        if (j.contains("sample_count")) spec.sample_count = j.at("sample_count").get<int>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("raw_matrices")) spec.raw_matrices = j.at("raw_matrices").get<bool>();
        if (j.contains("overrides"))
            for (const auto& [key, m] : j.at("overrides").items())
                spec.overrides[key] = superkit::io::matrix_from_json(m);
    }
    if (samples_set) spec.sample_count = samples;
    if (seed_set) spec.seed = seed;
    if (raw) spec.raw_matrices = true;
    spec.output_dir = out_dir;
    spec.check();

    if (spec.name == "qec_scan") {
        std::filesystem::create_directories(out_dir);
        superkit::QecConfig cfg;
        cfg.seed = spec.seed;
        const auto rows = superkit::fidelity_curve(parse_lambda_range("0:0.5:0.05"), cfg);
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : rows)
            csv.push_back({superkit::io::format_double(r.lambda),
                           superkit::io::format_double(r.f_corrected),
                           superkit::io::format_double(r.f_uncorrected),
                           r.converged ? "1" : "0"});
        superkit::io::write_csv(std::filesystem::path(out_dir) / "qec_scan.csv",
                                "lambda,f_corrected,f_uncorrected,converged", csv);
        return 0;
    }
    if (spec.name == "grape_demo") {
        std::filesystem::create_directories(out_dir);
        const superkit::SpinSystem sys =
            superkit::subsystem(superkit::trans_crotonic_acid(), {0, 1});
        superkit::Matrix cnot = superkit::Matrix::Zero(4, 4);
        cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
        superkit::GrapeConfig cfg;
        cfg.seed = spec.seed;
        const superkit::GrapeResult res = superkit::grape_optimize(sys, cnot, cfg);
        superkit::io::write_json(std::filesystem::path(out_dir) / "pulse.json",
                                 superkit::io::pulse_to_json(res.pulse));
        std::vector<std::vector<std::string>> csv;
        for (const auto& [it, f] : res.log)
            csv.push_back({std::to_string(it), superkit::io::format_double(f)});
        superkit::io::write_csv(std::filesystem::path(out_dir) / "grape_log.csv",
                                "iter,fidelity", csv);
        std::cout << "grape_demo: fidelity " << res.fidelity
                  << (res.converged ? " (converged)" : " (not converged)") << "\n";
        return 0;
    }

    const superkit::ExperimentReport rep = superkit::run_experiment(spec);
    superkit::export_report(rep, out_dir);
    for (const auto& [name, value] : rep.metrics)
        std::cout << name << " = " << value << "\n";
    return 0;
}

int cmd_decompose(const std::string& target_path, int components,
                  const std::string& out_path, std::uint64_t seed) {
    const superkit::SuperchannelChoi target(
        superkit::io::matrix_from_json(superkit::io::read_json(target_path)));
    superkit::DecompConfig cfg;
    cfg.seed = seed;
    const superkit::ConvexDecomposition d = superkit::decompose(target, components, cfg);
    superkit::io::write_json(out_path, superkit::io::decomposition_to_json(d));
    std::cout << "achieved_distance = " << d.achieved_distance
              << (d.converged ? " (converged)" : " (not converged)") << "\n";
    return 0;
}

int cmd_qec_scan(const std::string& lambdas, const std::string& out_path,
                 std::uint64_t seed) {
    superkit::QecConfig cfg;
    cfg.seed = seed;
    const auto rows = superkit::fidelity_curve(parse_lambda_range(lambdas), cfg);
    std::vector<std::vector<std::string>> csv;
    for (const auto& r : rows)
        csv.push_back({superkit::io::format_double(r.lambda),
                       superkit::io::format_double(r.f_corrected),
                       superkit::io::format_double(r.f_uncorrected),
                       r.converged ? "1" : "0"});
    superkit::io::write_csv(out_path, "lambda,f_corrected,f_uncorrected,converged", csv);
    return 0;
}

int cmd_grape(const std::string& system_path, const std::string& target_path,
              const std::string& out_dir, int slices, double duration,
              std::uint64_t seed) {
    const superkit::SpinSystem sys =
        superkit::io::spin_system_from_json(superkit::io::read_json(system_path));
    const superkit::Matrix target =
        superkit::io::matrix_from_json(superkit::io::read_json(target_path));
    superkit::GrapeConfig cfg;
    cfg.n_slices = slices;
    cfg.total_duration = duration;
    cfg.seed = seed;
    const superkit::GrapeResult res = superkit::grape_optimize(sys, target, cfg);
    std::filesystem::create_directories(out_dir);
    superkit::io::write_json(std::filesystem::path(out_dir) / "pulse.json",
                             superkit::io::pulse_to_json(res.pulse));
    std::vector<std::vector<std::string>> csv;
    for (const auto& [it, f] : res.log)
        csv.push_back({std::to_string(it), superkit::io::format_double(f)});
    superkit::io::write_csv(std::filesystem::path(out_dir) / "grape_log.csv",
                            "iter,fidelity", csv);
    std::cout << "fidelity = " << res.fidelity
              << (res.converged ? " (converged)" : " (not converged)") << "\n";
    return res.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superkit: qubit channel and superchannel simulation toolkit"};
    app.require_subcommand(1);

    // run
    std::string experiment, spec_path, run_out;
    int samples = 1000;
    std::uint64_t seed = 0;
    bool raw = false;
    auto* run = app.add_subcommand("run", "replay a bundled experiment");
    run->add_option("experiment", experiment,
                    "extreme | dephasing | decomposition | qec_scan | grape_demo")
        ->required();
    run->add_option("--spec", spec_path, "experiment spec JSON");
    run->add_option("--out", run_out, "output directory")->required();
    auto* samples_opt = run->add_option("--samples", samples, "Bloch sample count");
    auto* seed_opt = run->add_option("--seed", seed, "random seed");
    run->add_flag("--raw-matrices", raw, "skip re-unitarization of bundled matrices");

    // decompose
    std::string target_path, decomp_out = "decomposition.json";
    int components = 2;
    std::uint64_t decomp_seed = 0;
    auto* dec = app.add_subcommand("decompose", "convex decomposition of a superchannel");
    dec->add_option("--target", target_path, "16x16 superchannel Choi JSON")->required();
    dec->add_option("--components", components, "number of gen-extreme components")
        ->required();
    dec->add_option("--out", decomp_out, "output decomposition JSON");
    dec->add_option("--seed", decomp_seed, "random seed");

    // qec-scan
    std::string lambdas = "0:0.5:0.05", qec_out = "qec_scan.csv";
    std::uint64_t qec_seed = 0;
    auto* qec = app.add_subcommand("qec-scan", "amplitude-damping code fidelity scan");
    qec->add_option("--lambdas", lambdas, "damping grid start:stop:step");
    qec->add_option("--out", qec_out, "output CSV");
    qec->add_option("--seed", qec_seed, "random seed");

    // grape
    std::string system_path, grape_target_path, grape_out = ".";
    int slices = 200;
    double duration = 0.02;
    std::uint64_t grape_seed = 0;
    auto* gr = app.add_subcommand("grape", "GRAPE pulse optimization");
    gr->add_option("--system", system_path, "spin system JSON")->required();
    gr->add_option("--target", grape_target_path, "target unitary JSON")->required();
    gr->add_option("--out", grape_out, "output directory");
    gr->add_option("--slices", slices, "number of pulse slices");
    gr->add_option("--duration", duration, "total pulse duration in seconds");
    gr->add_option("--seed", grape_seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (run->parsed())
            return cmd_run(experiment, spec_path, run_out, samples, seed, raw,
                           !samples_opt->empty(), !seed_opt->empty());
        if (dec->parsed()) return cmd_decompose(target_path, components, decomp_out, decomp_seed);
        if (qec->parsed()) return cmd_qec_scan(lambdas, qec_out, qec_seed);
        return cmd_grape(system_path, grape_target_path, grape_out, slices, duration,
                         grape_seed);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"command", command}}.dump() << "\n";
        return 1;
    }
}
