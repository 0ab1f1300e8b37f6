#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gfq/experiment.hpp"

namespace gfq::cli {

/// @brief Resolved settings for one invocation: defaults, then the TOML file, then flags.
struct RunConfig {
    std::string command;
    std::string case_name;
    std::string scheme = "supg_gfq";
    int K = 2;
    int nx = 20, ny = 20;
    double alpha = 0.1;
    double cfl = 0.1;
    int M = 0, P = 0;
    std::string init = "sample";
    double T_final = 1.0;
    std::string out;  // output root; empty falls back to $GFQ_OUTPUT_ROOT, then ./runs
    std::uint64_t seed = 0;
    double noise = 0.0;
    long cadence = 0;
    bool perturb = false;
    std::vector<int> Ns;
    int jobs = 1;
    std::string audit = "det";
    int samples = 100;
    std::string method = "opt";
    bool reversed = false;
    bool dense = false;

    void validate() const;
    ExperimentConfig experiment() const;
    nlohmann::ordered_json to_json() const;
    std::filesystem::path run_dir() const;
};

// Flag values; unset entries leave the file or default value alone.
struct Overrides {
    std::optional<std::string> case_name, scheme, init, out, audit, method;
    std::optional<int> K, N, nx, ny, M, P, jobs, samples;
    std::optional<double> alpha, cfl, T_final, noise;
    std::optional<std::uint64_t> seed;
    std::optional<long> cadence;
    std::optional<std::vector<int>> Ns;
    bool perturb = false, reversed = false, dense = false;
};

// Reads the table named after the command (or top-level keys) from a TOML file.
void apply_toml(RunConfig& cfg, const std::filesystem::path& file);
void apply_overrides(RunConfig& cfg, const Overrides& o);

}  // namespace gfq::cli
