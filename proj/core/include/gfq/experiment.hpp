#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gfq/cases.hpp"
#include "gfq/dec.hpp"

namespace gfq {

enum class InitMode { sample, llrr, opt };

InitMode parse_init_mode(std::string_view name);
const char* init_mode_name(InitMode m);

/// @brief Everything needed to reproduce one time-dependent run.
struct ExperimentConfig {
    std::string case_name = "oblique";
    SchemeKind scheme = SchemeKind::supg_gfq;
    int K = 2;
    int nx = 20, ny = 20;
    double alpha = 0.1;
    double cfl = 0.1;
    int M = 0, P = 0;  // 0 selects the defaults for K
    InitMode init = InitMode::sample;
    double T_final = 1.0;
    long cadence = 0;   // diagnostics every `cadence` steps; 0 keeps only the endpoints
    bool perturb = false;
    Perturbation perturbation;
    std::uint64_t seed = 0;  // adds a uniform nodal noise of amplitude `noise` when nonzero
    double noise = 0.0;

    void validate() const;
};

struct DiagnosticsRow {
    double t = 0.0;
    L2Errors error;  // NaN when the case has no exact solution
    double div_galerkin = 0.0, div_gfq = 0.0;
    double energy = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    Grid2D grid;
    StateField q0, q;
    double t = 0.0, dt = 0.0;
    long steps = 0;
    std::vector<DiagnosticsRow> history;
    double drift = 0.0;  // max |q(T) - q(0)|
};

// Initial data for a case on a grid (projection, then perturbation and noise).
StateField initial_state(const ExperimentConfig& cfg, const TestCase& tc, const Grid2D& grid);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct ConvergenceRow {
    int N = 0;
    L2Errors error;
    L2Errors order;  // NaN on the first row
    double seconds = 0.0;
};

// Runs base.nx = base.ny = N for each N; up to `jobs` runs in parallel.
std::vector<ConvergenceRow> converge(const ExperimentConfig& base, const std::vector<int>& Ns, int jobs = 1);

// <case>_<scheme>_ord<K+1>_N<NNNN>.csv
std::string output_name(const ExperimentConfig& cfg);

void write_history_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);
// Columns x, y, u, v, p.
void write_field_csv(const std::filesystem::path& path, const Grid2D& grid, const StateField& q);
// Radius scatter of v around the Riemann centre with the exact profile where it is defined.
void write_riemann_csv(const std::filesystem::path& path, const Grid2D& grid, const StateField& q, double t);

// Process-wide: keep freed field buffers in the heap instead of returning them to the OS.
// Time stepping churns through same-sized temporaries; on glibc this avoids page faults on every one.
// No-op elsewhere. Call once from main.
void retain_freed_memory();

}  // namespace gfq
