#pragma once

#include <map>
#include <optional>
#include <string>

#include "sigms/auxspace.hpp"
#include "sigms/cembasis.hpp"
#include "sigms/config.hpp"
#include "sigms/contactsolve.hpp"
#include "sigms/metrics.hpp"

namespace sigms {

/// Assembled pipeline shared by the solver variants.
struct Pipeline {
    GridHierarchy grid;
    BoundaryDecomposition boundary;
    PermeabilityField kappa;
    WeightField weight;
    ScalarField source;
    ScalarField neumann;
    ContactProblem problem;
    SparseMat mass;
};

Pipeline build_pipeline(const ExperimentConfig& cfg);

/// Results of one experiment run (per requested variant).
struct ExperimentResult {
    std::optional<RunResult> fine;
    std::optional<RunResult> cem;
    std::optional<Vector> oracle;
    std::optional<ErrorTable> table;  // present when fine and cem both ran
    double lambda_report = 0.0;       // min_i lambda_i^{l+1}, cem runs only
    std::map<std::string, double> timings_sec;
};

/// Run the configured variants and write all artifacts (metrics CSVs, field
/// dumps, contact traces, set traces, manifest) into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Run the cem variant for each value of a sweep parameter (one directory
/// per value) and write a terminal-error summary CSV.
void run_sweep(const ExperimentConfig& cfg, const std::string& param,
               const std::vector<std::string>& values);

} // namespace sigms
