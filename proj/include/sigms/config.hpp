#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigms/grid.hpp"
#include "sigms/medium.hpp"

namespace sigms {

/// Resolved experiment configuration. Defaults give the desk-scale analogue
/// of the default study: 200x200 fine grid, H = 1/20, style-A medium at
/// contrast 1e3, source f1, c = 10, l_m = 4, m = 4.
struct ExperimentConfig {
    int nx_fine = 200;
    int n_coarse = 20;

    BoundarySpec boundary;  // bottom=C, top=D, left=N, right=N

    MediumStyle medium_style = MediumStyle::A;
    double kappa_ratio = 1e3;
    std::uint64_t seed = 1;
    std::string medium_file;  // nonempty overrides generation

    std::string source = "f1";   // f1 | f2 | expression
    std::string neumann = "0";   // expression, 0 disables the boundary term

    double c = 10.0;
    int max_iter = 20;
    double solve_tol = 1e-10;

    int oversample = 4;
    int eigvecs = 4;
    WeightMode weight_mode = WeightMode::Simplified;

    std::vector<std::string> variants = {"fine", "cem"};
    std::string output_dir = "out";
    int threads = 1;

    void validate() const;
};

/// Flat key = value text with optional [section] headers and # comments;
/// section names are organizational only. The boundary key accepts the
/// inline form  boundary = {bottom="C", top="D", left="N", right="N"}.
ExperimentConfig parse_config_file(const std::string& path);

/// Apply one key/value pair (also used for CLI overrides).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// Full echo of a resolved configuration (manifest content).
std::string describe(const ExperimentConfig& cfg);

} // namespace sigms
