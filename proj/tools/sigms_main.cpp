#include <CLI11.hpp>
#include <iostream>

#include "sigms/cembasis.hpp"
#include "sigms/experiment.hpp"
#include "sigms/expr.hpp"
#include "sigms/io.hpp"

namespace {

using namespace sigms;

// CLI overrides applied on top of an optional config file.
struct Overrides {
    std::map<std::string, std::string> entries;

    void add_flags(CLI::App* cmd) {
        auto bind = [this, cmd](const std::string& flag, const std::string& key,
                                const std::string& desc) {
            cmd->add_option_function<std::string>(
                flag, [this, key](const std::string& v) { entries[key] = v; }, desc);
        };
        bind("--grid", "nx_fine", "fine elements per axis");
        bind("--coarse", "n_coarse", "coarse elements per axis");
        bind("--medium-style", "medium_style", "medium style: A, B or random");
        bind("--kappa-ratio", "kappa_ratio", "contrast ratio kappa_I / kappa_m");
        bind("--seed", "seed", "medium generator seed");
        bind("--medium-file", "medium_file", "load medium from file instead of generating");
        bind("--source", "source", "source term: f1, f2 or an expression in x,y");
        bind("--neumann", "neumann", "Neumann data expression (default 0)");
        bind("--c", "c", "active set classification constant");
        bind("--max-iter", "max_iter", "iteration cap of the active set loop");
        bind("--oversample", "oversample", "oversampling layers m");
        bind("--eigvecs", "eigvecs", "eigenvectors per coarse element l_m");
        bind("--weight-mode", "weight_mode", "spectral weight: simplified or lagrange-sum");
        bind("--variant", "variants", "comma list of variants: fine,cem,oracle");
        bind("--out", "output_dir", "output directory");
        bind("--threads", "threads", "worker thread cap (1 = serial)");
    }

    ExperimentConfig resolve(const std::string& config_path) const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        for (const auto& [k, v] : entries) apply_config_entry(cfg, k, v);
        cfg.validate();
        return cfg;
    }
};

int dispatch(int argc, char** argv) {
    CLI::App app{"Signorini contact solver with CEM multiscale discretization"};
    app.require_subcommand(1);

    std::string config_path;

    auto* run_cmd = app.add_subcommand("run", "run the configured experiment");
    run_cmd->add_option("--config", config_path, "config file (key = value)");
    Overrides run_ov;
    run_ov.add_flags(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "rerun the experiment over a parameter");
    sweep_cmd->add_option("--config", config_path, "config file (key = value)");
    std::string sweep_param = "oversample";
    std::vector<std::string> sweep_values;
    sweep_cmd->add_option("--param", sweep_param, "oversample, eigvecs or kappa_ratio");
    sweep_cmd->add_option("--values", sweep_values, "parameter values")->required();
    Overrides sweep_ov;
    sweep_ov.add_flags(sweep_cmd);

    auto* med_cmd = app.add_subcommand("generate-medium", "write a generated medium file");
    std::string med_out = "medium.txt";
    med_cmd->add_option("--out-file", med_out, "target file");
    Overrides med_ov;
    med_ov.add_flags(med_cmd);

    auto* basis_cmd = app.add_subcommand("dump-basis", "write multiscale basis columns");
    int basis_i = 0, basis_j = 0;
    std::string basis_out = "psi.txt";
    basis_cmd->add_option("--coarse-index", basis_i, "coarse element index i");
    basis_cmd->add_option("--mode", basis_j, "eigenmode index j (0-based)");
    basis_cmd->add_option("--out-file", basis_out, "target file");
    basis_cmd->add_option("--config", config_path, "config file (key = value)");
    Overrides basis_ov;
    basis_ov.add_flags(basis_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (run_cmd->parsed()) {
        const ExperimentConfig cfg = run_ov.resolve(config_path);
        const ExperimentResult r = run_experiment(cfg);
        if (r.fine)
            std::cout << "fine: terminated at k=" << r.fine->iterations << ", |A|="
                      << r.fine->terminal.active_count() << "\n";
        if (r.cem)
            std::cout << "cem: terminated at k=" << r.cem->iterations << ", |A|="
                      << r.cem->terminal.active_count() << "\n";
        if (r.table)
            std::cout << "terminal errors: E_L=" << r.table->e_l2.back()
                      << " E_a=" << r.table->e_energy.back() << "\n";
        std::cout << "artifacts written to " << cfg.output_dir << "\n";
        return 0;
    }
    if (sweep_cmd->parsed()) {
        const ExperimentConfig cfg = sweep_ov.resolve(config_path);
        run_sweep(cfg, sweep_param, sweep_values);
        std::cout << "sweep artifacts written to " << cfg.output_dir << "\n";
        return 0;
    }
    if (med_cmd->parsed()) {
        const ExperimentConfig cfg = med_ov.resolve(config_path);
        const GridHierarchy g = build_hierarchy(cfg.nx_fine, cfg.n_coarse);
        const PermeabilityField field =
            generate_medium(g, cfg.medium_style, cfg.kappa_ratio, cfg.seed);
        save_medium(field, g, med_out);
        std::cout << "medium written to " << med_out << "\n";
        return 0;
    }
    if (basis_cmd->parsed()) {
        const ExperimentConfig cfg = basis_ov.resolve(config_path);
        const Pipeline pl = build_pipeline(cfg);
        const AuxiliarySpace aux =
            build_auxiliary(pl.grid, pl.kappa, pl.weight, cfg.eigvecs, cfg.threads);
        if (basis_i < 0 || basis_i >= pl.grid.n_coarse)
            throw ConfigError("dump-basis: coarse index out of range");
        if (basis_j < 0 || basis_j >= cfg.eigvecs)
            throw ConfigError("dump-basis: mode index out of range");
        const ActiveFlags none(pl.grid.num_fine_nodes(), 0);
        const DomainRestriction r =
            restrict_domain(pl.grid, pl.boundary, none, basis_i, cfg.oversample);
        const Vector psi =
            build_basis_column_fine(pl.grid, pl.kappa, aux, r, basis_i, basis_j);
        dump_field(pl.grid, psi, basis_out);
        std::cout << "basis column (" << basis_i << "," << basis_j << ") written to "
                  << basis_out << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const sigms::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const sigms::NonTerminationError& e) {
        std::cerr << "non-termination: " << e.what() << "\n";
        return 4;
    } catch (const sigms::SolveError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
