#pragma once

#include <string>
#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/contactsolve.hpp"

namespace sigms {

/// Relative L2 and energy errors between a reference and an approximation:
/// ||u_ref - u|| / ||u_ref|| in the plain-mass and stiffness norms.
struct RelativeErrors {
    double l2 = 0.0;
    double energy = 0.0;
};

RelativeErrors relative_errors(const Vector& u_ref, const Vector& u, const SparseMat& A,
                               const SparseMat& M);

/// Energy norm via elementwise 2x2 Gauss quadrature of kappa |grad u|^2;
/// independent of the stiffness-congruence route.
double energy_norm_quadrature(const GridHierarchy& g, const PermeabilityField& kappa,
                              const Vector& u);

/// Iteration rates T_k = ||u_k - u*|| / ||u_{k-1} - u*|| for k = 1..k0 with
/// u* the terminal iterate of the same history. A vanishing denominator
/// before termination marks exact convergence and yields rate 0.
struct IterationRates {
    std::vector<double> l2;
    std::vector<double> energy;
};

IterationRates iteration_rates(const std::vector<ContactState>& history, const SparseMat& A,
                               const SparseMat& M);

/// Per-iteration table reproducing the experiment metrics. Histories of
/// different lengths are aligned by repeating the terminal iterate (the
/// iteration is stationary after its fixpoint).
struct ErrorTable {
    std::vector<double> e_l2, e_energy;
    std::vector<double> t_cem_l2, t_cem_energy;
    std::vector<double> t_fe_l2, t_fe_energy;
    int rows() const { return static_cast<int>(e_l2.size()); }
};

ErrorTable build_error_table(const std::vector<ContactState>& fe_history,
                             const std::vector<ContactState>& cem_history,
                             const SparseMat& A, const SparseMat& M);

/// CSV with columns k,E_L,E_a,T_cem_L,T_cem_a,T_fe_L,T_fe_a, one row per
/// iteration, scientific notation with 6 significant digits.
std::string error_table_csv(const ErrorTable& t);

} // namespace sigms
