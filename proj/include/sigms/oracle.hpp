#pragma once

#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/contactsolve.hpp"
#include "sigms/numkernel.hpp"

namespace sigms {

/// Box-constrained quadratic program min 1/2 x^T A x - b^T x with x <= 0 at
/// the marked nodes. Indices refer to the free-dof numbering (Dirichlet
/// already eliminated).
struct QpInstance {
    SparseMat A;
    Vector b;
    std::vector<int> bounded;  // free-dof indices carrying the u <= 0 bound
};

/// Fine contact problem as a QP on free dofs, plus the map back.
struct QpSetup {
    QpInstance qp;
    DofMap dofs;
};
QpSetup qp_from_problem(const ContactProblem& p);

/// One in-place Gauss-Seidel sweep with pointwise projection min(., 0) at
/// the bounded nodes; returns the max-norm iterate change.
double pgs_sweep(const QpInstance& inst, Vector& x);

/// Projected Gauss-Seidel: plain sweeps until the max-norm change of one
/// sweep drops to tol. Deliberately simple; exists as an independent
/// reference.
Vector solve_projected_gs(const QpInstance& inst, double tol = 1e-12,
                          int max_sweeps = 500000);

/// Energy 1/2 x^T A x - b^T x (monotone across sweeps).
double qp_energy(const QpInstance& inst, const Vector& x);

/// Full-grid oracle solution of the contact problem.
Vector oracle_solution(const ContactProblem& p, double tol = 1e-12,
                       int max_sweeps = 500000);

/// Active set implied by an oracle solution: bound tight and multiplier
/// (residual) strictly positive.
std::vector<char> oracle_active_set(const ContactProblem& p, const Vector& u_fine);

} // namespace sigms
