#pragma once

#include <memory>
#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/cembasis.hpp"
#include "sigms/grid.hpp"
#include "sigms/numkernel.hpp"

namespace sigms {

/// Assembled contact problem on the fine grid. A and b carry no boundary
/// conditions; constraints are imposed per iteration by the inner solvers.
struct ContactProblem {
    const GridHierarchy* g = nullptr;
    const BoundaryDecomposition* bd = nullptr;
    SparseMat A;
    Vector b;
    double c = 10.0;

    const std::vector<int>& contact_nodes() const { return bd->contact_nodes; }
};

/// One iterate of the active set iteration. lambda and active are aligned
/// with bd->contact_nodes; active is the classification of this iterate
/// (the constraint set the next solve will use). The initial state pins
/// active to the empty set.
struct ContactState {
    int k = 0;
    Vector u;
    Vector lambda;
    std::vector<char> active;

    int active_count() const {
        int n = 0;
        for (char a : active) n += a != 0;
        return n;
    }
};

/// Inner linear solver: u = 0 on Gamma_D and on the given active contact
/// nodes, natural conditions elsewhere.
class SolverVariant {
public:
    virtual ~SolverVariant() = default;
    virtual Vector solve(const std::vector<char>& active_contact) = 0;
    virtual const char* name() const = 0;
};

/// Direct fine-scale FEM solve with row/column elimination.
class FineVariant : public SolverVariant {
public:
    explicit FineVariant(const ContactProblem& p) : p_(p) {}
    Vector solve(const std::vector<char>& active_contact) override;
    const char* name() const override { return "fine"; }

private:
    const ContactProblem& p_;
};

/// CEM multiscale solve: refreshes the basis for the active set, then the
/// coarse Galerkin solve, downscaled to the fine grid.
class CemVariant : public SolverVariant {
public:
    CemVariant(const ContactProblem& p, MultiscaleSpace& space) : p_(p), space_(space) {}
    Vector solve(const std::vector<char>& active_contact) override;
    const char* name() const override { return "cem"; }
    MultiscaleSpace& space() { return space_; }

private:
    const ContactProblem& p_;
    MultiscaleSpace& space_;
};

/// Discrete variational multiplier: the nodal residual of the unconstrained
/// equations at contact nodes (no boundary mass scaling).
Vector compute_multiplier(const SparseMat& A, const Vector& b, const Vector& u,
                          const std::vector<int>& contact_nodes);

/// Pointwise classification lambda + c u > 0 over contact nodes.
std::vector<char> classify_active(const ContactProblem& p, const Vector& u,
                                  const Vector& lambda);

/// Unconstrained-on-Gamma_C solve; lambda = 0, active set empty, k = 0.
ContactState initial_state(const ContactProblem& p, SolverVariant& variant);

/// One primal-dual iteration: solve with the incoming classification, form
/// the multiplier (zero on the inactive set), classify the new iterate.
ContactState step(const ContactProblem& p, SolverVariant& variant,
                  const ContactState& state);

struct RunResult {
    ContactState terminal;
    std::vector<ContactState> history;  // u_0 .. u_terminal
    int iterations = 0;                 // index of the terminal iterate
};

/// Iterate until the classification reproduces the constraint set of the
/// last solve (exact set equality). Throws NonTerminationError at max_iter.
RunResult run(const ContactProblem& p, SolverVariant& variant, int max_iter = 20);

/// Complementarity diagnostics of an iterate (all ~0 at termination).
struct KktReport {
    double lambda_min = 0.0;       // min over contact nodes
    double u_max = 0.0;            // max of u over contact nodes
    double compl_max = 0.0;        // max |lambda_i u_i|
    double semismooth_max = 0.0;   // max |lambda - max(0, lambda + c u)|
    double lambda_scale = 0.0;     // ||lambda||_inf
    double u_scale = 0.0;          // ||u||_inf over all nodes
    double cu_scale = 0.0;         // c * ||u||_inf

    bool satisfied(double eps = 1e-9) const {
        return lambda_min >= -eps * lambda_scale && u_max <= eps * u_scale &&
               compl_max <= eps * lambda_scale * u_scale &&
               semismooth_max <= eps * std::max(lambda_scale, cu_scale);
    }
};

KktReport kkt_report(const ContactProblem& p, const ContactState& state);

} // namespace sigms
