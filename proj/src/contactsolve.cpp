#include "sigms/contactsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sigms {

Vector FineVariant::solve(const std::vector<char>& active_contact) {
    const auto& g = *p_.g;
    const auto& contact = p_.contact_nodes();
    std::vector<char> constrained(g.num_fine_nodes(), 0);
    for (int n : p_.bd->dirichlet_nodes) constrained[n] = 1;
    for (std::size_t i = 0; i < contact.size(); ++i)
        if (active_contact[i]) constrained[contact[i]] = 1;
    const DofMap dofs = DofMap::from_constrained(constrained);
    SpdFactor factor(restrict_matrix(p_.A, dofs));
    return dofs.extend_vector(factor.solve(dofs.restrict_vector(p_.b)));
}

Vector CemVariant::solve(const std::vector<char>& active_contact) {
    const auto& contact = p_.contact_nodes();
    ActiveFlags flags(p_.g->num_fine_nodes(), 0);
    for (std::size_t i = 0; i < contact.size(); ++i)
        if (active_contact[i]) flags[contact[i]] = 1;
    space_.refresh_for_active_set(flags);
    return space_.solve_coarse(p_.A, p_.b).u_fine;
}

Vector compute_multiplier(const SparseMat& A, const Vector& b, const Vector& u,
                          const std::vector<int>& contact_nodes) {
    const Vector residual = b - A * u;
    Vector lambda(static_cast<int>(contact_nodes.size()));
    for (std::size_t i = 0; i < contact_nodes.size(); ++i)
        lambda[static_cast<int>(i)] = residual[contact_nodes[i]];
    return lambda;
}

std::vector<char> classify_active(const ContactProblem& p, const Vector& u,
                                  const Vector& lambda) {
    const auto& contact = p.contact_nodes();
    std::vector<char> active(contact.size(), 0);
    for (std::size_t i = 0; i < contact.size(); ++i)
        active[i] = lambda[static_cast<int>(i)] + p.c * u[contact[i]] > 0.0 ? 1 : 0;
    return active;
}

ContactState initial_state(const ContactProblem& p, SolverVariant& variant) {
    ContactState s;
    s.k = 0;
    s.active.assign(p.contact_nodes().size(), 0);
    s.u = variant.solve(s.active);
    s.lambda = Vector::Zero(static_cast<int>(p.contact_nodes().size()));
    return s;
}

ContactState step(const ContactProblem& p, SolverVariant& variant,
                  const ContactState& state) {
    ContactState next;
    next.k = state.k + 1;
    next.u = variant.solve(state.active);
    next.lambda = compute_multiplier(p.A, p.b, next.u, p.contact_nodes());
    for (std::size_t i = 0; i < state.active.size(); ++i)
        if (!state.active[i]) next.lambda[static_cast<int>(i)] = 0.0;
    next.active = classify_active(p, next.u, next.lambda);
    return next;
}

RunResult run(const ContactProblem& p, SolverVariant& variant, int max_iter) {
    if (max_iter < 1) throw ConfigError("run: max_iter must be >= 1");
    RunResult result;
    ContactState state = initial_state(p, variant);
    result.history.push_back(state);
    for (int it = 1; it <= max_iter; ++it) {
        ContactState next = step(p, variant, state);
        result.history.push_back(next);
        const bool fixpoint = next.active == state.active;
        state = std::move(next);
        if (fixpoint) {
            result.terminal = state;
            result.iterations = state.k;
            return result;
        }
    }
    const auto& last = result.history[result.history.size() - 1];
    const auto& prev = result.history[result.history.size() - 2];
    int diff = 0;
    for (std::size_t i = 0; i < last.active.size(); ++i)
        diff += last.active[i] != prev.active[i];
    std::ostringstream os;
    os << variant.name() << " active set iteration did not reach a fixpoint in "
       << max_iter << " iterations; last two active sets have sizes "
       << prev.active_count() << " and " << last.active_count() << " differing at "
       << diff << " node(s)";
    throw NonTerminationError(os.str(), max_iter);
}

KktReport kkt_report(const ContactProblem& p, const ContactState& state) {
    KktReport r;
    const auto& contact = p.contact_nodes();
    r.lambda_scale = state.lambda.size() ? state.lambda.cwiseAbs().maxCoeff() : 0.0;
    r.u_scale = state.u.size() ? state.u.cwiseAbs().maxCoeff() : 0.0;
    r.cu_scale = p.c * r.u_scale;
    r.lambda_min = std::numeric_limits<double>::infinity();
    r.u_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < contact.size(); ++i) {
        const double lam = state.lambda[static_cast<int>(i)];
        const double u = state.u[contact[i]];
        r.lambda_min = std::min(r.lambda_min, lam);
        r.u_max = std::max(r.u_max, u);
        r.compl_max = std::max(r.compl_max, std::abs(lam * u));
        const double f = lam - std::max(0.0, lam + p.c * u);
        r.semismooth_max = std::max(r.semismooth_max, std::abs(f));
    }
    if (contact.empty()) {
        r.lambda_min = 0.0;
        r.u_max = 0.0;
    }
    return r;
}

} // namespace sigms
