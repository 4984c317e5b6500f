#include "sigms/oracle.hpp"

#include <cmath>
#include <sstream>

namespace sigms {

QpSetup qp_from_problem(const ContactProblem& p) {
    QpSetup s;
    std::vector<char> constrained(p.g->num_fine_nodes(), 0);
    for (int n : p.bd->dirichlet_nodes) constrained[n] = 1;
    s.dofs = DofMap::from_constrained(constrained);
    s.qp.A = restrict_matrix(p.A, s.dofs);
    s.qp.b = s.dofs.restrict_vector(p.b);
    for (int n : p.bd->contact_nodes) s.qp.bounded.push_back(s.dofs.full_to_free[n]);
    return s;
}

namespace {

// column-major symmetric matrix: column i holds row i's entries
double sweep_once(const QpInstance& inst, const std::vector<char>& is_bounded,
                  const Vector& diag, Vector& x) {
    const int n = static_cast<int>(inst.b.size());
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
        double sigma = 0.0;
        for (SparseMat::InnerIterator it(inst.A, i); it; ++it)
            if (it.row() != i) sigma += it.value() * x[it.row()];
        double xi = (inst.b[i] - sigma) / diag[i];
        if (is_bounded[i]) xi = std::min(xi, 0.0);
        change = std::max(change, std::abs(xi - x[i]));
        x[i] = xi;
    }
    return change;
}

std::vector<char> bounded_mask(const QpInstance& inst) {
    std::vector<char> mask(inst.b.size(), 0);
    for (int i : inst.bounded) mask[i] = 1;
    return mask;
}

} // namespace

double pgs_sweep(const QpInstance& inst, Vector& x) {
    return sweep_once(inst, bounded_mask(inst), inst.A.diagonal(), x);
}

Vector solve_projected_gs(const QpInstance& inst, double tol, int max_sweeps) {
    const std::vector<char> is_bounded = bounded_mask(inst);
    const int n = static_cast<int>(inst.b.size());

    // flat row storage without the diagonal, for the sweep hot loop
    std::vector<int> row_start(n + 1, 0), col;
    std::vector<double> val, inv_diag(n);
    col.reserve(inst.A.nonZeros());
    val.reserve(inst.A.nonZeros());
    for (int i = 0; i < n; ++i) {
        for (SparseMat::InnerIterator it(inst.A, i); it; ++it) {
            if (it.row() == i)
                inv_diag[i] = 1.0 / it.value();
            else {
                col.push_back(static_cast<int>(it.row()));
                val.push_back(it.value());
            }
        }
        row_start[i + 1] = static_cast<int>(col.size());
    }

    Vector x = Vector::Zero(n);
    int sweep = 0;
    double change = 0.0;
    for (sweep = 1; sweep <= max_sweeps; ++sweep) {
        change = 0.0;
        for (int i = 0; i < n; ++i) {
            double sigma = 0.0;
            for (int k = row_start[i]; k < row_start[i + 1]; ++k)
                sigma += val[k] * x[col[k]];
            double xi = (inst.b[i] - sigma) * inv_diag[i];
            if (is_bounded[i] && xi > 0.0) xi = 0.0;
            change = std::max(change, std::abs(xi - x[i]));
            x[i] = xi;
        }
        if (change <= tol) return x;
    }
    SolveReport rep;
    rep.method = "projected-gs";
    rep.iterations = max_sweeps;
    rep.residual = change;
    std::ostringstream os;
    os << "projected Gauss-Seidel did not converge in " << max_sweeps
       << " sweeps (last iterate change " << change << ", tol " << tol << ")";
    throw SolveError(os.str(), rep);
}

double qp_energy(const QpInstance& inst, const Vector& x) {
    return 0.5 * x.dot(inst.A * x) - inst.b.dot(x);
}

Vector oracle_solution(const ContactProblem& p, double tol, int max_sweeps) {
    const QpSetup s = qp_from_problem(p);
    return s.dofs.extend_vector(solve_projected_gs(s.qp, tol, max_sweeps));
}

std::vector<char> oracle_active_set(const ContactProblem& p, const Vector& u_fine) {
    const Vector residual = p.b - p.A * u_fine;
    const auto& contact = p.contact_nodes();
    std::vector<char> active(contact.size(), 0);
    for (std::size_t i = 0; i < contact.size(); ++i)
        active[i] = u_fine[contact[i]] == 0.0 && residual[contact[i]] > 0.0 ? 1 : 0;
    return active;
}

} // namespace sigms
