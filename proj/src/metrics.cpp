#include "sigms/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sigms {

namespace {

double norm_in(const SparseMat& B, const Vector& v) { return std::sqrt(v.dot(B * v)); }

} // namespace

RelativeErrors relative_errors(const Vector& u_ref, const Vector& u, const SparseMat& A,
                               const SparseMat& M) {
    const double ref_l2 = norm_in(M, u_ref);
    const double ref_a = norm_in(A, u_ref);
    if (ref_l2 == 0.0 || ref_a == 0.0)
        throw ConfigError("relative_errors: reference solution is identically zero");
    const Vector d = u_ref - u;
    RelativeErrors e;
    e.l2 = norm_in(M, d) / ref_l2;
    e.energy = norm_in(A, d) / ref_a;
    return e;
}

double energy_norm_quadrature(const GridHierarchy& g, const PermeabilityField& kappa,
                              const Vector& u) {
    const double gp = 0.5 / std::sqrt(3.0);
    const double pts[2] = {0.5 - gp, 0.5 + gp};
    const double h = g.h;
    double total = 0.0;
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        const auto nodes = g.element_nodes(e);
        const double v0 = u[nodes[0]], v1 = u[nodes[1]], v2 = u[nodes[2]], v3 = u[nodes[3]];
        double acc = 0.0;
        for (double s : pts) {
            for (double t : pts) {
                // bilinear gradient in local coordinates, scaled by 1/h
                const double dx = ((v1 - v0) * (1 - t) + (v2 - v3) * t) / h;
                const double dy = ((v3 - v0) * (1 - s) + (v2 - v1) * s) / h;
                acc += dx * dx + dy * dy;
            }
        }
        total += kappa.values[e] * acc * 0.25 * h * h;
    }
    return std::sqrt(total);
}

IterationRates iteration_rates(const std::vector<ContactState>& history, const SparseMat& A,
                               const SparseMat& M) {
    if (history.size() < 2)
        throw ConfigError("iteration_rates: history must contain at least two iterates");
    const Vector& u_star = history.back().u;
    IterationRates r;
    double prev_l2 = norm_in(M, history[0].u - u_star);
    double prev_a = norm_in(A, history[0].u - u_star);
    for (std::size_t k = 1; k < history.size(); ++k) {
        const Vector d = history[k].u - u_star;
        const double cur_l2 = norm_in(M, d);
        const double cur_a = norm_in(A, d);
        r.l2.push_back(prev_l2 > 0.0 ? cur_l2 / prev_l2 : 0.0);
        r.energy.push_back(prev_a > 0.0 ? cur_a / prev_a : 0.0);
        prev_l2 = cur_l2;
        prev_a = cur_a;
    }
    return r;
}

ErrorTable build_error_table(const std::vector<ContactState>& fe_history,
                             const std::vector<ContactState>& cem_history,
                             const SparseMat& A, const SparseMat& M) {
    if (fe_history.empty() || cem_history.empty())
        throw ConfigError("build_error_table: empty history");
    const std::size_t rows = std::max(fe_history.size(), cem_history.size()) - 1;

    auto padded = [rows](const std::vector<ContactState>& h) {
        std::vector<ContactState> out = h;
        while (out.size() < rows + 1) out.push_back(out.back());
        return out;
    };
    const auto fe = padded(fe_history);
    const auto cem = padded(cem_history);

    ErrorTable t;
    const IterationRates r_fe = iteration_rates(fe, A, M);
    const IterationRates r_cem = iteration_rates(cem, A, M);
    for (std::size_t k = 1; k <= rows; ++k) {
        const RelativeErrors e = relative_errors(fe[k].u, cem[k].u, A, M);
        t.e_l2.push_back(e.l2);
        t.e_energy.push_back(e.energy);
        t.t_cem_l2.push_back(r_cem.l2[k - 1]);
        t.t_cem_energy.push_back(r_cem.energy[k - 1]);
        t.t_fe_l2.push_back(r_fe.l2[k - 1]);
        t.t_fe_energy.push_back(r_fe.energy[k - 1]);
    }
    return t;
}

std::string error_table_csv(const ErrorTable& t) {
    std::ostringstream os;
    os << "k,E_L,E_a,T_cem_L,T_cem_a,T_fe_L,T_fe_a\n";
    char buf[64];
    for (int k = 0; k < t.rows(); ++k) {
        os << (k + 1);
        const double vals[6] = {t.e_l2[k],    t.e_energy[k],    t.t_cem_l2[k],
                                t.t_cem_energy[k], t.t_fe_l2[k], t.t_fe_energy[k]};
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), ",%.5e", v);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace sigms
