#include "sigms/cembasis.hpp"

#include <algorithm>
#include <sstream>

#include "sigms/parallel.hpp"

namespace sigms {

DomainRestriction restrict_domain(const GridHierarchy& g, const BoundaryDecomposition& bd,
                                  const ActiveFlags& active, int coarse_index, int layers) {
    DomainRestriction r;
    r.domain = oversample(g, coarse_index, layers);
    r.rect = NodeRect::of_domain(r.domain);
    r.constrained.assign(r.rect.count(), 0);
    for (int iy = r.rect.y0; iy <= r.rect.y1; ++iy) {
        for (int ix = r.rect.x0; ix <= r.rect.x1; ++ix) {
            const int gid = g.node_id(ix, iy);
            const bool cut = r.domain.is_cut_node(ix, iy);
            const bool dirichlet = bd.is_dirichlet_node(gid);
            const bool contact_active =
                !active.empty() && bd.is_contact_node(gid) && active[gid];
            if (cut || dirichlet || contact_active)
                r.constrained[r.rect.local(ix, iy)] = 1;
        }
    }
    r.dofs = DofMap::from_constrained(r.constrained);
    return r;
}

namespace {

// Scatter an element-mode stencil q (on the element's node window) into
// domain-local triplets for one column of the low-rank factor.
void scatter_mode(const ElementModes& em, int mode, const NodeRect& rect, int col,
                  std::vector<Eigen::Triplet<double>>& trips) {
    for (int iy = em.rect.y0; iy <= em.rect.y1; ++iy)
        for (int ix = em.rect.x0; ix <= em.rect.x1; ++ix)
            trips.emplace_back(rect.local(ix, iy), col,
                               em.q(em.rect.local(ix, iy), mode));
}

// Low-rank factor Q of the s(pi ., pi .) term over a restricted domain:
// one column per retained eigenmode of every coarse element in the domain.
SparseMat domain_mode_factor(const GridHierarchy& g, const AuxiliarySpace& aux,
                             const DomainRestriction& r) {
    const int l = aux.l;
    std::vector<Eigen::Triplet<double>> trips;
    const auto members = r.domain.coarse_elements(g);
    trips.reserve(members.size() * static_cast<std::size_t>(l) * 128);
    int col = 0;
    for (int ci : members)
        for (int j = 0; j < l; ++j) scatter_mode(aux.elements[ci], j, r.rect, col++, trips);
    SparseMat Q(r.rect.count(), col);
    Q.setFromTriplets(trips.begin(), trips.end());
    Q.makeCompressed();
    return Q;
}

// Right-hand side of the basis problem for mode (i, j): the stencil q_{i,j}
// in domain-local numbering.
Vector mode_rhs(const AuxiliarySpace& aux, const NodeRect& rect,
                int coarse_index, int mode) {
    Vector rhs = Vector::Zero(rect.count());
    const ElementModes& em = aux.elements[coarse_index];
    for (int iy = em.rect.y0; iy <= em.rect.y1; ++iy)
        for (int ix = em.rect.x0; ix <= em.rect.x1; ++ix)
            rhs[rect.local(ix, iy)] += em.q(em.rect.local(ix, iy), mode);
    return rhs;
}

// Edge functional of the corrector problem: int_{dK_i and Gamma_N} p v,
// in domain-local numbering. Returns false if the element has no Neumann
// boundary edges (no solve needed).
bool corrector_rhs(const GridHierarchy& g, const BoundaryDecomposition& bd,
                   const ScalarField& p, const NodeRect& rect, int coarse_index,
                   Vector& rhs) {
    if (!p) return false;
    std::vector<BoundaryEdge> owned;
    for (const auto& e : bd.neumann_edges) {
        // owning coarse element of a boundary fine edge
        int ex = 0, ey = 0;
        switch (e.side) {
            case Side::Bottom: ex = e.index; ey = 0; break;
            case Side::Top: ex = e.index; ey = g.ny_fine - 1; break;
            case Side::Left: ex = 0; ey = e.index; break;
            case Side::Right: ex = g.nx_fine - 1; ey = e.index; break;
        }
        if (g.coarse_of_element(g.element_id(ex, ey)) == coarse_index) owned.push_back(e);
    }
    if (owned.empty()) return false;
    Vector global = Vector::Zero(g.num_fine_nodes());
    accumulate_edge_load(g, p, owned, global);
    rhs.setZero(rect.count());
    for (int iy = rect.y0; iy <= rect.y1; ++iy)
        for (int ix = rect.x0; ix <= rect.x1; ++ix)
            rhs[rect.local(ix, iy)] = global[g.node_id(ix, iy)];
    return true;
}

} // namespace

Vector build_basis_column_fine(const GridHierarchy& g, const PermeabilityField& kappa,
                               const AuxiliarySpace& aux, const DomainRestriction& r,
                               int coarse_index, int mode) {
    const SparseMat A = restrict_matrix(
        assemble_local_stiffness(g, kappa, r.domain), r.dofs);
    const SparseMat Q = restrict_rows(domain_mode_factor(g, aux, r), r.dofs);
    LowRankSolver solver(A, Q);
    const Vector rhs = r.dofs.restrict_vector(mode_rhs(aux, r.rect, coarse_index, mode));
    const Vector local = r.dofs.extend_vector(solver.solve(rhs));
    Vector fine = Vector::Zero(g.num_fine_nodes());
    rect_axpy(g, 1.0, r.rect, local, fine);
    return fine;
}

Vector build_corrector_fine(const GridHierarchy& g, const PermeabilityField& kappa,
                            const AuxiliarySpace& aux, const BoundaryDecomposition& bd,
                            const DomainRestriction& r, const ScalarField& p,
                            int coarse_index) {
    Vector fine = Vector::Zero(g.num_fine_nodes());
    Vector rhs;
    if (!corrector_rhs(g, bd, p, r.rect, coarse_index, rhs)) return fine;
    const SparseMat A = restrict_matrix(
        assemble_local_stiffness(g, kappa, r.domain), r.dofs);
    const SparseMat Q = restrict_rows(domain_mode_factor(g, aux, r), r.dofs);
    LowRankSolver solver(A, Q);
    const Vector local = r.dofs.extend_vector(solver.solve(r.dofs.restrict_vector(rhs)));
    rect_axpy(g, 1.0, r.rect, local, fine);
    return fine;
}

MultiscaleSpace::MultiscaleSpace(const GridHierarchy& g, const PermeabilityField& kappa,
                                 const AuxiliarySpace& aux, const BoundaryDecomposition& bd,
                                 const ScalarField& neumann_p, CemOptions options,
                                 const ActiveFlags* initial_active)
    : g_(g), kappa_(kappa), aux_(aux), bd_(bd), p_(neumann_p), opt_(options), l_(aux.l) {
    active_ = initial_active ? *initial_active : ActiveFlags(g.num_fine_nodes(), 0);
    if (static_cast<int>(active_.size()) != g.num_fine_nodes())
        throw ConfigError("multiscale space: active flag vector has wrong size");

    const int N = g.n_coarse;
    domain_rects_.resize(N);
    for (int i = 0; i < N; ++i)
        domain_rects_[i] = NodeRect::of_domain(oversample(g, i, opt_.oversample_layers));
    overlaps_.resize(N);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            if (!domain_rects_[i].intersect(domain_rects_[k]).empty())
                overlaps_[i].push_back(k);

    columns_.resize(static_cast<std::size_t>(N) * l_);
    corrector_of_domain_.assign(N, -1);
    if (p_) {
        Vector probe;
        for (int i = 0; i < N; ++i) {
            if (corrector_rhs(g_, bd_, p_, domain_rects_[i], i, probe)) {
                corrector_of_domain_[i] = static_cast<int>(correctors_.size());
                correctors_.push_back(CorrectorPiece{i, domain_rects_[i], Vector()});
            }
        }
    }

    std::vector<int> all(N);
    for (int i = 0; i < N; ++i) all[i] = i;
    rebuild_domains(all);
    update_coarse_matrix(all, /*initial=*/true);
    rebuild_corrector_sum();
    last_rebuilt_columns_ = total_columns();
    last_rebuilt_domains_ = all;
}

void MultiscaleSpace::rebuild_domain(int i, std::vector<BasisColumn>& cols,
                                     CorrectorPiece* corrector) const {
    try {
        const DomainRestriction r =
            restrict_domain(g_, bd_, active_, i, opt_.oversample_layers);
        const SparseMat A = restrict_matrix(
            assemble_local_stiffness(g_, kappa_, r.domain), r.dofs);
        const SparseMat Q = restrict_rows(domain_mode_factor(g_, aux_, r), r.dofs);
        LowRankSolver solver(A, Q);
        for (int j = 0; j < l_; ++j) {
            const Vector rhs =
                r.dofs.restrict_vector(mode_rhs(aux_, r.rect, i, j));
            BasisColumn& col = cols[j];
            col.coarse_index = i;
            col.mode = j;
            col.rect = r.rect;
            col.values = r.dofs.extend_vector(solver.solve(rhs));
        }
        if (corrector) {
            Vector rhs;
            corrector_rhs(g_, bd_, p_, r.rect, i, rhs);
            corrector->rect = r.rect;
            corrector->values = r.dofs.extend_vector(solver.solve(r.dofs.restrict_vector(rhs)));
        }
    } catch (const SolveError& e) {
        std::ostringstream os;
        os << "cembasis: domain " << i << " (m=" << opt_.oversample_layers
           << ", version " << version_ << "): " << e.what();
        throw SolveError(os.str(), e.report);
    }
}

void MultiscaleSpace::rebuild_domains(const std::vector<int>& domains) {
    parallel_for(static_cast<int>(domains.size()), opt_.threads, [&](int k) {
        const int i = domains[k];
        std::vector<BasisColumn> cols(l_);
        const int c = corrector_of_domain_[i];
        rebuild_domain(i, cols, c >= 0 ? &correctors_[c] : nullptr);
        for (int j = 0; j < l_; ++j) columns_[column_index(i, j)] = std::move(cols[j]);
    });
}

void MultiscaleSpace::update_coarse_matrix(const std::vector<int>& rebuilt, bool initial) {
    const int total = total_columns();
    if (initial) coarse_matrix_.setZero(total, total);
    std::vector<char> is_rebuilt(g_.n_coarse, 0);
    for (int i : rebuilt) is_rebuilt[i] = 1;

    // one pass per rebuilt column: apply A locally once, then dot against
    // every overlapping column; pairs of two rebuilt domains are visited
    // from the smaller index only
    parallel_for(static_cast<int>(rebuilt.size()), opt_.threads, [&](int k) {
        const int i = rebuilt[k];
        for (int j = 0; j < l_; ++j) {
            const int q = column_index(i, j);
            const BasisColumn& cq = columns_[q];
            NodeRect zrect;
            Vector z;
            apply_stiffness_local(g_, kappa_, cq.rect, cq.values, zrect, z);
            for (int io : overlaps_[i]) {
                if (is_rebuilt[io] && io < i) continue;
                for (int jo = 0; jo < l_; ++jo) {
                    const int p = column_index(io, jo);
                    if (is_rebuilt[io] && io == i && p < q) continue;
                    const BasisColumn& cp = columns_[p];
                    const double v = rect_dot(cp.rect, cp.values, zrect, z);
                    coarse_matrix_(p, q) = v;
                    coarse_matrix_(q, p) = v;
                }
            }
        }
    });
}

void MultiscaleSpace::rebuild_corrector_sum() {
    corrector_sum_ = Vector::Zero(g_.num_fine_nodes());
    for (const auto& c : correctors_)
        rect_axpy(g_, 1.0, c.rect, c.values, corrector_sum_);
}

void MultiscaleSpace::refresh_for_active_set(const ActiveFlags& new_active) {
    if (static_cast<int>(new_active.size()) != g_.num_fine_nodes())
        throw ConfigError("refresh_for_active_set: flag vector has wrong size");
    std::vector<int> changed;
    for (int n = 0; n < g_.num_fine_nodes(); ++n)
        if (active_[n] != new_active[n]) changed.push_back(n);

    std::vector<int> affected;
    if (!changed.empty()) {
        for (int i = 0; i < g_.n_coarse; ++i) {
            const OversampleDomain d = oversample(g_, i, opt_.oversample_layers);
            for (int n : changed) {
                const int ix = g_.node_ix(n), iy = g_.node_iy(n);
                // a change on the domain's interior cut is invisible: the
                // node is constrained there either way
                if (d.contains_node(ix, iy) && !d.is_cut_node(ix, iy)) {
                    affected.push_back(i);
                    break;
                }
            }
        }
    }
    active_ = new_active;
    ++version_;
    last_rebuilt_domains_ = affected;
    last_rebuilt_columns_ = static_cast<int>(affected.size()) * l_;
    if (affected.empty()) return;
    rebuild_domains(affected);
    update_coarse_matrix(affected, /*initial=*/false);
    rebuild_corrector_sum();
}

Vector MultiscaleSpace::column_fine(int idx) const {
    const BasisColumn& c = columns_[idx];
    Vector fine = Vector::Zero(g_.num_fine_nodes());
    rect_axpy(g_, 1.0, c.rect, c.values, fine);
    return fine;
}

MultiscaleSpace::CoarseSolution MultiscaleSpace::solve_coarse(const SparseMat& A_fine,
                                                              const Vector& b_fine) const {
    const int total = total_columns();
    Vector residual_load = b_fine;
    if (corrector_sum_.size() == b_fine.size() && !correctors_.empty())
        residual_load -= A_fine * corrector_sum_;

    Vector rhs(total);
    for (int q = 0; q < total; ++q)
        rhs[q] = rect_dot_global(g_, columns_[q].rect, columns_[q].values, residual_load);

    Eigen::LDLT<Matrix> ldlt(coarse_matrix_);
    Vector w = ldlt.solve(rhs);
    const double rhs_norm = rhs.norm();
    const double res = (coarse_matrix_ * w - rhs).norm();
    if (!(res <= 1e-8 * std::max(rhs_norm, 1e-30))) {
        SolveReport rep;
        rep.method = "coarse-ldlt";
        rep.residual = rhs_norm > 0 ? res / rhs_norm : res;
        std::ostringstream os;
        os << "coarse multiscale system is singular or inconsistent (relative residual "
           << rep.residual << "); the active set may have exhausted a coarse element";
        throw SolveError(os.str(), rep);
    }

    CoarseSolution sol;
    sol.coefficients = w;
    sol.u_fine = Vector::Zero(g_.num_fine_nodes());
    for (int q = 0; q < total; ++q)
        rect_axpy(g_, w[q], columns_[q].rect, columns_[q].values, sol.u_fine);
    if (!correctors_.empty()) sol.u_fine += corrector_sum_;
    return sol;
}

} // namespace sigms
