#include "sigms/assembly.hpp"

#include <cmath>

namespace sigms {

const Eigen::Matrix4d& unit_stiffness_block() {
    static const Eigen::Matrix4d K = [] {
        Eigen::Matrix4d k;
        // int grad(eta_i).grad(eta_j) over the unit square
        k << 4, -1, -2, -1,
            -1, 4, -1, -2,
            -2, -1, 4, -1,
            -1, -2, -1, 4;
        return Eigen::Matrix4d(k / 6.0);
    }();
    return K;
}

const Eigen::Matrix4d& unit_mass_block() {
    static const Eigen::Matrix4d M = [] {
        Eigen::Matrix4d m;
        m << 4, 2, 1, 2,
            2, 4, 2, 1,
            1, 2, 4, 2,
            2, 1, 2, 4;
        return Eigen::Matrix4d(m / 36.0);
    }();
    return M;
}

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMat from_element_blocks(const GridHierarchy& g, const Eigen::Matrix4d& block,
                              const std::vector<double>& coeff, double scale) {
    const int n = g.num_fine_nodes();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(g.num_fine_elements()) * 16);
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        const auto nodes = g.element_nodes(e);
        const double c = coeff[e] * scale;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                trips.emplace_back(nodes[a], nodes[b], c * block(a, b));
    }
    SparseMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

} // namespace

SparseMat assemble_stiffness(const GridHierarchy& g, const PermeabilityField& kappa) {
    return from_element_blocks(g, unit_stiffness_block(), kappa.values, 1.0);
}

SparseMat assemble_weighted_mass(const GridHierarchy& g, const std::vector<double>& weight) {
    return from_element_blocks(g, unit_mass_block(), weight, g.h * g.h);
}

SparseMat assemble_mass(const GridHierarchy& g) {
    std::vector<double> one(g.num_fine_elements(), 1.0);
    return assemble_weighted_mass(g, one);
}

Vector assemble_load(const GridHierarchy& g, const ScalarField& f, const ScalarField& p,
                     const BoundaryDecomposition& bd) {
    Vector b = Vector::Zero(g.num_fine_nodes());
    const double h = g.h;
    if (f) {
        // 2x2 tensor Gauss points in local coordinates on [0,1]^2
        const double gp = 0.5 / std::sqrt(3.0);
        const double pts[2] = {0.5 - gp, 0.5 + gp};
        const double wq = 0.25 * h * h;
        for (int e = 0; e < g.num_fine_elements(); ++e) {
            const auto nodes = g.element_nodes(e);
            const double x0 = g.element_ex(e) * h;
            const double y0 = g.element_ey(e) * h;
            for (double s : pts) {
                for (double t : pts) {
                    const double fv = f(x0 + s * h, y0 + t * h) * wq;
                    b[nodes[0]] += fv * (1 - s) * (1 - t);
                    b[nodes[1]] += fv * s * (1 - t);
                    b[nodes[2]] += fv * s * t;
                    b[nodes[3]] += fv * (1 - s) * t;
                }
            }
        }
    }
    if (p) accumulate_edge_load(g, p, bd.neumann_edges, b);
    return b;
}

void accumulate_edge_load(const GridHierarchy& g, const ScalarField& p,
                          const std::vector<BoundaryEdge>& edges, Vector& out) {
    if (!p) return;
    const double h = g.h;
    const double gp = 0.5 / std::sqrt(3.0);
    const double pts[2] = {0.5 - gp, 0.5 + gp};
    for (const auto& e : edges) {
        const double xa = g.node_x(e.n0), ya = g.node_y(e.n0);
        const double xb = g.node_x(e.n1), yb = g.node_y(e.n1);
        for (double t : pts) {
            const double pv = p(xa + t * (xb - xa), ya + t * (yb - ya)) * 0.5 * h;
            out[e.n0] += pv * (1 - t);
            out[e.n1] += pv * t;
        }
    }
}

SparseMat assemble_local_stiffness(const GridHierarchy& g, const PermeabilityField& kappa,
                                   const OversampleDomain& d) {
    const auto& K = unit_stiffness_block();
    const NodeRect r = NodeRect::of_domain(d);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(d.num_fine_elements()) * 16);
    for (int ey = d.ey0; ey <= d.ey1; ++ey) {
        for (int ex = d.ex0; ex <= d.ex1; ++ex) {
            const double c = kappa.values[g.element_id(ex, ey)];
            const int loc[4] = {r.local(ex, ey), r.local(ex + 1, ey),
                                r.local(ex + 1, ey + 1), r.local(ex, ey + 1)};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    trips.emplace_back(loc[a], loc[b], c * K(a, b));
        }
    }
    SparseMat A(r.count(), r.count());
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

void apply_stiffness_local(const GridHierarchy& g, const PermeabilityField& kappa,
                           const NodeRect& rect, const Vector& x, NodeRect& out_rect,
                           Vector& y) {
    const auto& K = unit_stiffness_block();
    out_rect = rect.grown(1, g.nx_fine, g.ny_fine);
    y.setZero(out_rect.count());
    // elements whose stencil meets rect: those with any corner inside rect
    const int ex0 = std::max(0, rect.x0 - 1), ex1 = std::min(g.nx_fine - 1, rect.x1);
    const int ey0 = std::max(0, rect.y0 - 1), ey1 = std::min(g.ny_fine - 1, rect.y1);
    for (int ey = ey0; ey <= ey1; ++ey) {
        for (int ex = ex0; ex <= ex1; ++ex) {
            const double c = kappa.values[g.element_id(ex, ey)];
            const int cxs[4] = {ex, ex + 1, ex + 1, ex};
            const int cys[4] = {ey, ey, ey + 1, ey + 1};
            double vals[4];
            bool any = false;
            for (int a = 0; a < 4; ++a) {
                if (rect.contains(cxs[a], cys[a])) {
                    vals[a] = x[rect.local(cxs[a], cys[a])];
                    any = any || vals[a] != 0.0;
                } else {
                    vals[a] = 0.0;
                }
            }
            if (!any) continue;
            for (int a = 0; a < 4; ++a) {
                double acc = 0.0;
                for (int b = 0; b < 4; ++b) acc += K(a, b) * vals[b];
                y[out_rect.local(cxs[a], cys[a])] += c * acc;
            }
        }
    }
}

double stiffness_dot(const GridHierarchy& g, const PermeabilityField& kappa,
                     const NodeRect& rx, const Vector& x, const NodeRect& ry,
                     const Vector& y) {
    const auto& K = unit_stiffness_block();
    const NodeRect ov = rx.intersect(ry);
    if (ov.empty()) return 0.0;
    // elements with at least one corner in each rectangle
    const int ex0 = std::max(0, ov.x0 - 1), ex1 = std::min(g.nx_fine - 1, ov.x1);
    const int ey0 = std::max(0, ov.y0 - 1), ey1 = std::min(g.ny_fine - 1, ov.y1);
    double total = 0.0;
    for (int ey = ey0; ey <= ey1; ++ey) {
        for (int ex = ex0; ex <= ex1; ++ex) {
            const double c = kappa.values[g.element_id(ex, ey)];
            const int cxs[4] = {ex, ex + 1, ex + 1, ex};
            const int cys[4] = {ey, ey, ey + 1, ey + 1};
            double xv[4], yv[4];
            for (int a = 0; a < 4; ++a) {
                xv[a] = rx.contains(cxs[a], cys[a]) ? x[rx.local(cxs[a], cys[a])] : 0.0;
                yv[a] = ry.contains(cxs[a], cys[a]) ? y[ry.local(cxs[a], cys[a])] : 0.0;
            }
            double acc = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) acc += xv[a] * K(a, b) * yv[b];
            total += c * acc;
        }
    }
    return total;
}

double rect_dot(const NodeRect& rx, const Vector& x, const NodeRect& ry, const Vector& y) {
    const NodeRect ov = rx.intersect(ry);
    if (ov.empty()) return 0.0;
    double total = 0.0;
    for (int iy = ov.y0; iy <= ov.y1; ++iy)
        for (int ix = ov.x0; ix <= ov.x1; ++ix)
            total += x[rx.local(ix, iy)] * y[ry.local(ix, iy)];
    return total;
}

void rect_axpy(const GridHierarchy& g, double alpha, const NodeRect& r, const Vector& x,
               Vector& global) {
    for (int iy = r.y0; iy <= r.y1; ++iy)
        for (int ix = r.x0; ix <= r.x1; ++ix)
            global[g.node_id(ix, iy)] += alpha * x[r.local(ix, iy)];
}

double rect_dot_global(const GridHierarchy& g, const NodeRect& r, const Vector& x,
                       const Vector& global) {
    double total = 0.0;
    for (int iy = r.y0; iy <= r.y1; ++iy)
        for (int ix = r.x0; ix <= r.x1; ++ix)
            total += x[r.local(ix, iy)] * global[g.node_id(ix, iy)];
    return total;
}

} // namespace sigms
