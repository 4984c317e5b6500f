#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <vector>

#include "sigms/grid.hpp"
#include "sigms/medium.hpp"

namespace sigms {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double>;

using ScalarField = std::function<double(double, double)>;

/// Inclusive rectangle of fine nodes; the storage window of localized
/// fine-grid vectors (basis functions, correctors, local operator images).
struct NodeRect {
    int x0 = 0, x1 = -1, y0 = 0, y1 = -1;

    int nx() const { return x1 - x0 + 1; }
    int ny() const { return y1 - y0 + 1; }
    int count() const { return nx() * ny(); }
    bool empty() const { return x1 < x0 || y1 < y0; }
    bool contains(int ix, int iy) const {
        return ix >= x0 && ix <= x1 && iy >= y0 && iy <= y1;
    }
    int local(int ix, int iy) const { return (iy - y0) * nx() + (ix - x0); }

    static NodeRect of_domain(const OversampleDomain& d) {
        return {d.nx0, d.nx1, d.ny0, d.ny1};
    }
    NodeRect grown(int pad, int grid_nx, int grid_ny) const {
        return {std::max(0, x0 - pad), std::min(grid_nx, x1 + pad),
                std::max(0, y0 - pad), std::min(grid_ny, y1 + pad)};
    }
    NodeRect intersect(const NodeRect& o) const {
        return {std::max(x0, o.x0), std::min(x1, o.x1),
                std::max(y0, o.y0), std::min(y1, o.y1)};
    }
};

/// Reference element matrices for the bilinear quadrilateral, node order
/// counterclockwise from lower left. The stiffness block is exact for a
/// square element of any size (the h factors cancel in 2D); the mass block
/// is for the unit square and scales with h^2.
const Eigen::Matrix4d& unit_stiffness_block();
const Eigen::Matrix4d& unit_mass_block();

/// a(u,v) = int kappa grad(u).grad(v); exact for piecewise constant kappa.
SparseMat assemble_stiffness(const GridHierarchy& g, const PermeabilityField& kappa);

/// s(u,v) = int w u v with piecewise constant weight per fine element.
SparseMat assemble_weighted_mass(const GridHierarchy& g, const std::vector<double>& weight);

inline SparseMat assemble_weighted_mass(const GridHierarchy& g, const WeightField& w) {
    return assemble_weighted_mass(g, w.values);
}

/// Plain L2 mass matrix (weight = 1).
SparseMat assemble_mass(const GridHierarchy& g);

/// L(v) = int f v dx + int_{Gamma_N} p v ds. The volume term uses 2x2 Gauss
/// quadrature per fine element, the boundary term 2-point Gauss per edge.
/// Either function may be empty (treated as zero).
Vector assemble_load(const GridHierarchy& g, const ScalarField& f, const ScalarField& p,
                     const BoundaryDecomposition& bd);

/// Edge functional int_edge p v ds accumulated into out (global indexing).
void accumulate_edge_load(const GridHierarchy& g, const ScalarField& p,
                          const std::vector<BoundaryEdge>& edges, Vector& out);

/// Stiffness restricted to the elements of an oversampled domain, in the
/// domain's local row-major node numbering (no boundary conditions).
SparseMat assemble_local_stiffness(const GridHierarchy& g, const PermeabilityField& kappa,
                                   const OversampleDomain& d);

/// y = A x for x supported on rect (zero outside). The image lives on rect
/// grown by one node; only elements inside rect contribute, which is exact
/// whenever x carries a function vanishing on the rect's interior cut.
void apply_stiffness_local(const GridHierarchy& g, const PermeabilityField& kappa,
                           const NodeRect& rect, const Vector& x, NodeRect& out_rect,
                           Vector& y);

/// x^T A y for vectors stored on (possibly different) rectangles, both
/// vanishing outside their rectangles: sums element blocks over the overlap.
double stiffness_dot(const GridHierarchy& g, const PermeabilityField& kappa,
                     const NodeRect& rx, const Vector& x, const NodeRect& ry,
                     const Vector& y);

/// Dot product of two rect-stored vectors over the rectangle intersection.
double rect_dot(const NodeRect& rx, const Vector& x, const NodeRect& ry, const Vector& y);

/// Accumulate a rect-stored vector into a global fine vector (scaled).
void rect_axpy(const GridHierarchy& g, double alpha, const NodeRect& r, const Vector& x,
               Vector& global);

/// Dot of a rect-stored vector with a global fine vector.
double rect_dot_global(const GridHierarchy& g, const NodeRect& r, const Vector& x,
                       const Vector& global);

} // namespace sigms
