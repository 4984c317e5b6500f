#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sigms/errors.hpp"

namespace sigms {

/// Nested uniform quadrilateral meshes on the unit square.
///
/// The fine mesh has nx_fine x ny_fine square elements of size h; the coarse
/// mesh has n_coarse_per_axis^2 elements of size H = ratio * h. Every coarse
/// element is the union of ratio^2 fine elements. Node and element indices
/// are lexicographic (x fastest) and stable across calls.
struct GridHierarchy {
    int nx_fine = 0;
    int ny_fine = 0;
    int n_coarse_per_axis = 0;
    int ratio = 0;       // H / h
    int n_coarse = 0;    // total number of coarse elements
    double h = 0.0;
    double H = 0.0;

    int num_fine_nodes() const { return (nx_fine + 1) * (ny_fine + 1); }
    int num_fine_elements() const { return nx_fine * ny_fine; }

    int node_id(int ix, int iy) const { return iy * (nx_fine + 1) + ix; }
    int node_ix(int node) const { return node % (nx_fine + 1); }
    int node_iy(int node) const { return node / (nx_fine + 1); }
    double node_x(int node) const { return node_ix(node) * h; }
    double node_y(int node) const { return node_iy(node) * h; }

    int element_id(int ex, int ey) const { return ey * nx_fine + ex; }
    int element_ex(int elem) const { return elem % nx_fine; }
    int element_ey(int elem) const { return elem / nx_fine; }

    /// Corner nodes of a fine element, counterclockwise from lower left.
    std::array<int, 4> element_nodes(int elem) const {
        const int ex = element_ex(elem), ey = element_ey(elem);
        return {node_id(ex, ey), node_id(ex + 1, ey),
                node_id(ex + 1, ey + 1), node_id(ex, ey + 1)};
    }

    int coarse_id(int cx, int cy) const { return cy * n_coarse_per_axis + cx; }
    int coarse_cx(int c) const { return c % n_coarse_per_axis; }
    int coarse_cy(int c) const { return c / n_coarse_per_axis; }

    /// Coarse element owning a fine element (the nesting map).
    int coarse_of_element(int elem) const {
        return coarse_id(element_ex(elem) / ratio, element_ey(elem) / ratio);
    }
};

/// nx_fine must be divisible by n_coarse_per_axis; both at least 2.
GridHierarchy build_hierarchy(int nx_fine, int n_coarse_per_axis);

/// Oversampled domain K_i^m: the coarse element K_i extended by m layers of
/// coarse neighbors (Chebyshev distance on the coarse index lattice), clipped
/// at the domain boundary. Always a rectangle of coarse elements, so the
/// member sets are stored as index rectangles.
struct OversampleDomain {
    int coarse_index = 0;
    int layers = 0;
    // inclusive coarse element rectangle
    int cx0 = 0, cx1 = 0, cy0 = 0, cy1 = 0;
    // inclusive fine element rectangle
    int ex0 = 0, ex1 = 0, ey0 = 0, ey1 = 0;
    // inclusive fine node rectangle
    int nx0 = 0, nx1 = 0, ny0 = 0, ny1 = 0;
    int grid_nx = 0, grid_ny = 0;   // fine grid extents, for boundary tests

    int num_coarse_elements() const { return (cx1 - cx0 + 1) * (cy1 - cy0 + 1); }
    int num_fine_elements() const { return (ex1 - ex0 + 1) * (ey1 - ey0 + 1); }
    int nodes_x() const { return nx1 - nx0 + 1; }
    int nodes_y() const { return ny1 - ny0 + 1; }
    int num_nodes() const { return nodes_x() * nodes_y(); }

    bool contains_node(int ix, int iy) const {
        return ix >= nx0 && ix <= nx1 && iy >= ny0 && iy <= ny1;
    }
    int local_node(int ix, int iy) const {
        return (iy - ny0) * nodes_x() + (ix - nx0);
    }

    /// True for nodes on the part of the domain boundary cutting through the
    /// interior of the unit square (the constrained cut of the local spaces).
    bool is_cut_node(int ix, int iy) const {
        const bool on_rect_boundary =
            ix == nx0 || ix == nx1 || iy == ny0 || iy == ny1;
        if (!on_rect_boundary) return false;
        const bool on_domain_boundary =
            (ix == nx0 && nx0 == 0) || (ix == nx1 && nx1 == grid_nx) ||
            (iy == ny0 && ny0 == 0) || (iy == ny1 && ny1 == grid_ny);
        // a corner of the rectangle can sit on both; it is a cut node as
        // soon as one of its two rectangle sides lies in the interior
        const bool left_cut = ix == nx0 && nx0 != 0;
        const bool right_cut = ix == nx1 && nx1 != grid_nx;
        const bool bottom_cut = iy == ny0 && ny0 != 0;
        const bool top_cut = iy == ny1 && ny1 != grid_ny;
        (void)on_domain_boundary;
        return left_cut || right_cut || bottom_cut || top_cut;
    }

    std::vector<int> fine_elements(const GridHierarchy& g) const;
    std::vector<int> fine_nodes(const GridHierarchy& g) const;
    std::vector<int> cut_nodes(const GridHierarchy& g) const;
    std::vector<int> coarse_elements(const GridHierarchy& g) const;
};

OversampleDomain oversample(const GridHierarchy& g, int coarse_index, int layers);

enum class Side : std::uint8_t { Bottom = 0, Right = 1, Top = 2, Left = 3 };
enum class BoundaryLabel : std::uint8_t { Dirichlet = 0, Neumann = 1, Contact = 2 };

const char* to_string(Side s);
const char* to_string(BoundaryLabel l);
BoundaryLabel parse_boundary_label(const std::string& s);

/// Assignment of the four unit-square sides to {Dirichlet, Neumann, Contact}.
struct BoundarySpec {
    BoundaryLabel bottom = BoundaryLabel::Contact;
    BoundaryLabel top = BoundaryLabel::Dirichlet;
    BoundaryLabel left = BoundaryLabel::Neumann;
    BoundaryLabel right = BoundaryLabel::Neumann;

    BoundaryLabel side(Side s) const;
};

/// A fine boundary edge with its endpoint nodes (n0 before n1 in the side's
/// natural traversal) and the side it belongs to.
struct BoundaryEdge {
    Side side;
    int index;   // 0-based along the side
    int n0, n1;  // global fine node ids
};

/// Disjoint decomposition of the fine boundary edges and nodes into the
/// Dirichlet, Neumann and contact parts. Nodes shared by two sides take the
/// label with precedence Dirichlet > Contact > Neumann.
struct BoundaryDecomposition {
    std::vector<BoundaryEdge> dirichlet_edges;
    std::vector<BoundaryEdge> neumann_edges;
    std::vector<BoundaryEdge> contact_edges;

    std::vector<int> dirichlet_nodes;           // sorted by node id
    std::vector<int> contact_nodes;             // sorted by (x, y)
    std::vector<std::int8_t> node_label;        // -1 interior, else BoundaryLabel
    std::vector<std::int8_t> node_normal_side;  // -1 interior, else Side

    bool is_dirichlet_node(int node) const {
        return node_label[node] == static_cast<std::int8_t>(BoundaryLabel::Dirichlet);
    }
    bool is_contact_node(int node) const {
        return node_label[node] == static_cast<std::int8_t>(BoundaryLabel::Contact);
    }
};

/// Each of the three labels must appear on at least one side.
BoundaryDecomposition decompose_boundary(const GridHierarchy& g, const BoundarySpec& spec);

} // namespace sigms
