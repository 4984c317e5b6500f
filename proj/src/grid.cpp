#include "sigms/grid.hpp"

#include <algorithm>
#include <sstream>

namespace sigms {

GridHierarchy build_hierarchy(int nx_fine, int n_coarse_per_axis) {
    if (nx_fine < 2 || n_coarse_per_axis < 2) {
        std::ostringstream os;
        os << "build_hierarchy: sizes must be >= 2, got nx_fine=" << nx_fine
           << ", n_coarse_per_axis=" << n_coarse_per_axis;
        throw ConfigError(os.str());
    }
    if (nx_fine % n_coarse_per_axis != 0) {
        std::ostringstream os;
        os << "build_hierarchy: nx_fine=" << nx_fine
           << " is not divisible by n_coarse_per_axis=" << n_coarse_per_axis;
        throw ConfigError(os.str());
    }
    GridHierarchy g;
    g.nx_fine = nx_fine;
    g.ny_fine = nx_fine;
    g.n_coarse_per_axis = n_coarse_per_axis;
    g.ratio = nx_fine / n_coarse_per_axis;
    g.n_coarse = n_coarse_per_axis * n_coarse_per_axis;
    g.h = 1.0 / nx_fine;
    g.H = 1.0 / n_coarse_per_axis;
    return g;
}

OversampleDomain oversample(const GridHierarchy& g, int coarse_index, int layers) {
    if (coarse_index < 0 || coarse_index >= g.n_coarse) {
        std::ostringstream os;
        os << "oversample: coarse index " << coarse_index << " out of range [0,"
           << g.n_coarse << ")";
        throw ConfigError(os.str());
    }
    if (layers < 0) throw ConfigError("oversample: layers must be >= 0");

    OversampleDomain d;
    d.coarse_index = coarse_index;
    d.layers = layers;
    const int cx = g.coarse_cx(coarse_index);
    const int cy = g.coarse_cy(coarse_index);
    d.cx0 = std::max(0, cx - layers);
    d.cx1 = std::min(g.n_coarse_per_axis - 1, cx + layers);
    d.cy0 = std::max(0, cy - layers);
    d.cy1 = std::min(g.n_coarse_per_axis - 1, cy + layers);
    d.ex0 = d.cx0 * g.ratio;
    d.ex1 = (d.cx1 + 1) * g.ratio - 1;
    d.ey0 = d.cy0 * g.ratio;
    d.ey1 = (d.cy1 + 1) * g.ratio - 1;
    d.nx0 = d.ex0;
    d.nx1 = d.ex1 + 1;
    d.ny0 = d.ey0;
    d.ny1 = d.ey1 + 1;
    d.grid_nx = g.nx_fine;
    d.grid_ny = g.ny_fine;
    return d;
}

std::vector<int> OversampleDomain::fine_elements(const GridHierarchy& g) const {
    std::vector<int> out;
    out.reserve(num_fine_elements());
    for (int ey = ey0; ey <= ey1; ++ey)
        for (int ex = ex0; ex <= ex1; ++ex) out.push_back(g.element_id(ex, ey));
    return out;
}

std::vector<int> OversampleDomain::fine_nodes(const GridHierarchy& g) const {
    std::vector<int> out;
    out.reserve(num_nodes());
    for (int iy = ny0; iy <= ny1; ++iy)
        for (int ix = nx0; ix <= nx1; ++ix) out.push_back(g.node_id(ix, iy));
    return out;
}

std::vector<int> OversampleDomain::cut_nodes(const GridHierarchy& g) const {
    std::vector<int> out;
    for (int iy = ny0; iy <= ny1; ++iy)
        for (int ix = nx0; ix <= nx1; ++ix)
            if (is_cut_node(ix, iy)) out.push_back(g.node_id(ix, iy));
    return out;
}

std::vector<int> OversampleDomain::coarse_elements(const GridHierarchy& g) const {
    std::vector<int> out;
    out.reserve(num_coarse_elements());
    for (int cy = cy0; cy <= cy1; ++cy)
        for (int cx = cx0; cx <= cx1; ++cx) out.push_back(g.coarse_id(cx, cy));
    return out;
}

const char* to_string(Side s) {
    switch (s) {
        case Side::Bottom: return "bottom";
        case Side::Right: return "right";
        case Side::Top: return "top";
        case Side::Left: return "left";
    }
    return "?";
}

const char* to_string(BoundaryLabel l) {
    switch (l) {
        case BoundaryLabel::Dirichlet: return "D";
        case BoundaryLabel::Neumann: return "N";
        case BoundaryLabel::Contact: return "C";
    }
    return "?";
}

BoundaryLabel parse_boundary_label(const std::string& s) {
    if (s == "D" || s == "d" || s == "dirichlet") return BoundaryLabel::Dirichlet;
    if (s == "N" || s == "n" || s == "neumann") return BoundaryLabel::Neumann;
    if (s == "C" || s == "c" || s == "contact") return BoundaryLabel::Contact;
    throw ConfigError("unknown boundary label '" + s + "' (expected D, N or C)");
}

BoundaryLabel BoundarySpec::side(Side s) const {
    switch (s) {
        case Side::Bottom: return bottom;
        case Side::Right: return right;
        case Side::Top: return top;
        case Side::Left: return left;
    }
    return bottom;
}

namespace {

// Label precedence when a corner node belongs to two sides.
int precedence(BoundaryLabel l) {
    switch (l) {
        case BoundaryLabel::Dirichlet: return 2;
        case BoundaryLabel::Contact: return 1;
        case BoundaryLabel::Neumann: return 0;
    }
    return 0;
}

} // namespace

BoundaryDecomposition decompose_boundary(const GridHierarchy& g, const BoundarySpec& spec) {
    bool have[3] = {false, false, false};
    for (Side s : {Side::Bottom, Side::Right, Side::Top, Side::Left})
        have[static_cast<int>(spec.side(s))] = true;
    for (int l = 0; l < 3; ++l) {
        if (!have[l]) {
            std::ostringstream os;
            os << "boundary decomposition: label " << to_string(static_cast<BoundaryLabel>(l))
               << " is not assigned to any side; all three parts must be nonempty";
            throw ConfigError(os.str());
        }
    }

    BoundaryDecomposition bd;
    bd.node_label.assign(g.num_fine_nodes(), -1);
    bd.node_normal_side.assign(g.num_fine_nodes(), -1);

    auto edge_nodes = [&](Side s, int k) -> std::pair<int, int> {
        switch (s) {
            case Side::Bottom: return {g.node_id(k, 0), g.node_id(k + 1, 0)};
            case Side::Top: return {g.node_id(k, g.ny_fine), g.node_id(k + 1, g.ny_fine)};
            case Side::Left: return {g.node_id(0, k), g.node_id(0, k + 1)};
            case Side::Right: return {g.node_id(g.nx_fine, k), g.node_id(g.nx_fine, k + 1)};
        }
        return {0, 0};
    };

    auto tag_node = [&](int node, BoundaryLabel l, Side s) {
        const std::int8_t cur = bd.node_label[node];
        if (cur < 0 || precedence(l) > precedence(static_cast<BoundaryLabel>(cur))) {
            bd.node_label[node] = static_cast<std::int8_t>(l);
            bd.node_normal_side[node] = static_cast<std::int8_t>(s);
        }
    };

    for (Side s : {Side::Bottom, Side::Right, Side::Top, Side::Left}) {
        const BoundaryLabel label = spec.side(s);
        const int count = (s == Side::Bottom || s == Side::Top) ? g.nx_fine : g.ny_fine;
        for (int k = 0; k < count; ++k) {
            auto [n0, n1] = edge_nodes(s, k);
            BoundaryEdge e{s, k, n0, n1};
            switch (label) {
                case BoundaryLabel::Dirichlet: bd.dirichlet_edges.push_back(e); break;
                case BoundaryLabel::Neumann: bd.neumann_edges.push_back(e); break;
                case BoundaryLabel::Contact: bd.contact_edges.push_back(e); break;
            }
            tag_node(n0, label, s);
            tag_node(n1, label, s);
        }
    }

    for (int n = 0; n < g.num_fine_nodes(); ++n) {
        if (bd.node_label[n] == static_cast<std::int8_t>(BoundaryLabel::Dirichlet))
            bd.dirichlet_nodes.push_back(n);
        else if (bd.node_label[n] == static_cast<std::int8_t>(BoundaryLabel::Contact))
            bd.contact_nodes.push_back(n);
    }
    std::sort(bd.contact_nodes.begin(), bd.contact_nodes.end(), [&](int a, int b) {
        const double ax = g.node_x(a), bx = g.node_x(b);
        if (ax != bx) return ax < bx;
        return g.node_y(a) < g.node_y(b);
    });
    return bd;
}

} // namespace sigms
