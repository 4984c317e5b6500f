#include <doctest.h>

#include <algorithm>
#include <set>

#include "sigms/grid.hpp"

using namespace sigms;

TEST_CASE("build_hierarchy basic configurations") {
    const GridHierarchy g1 = build_hierarchy(400, 100);
    CHECK(g1.ratio == 4);
    CHECK(g1.n_coarse == 10000);
    CHECK(g1.H == doctest::Approx(1.0 / 100).epsilon(1e-15));

    const GridHierarchy g2 = build_hierarchy(4, 2);
    CHECK(g2.ratio == 2);
    CHECK(g2.n_coarse == 4);
    CHECK(g2.H == doctest::Approx(0.5));

    const GridHierarchy g3 = build_hierarchy(40, 20);
    CHECK(g3.ratio == 2);
    CHECK(g3.n_coarse == 400);
    CHECK(g3.H == doctest::Approx(1.0 / 20));
}

TEST_CASE("build_hierarchy rejects bad sizes") {
    CHECK_THROWS_AS(build_hierarchy(10, 3), ConfigError);
    CHECK_THROWS_AS(build_hierarchy(1, 1), ConfigError);
    try {
        build_hierarchy(10, 3);
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("10") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);
    }
}

TEST_CASE("nesting map is total and consistent") {
    const GridHierarchy g = build_hierarchy(8, 4);
    std::vector<int> count(g.n_coarse, 0);
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        const int c = g.coarse_of_element(e);
        REQUIRE(c >= 0);
        REQUIRE(c < g.n_coarse);
        ++count[c];
    }
    for (int c = 0; c < g.n_coarse; ++c) CHECK(count[c] == g.ratio * g.ratio);
}

TEST_CASE("oversample element counts") {
    const GridHierarchy g = build_hierarchy(10, 5);
    const int center = g.coarse_id(2, 2);
    CHECK(oversample(g, center, 2).num_coarse_elements() == 25);
    CHECK(oversample(g, g.coarse_id(0, 0), 1).num_coarse_elements() == 4);
    for (int i = 0; i < g.n_coarse; ++i)
        CHECK(oversample(g, i, 0).num_coarse_elements() == 1);
}

TEST_CASE("oversample node set equals union of member coarse element nodes") {
    const GridHierarchy g = build_hierarchy(10, 5);
    for (int i = 0; i < g.n_coarse; ++i) {
        for (int m = 0; m <= 3; ++m) {
            const OversampleDomain d = oversample(g, i, m);
            std::set<int> expected;
            for (int c : d.coarse_elements(g)) {
                const OversampleDomain kc = oversample(g, c, 0);
                for (int n : kc.fine_nodes(g)) expected.insert(n);
            }
            const auto nodes = d.fine_nodes(g);
            const std::set<int> actual(nodes.begin(), nodes.end());
            CHECK(actual == expected);
            CHECK(static_cast<int>(nodes.size()) == d.num_nodes());
        }
    }
}

TEST_CASE("oversample monotone growth until saturation") {
    const GridHierarchy g = build_hierarchy(10, 5);
    for (int i = 0; i < g.n_coarse; ++i) {
        int prev = oversample(g, i, 0).num_nodes();
        bool saturated = false;
        for (int m = 1; m <= 6; ++m) {
            const int cur = oversample(g, i, m).num_nodes();
            if (saturated) {
                CHECK(cur == prev);
            } else if (cur == prev) {
                saturated = true;
                CHECK(cur == g.num_fine_nodes());
            } else {
                CHECK(cur > prev);
            }
            prev = cur;
        }
        CHECK(oversample(g, i, 6).num_nodes() == g.num_fine_nodes());
    }
}

TEST_CASE("cut node classification") {
    const GridHierarchy g = build_hierarchy(8, 4);
    // corner domain: two rectangle sides on the physical boundary, two
    // cutting through the interior
    const OversampleDomain d = oversample(g, g.coarse_id(0, 0), 1);
    const auto cut = d.cut_nodes(g);
    // every node of the two cutting sides is constrained, including the
    // side endpoints that touch the physical boundary (a nonzero endpoint
    // value would spill the zero-extension outside the domain)
    std::set<int> expected;
    for (int k = d.ny0; k <= d.ny1; ++k) expected.insert(g.node_id(d.nx1, k));
    for (int k = d.nx0; k <= d.nx1; ++k) expected.insert(g.node_id(k, d.ny1));
    CHECK(std::set<int>(cut.begin(), cut.end()) == expected);
    CHECK(static_cast<int>(cut.size()) == 2 * d.nodes_x() - 1);
    // nodes strictly inside the physical-boundary sides stay free
    CHECK_FALSE(d.is_cut_node(1, 0));
    CHECK_FALSE(d.is_cut_node(0, 1));
}

TEST_CASE("boundary decomposition on the 4x4 grid") {
    const GridHierarchy g = build_hierarchy(4, 2);
    const BoundarySpec spec;  // bottom C, top D, left N, right N
    const BoundaryDecomposition bd = decompose_boundary(g, spec);

    CHECK(bd.contact_edges.size() == 4);
    CHECK(bd.contact_nodes.size() == 5);  // corners taken from Neumann by precedence
    CHECK(bd.dirichlet_edges.size() == 4);
    CHECK(bd.neumann_edges.size() == 8);
    CHECK(bd.dirichlet_nodes.size() == 5);  // the top row

    // partition of the boundary edge set
    CHECK(bd.contact_edges.size() + bd.dirichlet_edges.size() + bd.neumann_edges.size() ==
          static_cast<std::size_t>(4 * g.nx_fine));

    // contact nodes sorted by x
    for (std::size_t i = 1; i < bd.contact_nodes.size(); ++i)
        CHECK(g.node_x(bd.contact_nodes[i - 1]) <= g.node_x(bd.contact_nodes[i]));
}

TEST_CASE("boundary decomposition with two contact sides") {
    const GridHierarchy g = build_hierarchy(4, 2);
    BoundarySpec spec;
    spec.bottom = BoundaryLabel::Contact;
    spec.top = BoundaryLabel::Contact;
    spec.left = BoundaryLabel::Dirichlet;
    spec.right = BoundaryLabel::Neumann;
    const BoundaryDecomposition bd = decompose_boundary(g, spec);
    CHECK(bd.contact_edges.size() == 8);
    // left corners go to Dirichlet, right corners to contact
    CHECK(bd.contact_nodes.size() == 8);
    for (int n : bd.contact_nodes) {
        const double y = g.node_y(n);
        CHECK((y == 0.0 || y == 1.0));
        CHECK(g.node_x(n) > 0.0);
    }
}

TEST_CASE("boundary decomposition requires all three labels") {
    const GridHierarchy g = build_hierarchy(4, 2);
    BoundarySpec spec;
    spec.bottom = BoundaryLabel::Contact;
    spec.top = BoundaryLabel::Neumann;
    spec.left = BoundaryLabel::Neumann;
    spec.right = BoundaryLabel::Neumann;  // no Dirichlet side
    CHECK_THROWS_AS(decompose_boundary(g, spec), ConfigError);
}

TEST_CASE("corner precedence is Dirichlet over contact over Neumann") {
    const GridHierarchy g = build_hierarchy(4, 2);
    BoundarySpec spec;
    spec.bottom = BoundaryLabel::Contact;
    spec.top = BoundaryLabel::Dirichlet;
    spec.left = BoundaryLabel::Dirichlet;
    spec.right = BoundaryLabel::Neumann;
    const BoundaryDecomposition bd = decompose_boundary(g, spec);
    CHECK(bd.is_dirichlet_node(g.node_id(0, 0)));       // D beats C
    CHECK(bd.is_contact_node(g.node_id(g.nx_fine, 0))); // C beats N
    CHECK(bd.node_label[g.node_id(g.nx_fine, g.ny_fine)] ==
          static_cast<std::int8_t>(BoundaryLabel::Dirichlet));
}
