#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sigms/cembasis.hpp"
#include "sigms/contactsolve.hpp"

using namespace sigms;

namespace {

PermeabilityField constant_field(const GridHierarchy& g, double v = 1.0) {
    PermeabilityField f;
    f.values.assign(g.num_fine_elements(), v);
    return f;
}

struct CemFixture {
    GridHierarchy g;
    BoundaryDecomposition bd;
    PermeabilityField kappa;
    WeightField weight;
    AuxiliarySpace aux;

    CemFixture(int nx, int nc, int l, double contrast = 1.0, unsigned seed = 1,
               BoundarySpec spec = BoundarySpec{})
        : g(build_hierarchy(nx, nc)), bd(decompose_boundary(g, spec)) {
        kappa = contrast == 1.0 ? constant_field(g)
                                : generate_medium(g, MediumStyle::A, contrast, seed);
        weight = compute_weight(g, kappa, WeightMode::Simplified);
        aux = build_auxiliary(g, kappa, weight, l);
    }

    ActiveFlags no_active() const { return ActiveFlags(g.num_fine_nodes(), 0); }
};

double fine_energy(const SparseMat& A, const Vector& v) { return std::sqrt(v.dot(A * v)); }

} // namespace

TEST_CASE("domain restriction separates cut, Dirichlet and active nodes") {
    CemFixture fx(8, 4, 2);
    ActiveFlags active = fx.no_active();
    // activate one bottom contact node
    const int node = fx.g.node_id(3, 0);
    REQUIRE(fx.bd.is_contact_node(node));
    active[node] = 1;

    const DomainRestriction r = restrict_domain(fx.g, fx.bd, active, fx.g.coarse_id(1, 0), 1);
    int n_constrained = 0;
    for (int iy = r.rect.y0; iy <= r.rect.y1; ++iy) {
        for (int ix = r.rect.x0; ix <= r.rect.x1; ++ix) {
            const bool c = r.constrained[r.rect.local(ix, iy)];
            n_constrained += c;
            const int gid = fx.g.node_id(ix, iy);
            if (r.domain.is_cut_node(ix, iy)) CHECK(c);
            if (fx.bd.is_dirichlet_node(gid)) CHECK(c);
            if (gid == node) CHECK(c);
        }
    }
    CHECK(r.dofs.n_free() == r.rect.count() - n_constrained);

    // with the empty active set only cut and Dirichlet nodes remain
    const DomainRestriction r0 =
        restrict_domain(fx.g, fx.bd, fx.no_active(), fx.g.coarse_id(1, 0), 1);
    CHECK(r0.dofs.n_free() == r.dofs.n_free() + 1);
}

TEST_CASE("saturated oversampling equals the global basis problem") {
    CemFixture fx(12, 3, 2, 1e2, 3);
    const ActiveFlags none = fx.no_active();
    const DomainRestriction r1 = restrict_domain(fx.g, fx.bd, none, 4, 3);
    const DomainRestriction r2 = restrict_domain(fx.g, fx.bd, none, 4, 7);
    const Vector a = build_basis_column_fine(fx.g, fx.kappa, fx.aux, r1, 4, 1);
    const Vector b = build_basis_column_fine(fx.g, fx.kappa, fx.aux, r2, 4, 1);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("basis column projects to its defining mode") {
    // 2x2 coarse grid, m = 0: neighbors of K_i are outside the domain
    CemFixture fx(8, 2, 1);
    const int i = 0;
    const DomainRestriction r = restrict_domain(fx.g, fx.bd, fx.no_active(), i, 0);
    const Vector psi = build_basis_column_fine(fx.g, fx.kappa, fx.aux, r, i, 0);
    CHECK(psi.cwiseAbs().maxCoeff() > 0.0);

    const Matrix c = project_coefficients(fx.g, fx.aux, psi);
    CHECK(std::abs(c(i, 0)) > 1e-6);
    for (int k = 1; k < fx.g.n_coarse; ++k) CHECK(c(k, 0) == 0.0);
}

TEST_CASE("basis decays exponentially away from its element") {
    // 40x40 fine, 10x10 coarse, constant coefficient
    CemFixture fx(40, 10, 1);
    const SparseMat A = assemble_stiffness(fx.g, fx.kappa);
    const ActiveFlags none = fx.no_active();
    const int i = fx.g.coarse_id(4, 4);

    const DomainRestriction rg = restrict_domain(fx.g, fx.bd, none, i, 10);
    const Vector glo = build_basis_column_fine(fx.g, fx.kappa, fx.aux, rg, i, 0);

    double prev = -1.0;
    std::vector<double> err;
    for (int m = 1; m <= 4; ++m) {
        const DomainRestriction r = restrict_domain(fx.g, fx.bd, none, i, m);
        const Vector psi = build_basis_column_fine(fx.g, fx.kappa, fx.aux, r, i, 0);
        err.push_back(fine_energy(A, psi - glo));
        if (prev >= 0.0) CHECK(err.back() < prev);
        prev = err.back();
    }
    for (std::size_t k = 1; k < err.size(); ++k) CHECK(err[k] / err[k - 1] <= 0.5);
}

TEST_CASE("corrector vanishes without Neumann data or Neumann edges") {
    CemFixture fx(8, 4, 2);
    const ActiveFlags none = fx.no_active();
    const DomainRestriction r = restrict_domain(fx.g, fx.bd, none, 5, 1);
    // empty p
    CHECK(build_corrector_fine(fx.g, fx.kappa, fx.aux, fx.bd, r, {}, 5).norm() == 0.0);
    // interior element, p present
    const ScalarField one = [](double, double) { return 1.0; };
    CHECK(build_corrector_fine(fx.g, fx.kappa, fx.aux, fx.bd, r, one, 5).norm() == 0.0);
    // element at the left (Neumann) side gets a nonzero corrector
    const int left = fx.g.coarse_id(0, 1);
    const DomainRestriction rl = restrict_domain(fx.g, fx.bd, none, left, 1);
    CHECK(build_corrector_fine(fx.g, fx.kappa, fx.aux, fx.bd, rl, one, left).norm() > 0.0);
}

TEST_CASE("Neumann edge ownership partitions the boundary functional") {
    CemFixture fx(8, 4, 2);
    const ScalarField one = [](double, double) { return 1.0; };
    const Vector global = assemble_load(fx.g, {}, one, fx.bd);

    // ownership: a boundary fine edge belongs to the coarse element holding
    // its adjacent fine element
    Vector summed = Vector::Zero(fx.g.num_fine_nodes());
    std::size_t owned_total = 0;
    for (int i = 0; i < fx.g.n_coarse; ++i) {
        std::vector<BoundaryEdge> owned;
        for (const auto& e : fx.bd.neumann_edges) {
            int ex = 0, ey = 0;
            switch (e.side) {
                case Side::Bottom: ex = e.index; ey = 0; break;
                case Side::Top: ex = e.index; ey = fx.g.ny_fine - 1; break;
                case Side::Left: ex = 0; ey = e.index; break;
                case Side::Right: ex = fx.g.nx_fine - 1; ey = e.index; break;
            }
            if (fx.g.coarse_of_element(fx.g.element_id(ex, ey)) == i) owned.push_back(e);
        }
        owned_total += owned.size();
        accumulate_edge_load(fx.g, one, owned, summed);
    }
    CHECK(owned_total == fx.bd.neumann_edges.size());
    CHECK((summed - global).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("full-span multiscale space reproduces the fine solve") {
    // every local mode retained (l = local dim - 1 = 8) and saturated
    // oversampling: the coarse space contains the whole constrained space
    CemFixture fx(4, 2, 8);
    const SparseMat A = assemble_stiffness(fx.g, fx.kappa);
    const ScalarField f = [](double x, double y) { return 1.0 + x - y; };
    const ScalarField p = [](double, double y) { return std::sin(2 * y); };
    const Vector b = assemble_load(fx.g, f, p, fx.bd);

    CemOptions opt;
    opt.oversample_layers = 2;
    MultiscaleSpace space(fx.g, fx.kappa, fx.aux, fx.bd, p, opt);
    const auto sol = space.solve_coarse(A, b);

    // fine reference with the same (empty) active set
    std::vector<char> constrained(fx.g.num_fine_nodes(), 0);
    for (int n : fx.bd.dirichlet_nodes) constrained[n] = 1;
    const DofMap dofs = DofMap::from_constrained(constrained);
    SpdFactor fine(restrict_matrix(A, dofs));
    const Vector u_fine = dofs.extend_vector(fine.solve(dofs.restrict_vector(b)));

    CHECK((sol.u_fine - u_fine).norm() <= 1e-8 * u_fine.norm());
}

TEST_CASE("coarse solve trivial and structural properties") {
    CemFixture fx(16, 4, 3, 1e3, 5);
    const SparseMat A = assemble_stiffness(fx.g, fx.kappa);
    CemOptions opt;
    opt.oversample_layers = 2;
    MultiscaleSpace space(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt);

    // zero data
    const auto zero = space.solve_coarse(A, Vector::Zero(fx.g.num_fine_nodes()));
    CHECK(zero.coefficients.norm() == 0.0);
    CHECK(zero.u_fine.norm() == 0.0);

    // symmetry of the coarse matrix
    const Matrix& G = space.coarse_matrix();
    CHECK((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * G.cwiseAbs().maxCoeff());

    // Galerkin orthogonality of the residual
    const Vector b = assemble_load(
        fx.g, [](double x, double y) { return std::cos(x) + y; }, {}, fx.bd);
    const auto sol = space.solve_coarse(A, b);
    const Vector res = b - A * sol.u_fine;
    double proj = 0.0, scale = 0.0;
    for (int q = 0; q < space.total_columns(); ++q) {
        const Vector psi = space.column_fine(q);
        proj = std::max(proj, std::abs(psi.dot(res)));
        scale = std::max(scale, std::abs(psi.dot(b)));
    }
    CHECK(proj <= 1e-8 * std::max(scale, 1e-30));
}

TEST_CASE("coarse matrix equals the congruence of the fine operator") {
    CemFixture fx(12, 3, 2, 1e2, 7);
    const SparseMat A = assemble_stiffness(fx.g, fx.kappa);
    CemOptions opt;
    opt.oversample_layers = 1;
    MultiscaleSpace space(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt);

    const int total = space.total_columns();
    Matrix Psi(fx.g.num_fine_nodes(), total);
    for (int q = 0; q < total; ++q) Psi.col(q) = space.column_fine(q);
    const Matrix G_ref = Psi.transpose() * A * Psi;
    CHECK((space.coarse_matrix() - G_ref).cwiseAbs().maxCoeff() <=
          1e-10 * G_ref.cwiseAbs().maxCoeff());
}

TEST_CASE("columns conform to constraints") {
    BoundarySpec spec;
    CemFixture fx(16, 4, 2, 1e2, 9, spec);
    ActiveFlags active = fx.no_active();
    // activate a few bottom contact nodes
    for (int k = 3; k <= 6; ++k) active[fx.g.node_id(k, 0)] = 1;
    CemOptions opt;
    opt.oversample_layers = 1;
    MultiscaleSpace space(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt, &active);

    for (int q = 0; q < space.total_columns(); ++q) {
        const Vector psi = space.column_fine(q);
        const BasisColumn& col = space.column(q);
        for (int n = 0; n < fx.g.num_fine_nodes(); ++n) {
            const int ix = fx.g.node_ix(n), iy = fx.g.node_iy(n);
            if (fx.bd.is_dirichlet_node(n) || active[n] || !col.rect.contains(ix, iy))
                CHECK(psi[n] == 0.0);
        }
    }
}

TEST_CASE("refresh rebuilds exactly the domains that see a change") {
    // H = 1/5, m = 1, one node strictly inside a bottom coarse edge
    CemFixture fx(20, 5, 2);
    CemOptions opt;
    opt.oversample_layers = 1;
    MultiscaleSpace space(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt);

    // same set: nothing rebuilt
    space.refresh_for_active_set(fx.no_active());
    CHECK(space.last_rebuilt_columns() == 0);
    CHECK(space.version() == 1);

    ActiveFlags active = fx.no_active();
    const int node = fx.g.node_id(2 * fx.g.ratio + 1, 0);  // inside coarse column 2
    REQUIRE(fx.bd.is_contact_node(node));
    active[node] = 1;
    space.refresh_for_active_set(active);

    std::set<int> expected;
    for (int cy = 0; cy <= 1; ++cy)
        for (int cx = 1; cx <= 3; ++cx) expected.insert(fx.g.coarse_id(cx, cy));
    const auto& rebuilt = space.last_rebuilt_domains();
    CHECK(std::set<int>(rebuilt.begin(), rebuilt.end()) == expected);
    CHECK(space.last_rebuilt_columns() == static_cast<int>(expected.size()) * 2);
    CHECK(static_cast<std::size_t>(space.last_rebuilt_columns()) <=
          (2 * opt.oversample_layers + 1) * (opt.oversample_layers + 1) * 2u);
}

TEST_CASE("threaded construction is bitwise deterministic") {
    CemFixture fx(16, 4, 2, 1e2, 15);
    CemOptions serial;
    serial.oversample_layers = 2;
    serial.threads = 1;
    CemOptions threaded = serial;
    threaded.threads = 2;
    MultiscaleSpace a(fx.g, fx.kappa, fx.aux, fx.bd, {}, serial);
    MultiscaleSpace b(fx.g, fx.kappa, fx.aux, fx.bd, {}, threaded);
    CHECK((a.coarse_matrix() - b.coarse_matrix()).norm() == 0.0);
    for (int q = 0; q < a.total_columns(); ++q)
        CHECK((a.column(q).values - b.column(q).values).norm() == 0.0);
}

TEST_CASE("incremental refresh equals a full rebuild") {
    CemFixture fx(16, 4, 2, 1e2, 11);
    const SparseMat A = assemble_stiffness(fx.g, fx.kappa);
    const Vector b = assemble_load(
        fx.g, [](double x, double y) { return 1.0 - x + 2 * y; }, {}, fx.bd);
    CemOptions opt;
    opt.oversample_layers = 2;

    MultiscaleSpace incremental(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt);
    std::mt19937_64 rng(13);
    ActiveFlags active = fx.no_active();
    for (int round = 0; round < 3; ++round) {
        for (int n : fx.bd.contact_nodes)
            if (rng() % 3 == 0) active[n] ^= 1;
        incremental.refresh_for_active_set(active);
        MultiscaleSpace full(fx.g, fx.kappa, fx.aux, fx.bd, {}, opt, &active);
        const Vector ui = incremental.solve_coarse(A, b).u_fine;
        const Vector uf = full.solve_coarse(A, b).u_fine;
        CHECK((ui - uf).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, uf.cwiseAbs().maxCoeff()));
    }
}
