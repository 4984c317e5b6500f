#include "sigms/auxspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sigms/parallel.hpp"

namespace sigms {

SparseMat assemble_local_weighted_mass(const GridHierarchy& g, const WeightField& w,
                                       const OversampleDomain& d) {
    const auto& M = unit_mass_block();
    const NodeRect r = NodeRect::of_domain(d);
    const double h2 = g.h * g.h;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(d.num_fine_elements()) * 16);
    for (int ey = d.ey0; ey <= d.ey1; ++ey) {
        for (int ex = d.ex0; ex <= d.ex1; ++ex) {
            const double c = w.values[g.element_id(ex, ey)] * h2;
            const int loc[4] = {r.local(ex, ey), r.local(ex + 1, ey),
                                r.local(ex + 1, ey + 1), r.local(ex, ey + 1)};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    trips.emplace_back(loc[a], loc[b], c * M(a, b));
        }
    }
    SparseMat S(r.count(), r.count());
    S.setFromTriplets(trips.begin(), trips.end());
    S.makeCompressed();
    return S;
}

AuxiliarySpace build_auxiliary(const GridHierarchy& g, const PermeabilityField& kappa,
                               const WeightField& weight, int l_m, int threads) {
    const int local_dim = (g.ratio + 1) * (g.ratio + 1);
    if (l_m < 1 || l_m + 1 > local_dim) {
        std::ostringstream os;
        os << "build_auxiliary: need 1 <= l_m and l_m + 1 <= local dimension "
           << local_dim << ", got l_m=" << l_m;
        throw ConfigError(os.str());
    }
    AuxiliarySpace aux;
    aux.l = l_m;
    aux.elements.resize(g.n_coarse);

    parallel_for(g.n_coarse, threads, [&](int i) {
        try {
            const OversampleDomain d = oversample(g, i, 0);
            const Matrix A = Matrix(assemble_local_stiffness(g, kappa, d));
            const SparseMat S_sp = assemble_local_weighted_mass(g, weight, d);
            const Matrix S = Matrix(S_sp);
            EigenPairs pairs = generalized_eigs_smallest(A, S, l_m + 1);

            ElementModes& em = aux.elements[i];
            em.coarse_index = i;
            em.rect = NodeRect::of_domain(d);
            em.eigenvalues = pairs.values;
            em.phi = pairs.vectors.leftCols(l_m);
            em.q = S_sp * em.phi;
        } catch (const SolveError& e) {
            std::ostringstream os;
            os << "auxspace: spectral problem on coarse element " << i << ": " << e.what();
            throw SolveError(os.str(), e.report);
        }
    });

    aux.lambda_min_next = aux.elements.empty()
                              ? 0.0
                              : aux.elements[0].eigenvalues[l_m];
    for (const auto& em : aux.elements)
        aux.lambda_min_next = std::min(aux.lambda_min_next, em.eigenvalues[l_m]);
    return aux;
}

Matrix project_coefficients(const GridHierarchy& g, const AuxiliarySpace& aux,
                            const Vector& fine) {
    Matrix coeffs(static_cast<int>(aux.elements.size()), aux.l);
    Vector local;
    for (std::size_t i = 0; i < aux.elements.size(); ++i) {
        const ElementModes& em = aux.elements[i];
        local.resize(em.rect.count());
        for (int iy = em.rect.y0; iy <= em.rect.y1; ++iy)
            for (int ix = em.rect.x0; ix <= em.rect.x1; ++ix)
                local[em.rect.local(ix, iy)] = fine[g.node_id(ix, iy)];
        coeffs.row(static_cast<int>(i)) = (em.q.transpose() * local).transpose();
    }
    return coeffs;
}

Vector aux_combination_fine(const GridHierarchy& g, const AuxiliarySpace& aux,
                            const Matrix& coeffs) {
    Vector out = Vector::Zero(g.num_fine_nodes());
    for (std::size_t i = 0; i < aux.elements.size(); ++i) {
        const ElementModes& em = aux.elements[i];
        const Vector local = em.phi * coeffs.row(static_cast<int>(i)).transpose();
        rect_axpy(g, 1.0, em.rect, local, out);
    }
    return out;
}

Vector project_pi(const GridHierarchy& g, const AuxiliarySpace& aux, const Vector& fine) {
    return aux_combination_fine(g, aux, project_coefficients(g, aux, fine));
}

Matrix reproject_coefficients(const AuxiliarySpace& aux, const Matrix& coeffs) {
    Matrix out(coeffs.rows(), coeffs.cols());
    for (std::size_t i = 0; i < aux.elements.size(); ++i) {
        const ElementModes& em = aux.elements[i];
        const Vector local = em.phi * coeffs.row(static_cast<int>(i)).transpose();
        out.row(static_cast<int>(i)) = (em.q.transpose() * local).transpose();
    }
    return out;
}

double aux_s_norm(const Matrix& coeffs) { return coeffs.norm(); }

} // namespace sigms
