#pragma once

#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/numkernel.hpp"

namespace sigms {

/// Spectral modes of one coarse element: the l_m smallest eigenpairs of the
/// local pencil a_i(phi, v) = lambda s_i(phi, v) posed on K_i with natural
/// boundary conditions, plus the (l_m+1)-th eigenvalue for reporting.
struct ElementModes {
    int coarse_index = 0;
    NodeRect rect;       // node window of K_i
    Vector eigenvalues;  // l_m + 1 values, ascending
    Matrix phi;          // n_loc x l_m, s_i-orthonormal
    Matrix q;            // n_loc x l_m, q_j = S_loc phi_j (the s-product stencils)
};

/// Auxiliary multiscale space: per-element eigenpairs and the ingredients of
/// the projection pi. Independent of boundary conditions and active sets.
struct AuxiliarySpace {
    int l = 0;  // retained eigenvectors per element
    std::vector<ElementModes> elements;  // indexed by coarse element id
    double lambda_min_next = 0.0;        // min_i lambda_i^{l+1} (Lambda report)

    int total_dim() const { return l * static_cast<int>(elements.size()); }
};

/// Weighted mass on K_i in local numbering (no boundary conditions).
SparseMat assemble_local_weighted_mass(const GridHierarchy& g, const WeightField& w,
                                       const OversampleDomain& d);

/// Requires l_m + 1 <= (ratio+1)^2. Eigensolver failures are rethrown with
/// the offending coarse element index.
AuxiliarySpace build_auxiliary(const GridHierarchy& g, const PermeabilityField& kappa,
                               const WeightField& weight, int l_m, int threads = 1);

/// Per-element coefficients s_i(phi_i^j, v) of a conforming fine vector;
/// row i holds element i's l coefficients.
Matrix project_coefficients(const GridHierarchy& g, const AuxiliarySpace& aux,
                            const Vector& fine);

/// Fine-grid view of an auxiliary combination sum_ij c_ij phi_i^j (values at
/// element-shared nodes accumulate from both sides).
Vector aux_combination_fine(const GridHierarchy& g, const AuxiliarySpace& aux,
                            const Matrix& coeffs);

/// pi(v) represented on the fine grid.
Vector project_pi(const GridHierarchy& g, const AuxiliarySpace& aux, const Vector& fine);

/// Reapply pi to an auxiliary combination given by coefficients, evaluating
/// the s-products numerically (equals coeffs up to roundoff).
Matrix reproject_coefficients(const AuxiliarySpace& aux, const Matrix& coeffs);

/// s-norm of an auxiliary combination: sqrt(sum of squared coefficients).
double aux_s_norm(const Matrix& coeffs);

} // namespace sigms
