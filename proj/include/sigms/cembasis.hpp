#pragma once

#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/auxspace.hpp"
#include "sigms/grid.hpp"
#include "sigms/numkernel.hpp"

namespace sigms {

/// Per-fine-node activity flags (nonzero at contact nodes currently in the
/// active set). Size = number of fine nodes.
using ActiveFlags = std::vector<char>;

/// Free-dof bookkeeping of the restricted local space V_k(K_i^m): zero on
/// the interior cut of the oversampled domain, on Dirichlet nodes, and on
/// active contact nodes inside the closed domain.
struct DomainRestriction {
    OversampleDomain domain;
    NodeRect rect;
    std::vector<char> constrained;  // per local node
    DofMap dofs;
};

DomainRestriction restrict_domain(const GridHierarchy& g, const BoundaryDecomposition& bd,
                                  const ActiveFlags& active, int coarse_index, int layers);

/// One multiscale basis function psi_{i}^{j,m}, stored on its domain window
/// (zero outside by construction).
struct BasisColumn {
    int coarse_index = 0;
    int mode = 0;
    NodeRect rect;
    Vector values;
};

/// One Neumann boundary corrector contribution N_i^m p.
struct CorrectorPiece {
    int coarse_index = 0;
    NodeRect rect;
    Vector values;
};

/// Standalone builders (the iterative solver uses the batched space below).
Vector build_basis_column_fine(const GridHierarchy& g, const PermeabilityField& kappa,
                               const AuxiliarySpace& aux, const DomainRestriction& r,
                               int coarse_index, int mode);
Vector build_corrector_fine(const GridHierarchy& g, const PermeabilityField& kappa,
                            const AuxiliarySpace& aux, const BoundaryDecomposition& bd,
                            const DomainRestriction& r, const ScalarField& p,
                            int coarse_index);

struct CemOptions {
    int oversample_layers = 4;
    int threads = 1;
};

/// The active-set-aware multiscale space V_{k,ms}^m: all basis columns, the
/// Neumann correctors, and the coarse Galerkin matrix, versioned by active
/// set. Refreshing for a new active set rebuilds only the columns whose
/// oversampled domain sees a changed node.
class MultiscaleSpace {
public:
    MultiscaleSpace(const GridHierarchy& g, const PermeabilityField& kappa,
                    const AuxiliarySpace& aux, const BoundaryDecomposition& bd,
                    const ScalarField& neumann_p, CemOptions options,
                    const ActiveFlags* initial_active = nullptr);

    void refresh_for_active_set(const ActiveFlags& new_active);

    int version() const { return version_; }
    int total_columns() const { return static_cast<int>(columns_.size()); }
    int last_rebuilt_columns() const { return last_rebuilt_columns_; }
    const std::vector<int>& last_rebuilt_domains() const { return last_rebuilt_domains_; }

    const BasisColumn& column(int idx) const { return columns_[idx]; }
    int column_index(int coarse_index, int mode) const { return coarse_index * l_ + mode; }
    Vector column_fine(int idx) const;
    const Vector& corrector_sum() const { return corrector_sum_; }
    const Matrix& coarse_matrix() const { return coarse_matrix_; }
    const ActiveFlags& active() const { return active_; }

    struct CoarseSolution {
        Vector coefficients;  // on the multiscale basis
        Vector u_fine;        // downscaled solution incl. corrector
    };

    /// STEP 3-4: Galerkin solve on the multiscale space against the fine
    /// load, then downscale. Throws SolveError if the coarse matrix is
    /// numerically singular (rank loss from over-constraining).
    CoarseSolution solve_coarse(const SparseMat& A_fine, const Vector& b_fine) const;

private:
    void rebuild_domain(int i, std::vector<BasisColumn>& cols,
                        CorrectorPiece* corrector) const;
    void rebuild_domains(const std::vector<int>& domains);
    void update_coarse_matrix(const std::vector<int>& rebuilt_domains, bool initial);
    void rebuild_corrector_sum();

    const GridHierarchy& g_;
    const PermeabilityField& kappa_;
    const AuxiliarySpace& aux_;
    const BoundaryDecomposition& bd_;
    ScalarField p_;
    CemOptions opt_;
    int l_ = 0;
    int version_ = 0;
    ActiveFlags active_;

    std::vector<NodeRect> domain_rects_;
    std::vector<std::vector<int>> overlaps_;  // domain -> overlapping domains
    std::vector<BasisColumn> columns_;
    std::vector<CorrectorPiece> correctors_;  // only domains with Neumann edges
    std::vector<int> corrector_of_domain_;    // -1 if none
    Vector corrector_sum_;
    Matrix coarse_matrix_;

    int last_rebuilt_columns_ = 0;
    std::vector<int> last_rebuilt_domains_;
};

} // namespace sigms
