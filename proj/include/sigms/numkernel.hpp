#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/errors.hpp"

namespace sigms {

using ApplyFn = std::function<void(const Vector&, Vector&)>;

/// Jacobi-preconditioned conjugate gradients for an SPD operator given as a
/// matrix-vector product. diag holds the operator diagonal (for the
/// preconditioner; pass ones to disable). Returns the solution and a report;
/// throws SolveError if the relative residual does not reach tol within
/// max_iterations (0 picks 10 n + 1000).
std::pair<Vector, SolveReport> solve_spd_operator(const ApplyFn& apply, const Vector& diag,
                                                  const Vector& b, double tol = 1e-10,
                                                  int max_iterations = 0);

std::pair<Vector, SolveReport> solve_spd(const SparseMat& A, const Vector& b,
                                         double tol = 1e-10, int max_iterations = 0);

/// Sparse LDL^T factorization of an SPD matrix for repeated solves.
class SpdFactor {
public:
    explicit SpdFactor(SparseMat A);
    Vector solve(const Vector& b) const;
    const SparseMat& matrix() const { return A_; }
    double relative_residual(const Vector& x, const Vector& b) const;

private:
    SparseMat A_;
    Eigen::SimplicialLDLT<SparseMat> ldlt_;
};

/// The l algebraically smallest eigenpairs of A phi = lambda S phi with
/// dense symmetric A and dense SPD S. Eigenvalues ascend; eigenvectors are
/// S-orthonormal. Solved by Cholesky reduction of S and a full symmetric
/// eigendecomposition.
struct EigenPairs {
    Vector values;   // l entries, ascending
    Matrix vectors;  // n x l, S-orthonormal columns
};
EigenPairs generalized_eigs_smallest(const Matrix& A, const Matrix& S, int l);

/// Solver for (A + Q Q^T) x = b with sparse SPD A and a tall low-rank factor
/// Q, via the symmetric quasidefinite augmentation
///   [ A  Q ] [x]   [b]
///   [ Q^T -I] [y] = [0]
/// factorized once; the trailing block carries the Woodbury capacitance.
class LowRankSolver {
public:
    LowRankSolver(const SparseMat& A, const SparseMat& Q);
    Vector solve(const Vector& b) const;
    int dim() const { return n_; }
    int rank() const { return r_; }

private:
    int n_ = 0, r_ = 0;
    SparseMat aug_;
    Eigen::SimplicialLDLT<SparseMat> ldlt_;
    std::unique_ptr<Eigen::SparseLU<SparseMat>> lu_;  // fallback
};

/// One-shot convenience over LowRankSolver.
Vector solve_lowrank_corrected(const SparseMat& A, const SparseMat& Q, const Vector& b);

/// Map between full and free (unconstrained) degrees of freedom.
struct DofMap {
    std::vector<int> full_to_free;  // -1 where constrained
    std::vector<int> free_list;

    int n_full() const { return static_cast<int>(full_to_free.size()); }
    int n_free() const { return static_cast<int>(free_list.size()); }

    static DofMap from_constrained(const std::vector<char>& constrained);

    Vector restrict_vector(const Vector& full) const;
    Vector extend_vector(const Vector& free) const;
};

/// A(free, free) — symmetric row/column elimination.
SparseMat restrict_matrix(const SparseMat& A, const DofMap& m);

/// Q(free, :) — row restriction of a tall sparse factor.
SparseMat restrict_rows(const SparseMat& Q, const DofMap& m);

} // namespace sigms
