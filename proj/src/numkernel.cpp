#include "sigms/numkernel.hpp"

#include <cmath>
#include <sstream>

namespace sigms {

std::pair<Vector, SolveReport> solve_spd_operator(const ApplyFn& apply, const Vector& diag,
                                                  const Vector& b, double tol,
                                                  int max_iterations) {
    const int n = static_cast<int>(b.size());
    SolveReport rep;
    rep.method = "pcg";
    const double bnorm = b.norm();
    if (bnorm == 0.0) return {Vector::Zero(n), rep};
    if (max_iterations <= 0) max_iterations = 10 * n + 1000;

    Vector x = Vector::Zero(n);
    Vector r = b;
    Vector z = r.cwiseQuotient(diag);
    Vector p = z;
    Vector Ap(n);
    double rz = r.dot(z);
    for (int it = 1; it <= max_iterations; ++it) {
        apply(p, Ap);
        const double pAp = p.dot(Ap);
        const double alpha = rz / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        rep.iterations = it;
        rep.residual = r.norm() / bnorm;
        if (rep.residual <= tol) return {std::move(x), rep};
        z = r.cwiseQuotient(diag);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    std::ostringstream os;
    os << "pcg failed to converge: relative residual " << rep.residual << " after "
       << rep.iterations << " iterations (tol " << tol << ")";
    throw SolveError(os.str(), rep);
}

std::pair<Vector, SolveReport> solve_spd(const SparseMat& A, const Vector& b, double tol,
                                         int max_iterations) {
    Vector diag = A.diagonal().cwiseMax(1e-300);
    auto apply = [&A](const Vector& v, Vector& out) { out.noalias() = A * v; };
    return solve_spd_operator(apply, diag, b, tol, max_iterations);
}

SpdFactor::SpdFactor(SparseMat A) : A_(std::move(A)) {
    ldlt_.compute(A_);
    if (ldlt_.info() != Eigen::Success) {
        SolveReport rep;
        rep.method = "simplicial-ldlt";
        throw SolveError("sparse LDL^T factorization failed (matrix not SPD?)", rep);
    }
}

Vector SpdFactor::solve(const Vector& b) const { return ldlt_.solve(b); }

double SpdFactor::relative_residual(const Vector& x, const Vector& b) const {
    const double bn = b.norm();
    if (bn == 0.0) return x.norm();
    return (A_ * x - b).norm() / bn;
}

namespace {

// Locate the first non-positive pivot of a dense symmetric matrix; used only
// to build the error message when the mass factorization fails.
int find_bad_pivot(Matrix S) {
    const int n = static_cast<int>(S.rows());
    for (int k = 0; k < n; ++k) {
        if (S(k, k) <= 0.0) return k;
        const double d = std::sqrt(S(k, k));
        for (int i = k; i < n; ++i) S(i, k) /= d;
        for (int j = k + 1; j < n; ++j)
            for (int i = j; i < n; ++i) S(i, j) -= S(i, k) * S(j, k);
    }
    return -1;
}

} // namespace

EigenPairs generalized_eigs_smallest(const Matrix& A, const Matrix& S, int l) {
    const int n = static_cast<int>(A.rows());
    if (l < 1 || l > n) {
        std::ostringstream os;
        os << "generalized_eigs_smallest: requested " << l << " pairs of dimension " << n;
        throw ConfigError(os.str());
    }
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "mass matrix is not positive definite (Cholesky failed at pivot "
           << find_bad_pivot(S) << ")";
        SolveReport rep;
        rep.method = "dense-llt";
        throw SolveError(os.str(), rep);
    }
    const Matrix L = llt.matrixL();
    // C = L^{-1} A L^{-T}, standard symmetric problem
    Matrix C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose().eval());
    C = 0.5 * (C + C.transpose().eval());  // symmetrize roundoff
    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    if (es.info() != Eigen::Success) {
        SolveReport rep;
        rep.method = "dense-eig";
        throw SolveError("dense symmetric eigendecomposition failed", rep);
    }
    EigenPairs out;
    out.values = es.eigenvalues().head(l);
    out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(
        es.eigenvectors().leftCols(l));
    return out;
}

LowRankSolver::LowRankSolver(const SparseMat& A, const SparseMat& Q)
    : n_(static_cast<int>(A.rows())), r_(static_cast<int>(Q.cols())) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonZeros() + 2 * Q.nonZeros() + r_);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMat::InnerIterator it(A, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                               it.value());
    for (int k = 0; k < Q.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(Q, k); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = n_ + static_cast<int>(it.col());
            trips.emplace_back(i, j, it.value());
            trips.emplace_back(j, i, it.value());
        }
    }
    for (int j = 0; j < r_; ++j) trips.emplace_back(n_ + j, n_ + j, -1.0);
    aug_.resize(n_ + r_, n_ + r_);
    aug_.setFromTriplets(trips.begin(), trips.end());
    aug_.makeCompressed();

    ldlt_.compute(aug_);
    if (ldlt_.info() != Eigen::Success) {
        lu_ = std::make_unique<Eigen::SparseLU<SparseMat>>();
        lu_->compute(aug_);
        if (lu_->info() != Eigen::Success) {
            SolveReport rep;
            rep.method = "lowrank-augmented";
            throw SolveError("augmented low-rank system factorization failed", rep);
        }
    }
}

Vector LowRankSolver::solve(const Vector& b) const {
    Vector rhs = Vector::Zero(n_ + r_);
    rhs.head(n_) = b;
    Vector sol = lu_ ? Vector(lu_->solve(rhs)) : Vector(ldlt_.solve(rhs));
    const double bn = rhs.norm();
    if (bn > 0.0) {
        const double res = (aug_ * sol - rhs).norm() / bn;
        if (!(res < 1e-6)) {
            SolveReport rep;
            rep.method = lu_ ? "lowrank-augmented-lu" : "lowrank-augmented-ldlt";
            rep.iterations = 1;
            rep.residual = res;
            std::ostringstream os;
            os << "augmented low-rank solve inaccurate: relative residual " << res;
            throw SolveError(os.str(), rep);
        }
    }
    return sol.head(n_);
}

Vector solve_lowrank_corrected(const SparseMat& A, const SparseMat& Q, const Vector& b) {
    return LowRankSolver(A, Q).solve(b);
}

DofMap DofMap::from_constrained(const std::vector<char>& constrained) {
    DofMap m;
    m.full_to_free.assign(constrained.size(), -1);
    for (std::size_t i = 0; i < constrained.size(); ++i) {
        if (!constrained[i]) {
            m.full_to_free[i] = static_cast<int>(m.free_list.size());
            m.free_list.push_back(static_cast<int>(i));
        }
    }
    return m;
}

Vector DofMap::restrict_vector(const Vector& full) const {
    Vector out(n_free());
    for (int i = 0; i < n_free(); ++i) out[i] = full[free_list[i]];
    return out;
}

Vector DofMap::extend_vector(const Vector& free) const {
    Vector out = Vector::Zero(n_full());
    for (int i = 0; i < n_free(); ++i) out[free_list[i]] = free[i];
    return out;
}

SparseMat restrict_matrix(const SparseMat& A, const DofMap& m) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonZeros());
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(A, k); it; ++it) {
            const int r = m.full_to_free[it.row()];
            const int c = m.full_to_free[it.col()];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
        }
    }
    SparseMat out(m.n_free(), m.n_free());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

SparseMat restrict_rows(const SparseMat& Q, const DofMap& m) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(Q.nonZeros());
    for (int k = 0; k < Q.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(Q, k); it; ++it) {
            const int r = m.full_to_free[it.row()];
            if (r >= 0) trips.emplace_back(r, static_cast<int>(it.col()), it.value());
        }
    }
    SparseMat out(m.n_free(), Q.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

} // namespace sigms
