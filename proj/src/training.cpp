#include "torsk/training.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <stdexcept>

namespace torsk {

namespace {

void check_inputs(const Matrix& X, const Matrix& D) {
    if (X.cols() < 1) throw std::invalid_argument("solver: no samples");
    if (X.cols() != D.cols())
        throw std::invalid_argument("solver: states and labels disagree on sample count");
    if (X.cwiseAbs().maxCoeff() == 0.0)
        throw std::runtime_error("solver: degenerate all-zero state matrix");
}

void check_triangular(const Matrix& qr_matrix, Eigen::Index n) {
    const auto diag = qr_matrix.diagonal().head(n).cwiseAbs();
    if (diag.minCoeff() < 1e-13 * diag.maxCoeff())
        throw std::runtime_error(
            "solver: state matrix is numerically rank deficient; use the SVD solver");
}

// Minimum-norm least-squares for the wide system W X ~ D (fewer samples
// than state dimensions), optionally with Tikhonov strength beta. Works on
// the thin QR of X so the condition number is never squared.
OutputWeights solve_underdetermined(const Matrix& X, const Matrix& D, double beta) {
    const Eigen::Index dim = X.rows(), s = X.cols(), out = D.rows();
    Eigen::HouseholderQR<Matrix> qr(X);
    const Matrix R = qr.matrixQR().topRows(s).triangularView<Eigen::Upper>();

    Matrix z1(s, out);
    if (beta == 0.0) {
        check_triangular(R, s);
        z1 = R.triangularView<Eigen::Upper>().transpose().solve(D.transpose());
    } else {
        Matrix aug = Matrix::Zero(2 * s, s);
        aug.topRows(s) = R.transpose();
        aug.bottomRows(s) = beta * Matrix::Identity(s, s);
        Matrix rhs = Matrix::Zero(2 * s, out);
        rhs.topRows(s) = D.transpose();
        z1 = Eigen::HouseholderQR<Matrix>(aug).solve(rhs);
    }
    Matrix wt = Matrix::Zero(dim, out);
    wt.topRows(s) = z1;
    wt.applyOnTheLeft(qr.householderQ());
    if (!wt.allFinite()) throw std::runtime_error("solver: non-finite solution");
    return {wt.transpose()};
}

}  // namespace

OutputWeights solve_lstsq(const Matrix& X, const Matrix& D) {
    check_inputs(X, D);
    const Eigen::Index dim = X.rows(), s = X.cols();
    if (s < dim) return solve_underdetermined(X, D, 0.0);
    Eigen::HouseholderQR<Matrix> qr(X.transpose());
    check_triangular(qr.matrixQR(), dim);
    Matrix wt = qr.solve(D.transpose());
    if (!wt.allFinite()) throw std::runtime_error("solver: non-finite solution");
    return {wt.transpose()};
}

OutputWeights solve_tikhonov(const Matrix& X, const Matrix& D, double beta) {
    if (beta < 0) throw std::invalid_argument("solve_tikhonov: beta must be nonnegative");
    check_inputs(X, D);
    if (beta == 0.0) return solve_lstsq(X, D);
    const Eigen::Index dim = X.rows(), s = X.cols();
    if (s < dim) return solve_underdetermined(X, D, beta);
    Matrix aug = Matrix::Zero(s + dim, dim);
    aug.topRows(s) = X.transpose();
    aug.bottomRows(dim) = beta * Matrix::Identity(dim, dim);
    Matrix rhs = Matrix::Zero(s + dim, D.rows());
    rhs.topRows(s) = D.transpose();
    Matrix wt = Eigen::HouseholderQR<Matrix>(aug).solve(rhs);
    if (!wt.allFinite()) throw std::runtime_error("solver: non-finite solution");
    return {wt.transpose()};
}

OutputWeights solve_svd_stable(const Matrix& X, const Matrix& D, double rcond) {
    if (rcond <= 0 || rcond >= 1)
        throw std::invalid_argument("solve_svd_stable: rcond must lie in (0,1)");
    check_inputs(X, D);
    Eigen::BDCSVD<Matrix> svd(X.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = rcond * sv[0];
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] >= cutoff && sv[rank] > 0) ++rank;
    if (rank == 0) return {Matrix::Zero(D.rows(), X.rows())};
    const Matrix ut_dt = svd.matrixU().leftCols(rank).transpose() * D.transpose();
    const Matrix wt =
        svd.matrixV().leftCols(rank) * sv.head(rank).cwiseInverse().asDiagonal() * ut_dt;
    return {wt.transpose()};
}

OutputWeights train_output(const Matrix& states, const Matrix& labels, const SolverSpec& spec,
                           const GKernel* imed) {
    Matrix D = labels;
    if (imed) {
        if (labels.rows() != imed->rows() * imed->cols())
            throw std::invalid_argument("train_output: label size does not match IMED kernel shape");
        for (Eigen::Index j = 0; j < D.cols(); ++j)
            D.col(j) = flatten(imed->sqrt_apply(unflatten(labels.col(j), imed->rows(), imed->cols())));
    }
    OutputWeights w;
    switch (spec.method) {
        case SolverMethod::Lstsq: w = solve_lstsq(states, D); break;
        case SolverMethod::Tikhonov: w = solve_tikhonov(states, D, spec.beta); break;
        case SolverMethod::SvdStable: w = solve_svd_stable(states, D, spec.svd_rcond); break;
    }
    if (imed) {
        for (Eigen::Index j = 0; j < w.w.cols(); ++j)
            w.w.col(j) = flatten(imed->inv_sqrt_apply(unflatten(w.w.col(j), imed->rows(), imed->cols())));
    }
    return w;
}

}  // namespace torsk
