#pragma once

#include "torsk/imed.hpp"
#include "torsk/types.hpp"

namespace torsk {

/// Linear read-out weights, shape (frame size) x (concatenated state dim).
struct OutputWeights {
    Matrix w;
};

enum class SolverMethod { Lstsq, Tikhonov, SvdStable };

struct SolverSpec {
    SolverMethod method = SolverMethod::Lstsq;
    double beta = 1e-2;          // Tikhonov strength
    double svd_rcond = 1.4901161193847656e-08;  // sqrt(machine epsilon)
};

/// Minimizes ||W X - D||_2^2 over W. X holds one concatenated state per
/// column, D the matching labels. Solved by QR of the rectangular system,
/// never the normal equations; underdetermined systems yield the
/// minimum-norm solution.
OutputWeights solve_lstsq(const Matrix& X, const Matrix& D);

/// Minimizes ||W X - D||_2^2 + beta^2 ||W||_2^2 via the augmented system
/// with a stacked beta*I block.
OutputWeights solve_tikhonov(const Matrix& X, const Matrix& D, double beta);

/// Truncated-SVD pseudo-inverse: singular values below rcond * sigma_max
/// are dropped, trading accuracy on the discarded subspace for stability.
OutputWeights solve_svd_stable(const Matrix& X, const Matrix& D, double rcond);

/// Dispatches on spec.method. When `imed` is given, labels are G^(1/2)-
/// transformed before solving and the weights transformed back afterwards,
/// so the returned weights predict plain (untransformed) frames while the
/// fit minimizes the IMED loss.
OutputWeights train_output(const Matrix& states, const Matrix& labels, const SolverSpec& spec,
                           const GKernel* imed = nullptr);

}  // namespace torsk
