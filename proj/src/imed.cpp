#include "torsk/imed.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace torsk {

namespace {

constexpr double kEigenFloor = 1e-14;

// g(d | sigma^2) = exp(-d^2 / (2 sigma^2)) / sqrt(2 pi sigma^2), sampled on
// the pixel grid. One factor per image axis.
Matrix factor_matrix(Eigen::Index n, double sigma) {
    Matrix g(n, n);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = static_cast<double>(i - j);
            g(i, j) = norm * std::exp(-d * d / (2.0 * sigma * sigma));
        }
    return g;
}

}  // namespace

GKernel::GKernel(Eigen::Index rows, Eigen::Index cols, double sigma) : sigma_(sigma) {
    if (sigma <= 0) throw std::invalid_argument("GKernel: sigma must be positive");
    if (rows < 1 || cols < 1) throw std::invalid_argument("GKernel: empty image shape");
    gx_ = factor_matrix(rows, sigma);
    gy_ = factor_matrix(cols, sigma);

    auto decompose = [&](const Matrix& g, Vector& lam, Matrix& sqrt_m, Matrix& inv_sqrt_m) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(g);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("GKernel: eigendecomposition failed");
        lam = es.eigenvalues();
        if (lam.minCoeff() < -1e-8)
            throw std::runtime_error("GKernel: kernel numerically indefinite (sigma too large)");
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            if (lam[i] < kEigenFloor) {
                lam[i] = kEigenFloor;
                clamped_ = true;
            }
        const Matrix& u = es.eigenvectors();
        sqrt_m = u * lam.cwiseSqrt().asDiagonal() * u.transpose();
        inv_sqrt_m = u * lam.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
    };
    decompose(gx_, lx_, sx_, sxi_);
    decompose(gy_, ly_, sy_, syi_);
    if (clamped_)
        std::cerr << "GKernel: eigenvalues below " << kEigenFloor
                  << " floored; inverse transform is ill-conditioned at sigma=" << sigma << "\n";
}

void GKernel::check_shape(const Matrix& frame) const {
    if (frame.rows() != rows() || frame.cols() != cols())
        throw std::invalid_argument("GKernel: frame shape mismatch");
}

Matrix GKernel::sqrt_apply(const Matrix& frame) const {
    check_shape(frame);
    return sx_ * frame * sy_;
}

Matrix GKernel::inv_sqrt_apply(const Matrix& frame) const {
    check_shape(frame);
    return sxi_ * frame * syi_;
}

double GKernel::distance(const Matrix& a, const Matrix& b) const {
    check_shape(a);
    check_shape(b);
    return sqrt_apply(a - b).norm();
}

}  // namespace torsk
