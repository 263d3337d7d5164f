#pragma once

#include "torsk/types.hpp"

namespace torsk {

/// Separable image Euclidean distance kernel. The full pixel-space kernel
/// G = gx (x) gy (Kronecker product over row/column coordinates) is never
/// materialized; transforms run per axis at O(M^2 + N^2) per frame.
class GKernel {
public:
    GKernel(Eigen::Index rows, Eigen::Index cols, double sigma);

    /// G^(1/2)-transform of a frame.
    Matrix sqrt_apply(const Matrix& frame) const;
    /// Inverse of sqrt_apply. Amplifies by up to 1/sqrt(min eigenvalue).
    Matrix inv_sqrt_apply(const Matrix& frame) const;
    /// sqrt((a-b)^T G (a-b)), the G-norm of the difference.
    double distance(const Matrix& a, const Matrix& b) const;

    Eigen::Index rows() const { return gx_.rows(); }
    Eigen::Index cols() const { return gy_.rows(); }
    double sigma() const { return sigma_; }
    const Matrix& gx() const { return gx_; }
    const Matrix& gy() const { return gy_; }
    const Vector& eigenvalues_x() const { return lx_; }
    const Vector& eigenvalues_y() const { return ly_; }
    /// True when eigenvalues had to be floored during construction.
    bool clamped() const { return clamped_; }

private:
    void check_shape(const Matrix& frame) const;

    double sigma_;
    Matrix gx_, gy_;        // 1D Gaussian factor matrices
    Vector lx_, ly_;        // their eigenvalues (floored)
    Matrix sx_, sy_;        // gx^(1/2), gy^(1/2)
    Matrix sxi_, syi_;      // inverse square roots
    bool clamped_ = false;
};

}  // namespace torsk
