#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised for malformed or inconsistent run configuration; the CLI maps it
/// to its own exit code, separate from runtime/numerical failures.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scalar time series with a uniform step width.
struct Series1D {
    Vector values;
    double dt = 1.0;
};

/// Video-like stack of equally sized frames.
struct ImageSeries {
    std::vector<Matrix> frames;

    Eigen::Index size() const { return static_cast<Eigen::Index>(frames.size()); }
    Eigen::Index rows() const { return frames.empty() ? 0 : frames.front().rows(); }
    Eigen::Index cols() const { return frames.empty() ? 0 : frames.front().cols(); }
};

/// Row-major flattening, the layout shared by tensor files and the
/// vectorized image operations.
inline Vector flatten(const Matrix& m) {
    Vector v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v[k++] = m(r, c);
    return v;
}

inline Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols)
        throw std::invalid_argument("unflatten: size mismatch");
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[k++];
    return m;
}

/// 1D series viewed as a stack of 1x1 frames, so the reservoir machinery
/// handles scalar and image inputs uniformly.
inline ImageSeries as_frames(const Series1D& s) {
    ImageSeries out;
    out.frames.reserve(static_cast<std::size_t>(s.values.size()));
    for (Eigen::Index t = 0; t < s.values.size(); ++t) {
        Matrix f(1, 1);
        f(0, 0) = s.values[t];
        out.frames.push_back(std::move(f));
    }
    return out;
}

}  // namespace torsk
