#include "torsk/reservoir.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "torsk/rng.hpp"

namespace torsk {

namespace {

// Restarted Arnoldi. Plain power iteration stalls on these matrices: the
// dominant eigenvalue of a random reservoir is usually a complex pair near
// a densely populated spectral edge. A Krylov subspace of ~100 converges to
// machine precision in a handful of restarts instead.
template <typename Mat>
double arnoldi_spectral_radius(const Mat& a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
    if (n == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    const Eigen::Index m = std::min<Eigen::Index>(n, 100);
    const int max_restarts = 12;
    const double tol = 1e-10;

    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double prev = -1.0;
    for (int restart = 0; restart < max_restarts; ++restart) {
        Matrix V(n, m + 1);
        Matrix H = Matrix::Zero(m + 1, m);
        const double vn = v.norm();
        if (vn < 1e-300) throw std::runtime_error("spectral_radius: breakdown (nilpotent matrix?)");
        V.col(0) = v / vn;
        Eigen::Index k_eff = m;
        for (Eigen::Index k = 0; k < m; ++k) {
            Vector w = a * V.col(k);
            for (Eigen::Index j = 0; j <= k; ++j) {  // modified Gram-Schmidt, one re-pass
                const double h = V.col(j).dot(w);
                H(j, k) += h;
                w -= h * V.col(j);
            }
            for (Eigen::Index j = 0; j <= k; ++j) {
                const double c = V.col(j).dot(w);
                H(j, k) += c;
                w -= c * V.col(j);
            }
            H(k + 1, k) = w.norm();
            if (H(k + 1, k) < 1e-14) {
                k_eff = k + 1;
                break;
            }
            V.col(k + 1) = w / H(k + 1, k);
        }
        Eigen::EigenSolver<Matrix> es(H.topLeftCorner(k_eff, k_eff), /*computeEigenvectors=*/true);
        Eigen::Index best = 0;
        double rho = 0.0;
        for (Eigen::Index i = 0; i < k_eff; ++i) {
            const double mag = std::abs(es.eigenvalues()[i]);
            if (mag > rho) {
                rho = mag;
                best = i;
            }
        }
        if (k_eff < m || (prev >= 0 && std::abs(rho - prev) <= tol * std::max(rho, 1e-300)))
            return rho;
        prev = rho;
        // restart from the dominant Ritz vector
        Eigen::VectorXcd y = es.eigenvectors().col(best);
        Vector vr = (V.leftCols(k_eff) * y.real()).eval();
        if (vr.norm() < 1e-12) vr = V.leftCols(k_eff) * y.imag();
        v = vr;
    }
    return prev;
}

}  // namespace

double spectral_radius(const SparseMatrix& m) { return arnoldi_spectral_radius(m); }
double spectral_radius(const Matrix& m) { return arnoldi_spectral_radius(m); }

namespace {

template <typename Mat>
Mat scale_impl(const Mat& m, double rho) {
    if (rho <= 0) throw std::invalid_argument("scale_spectral_radius: rho must be positive");
    const double current = spectral_radius(m);
    // a radius negligible against the matrix norm means (near-)nilpotent
    // input, where both the estimate and the rescaling are meaningless
    const double norm_scale = m.norm() / std::sqrt(static_cast<double>(m.rows()));
    if (current < 1e-12 || current < 1e-4 * norm_scale)
        throw std::runtime_error("scale_spectral_radius: spectral radius is (numerically) zero");
    return m * (rho / current);
}

}  // namespace

SparseMatrix scale_spectral_radius(const SparseMatrix& m, double rho) { return scale_impl(m, rho); }
Matrix scale_spectral_radius(const Matrix& m, double rho) { return scale_impl(m, rho); }

Reservoir::Reservoir(ReservoirConfig cfg, InputPipeline pipeline)
    : cfg_(cfg), pipeline_(std::move(pipeline)) {
    if (cfg_.spectral_radius <= 0)
        throw std::invalid_argument("reservoir: spectral_radius must be positive");
    if (cfg_.sparsity < 0 || cfg_.sparsity >= 1)
        throw std::invalid_argument("reservoir: sparsity must lie in [0,1)");
    const Eigen::Index n = pipeline_.output_dim();

    std::mt19937_64 g(cfg_.seed);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(
        static_cast<double>(n) * static_cast<double>(n) * (1.0 - cfg_.sparsity) * 1.05 + 16));
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const double keep = uniform01(g);  // draw both so the stream is branch-free
            const double val = uniform_pm1(g);
            if (keep >= cfg_.sparsity) entries.emplace_back(r, c, val);
        }
    if (entries.empty())
        throw std::runtime_error("reservoir: sparsity mask removed every entry");
    w_h_.resize(n, n);
    w_h_.setFromTriplets(entries.begin(), entries.end());
    w_h_.makeCompressed();
    w_h_ = scale_spectral_radius(w_h_, cfg_.spectral_radius);

    b_h_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) b_h_[i] = cfg_.bias_scale * uniform_pm1(g);
}

Vector Reservoir::step(const Vector& x, const Matrix& u) const {
    if (x.size() != hidden_size()) throw std::invalid_argument("reservoir step: state size mismatch");
    return (w_h_ * x + pipeline_.apply(u) + b_h_).array().tanh();
}

Matrix Reservoir::harvest(const ImageSeries& inputs, Eigen::Index l_trans) const {
    const Eigen::Index T = inputs.size();
    if (l_trans < 0) throw std::invalid_argument("harvest: l_trans must be nonnegative");
    if (T <= l_trans) throw std::invalid_argument("harvest: series not longer than transient");
    const Eigen::Index n = hidden_size(), fs = frame_size();
    Matrix states(concat_dim(), T - l_trans);
    Vector x = Vector::Zero(n);
    for (Eigen::Index t = 0; t < T; ++t) {
        x = step(x, inputs.frames[static_cast<std::size_t>(t)]);
        if (t >= l_trans) {
            const Eigen::Index col = t - l_trans;
            states.col(col).head(n) = x;
            states.col(col).segment(n, fs) = flatten(inputs.frames[static_cast<std::size_t>(t)]);
            states(n + fs, col) = 1.0;
        }
    }
    return states;
}

Prediction Reservoir::predict(const OutputWeights& w_out, Vector x, Matrix u,
                              long long steps) const {
    if (w_out.w.cols() != concat_dim() || w_out.w.rows() != frame_size())
        throw std::invalid_argument("predict: output weights do not match this reservoir");
    if (steps < 0) throw std::invalid_argument("predict: steps must be nonnegative");
    Prediction out;
    out.frames.frames.reserve(static_cast<std::size_t>(steps));
    const Eigen::Index n = hidden_size(), fs = frame_size();
    Vector concat(concat_dim());
    for (long long s = 0; s < steps; ++s) {
        concat.head(n) = x;
        concat.segment(n, fs) = flatten(u);
        concat[n + fs] = 1.0;
        Vector y = w_out.w * concat;
        if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e6) {
            out.diverged_at = s;
            const Matrix last = s == 0 ? u : out.frames.frames.back();
            for (long long r = s; r < steps; ++r) out.frames.frames.push_back(last);
            return out;
        }
        Matrix yf = unflatten(y, u.rows(), u.cols());
        out.frames.frames.push_back(yf);
        x = step(x, yf);
        u = std::move(yf);
    }
    return out;
}

}  // namespace torsk
