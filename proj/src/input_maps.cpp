#include "torsk/input_maps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "torsk/rng.hpp"

namespace torsk {

Vector resample_pixels(const Matrix& frame, int out_rows, int out_cols) {
    const auto M = frame.rows(), N = frame.cols();
    if (out_rows < 1 || out_cols < 1)
        throw std::invalid_argument("resample_pixels: output size must be positive");
    if (out_rows > M || out_cols > N)
        throw std::invalid_argument("resample_pixels: upsampling is not supported");
    Vector out(static_cast<Eigen::Index>(out_rows) * out_cols);
    const double sr = static_cast<double>(M) / out_rows;
    const double sc = static_cast<double>(N) / out_cols;
    Eigen::Index k = 0;
    for (int i = 0; i < out_rows; ++i) {
        double y = (i + 0.5) * sr - 0.5;
        y = std::clamp(y, 0.0, static_cast<double>(M - 1));
        const auto r0 = static_cast<Eigen::Index>(std::floor(y));
        const auto r1 = std::min(r0 + 1, M - 1);
        const double fy = y - static_cast<double>(r0);
        for (int j = 0; j < out_cols; ++j) {
            double x = (j + 0.5) * sc - 0.5;
            x = std::clamp(x, 0.0, static_cast<double>(N - 1));
            const auto c0 = static_cast<Eigen::Index>(std::floor(x));
            const auto c1 = std::min(c0 + 1, N - 1);
            const double fx = x - static_cast<double>(c0);
            out[k++] = (1 - fy) * ((1 - fx) * frame(r0, c0) + fx * frame(r0, c1)) +
                       fy * ((1 - fx) * frame(r1, c0) + fx * frame(r1, c1));
        }
    }
    return out;
}

Matrix gaussian_kernel(int k, double sigma) {
    if (k < 1) throw std::invalid_argument("gaussian_kernel: size must be >= 1");
    if (sigma <= 0) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    Matrix ker(k, k);
    const double c = (k - 1) / 2.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            const double da = a - c, db = b - c;
            ker(a, b) = std::exp(-(da * da + db * db) / (2.0 * sigma * sigma));
        }
    ker /= ker.sum();
    return ker;
}

Vector convolve_valid(const Matrix& frame, const Matrix& kernel) {
    const auto M = frame.rows(), N = frame.cols();
    const auto kr = kernel.rows(), kc = kernel.cols();
    if (kr > M || kc > N) throw std::invalid_argument("convolve_valid: kernel larger than frame");
    const auto orows = M - kr + 1, ocols = N - kc + 1;
    Vector out(orows * ocols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < orows; ++i)
        for (Eigen::Index j = 0; j < ocols; ++j)
            out[k++] = frame.block(i, j, kr, kc).cwiseProduct(kernel).sum();
    return out;
}

Matrix dct_matrix(Eigen::Index n) {
    Matrix d(n, n);
    const double s0 = std::sqrt(1.0 / n);
    const double sk = std::sqrt(2.0 / n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            d(k, i) = (k == 0 ? s0 : sk) *
                      std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    return d;
}

Vector dct2_features(const Matrix& frame, int out_rows, int out_cols) {
    const auto M = frame.rows(), N = frame.cols();
    if (out_rows > M || out_cols > N)
        throw std::invalid_argument("dct2_features: block exceeds frame size");
    const Matrix dr = dct_matrix(M).topRows(out_rows);
    const Matrix dc = dct_matrix(N).topRows(out_cols);
    return flatten(dr * frame * dc.transpose());
}

Vector gradient_features(const Matrix& frame, int axis) {
    const auto M = frame.rows(), N = frame.cols();
    if (M < 2 || N < 2) throw std::invalid_argument("gradient_features: frame must be at least 2x2");
    if (axis != 0 && axis != 1) throw std::invalid_argument("gradient_features: axis must be 0 or 1");
    Matrix g(M, N);
    if (axis == 0) {  // d/dx: central differences across columns
        for (Eigen::Index r = 0; r < M; ++r) {
            g(r, 0) = frame(r, 1) - frame(r, 0);
            for (Eigen::Index c = 1; c + 1 < N; ++c) g(r, c) = 0.5 * (frame(r, c + 1) - frame(r, c - 1));
            g(r, N - 1) = frame(r, N - 1) - frame(r, N - 2);
        }
    } else {  // d/dy: across rows
        for (Eigen::Index c = 0; c < N; ++c) {
            g(0, c) = frame(1, c) - frame(0, c);
            for (Eigen::Index r = 1; r + 1 < M; ++r) g(r, c) = 0.5 * (frame(r + 1, c) - frame(r - 1, c));
            g(M - 1, c) = frame(M - 1, c) - frame(M - 2, c);
        }
    }
    return flatten(g);
}

Vector random_projection(const Matrix& frame, Eigen::Index out_dim, std::uint64_t seed) {
    if (out_dim < 1) throw std::invalid_argument("random_projection: out_dim must be >= 1");
    const Matrix w = random_uniform_matrix(out_dim, frame.size(), seed);
    return w * flatten(frame);
}

InputPipeline::InputPipeline(std::vector<InputMapSpec> specs, int input_rows, int input_cols)
    : specs_(std::move(specs)), input_rows_(input_rows), input_cols_(input_cols) {
    if (specs_.empty()) throw std::invalid_argument("input pipeline: no maps given");
    if (input_rows_ < 1 || input_cols_ < 1)
        throw std::invalid_argument("input pipeline: invalid input shape");

    int gradient_count = 0;
    for (auto& s : specs_) {
        if (s.scale <= 0) throw std::invalid_argument("input pipeline: scale must be positive");
        Eigen::Index block = 0;
        Matrix kernel, projection, drow, dcol;
        switch (s.kind) {
            case MapKind::Pixels:
                if (s.rows < 1 || s.cols < 1 || s.rows > input_rows_ || s.cols > input_cols_)
                    throw std::invalid_argument("input pipeline: pixels output must fit the frame");
                block = static_cast<Eigen::Index>(s.rows) * s.cols;
                break;
            case MapKind::GaussianConv: {
                if (s.rows != s.cols || s.rows < 1)
                    throw std::invalid_argument("input pipeline: gaussian kernel must be square");
                if (s.rows > input_rows_ || s.cols > input_cols_)
                    throw std::invalid_argument("input pipeline: kernel larger than frame");
                const double sigma = s.sigma > 0 ? s.sigma : s.rows / 4.0;
                kernel = gaussian_kernel(s.rows, sigma);
                block = static_cast<Eigen::Index>(input_rows_ - s.rows + 1) * (input_cols_ - s.cols + 1);
                break;
            }
            case MapKind::RandomConv:
                if (s.rows < 1 || s.cols < 1 || s.rows > input_rows_ || s.cols > input_cols_)
                    throw std::invalid_argument("input pipeline: kernel larger than frame");
                kernel = random_uniform_matrix(s.rows, s.cols, s.seed);
                block = static_cast<Eigen::Index>(input_rows_ - s.rows + 1) * (input_cols_ - s.cols + 1);
                break;
            case MapKind::DCT:
                if (s.rows < 1 || s.cols < 1 || s.rows > input_rows_ || s.cols > input_cols_)
                    throw std::invalid_argument("input pipeline: DCT block exceeds frame size");
                drow = dct_matrix(input_rows_).topRows(s.rows);
                dcol = dct_matrix(input_cols_).topRows(s.cols);
                block = static_cast<Eigen::Index>(s.rows) * s.cols;
                break;
            case MapKind::Gradient:
                if (input_rows_ < 2 || input_cols_ < 2)
                    throw std::invalid_argument("input pipeline: gradient needs at least 2x2 frames");
                if (s.axis < 0) s.axis = gradient_count % 2;  // alternate d/dx, d/dy
                ++gradient_count;
                block = static_cast<Eigen::Index>(input_rows_) * input_cols_;
                break;
            case MapKind::RandomMatrix:
                if (s.rows < 1 || s.cols < 1)
                    throw std::invalid_argument("input pipeline: random matrix output must be positive");
                block = static_cast<Eigen::Index>(s.rows) * s.cols;
                projection = random_uniform_matrix(
                    block, static_cast<Eigen::Index>(input_rows_) * input_cols_, s.seed);
                break;
        }
        block_sizes_.push_back(block);
        kernels_.push_back(std::move(kernel));
        projections_.push_back(std::move(projection));
        dct_rows_.push_back(std::move(drow));
        dct_cols_.push_back(std::move(dcol));
        output_dim_ += block;
    }
}

Vector InputPipeline::apply(const Matrix& frame) const {
    if (frame.rows() != input_rows_ || frame.cols() != input_cols_)
        throw std::invalid_argument("input pipeline: frame shape mismatch");
    Vector out(output_dim_);
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        const auto& s = specs_[i];
        Vector block;
        switch (s.kind) {
            case MapKind::Pixels:
                block = resample_pixels(frame, s.rows, s.cols);
                break;
            case MapKind::GaussianConv:
            case MapKind::RandomConv:
                block = convolve_valid(frame, kernels_[i]);
                break;
            case MapKind::DCT:
                block = flatten(dct_rows_[i] * frame * dct_cols_[i].transpose());
                break;
            case MapKind::Gradient:
                block = gradient_features(frame, s.axis);
                break;
            case MapKind::RandomMatrix:
                block = projections_[i] * flatten(frame);
                break;
        }
        out.segment(offset, block_sizes_[i]) = s.scale * block;
        offset += block_sizes_[i];
    }
    return out;
}

}  // namespace torsk
