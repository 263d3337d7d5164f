#pragma once

#include <cstdint>
#include <vector>

#include "torsk/types.hpp"

namespace torsk {

enum class MapKind { Pixels, GaussianConv, RandomConv, DCT, Gradient, RandomMatrix };

/// One entry of the input map table. `rows x cols` is the output size for
/// Pixels/DCT/RandomMatrix and the kernel size for the convolutions; it is
/// ignored for Gradient. Gradient instances differentiate along `axis`
/// (0 = across columns, 1 = across rows); axis -1 lets the pipeline assign
/// the two axes to successive Gradient entries in table order.
struct InputMapSpec {
    MapKind kind = MapKind::Pixels;
    int rows = 0;
    int cols = 0;
    double scale = 1.0;
    double sigma = 0.0;  // GaussianConv; <= 0 means the k/4 default
    std::uint64_t seed = 0;
    int axis = -1;
};

Vector resample_pixels(const Matrix& frame, int out_rows, int out_cols);
Matrix gaussian_kernel(int k, double sigma);
Vector convolve_valid(const Matrix& frame, const Matrix& kernel);
Vector dct2_features(const Matrix& frame, int out_rows, int out_cols);
Vector gradient_features(const Matrix& frame, int axis);
Vector random_projection(const Matrix& frame, Eigen::Index out_dim, std::uint64_t seed);

/// Orthonormal DCT-II matrix of size n (rows index frequency).
Matrix dct_matrix(Eigen::Index n);

/// Concatenation of feature maps from an input frame to the hidden-state
/// contribution. Immutable after construction; kernels, projection matrices
/// and DCT bases are precomputed here.
class InputPipeline {
public:
    InputPipeline(std::vector<InputMapSpec> specs, int input_rows, int input_cols);

    /// Per-map outputs scaled by their spec scale and concatenated in order.
    Vector apply(const Matrix& frame) const;

    Eigen::Index output_dim() const { return output_dim_; }
    int input_rows() const { return input_rows_; }
    int input_cols() const { return input_cols_; }
    const std::vector<InputMapSpec>& specs() const { return specs_; }
    /// Flattened output length of map i.
    Eigen::Index block_size(std::size_t i) const { return block_sizes_[i]; }

private:
    std::vector<InputMapSpec> specs_;
    int input_rows_;
    int input_cols_;
    Eigen::Index output_dim_ = 0;
    std::vector<Eigen::Index> block_sizes_;
    std::vector<Matrix> kernels_;      // per map; empty when unused
    std::vector<Matrix> projections_;  // RandomMatrix weights
    std::vector<Matrix> dct_rows_;     // truncated DCT bases, rows side
    std::vector<Matrix> dct_cols_;
};

}  // namespace torsk
