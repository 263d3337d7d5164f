#pragma once

#include <Eigen/SparseCore>
#include <cstdint>

#include "torsk/input_maps.hpp"
#include "torsk/training.hpp"
#include "torsk/types.hpp"

namespace torsk {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct ReservoirConfig {
    double spectral_radius = 1.5;
    double sparsity = 0.9;     // fraction of recurrent entries forced to zero
    double bias_scale = 0.5;
    std::uint64_t seed = 0;
};

/// Largest |eigenvalue|, estimated by restarted Arnoldi iteration from a
/// deterministic start vector. Exact to ~1e-10 relative for the matrix
/// sizes the tests cross-check against a dense eigensolver.
double spectral_radius(const SparseMatrix& m);
double spectral_radius(const Matrix& m);

/// Returns m * (rho / spectral_radius(m)). Rejects (near-)nilpotent input.
SparseMatrix scale_spectral_radius(const SparseMatrix& m, double rho);
Matrix scale_spectral_radius(const Matrix& m, double rho);

/// Free-run output; `diverged_at` >= 0 marks the first step whose output
/// left the finite range, with the remaining frames frozen at the last
/// finite one.
struct Prediction {
    ImageSeries frames;
    long long diverged_at = -1;
};

/// Fixed random recurrence plus the spatial input pipeline. Immutable after
/// construction; hidden size equals the pipeline output dimension.
class Reservoir {
public:
    Reservoir(ReservoirConfig cfg, InputPipeline pipeline);

    /// x' = tanh(W_h x + Win(u) + b_h)
    Vector step(const Vector& x, const Matrix& u) const;

    /// Runs from x = 0 over all frames and returns one column per kept
    /// frame t >= l_trans: [x after frame t; flattened frame t; 1].
    Matrix harvest(const ImageSeries& inputs, Eigen::Index l_trans) const;

    /// Closed-loop prediction: y = W_out [x; u; 1], then u <- y.
    Prediction predict(const OutputWeights& w_out, Vector x, Matrix u, long long steps) const;

    Eigen::Index hidden_size() const { return w_h_.rows(); }
    Eigen::Index concat_dim() const { return hidden_size() + frame_size() + 1; }
    Eigen::Index frame_size() const {
        return static_cast<Eigen::Index>(pipeline_.input_rows()) * pipeline_.input_cols();
    }
    const InputPipeline& pipeline() const { return pipeline_; }
    const ReservoirConfig& config() const { return cfg_; }
    const SparseMatrix& recurrent_matrix() const { return w_h_; }
    const Vector& bias() const { return b_h_; }

private:
    ReservoirConfig cfg_;
    InputPipeline pipeline_;
    SparseMatrix w_h_;
    Vector b_h_;
};

}  // namespace torsk
