#pragma once

#include <cstdint>
#include <vector>

#include "torsk/types.hpp"

namespace torsk {

struct MackeyGlassParams {
    double beta = 0.2;
    double gamma = 0.1;
    double n_exponent = 10.0;
    double tau = 17.0;  // delay, in time units
    double dt = 1.0;    // output step; tau/dt must be a positive integer
    double x0 = 1.2;    // constant initial history
};

/// A window of steps during which gamma is replaced.
struct AnomalySpec {
    long long start_step = 0;
    long long length_steps = 0;
    double gamma_anomalous = 0.13;
};

struct BlobParams {
    int rows = 30;
    int cols = 30;
    double blob_sigma = 2.0;  // pixels
    double alpha = 0.3;       // x frequency
    double beta_freq = 1.0;   // y frequency
    double dt = 1.0;
};

/// Gamma in effect while integrating output step `step`.
double effective_gamma(const MackeyGlassParams& p, const std::vector<AnomalySpec>& anomalies,
                       long long step);

/// Integrates dx/dt = beta*x_tau/(1+x_tau^n) - gamma*x with constant history
/// x0. RK4 over four sub-steps per output step, with cubic-Hermite dense
/// output for the delayed lookups. A nonzero seed perturbs x0 by
/// 1e-9 * uniform01(seed); seed 0 leaves x0 untouched.
Series1D mackey_glass(const MackeyGlassParams& p, long long steps,
                      const std::vector<AnomalySpec>& anomalies, std::uint64_t seed);

/// Unit-peak Gaussian blob moving on the curve (sin(alpha t), cos(beta t)),
/// mapped into the grid interior with a two-pixel margin.
ImageSeries lissajous_blob(const BlobParams& p, long long steps);

/// Same blob, but the x coordinate is driven by the min-max normalized
/// Mackey-Glass series (rescaled to [-1,1] over the generated run).
ImageSeries chaotic_blob(const MackeyGlassParams& mg, const BlobParams& blob, long long steps,
                         const std::vector<AnomalySpec>& anomalies, std::uint64_t seed);

}  // namespace torsk
