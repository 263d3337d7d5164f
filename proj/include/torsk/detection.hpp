#pragma once

#include <vector>

#include "torsk/imed.hpp"
#include "torsk/reservoir.hpp"
#include "torsk/training.hpp"
#include "torsk/types.hpp"

namespace torsk {

struct WindowPlan {
    Eigen::Index l_trans = 200;
    Eigen::Index l_train = 2000;
    Eigen::Index l_pred = 25;
    Eigen::Index stride = 0;  // 0 means l_pred (prediction segments tile)
};

struct NormalityConfig {
    Eigen::Index m = 100;   // history window
    Eigen::Index n = 5;     // local window, n < m/2
    double threshold = 1e-3;
};

enum class ErrorMetric { Euclidean, Imed };

struct WindowLogEntry {
    long long index = 0;
    long long train_begin = 0, train_end = 0;  // [begin, end)
    long long pred_begin = 0, pred_end = 0;
    bool diverged = false;
    long long diverged_step = -1;
};

struct DetectionResult {
    Vector errors;            // length T; zero outside the covered range
    Vector scores;            // length T; one where no full windows exist
    std::vector<bool> flags;  // scores[t] < threshold
    long long covered_begin = 0, covered_end = 0;
    ImageSeries predictions;  // frames for [covered_begin, covered_end)
    ImageSeries pixel_scores;       // per-pixel normality, image runs only
    Eigen::MatrixXi count_map;      // per-pixel flag counts, image runs only
    std::vector<WindowLogEntry> window_log;
};

/// Per-step distance between prediction and truth.
Vector error_sequence(const ImageSeries& pred, const ImageSeries& truth, ErrorMetric metric,
                      const GKernel* kernel = nullptr);

/// Erf-based normality in [0,1] comparing the local mean of the next n
/// errors against mean/std of the trailing m+1 errors. Positions without
/// full windows score 1.
Vector normality_score(const Vector& errors, const NormalityConfig& cfg);

std::vector<bool> threshold_flags(const Vector& scores, double threshold);

/// Online detection: per window, harvest transients + training states,
/// refit the output layer, free-run l_pred steps and score the prediction
/// errors against the truth. Windows are independent and run in parallel
/// (capped by `threads`, 0 = hardware default, also capped by the
/// TORSK_THREADS environment variable).
DetectionResult sliding_detect(const ImageSeries& series, const Reservoir& reservoir,
                               const SolverSpec& solver, const WindowPlan& plan,
                               ErrorMetric metric, const NormalityConfig& norm_cfg,
                               const GKernel* kernel = nullptr, bool pixel_map = false,
                               int threads = 0);

/// Element-wise normality scores from per-pixel absolute errors.
ImageSeries pixel_normality(const ImageSeries& pred, const ImageSeries& truth,
                            const NormalityConfig& cfg);

/// Time-sum of per-pixel flags (frames of 0/1 values).
Eigen::MatrixXi anomaly_count_map(const ImageSeries& pixel_flags);

/// Per-pixel flags from per-pixel scores.
ImageSeries pixel_flags(const ImageSeries& pixel_scores, double threshold);

}  // namespace torsk
