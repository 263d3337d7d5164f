#pragma once

#include <cstdint>
#include <vector>

#include "torsk/types.hpp"

namespace torsk {

/// Exact rational, used for cycle lengths and the resampling factor so an
/// integer resampled cycle length is guaranteed rather than approximated.
struct Rational {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational reduce(Rational r);

/// Trend + mean-cycle representation of a series: polynomial coefficients
/// over normalized time t/(n-1) in [0,1], the average cycle on the
/// resampled grid (length cycle_len), and the detrended residual back on
/// the original grid.
struct TrendModel {
    Vector detrended;
    Vector poly_coeffs;
    Vector mean_cycle;
    long long cycle_len = 0;
    Rational resample{1, 1};  // a_C
    long long original_len = 0;
};

/// Least-squares polynomial fit over normalized time; degree 1..3.
Vector fit_poly_trend(const Vector& f, int degree);
double eval_poly(const Vector& coeffs, double t_normalized);

/// Orthonormal DCT-II analysis / DCT-III synthesis of a 1D series.
Vector dct1d_forward(const Vector& f);
Vector dct1d_inverse(const Vector& coeffs);

/// Smooth resampling: forward DCT, zero-pad or truncate the coefficients to
/// new_len with a sqrt(new_len/n) amplitude factor, inverse DCT.
Vector dct_resample(const Vector& f, Eigen::Index new_len);

/// Mean over all full cycles (row mean of the N_C x L_C reshape); the
/// trailing partial cycle is discarded.
Vector average_cycle(const Vector& detrended, Eigen::Index cycle_len);

/// Fits the polynomial trend, resamples by a_C so the cycle length becomes
/// the integer L_C = a_C * cycle_len, averages the cycle and stores the
/// residual. Passing a_c = {0,0} picks a_C automatically (the reduced
/// denominator of cycle_len, i.e. upsampling to the smallest integer grid).
TrendModel decompose(const Vector& f, Rational cycle_len, int degree, Rational a_c = {0, 0});

/// Inverse of decompose up to resampling loss.
Vector reconstruct(const TrendModel& m);

/// Continues trend + cycle from t0 with the residual frozen at its t0
/// value; indices are on the original grid and may run past the end.
Vector cycle_predict(const TrendModel& m, long long t0, long long steps);

/// Per-DCT-component trend models for the top-left block x block
/// coefficients of an image series.
struct ImageTrendModel {
    int rows = 0, cols = 0, block = 0;
    std::vector<TrendModel> models;  // block*block, row-major over (i,j)
};

ImageTrendModel image_decompose(const ImageSeries& series, int block, Rational cycle_len,
                                int degree, Rational a_c = {0, 0});

/// Cycle-based frame prediction; DCT components outside the modelled block
/// stay frozen at their frame_t0 values.
ImageSeries image_cycle_predict(const ImageTrendModel& m, const Matrix& frame_t0, long long t0,
                                long long steps);

/// Repeats the final training frame.
ImageSeries trivial_predict(const Matrix& last_train_frame, long long steps);

}  // namespace torsk
