#include "torsk/trend.hpp"

#include <fftw3.h>

#include <Eigen/QR>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "torsk/input_maps.hpp"

namespace torsk {

namespace {

// FFTW plan creation is not thread-safe; execution of a created plan is.
std::mutex fftw_mutex;

Vector run_r2r(const Vector& in, fftw_r2r_kind kind) {
    const Eigen::Index n = in.size();
    Vector out(n);
    Vector tmp = in;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_r2r_1d(static_cast<int>(n), tmp.data(), out.data(), kind, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("trend: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

Rational reduce(Rational r) {
    if (r.den == 0) throw std::invalid_argument("rational: zero denominator");
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    const long long g = std::gcd(std::llabs(r.num), r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

Vector fit_poly_trend(const Vector& f, int degree) {
    if (degree < 1 || degree > 3)
        throw std::invalid_argument("fit_poly_trend: degree must be 1, 2 or 3");
    const Eigen::Index n = f.size();
    if (n <= degree + 1) throw std::invalid_argument("fit_poly_trend: series too short for fit");
    Matrix vand(n, degree + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        double p = 1.0;
        for (int d = 0; d <= degree; ++d) {
            vand(i, d) = p;
            p *= t;
        }
    }
    return vand.householderQr().solve(f);
}

double eval_poly(const Vector& coeffs, double t) {
    double acc = 0.0;
    for (Eigen::Index d = coeffs.size() - 1; d >= 0; --d) acc = acc * t + coeffs[d];
    return acc;
}

Vector dct1d_forward(const Vector& f) {
    const Eigen::Index n = f.size();
    if (n < 1) throw std::invalid_argument("dct1d_forward: empty series");
    Vector y = run_r2r(f, FFTW_REDFT10);
    // FFTW's REDFT10 is the unnormalized DCT-II; rescale to the orthonormal
    // convention.
    y[0] *= 0.5 / std::sqrt(static_cast<double>(n));
    const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    for (Eigen::Index k = 1; k < n; ++k) y[k] *= s;
    return y;
}

Vector dct1d_inverse(const Vector& coeffs) {
    const Eigen::Index n = coeffs.size();
    if (n < 1) throw std::invalid_argument("dct1d_inverse: empty coefficients");
    Vector z = coeffs;
    z[0] /= std::sqrt(static_cast<double>(n));
    const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    for (Eigen::Index k = 1; k < n; ++k) z[k] *= s;
    if (n == 1) return z;  // REDFT01 is undefined for size 1; identity there
    return run_r2r(z, FFTW_REDFT01);
}

Vector dct_resample(const Vector& f, Eigen::Index new_len) {
    if (new_len < 1) throw std::invalid_argument("dct_resample: new_len must be >= 1");
    const Eigen::Index n = f.size();
    if (n == new_len) return f;
    Vector c = dct1d_forward(f);
    Vector cc = Vector::Zero(new_len);
    const Eigen::Index keep = std::min(n, new_len);
    const double amp = std::sqrt(static_cast<double>(new_len) / static_cast<double>(n));
    cc.head(keep) = amp * c.head(keep);
    return dct1d_inverse(cc);
}

Vector average_cycle(const Vector& detrended, Eigen::Index cycle_len) {
    if (cycle_len < 1) throw std::invalid_argument("average_cycle: cycle length must be >= 1");
    const Eigen::Index n = detrended.size();
    if (n < cycle_len) throw std::invalid_argument("average_cycle: series shorter than one cycle");
    const Eigen::Index n_cycles = n / cycle_len;
    Vector mean = Vector::Zero(cycle_len);
    for (Eigen::Index c = 0; c < n_cycles; ++c) mean += detrended.segment(c * cycle_len, cycle_len);
    return mean / static_cast<double>(n_cycles);
}

namespace {

// New-grid position of original index t under DCT (half-sample) resampling.
double resampled_position(long long t, long long n, long long big_n) {
    if (n == big_n) return static_cast<double>(t);
    return (static_cast<double>(t) + 0.5) * static_cast<double>(big_n) / static_cast<double>(n) - 0.5;
}

double cycle_at(const Vector& cycle, double pos) {
    const auto L = cycle.size();
    double u = std::fmod(pos, static_cast<double>(L));
    if (u < 0) u += static_cast<double>(L);
    const auto k0 = static_cast<Eigen::Index>(std::floor(u));
    const double th = u - static_cast<double>(k0);
    if (th == 0.0) return cycle[k0 % L];
    const Eigen::Index k1 = (k0 + 1) % L;
    return (1.0 - th) * cycle[k0 % L] + th * cycle[k1];
}

}  // namespace

TrendModel decompose(const Vector& f, Rational cycle_len, int degree, Rational a_c) {
    const Eigen::Index n = f.size();
    const Rational lc = reduce(cycle_len);
    if (lc.num <= 0) throw std::invalid_argument("decompose: cycle length must be positive");
    Rational a = (a_c.num == 0 && a_c.den == 0) ? Rational{lc.den, 1} : reduce(a_c);
    if (a.num <= 0) throw std::invalid_argument("decompose: resample factor must be positive");
    // L_C = a_C * l_C must be an integer
    const long long num = lc.num * a.num;
    const long long den = lc.den * a.den;
    if (num % den != 0)
        throw std::invalid_argument("decompose: a_C * cycle_len is not an integer");
    const long long L = num / den;
    if (L < 2) throw std::invalid_argument("decompose: resampled cycle length must be >= 2");

    const bool identity = (a.num == a.den);
    const Eigen::Index big_n =
        identity ? n
                 : static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * a.value()));
    if (big_n < 2 * L) throw std::invalid_argument("decompose: fewer than 2 full cycles");

    TrendModel m;
    m.original_len = n;
    m.cycle_len = L;
    m.resample = a;
    m.poly_coeffs = fit_poly_trend(f, degree);

    Vector g(n);
    for (Eigen::Index i = 0; i < n; ++i)
        g[i] = f[i] - eval_poly(m.poly_coeffs, static_cast<double>(i) / static_cast<double>(n - 1));

    Vector g_big = identity ? g : dct_resample(g, big_n);
    m.mean_cycle = average_cycle(g_big, L);
    Vector resid(big_n);
    for (Eigen::Index j = 0; j < big_n; ++j) resid[j] = g_big[j] - m.mean_cycle[j % L];
    m.detrended = identity ? resid : dct_resample(resid, n);
    return m;
}

Vector reconstruct(const TrendModel& m) {
    const Eigen::Index n = m.original_len;
    const bool identity = (m.resample.num == m.resample.den);
    const Eigen::Index big_n =
        identity ? n
                 : static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * m.resample.value()));
    Vector g_big = identity ? m.detrended : dct_resample(m.detrended, big_n);
    for (Eigen::Index j = 0; j < big_n; ++j) g_big[j] += m.mean_cycle[j % m.cycle_len];
    Vector out = identity ? g_big : dct_resample(g_big, n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] += eval_poly(m.poly_coeffs, static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

Vector cycle_predict(const TrendModel& m, long long t0, long long steps) {
    if (t0 < 0 || t0 >= m.original_len)
        throw std::invalid_argument("cycle_predict: t0 outside the model timeline");
    if (steps < 0) throw std::invalid_argument("cycle_predict: steps must be nonnegative");
    const long long n = m.original_len;
    const long long big_n = (m.resample.num == m.resample.den)
                                ? n
                                : std::llround(static_cast<double>(n) * m.resample.value());
    const double offset = m.detrended[t0];
    Vector out(steps);
    for (long long s = 0; s < steps; ++s) {
        const long long t = t0 + s;
        const double tn = static_cast<double>(t) / static_cast<double>(n - 1);
        out[s] = offset + eval_poly(m.poly_coeffs, tn) +
                 cycle_at(m.mean_cycle, resampled_position(t, n, big_n));
    }
    return out;
}

ImageTrendModel image_decompose(const ImageSeries& series, int block, Rational cycle_len,
                                int degree, Rational a_c) {
    const Eigen::Index T = series.size(), M = series.rows(), N = series.cols();
    if (block < 1 || block > std::min(M, N))
        throw std::invalid_argument("image_decompose: block must fit the frame");
    const Matrix dm = dct_matrix(M).topRows(block);
    const Matrix dn = dct_matrix(N).topRows(block);

    // coefficient time series, one per retained component
    Matrix comp(T, static_cast<Eigen::Index>(block) * block);
    for (Eigen::Index t = 0; t < T; ++t) {
        const Matrix y = dm * series.frames[static_cast<std::size_t>(t)] * dn.transpose();
        comp.row(t) = flatten(y).transpose();
    }

    ImageTrendModel m;
    m.rows = static_cast<int>(M);
    m.cols = static_cast<int>(N);
    m.block = block;
    m.models.reserve(static_cast<std::size_t>(block) * block);
    for (Eigen::Index k = 0; k < comp.cols(); ++k)
        m.models.push_back(decompose(comp.col(k), cycle_len, degree, a_c));
    return m;
}

ImageSeries image_cycle_predict(const ImageTrendModel& m, const Matrix& frame_t0, long long t0,
                                long long steps) {
    if (frame_t0.rows() != m.rows || frame_t0.cols() != m.cols)
        throw std::invalid_argument("image_cycle_predict: frame shape mismatch");
    const Matrix dm = dct_matrix(m.rows);
    const Matrix dn = dct_matrix(m.cols);
    const Matrix base = dm * frame_t0 * dn.transpose();  // components outside the block stay here

    Matrix pred(static_cast<Eigen::Index>(m.block) * m.block, steps);
    for (std::size_t k = 0; k < m.models.size(); ++k)
        pred.row(static_cast<Eigen::Index>(k)) = cycle_predict(m.models[k], t0, steps).transpose();

    ImageSeries out;
    out.frames.reserve(static_cast<std::size_t>(steps));
    for (long long s = 0; s < steps; ++s) {
        Matrix y = base;
        Eigen::Index k = 0;
        for (int i = 0; i < m.block; ++i)
            for (int j = 0; j < m.block; ++j) y(i, j) = pred(k++, s);
        out.frames.push_back(dm.transpose() * y * dn);
    }
    return out;
}

ImageSeries trivial_predict(const Matrix& last_train_frame, long long steps) {
    if (steps < 0) throw std::invalid_argument("trivial_predict: steps must be nonnegative");
    ImageSeries out;
    out.frames.assign(static_cast<std::size_t>(steps), last_train_frame);
    return out;
}

}  // namespace torsk
