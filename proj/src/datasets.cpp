#include "torsk/datasets.hpp"

#include <cmath>
#include <stdexcept>

#include "torsk/rng.hpp"

namespace torsk {

namespace {

constexpr int kSubSteps = 4;  // internal sub-steps per output step

double mg_rhs(double x, double x_delayed, double beta, double gamma, double n) {
    return beta * x_delayed / (1.0 + std::pow(x_delayed, n)) - gamma * x;
}

// Dense trajectory with cubic-Hermite interpolation into the solution
// history. History is exactly x0 for t <= 0.
class DelayBuffer {
public:
    DelayBuffer(double x0, std::size_t capacity) : x0_(x0) {
        xs_.reserve(capacity);
        fs_.reserve(capacity);
    }
    void push(double x, double f) {
        xs_.push_back(x);
        fs_.push_back(f);
    }
    double value_at(double fine_pos) const {
        if (fine_pos <= 0.0) return x0_;
        const double fl = std::floor(fine_pos);
        const auto k = static_cast<std::size_t>(fl);
        const double th = fine_pos - fl;
        if (th == 0.0) return xs_[k];
        const double p0 = xs_[k], p1 = xs_[k + 1];
        const double m0 = fs_[k], m1 = fs_[k + 1];  // slopes per fine step
        const double h00 = (2 * th - 3) * th * th + 1;
        const double h10 = ((th - 2) * th + 1) * th;
        const double h01 = (3 - 2 * th) * th * th;
        const double h11 = (th - 1) * th * th;
        return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
    }

private:
    double x0_;
    std::vector<double> xs_, fs_;
};

}  // namespace

double effective_gamma(const MackeyGlassParams& p, const std::vector<AnomalySpec>& anomalies,
                       long long step) {
    for (const auto& a : anomalies)
        if (step >= a.start_step && step < a.start_step + a.length_steps) return a.gamma_anomalous;
    return p.gamma;
}

Series1D mackey_glass(const MackeyGlassParams& p, long long steps,
                      const std::vector<AnomalySpec>& anomalies, std::uint64_t seed) {
    if (p.dt <= 0) throw std::invalid_argument("mackey_glass: dt must be positive");
    if (p.tau <= 0) throw std::invalid_argument("mackey_glass: tau must be positive");
    if (p.gamma <= 0) throw std::invalid_argument("mackey_glass: gamma must be positive");
    const double ratio = p.tau / p.dt;
    const long long delay_steps = std::llround(ratio);
    if (delay_steps < 1 || std::abs(ratio - static_cast<double>(delay_steps)) > 1e-9)
        throw std::invalid_argument("mackey_glass: tau/dt must be a positive integer");
    if (steps <= delay_steps)
        throw std::invalid_argument("mackey_glass: steps must exceed the delay length tau/dt");
    for (const auto& a : anomalies) {
        if (a.start_step < 0) throw std::invalid_argument("mackey_glass: anomaly start_step < 0");
        if (a.length_steps <= 0) throw std::invalid_argument("mackey_glass: anomaly length_steps <= 0");
    }

    double x0 = p.x0;
    if (seed != 0) {
        std::mt19937_64 g(seed);
        x0 += 1e-9 * uniform01(g);
    }

    const double h = p.dt / kSubSteps;
    const long long fine_delay = delay_steps * kSubSteps;
    const long long fine_total = (steps - 1) * kSubSteps;

    DelayBuffer buf(x0, static_cast<std::size_t>(fine_total) + 1);
    Series1D out;
    out.dt = p.dt;
    out.values.resize(steps);
    out.values[0] = x0;

    double x = x0;
    double gamma = effective_gamma(p, anomalies, 0);
    buf.push(x, h * mg_rhs(x, x0, p.beta, gamma, p.n_exponent));

    for (long long j = 0; j < fine_total; ++j) {
        const long long out_step = j / kSubSteps;
        gamma = effective_gamma(p, anomalies, out_step);
        const double d0 = buf.value_at(static_cast<double>(j - fine_delay));
        const double d5 = buf.value_at(static_cast<double>(j - fine_delay) + 0.5);
        const double d1 = buf.value_at(static_cast<double>(j + 1 - fine_delay));
        const double k1 = mg_rhs(x, d0, p.beta, gamma, p.n_exponent);
        const double k2 = mg_rhs(x + 0.5 * h * k1, d5, p.beta, gamma, p.n_exponent);
        const double k3 = mg_rhs(x + 0.5 * h * k2, d5, p.beta, gamma, p.n_exponent);
        const double k4 = mg_rhs(x + h * k3, d1, p.beta, gamma, p.n_exponent);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!std::isfinite(x)) throw std::runtime_error("mackey_glass: integration diverged");
        const long long out_next = (j + 1) / kSubSteps;
        const double gnext = effective_gamma(p, anomalies, out_next);
        buf.push(x, h * mg_rhs(x, buf.value_at(static_cast<double>(j + 1 - fine_delay)), p.beta,
                               gnext, p.n_exponent));
        if ((j + 1) % kSubSteps == 0) out.values[out_next] = x;
    }
    return out;
}

namespace {

// [-1,1] -> grid interior with a two-pixel margin
double map_to_grid(double u, int dim) {
    const double margin = 2.0;
    return margin + 0.5 * (u + 1.0) * (dim - 1 - 2.0 * margin);
}

ImageSeries blob_movie(const BlobParams& p, const std::vector<double>& xs,
                       const std::vector<double>& ys) {
    if (p.rows < 8 || p.cols < 8)
        throw std::invalid_argument("blob: grid must be at least 8x8");
    if (p.blob_sigma <= 0) throw std::invalid_argument("blob: blob_sigma must be positive");
    ImageSeries out;
    out.frames.reserve(xs.size());
    const double inv2s2 = 1.0 / (2.0 * p.blob_sigma * p.blob_sigma);
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const double cr = map_to_grid(ys[t], p.rows);
        const double cc = map_to_grid(xs[t], p.cols);
        Matrix f(p.rows, p.cols);
        double peak = 0.0;
        for (int r = 0; r < p.rows; ++r)
            for (int c = 0; c < p.cols; ++c) {
                const double dr = r - cr, dc = c - cc;
                const double v = std::exp(-(dr * dr + dc * dc) * inv2s2);
                f(r, c) = v;
                if (v > peak) peak = v;
            }
        f /= peak;  // unit-peak normalization
        out.frames.push_back(std::move(f));
    }
    return out;
}

}  // namespace

ImageSeries lissajous_blob(const BlobParams& p, long long steps) {
    if (steps < 1) throw std::invalid_argument("lissajous_blob: steps must be >= 1");
    std::vector<double> xs(steps), ys(steps);
    for (long long t = 0; t < steps; ++t) {
        xs[t] = std::sin(p.alpha * t * p.dt);
        ys[t] = std::cos(p.beta_freq * t * p.dt);
    }
    return blob_movie(p, xs, ys);
}

ImageSeries chaotic_blob(const MackeyGlassParams& mg, const BlobParams& blob, long long steps,
                         const std::vector<AnomalySpec>& anomalies, std::uint64_t seed) {
    Series1D driver = mackey_glass(mg, steps, anomalies, seed);
    const double lo = driver.values.minCoeff();
    const double hi = driver.values.maxCoeff();
    const double span = hi - lo;
    std::vector<double> xs(steps), ys(steps);
    for (long long t = 0; t < steps; ++t) {
        xs[t] = span > 0 ? 2.0 * (driver.values[t] - lo) / span - 1.0 : 0.0;
        ys[t] = std::cos(blob.beta_freq * t * blob.dt);
    }
    return blob_movie(blob, xs, ys);
}

}  // namespace torsk
