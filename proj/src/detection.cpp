#include "torsk/detection.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace torsk {

Vector error_sequence(const ImageSeries& pred, const ImageSeries& truth, ErrorMetric metric,
                      const GKernel* kernel) {
    if (pred.size() != truth.size() || pred.rows() != truth.rows() || pred.cols() != truth.cols())
        throw std::invalid_argument("error_sequence: prediction/truth shape mismatch");
    if (metric == ErrorMetric::Imed && !kernel)
        throw std::invalid_argument("error_sequence: IMED metric requires a kernel");
    Vector e(pred.size());
    for (Eigen::Index t = 0; t < pred.size(); ++t) {
        const auto& a = pred.frames[static_cast<std::size_t>(t)];
        const auto& b = truth.frames[static_cast<std::size_t>(t)];
        e[t] = metric == ErrorMetric::Euclidean ? (a - b).norm() : kernel->distance(a, b);
    }
    return e;
}

Vector normality_score(const Vector& errors, const NormalityConfig& cfg) {
    const Eigen::Index len = errors.size();
    const Eigen::Index m = cfg.m, n = cfg.n;
    if (m < 1 || n < 1) throw std::invalid_argument("normality_score: window sizes must be positive");
    if (2 * n >= m) throw std::invalid_argument("normality_score: local window must satisfy n < m/2");
    if (len <= m + n) throw std::invalid_argument("normality_score: error sequence shorter than m+n");

    // prefix sums for O(1) window means/variances
    Vector ps = Vector::Zero(len + 1), pq = Vector::Zero(len + 1);
    for (Eigen::Index i = 0; i < len; ++i) {
        ps[i + 1] = ps[i] + errors[i];
        pq[i + 1] = pq[i] + errors[i] * errors[i];
    }

    Vector sigma = Vector::Ones(len);
    for (Eigen::Index t = m; t + n < len; ++t) {
        const double cnt = static_cast<double>(m + 1);
        const double mu_m = (ps[t + 1] - ps[t - m]) / cnt;
        const double var = std::max(0.0, (pq[t + 1] - pq[t - m]) / cnt - mu_m * mu_m);
        const double sd = std::sqrt(var);
        const double mu_n = (ps[t + 1 + n] - ps[t + 1]) / static_cast<double>(n);
        const double diff = mu_n - mu_m;
        if (sd == 0.0) {
            // limit convention, with a relative slack against rounding noise
            sigma[t] = diff <= 1e-12 * std::max(1.0, std::abs(mu_m)) ? 1.0 : 0.0;
        } else {
            sigma[t] = 1.0 - std::erf(std::max(0.0, diff) / (std::sqrt(2.0) * sd));
        }
    }
    return sigma;
}

std::vector<bool> threshold_flags(const Vector& scores, double threshold) {
    std::vector<bool> flags(static_cast<std::size_t>(scores.size()));
    for (Eigen::Index t = 0; t < scores.size(); ++t)
        flags[static_cast<std::size_t>(t)] = scores[t] < threshold;
    return flags;
}

namespace {

int resolve_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("TORSK_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

struct WindowOutput {
    ImageSeries pred;
    bool diverged = false;
    long long diverged_step = -1;
};

}  // namespace

DetectionResult sliding_detect(const ImageSeries& series, const Reservoir& reservoir,
                               const SolverSpec& solver, const WindowPlan& plan_in,
                               ErrorMetric metric, const NormalityConfig& norm_cfg,
                               const GKernel* kernel, bool pixel_map, int threads) {
    WindowPlan plan = plan_in;
    if (plan.stride == 0) plan.stride = plan.l_pred;
    if (plan.l_trans < 1 || plan.l_train < 1 || plan.l_pred < 1 || plan.stride < 1)
        throw std::invalid_argument("sliding_detect: window plan entries must be positive");
    if (plan.stride > plan.l_pred)
        throw std::invalid_argument("sliding_detect: stride > l_pred would leave gaps in the error sequence");
    if (metric == ErrorMetric::Imed && !kernel)
        throw std::invalid_argument("sliding_detect: IMED metric requires a kernel");

    const Eigen::Index T = series.size();
    const Eigen::Index L = plan.l_trans + plan.l_train;
    if (T < L + plan.l_pred)
        throw std::invalid_argument("sliding_detect: series shorter than one full window");
    const Eigen::Index n_windows = (T - L - plan.l_pred) / plan.stride + 1;
    const Eigen::Index n_hidden = reservoir.hidden_size();
    const Eigen::Index fs = reservoir.frame_size();

    // One continuous state pass over the whole series; the first l_trans
    // states wash out the zero initialization and every window trains on a
    // slice of fully settled states (each depending only on its own past).
    // Records exist for frames [l_trans - 1, T).
    const Matrix records = reservoir.harvest(series, plan.l_trans - 1);

    std::vector<WindowOutput> outputs(static_cast<std::size_t>(n_windows));
    std::atomic<Eigen::Index> next{0};
    auto worker = [&]() {
        for (;;) {
            const Eigen::Index w = next.fetch_add(1);
            if (w >= n_windows) return;
            const Eigen::Index begin = w * plan.stride;
            // columns [begin, begin + l_train) hold frames
            // [begin + l_trans - 1, begin + L - 1); labels are the next frames
            Matrix labels(fs, plan.l_train);
            for (Eigen::Index i = 0; i < plan.l_train; ++i)
                labels.col(i) =
                    flatten(series.frames[static_cast<std::size_t>(begin + plan.l_trans + i)]);
            OutputWeights w_out =
                train_output(records.middleCols(begin, plan.l_train), labels, solver,
                             metric == ErrorMetric::Imed ? kernel : nullptr);
            const Vector seed_state = records.col(begin + plan.l_train).head(n_hidden);
            const Matrix& seed_frame = series.frames[static_cast<std::size_t>(begin + L - 1)];
            Prediction p = reservoir.predict(w_out, seed_state, seed_frame, plan.l_pred);
            auto& out = outputs[static_cast<std::size_t>(w)];
            out.pred = std::move(p.frames);
            out.diverged = p.diverged_at >= 0;
            out.diverged_step = p.diverged_at;
        }
    };
    const int n_threads = std::min<int>(resolve_threads(threads), static_cast<int>(n_windows));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    DetectionResult res;
    res.errors = Vector::Zero(T);
    res.covered_begin = L;
    res.covered_end = (n_windows - 1) * plan.stride + L + plan.l_pred;
    res.predictions.frames.resize(static_cast<std::size_t>(res.covered_end - res.covered_begin));
    for (Eigen::Index w = 0; w < n_windows; ++w) {
        const auto& out = outputs[static_cast<std::size_t>(w)];
        const Eigen::Index begin = w * plan.stride;
        const Eigen::Index pred_begin = begin + L;
        for (Eigen::Index i = 0; i < plan.l_pred; ++i) {
            const auto& pf = out.pred.frames[static_cast<std::size_t>(i)];
            const auto& tf = series.frames[static_cast<std::size_t>(pred_begin + i)];
            res.errors[pred_begin + i] =
                metric == ErrorMetric::Euclidean ? (pf - tf).norm() : kernel->distance(pf, tf);
            res.predictions.frames[static_cast<std::size_t>(pred_begin + i - L)] = pf;
        }
        res.window_log.push_back({w, begin, begin + L, pred_begin, pred_begin + plan.l_pred,
                                  out.diverged, out.diverged_step});
    }

    // score over the covered range only; everything else counts as normal
    res.scores = Vector::Ones(T);
    const Eigen::Index covered_len = res.covered_end - res.covered_begin;
    if (covered_len > norm_cfg.m + norm_cfg.n) {
        const Vector sub = normality_score(res.errors.segment(res.covered_begin, covered_len), norm_cfg);
        res.scores.segment(res.covered_begin, covered_len) = sub;
    }
    res.flags = threshold_flags(res.scores, norm_cfg.threshold);

    if (pixel_map && covered_len > norm_cfg.m + norm_cfg.n) {
        ImageSeries truth;
        truth.frames.assign(series.frames.begin() + res.covered_begin,
                            series.frames.begin() + res.covered_end);
        res.pixel_scores = pixel_normality(res.predictions, truth, norm_cfg);
        res.count_map = anomaly_count_map(pixel_flags(res.pixel_scores, norm_cfg.threshold));
    }
    return res;
}

ImageSeries pixel_normality(const ImageSeries& pred, const ImageSeries& truth,
                            const NormalityConfig& cfg) {
    if (pred.size() != truth.size() || pred.rows() != truth.rows() || pred.cols() != truth.cols())
        throw std::invalid_argument("pixel_normality: shape mismatch");
    const Eigen::Index T = pred.size(), M = pred.rows(), N = pred.cols();
    ImageSeries scores;
    scores.frames.assign(static_cast<std::size_t>(T), Matrix::Ones(M, N));
    Vector e(T);
    for (Eigen::Index r = 0; r < M; ++r)
        for (Eigen::Index c = 0; c < N; ++c) {
            for (Eigen::Index t = 0; t < T; ++t)
                e[t] = std::abs(pred.frames[static_cast<std::size_t>(t)](r, c) -
                                truth.frames[static_cast<std::size_t>(t)](r, c));
            const Vector s = normality_score(e, cfg);
            for (Eigen::Index t = 0; t < T; ++t) scores.frames[static_cast<std::size_t>(t)](r, c) = s[t];
        }
    return scores;
}

ImageSeries pixel_flags(const ImageSeries& pixel_scores, double threshold) {
    ImageSeries flags;
    flags.frames.reserve(pixel_scores.frames.size());
    for (const auto& f : pixel_scores.frames)
        flags.frames.push_back((f.array() < threshold).cast<double>());
    return flags;
}

Eigen::MatrixXi anomaly_count_map(const ImageSeries& flags) {
    if (flags.frames.empty()) return Eigen::MatrixXi();
    Matrix acc = Matrix::Zero(flags.rows(), flags.cols());
    for (const auto& f : flags.frames) acc += f;
    return acc.cast<int>();
}

}  // namespace torsk
