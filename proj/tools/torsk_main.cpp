#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "torsk/bifurcation.hpp"
#include "torsk/config.hpp"
#include "torsk/dataio.hpp"
#include "torsk/detection.hpp"
#include "torsk/svg.hpp"

namespace fs = std::filesystem;
using namespace torsk;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct LoadedInput {
    ImageSeries frames;
    bool is_image = false;
};

LoadedInput load_input(const std::string& base) {
    const Tensor t = read_tensor(base);
    LoadedInput in;
    if (t.shape.size() == 1) {
        in.frames = as_frames(to_series(t));
    } else if (t.shape.size() == 3) {
        in.frames = to_images(t);
        in.is_image = true;
    } else {
        throw std::runtime_error("input tensor must be rank 1 (series) or rank 3 (image series)");
    }
    if (in.frames.size() < 1) throw std::runtime_error("input tensor is empty");
    return in;
}

InputPipeline build_pipeline(const RunConfig& cfg, Eigen::Index rows, Eigen::Index cols) {
    if (cfg.input_maps.empty())
        throw ConfigError("section [input_maps] is empty; at least one map is required");
    try {
        return InputPipeline(cfg.input_maps, static_cast<int>(rows), static_cast<int>(cols));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid [input_maps]: ") + e.what());
    }
}

void write_anomalies_csv(const std::string& path, const std::vector<AnomalySpec>& anomalies) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "start,end,gamma\n";
    for (const auto& a : anomalies)
        out << a.start_step << "," << (a.start_step + a.length_steps) << ","
            << fmt(a.gamma_anomalous) << "\n";
}

void cmd_generate(const RunConfig& cfg, const std::string& kind_override, const fs::path& out) {
    const std::string kind = kind_override.empty() ? cfg.dataset.kind : kind_override;
    if (kind.empty()) throw ConfigError("[dataset] kind is not set");
    if (cfg.dataset.steps < 1) throw ConfigError("[dataset] steps must be positive");
    fs::create_directories(out);
    const auto base = (out / "series").string();
    if (kind == "mackey") {
        Series1D s = mackey_glass(cfg.dataset.mg, cfg.dataset.steps, cfg.dataset.anomalies,
                                  cfg.dataset.seed);
        write_series(s, base);
        write_anomalies_csv((out / "anomalies.csv").string(), cfg.dataset.anomalies);
    } else if (kind == "lissajous") {
        write_images(lissajous_blob(cfg.dataset.blob, cfg.dataset.steps), base);
    } else if (kind == "chaotic-blob") {
        write_images(chaotic_blob(cfg.dataset.mg, cfg.dataset.blob, cfg.dataset.steps,
                                  cfg.dataset.anomalies, cfg.dataset.seed),
                     base);
        write_anomalies_csv((out / "anomalies.csv").string(), cfg.dataset.anomalies);
    } else {
        throw ConfigError("unknown dataset kind '" + kind + "'");
    }
    std::cout << "wrote " << base << ".header/.bin\n";
}

void cmd_predict(const RunConfig& cfg, const std::string& input, long long start, long long steps,
                 const fs::path& out) {
    if (steps < 0) throw ConfigError("--steps must be nonnegative");
    LoadedInput in = load_input(input);
    const Eigen::Index T = in.frames.size();
    const Eigen::Index L = cfg.window.l_trans + cfg.window.l_train;
    if (start < L)
        throw std::runtime_error("prediction start " + std::to_string(start) +
                                 " leaves no room for l_trans+l_train=" + std::to_string(L) +
                                 " training frames");
    if (start + steps > T)
        throw std::runtime_error("prediction range exceeds the input length");

    fs::create_directories(out);
    if (steps == 0) {
        Tensor empty;
        empty.shape = in.is_image ? std::vector<std::size_t>{0, static_cast<std::size_t>(in.frames.rows()),
                                                             static_cast<std::size_t>(in.frames.cols())}
                                  : std::vector<std::size_t>{0};
        for (const char* name : {"esn_pred", "cycle_pred", "trivial_pred"})
            write_tensor(empty, (out / name).string());
        for (const char* name : {"esn_error.csv", "cycle_error.csv", "trivial_error.csv"})
            write_series_csv((out / name).string(), Vector(), "error", start);
        return;
    }

    InputPipeline pipeline = build_pipeline(cfg, in.frames.rows(), in.frames.cols());
    Reservoir reservoir(cfg.reservoir, std::move(pipeline));
    std::unique_ptr<GKernel> kernel;
    if (cfg.imed.enabled)
        kernel = std::make_unique<GKernel>(in.frames.rows(), in.frames.cols(), cfg.imed.sigma);

    // ESN: harvest the training window just before `start`
    ImageSeries slice;
    slice.frames.assign(in.frames.frames.begin() + (start - L), in.frames.frames.begin() + start);
    Matrix records = reservoir.harvest(slice, cfg.window.l_trans - 1);
    const Eigen::Index n_train = records.cols() - 1;
    Matrix labels(reservoir.frame_size(), n_train);
    for (Eigen::Index i = 0; i < n_train; ++i)
        labels.col(i) = flatten(in.frames.frames[static_cast<std::size_t>(start - L + cfg.window.l_trans + i)]);
    OutputWeights w_out = train_output(records.leftCols(n_train), labels, cfg.solver, kernel.get());
    Prediction esn = reservoir.predict(w_out, records.col(records.cols() - 1).head(reservoir.hidden_size()),
                                       in.frames.frames[static_cast<std::size_t>(start - 1)], steps);
    if (esn.diverged_at >= 0)
        std::cerr << "esn prediction diverged at step " << esn.diverged_at << "\n";

    // cycle baseline, fit on the same l_train frames
    if (cfg.trend.cycle_length.num <= 0)
        throw ConfigError("cycle-based prediction requires [trend] cycle_length");
    ImageSeries cyc;
    const long long fit_begin = start - cfg.window.l_train;
    if (in.is_image) {
        ImageSeries fit_slice;
        fit_slice.frames.assign(in.frames.frames.begin() + fit_begin,
                                in.frames.frames.begin() + start);
        ImageTrendModel m = image_decompose(fit_slice, cfg.trend.dct_block, cfg.trend.cycle_length,
                                            cfg.trend.degree, cfg.trend.resample);
        ImageSeries pred = image_cycle_predict(m, fit_slice.frames.back(), cfg.window.l_train - 1,
                                               steps + 1);
        cyc.frames.assign(pred.frames.begin() + 1, pred.frames.end());
    } else {
        Vector f(cfg.window.l_train);
        for (Eigen::Index i = 0; i < cfg.window.l_train; ++i)
            f[i] = in.frames.frames[static_cast<std::size_t>(fit_begin + i)](0, 0);
        TrendModel m = decompose(f, cfg.trend.cycle_length, cfg.trend.degree, cfg.trend.resample);
        Vector pred = cycle_predict(m, cfg.window.l_train - 1, steps + 1).tail(steps);
        cyc = as_frames(Series1D{pred, 1.0});
    }

    ImageSeries triv = trivial_predict(in.frames.frames[static_cast<std::size_t>(start - 1)], steps);

    ImageSeries truth;
    truth.frames.assign(in.frames.frames.begin() + start, in.frames.frames.begin() + start + steps);
    const ErrorMetric metric = cfg.imed.enabled ? ErrorMetric::Imed : ErrorMetric::Euclidean;

    auto emit = [&](const ImageSeries& pred, const char* tensor_name, const char* csv_name) {
        if (in.is_image) {
            write_images(pred, (out / tensor_name).string());
        } else {
            Series1D s;
            s.values.resize(pred.size());
            for (Eigen::Index i = 0; i < pred.size(); ++i)
                s.values[i] = pred.frames[static_cast<std::size_t>(i)](0, 0);
            write_series(s, (out / tensor_name).string());
        }
        write_series_csv((out / csv_name).string(), error_sequence(pred, truth, metric, kernel.get()),
                         "error", start);
    };
    emit(esn.frames, "esn_pred", "esn_error.csv");
    emit(cyc, "cycle_pred", "cycle_error.csv");
    emit(triv, "trivial_pred", "trivial_error.csv");
}

void cmd_detect(const RunConfig& cfg, const std::string& input, const fs::path& out) {
    LoadedInput in = load_input(input);
    InputPipeline pipeline = build_pipeline(cfg, in.frames.rows(), in.frames.cols());
    Reservoir reservoir(cfg.reservoir, std::move(pipeline));
    std::unique_ptr<GKernel> kernel;
    if (cfg.imed.enabled)
        kernel = std::make_unique<GKernel>(in.frames.rows(), in.frames.cols(), cfg.imed.sigma);
    const ErrorMetric metric = cfg.imed.enabled ? ErrorMetric::Imed : ErrorMetric::Euclidean;

    DetectionResult res = sliding_detect(in.frames, reservoir, cfg.solver, cfg.window, metric,
                                         cfg.normality, kernel.get(), in.is_image);

    fs::create_directories(out);
    write_series_csv((out / "errors.csv").string(), res.errors, "error");
    write_series_csv((out / "scores.csv").string(), res.scores, "score");
    {
        std::ofstream f(out / "flags.csv");
        f << "t,flag\n";
        for (std::size_t t = 0; t < res.flags.size(); ++t)
            f << t << "," << (res.flags[t] ? 1 : 0) << "\n";
    }
    {
        std::ofstream f(out / "window_log.csv");
        f << "window,train_begin,train_end,pred_begin,pred_end,diverged,diverged_step\n";
        for (const auto& w : res.window_log)
            f << w.index << "," << w.train_begin << "," << w.train_end << "," << w.pred_begin << ","
              << w.pred_end << "," << (w.diverged ? 1 : 0) << "," << w.diverged_step << "\n";
    }
    if (in.is_image && res.count_map.size() > 0) {
        Tensor cm;
        cm.shape = {static_cast<std::size_t>(res.count_map.rows()),
                    static_cast<std::size_t>(res.count_map.cols())};
        cm.data.reserve(cm.element_count());
        for (Eigen::Index r = 0; r < res.count_map.rows(); ++r)
            for (Eigen::Index c = 0; c < res.count_map.cols(); ++c)
                cm.data.push_back(static_cast<double>(res.count_map(r, c)));
        write_tensor(cm, (out / "count_map").string());
        write_heatmap_svg(res.count_map.cast<double>(), (out / "count_map.svg").string());
        write_images(res.pixel_scores, (out / "pixel_scores").string());
    }
    long long flagged = 0;
    for (bool f : res.flags) flagged += f;
    std::cout << "flagged " << flagged << " of " << res.flags.size() << " steps\n";
}

void cmd_bifurcation(double w, double b, double x0, long long steps, const fs::path& out) {
    fs::create_directories(out);
    {
        std::ofstream f(out / "trajectory.csv");
        f << "t,x\n";
        const auto xs = iterate_map(w, b, x0, steps);
        for (std::size_t t = 0; t < xs.size(); ++t) f << t << "," << fmt(xs[t]) << "\n";
    }
    {
        std::ofstream f(out / "fixed_points.csv");
        f << "x,stability\n";
        for (const auto& fp : fixed_points(w, b))
            f << fmt(fp.x) << "," << (fp.stable ? "stable" : "unstable") << "\n";
    }
    {
        std::ofstream f(out / "cycles.csv");
        f << "x1,x2\n";
        for (const auto& c : period2_cycles(w, b)) f << fmt(c.first) << "," << fmt(c.second) << "\n";
    }
    {
        std::ofstream f(out / "cobweb.csv");
        f << "x,y\n";
        for (const auto& p : cobweb_trace(w, b, x0, std::max<long long>(1, steps)))
            f << fmt(p.first) << "," << fmt(p.second) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torsk: spatial echo state networks for chaotic time series anomaly detection"};
    app.require_subcommand(1);

    std::string config_path, out_override, input_base, kind_override;
    long long start = 0, steps = 0;
    double bw = 3.0, bb = 0.1, bx0 = -0.5;
    long long bsteps = 100;

    auto* gen = app.add_subcommand("generate", "synthesize a benchmark dataset");
    gen->add_option("--config", config_path, "run configuration file")->required();
    gen->add_option("--out", out_override, "output directory (overrides [output] dir)");
    gen->add_option("--kind", kind_override, "dataset kind override");

    auto* pre = app.add_subcommand("predict", "train once and emit ESN/cycle/trivial predictions");
    pre->add_option("--config", config_path)->required();
    pre->add_option("--input", input_base, "input tensor base path")->required();
    pre->add_option("--start", start, "first predicted frame index")->required();
    pre->add_option("--steps", steps, "number of predicted frames")->required();
    pre->add_option("--out", out_override);

    auto* det = app.add_subcommand("detect", "sliding-window anomaly detection");
    det->add_option("--config", config_path)->required();
    det->add_option("--input", input_base, "input tensor base path")->required();
    det->add_option("--out", out_override);

    auto* bif = app.add_subcommand("bifurcation", "single-unit map diagnostics");
    bif->add_option("--w", bw, "recurrent weight");
    bif->add_option("--b", bb, "bias");
    bif->add_option("--x0", bx0, "initial value");
    bif->add_option("--steps", bsteps, "iterations");
    bif->add_option("--out", out_override);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (bif->parsed()) {
            cmd_bifurcation(bw, bb, bx0, bsteps, out_override.empty() ? "out" : out_override);
            return 0;
        }
        RunConfig cfg = parse_run_config(config_path);
        const fs::path out = out_override.empty() ? cfg.output_dir : out_override;
        if (gen->parsed()) cmd_generate(cfg, kind_override, out);
        else if (pre->parsed()) cmd_predict(cfg, input_base, start, steps, out);
        else if (det->parsed()) cmd_detect(cfg, input_base, out);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
