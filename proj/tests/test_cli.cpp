#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsk/dataio.hpp"

using namespace torsk;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    fs::create_directories("test_tmp/cli");
    const std::string cmd = std::string(TORSK_CLI_PATH) + " " + args +
                            " > test_tmp/cli/stdout.log 2> test_tmp/cli/stderr.log";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_cfg(const std::string& name, const std::string& body) {
    fs::create_directories("test_tmp/cli");
    const std::string path = "test_tmp/cli/" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

int count_data_lines(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    int n = -1;  // skip header
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("generate mackey writes tensor plus anomaly manifest") {
    const std::string cfg = write_cfg("gen_mg.ini", R"(
[dataset]
kind = mackey
steps = 400
anomaly = 100 50 0.13
anomaly = 200 50 0.13
anomaly = 300 50 0.13
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/mg") == 0);
    CHECK(fs::exists("test_tmp/cli/mg/series.header"));
    CHECK(fs::exists("test_tmp/cli/mg/series.bin"));
    const Series1D s = to_series(read_tensor("test_tmp/cli/mg/series"));
    CHECK(s.values.size() == 400);
    const std::string manifest = slurp("test_tmp/cli/mg/anomalies.csv");
    CHECK(manifest.find("start,end,gamma") != std::string::npos);
    CHECK(manifest.find("100,150,0.13") != std::string::npos);
    CHECK(count_data_lines("test_tmp/cli/mg/anomalies.csv") == 3);
}

TEST_CASE("generate lissajous writes the requested tensor shape") {
    const std::string cfg = write_cfg("gen_liss.ini", R"(
[dataset]
kind = lissajous
steps = 50
rows = 30
cols = 30
alpha = 0.3
beta_freq = 1.0
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/liss") == 0);
    const Tensor t = read_tensor("test_tmp/cli/liss/series");
    REQUIRE(t.shape.size() == 3);
    CHECK(t.shape[0] == 50);
    CHECK(t.shape[1] == 30);
    CHECK(t.shape[2] == 30);
}

TEST_CASE("invalid config exits with code 2 and names the key") {
    const std::string cfg = write_cfg("bad.ini", "[reservoir]\nrho_ = 1.5\n");
    CHECK(run_cli("generate --config " + cfg) == 2);
    CHECK(slurp("test_tmp/cli/stderr.log").find("rho_") != std::string::npos);
}

TEST_CASE("runtime failures exit with code 3") {
    const std::string cfg = write_cfg("gen_tiny.ini", R"(
[dataset]
kind = mackey
steps = 60
[input_maps]
map = random_matrix 20x1 1.0 seed=1
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/tiny") == 0);
    // prediction cannot fit l_trans+l_train=2200 training frames into 60
    CHECK(run_cli("predict --config " + cfg + " --input test_tmp/cli/tiny/series --start 2300 "
                  "--steps 10 --out test_tmp/cli/tiny_pred") == 3);
}

TEST_CASE("1d detect emits the full artifact set") {
    const std::string cfg = write_cfg("det1d.ini", R"(
[dataset]
kind = mackey
steps = 700
[input_maps]
map = random_matrix 60x1 1.0 seed=2
[reservoir]
seed = 5
[solver]
method = tikhonov
beta = 0.001
[window]
l_trans = 10
l_train = 80
l_pred = 10
[normality]
m = 30
n = 4
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/d1") == 0);
    REQUIRE(run_cli("detect --config " + cfg + " --input test_tmp/cli/d1/series --out "
                    "test_tmp/cli/d1_out") == 0);
    for (const char* f : {"errors.csv", "scores.csv", "flags.csv", "window_log.csv"})
        CHECK(fs::exists(fs::path("test_tmp/cli/d1_out") / f));
    CHECK(count_data_lines("test_tmp/cli/d1_out/errors.csv") == 700);
    const std::string log = slurp("test_tmp/cli/d1_out/window_log.csv");
    CHECK(log.find("window,train_begin,train_end,pred_begin,pred_end,diverged,diverged_step") !=
          std::string::npos);
}

TEST_CASE("image detect additionally writes pixel scores and the heatmap") {
    const std::string cfg = write_cfg("detim.ini", R"(
[dataset]
kind = lissajous
steps = 260
rows = 12
cols = 12
alpha = 0.3
beta_freq = 1.0
blob_sigma = 1.5
[input_maps]
map = pixels 12x12 1.0
[reservoir]
seed = 3
[solver]
method = tikhonov
beta = 0.01
[imed]
enabled = true
sigma = 1.0
[window]
l_trans = 5
l_train = 150
l_pred = 10
[normality]
m = 30
n = 4
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/dim") == 0);
    REQUIRE(run_cli("detect --config " + cfg + " --input test_tmp/cli/dim/series --out "
                    "test_tmp/cli/dim_out") == 0);
    CHECK(fs::exists("test_tmp/cli/dim_out/count_map.header"));
    CHECK(fs::exists("test_tmp/cli/dim_out/count_map.svg"));
    CHECK(fs::exists("test_tmp/cli/dim_out/pixel_scores.header"));
    const std::string svg = slurp("test_tmp/cli/dim_out/count_map.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<rect") != std::string::npos);
}

TEST_CASE("predict emits three prediction tensors with error curves") {
    const std::string cfg = write_cfg("pred1d.ini", R"(
[dataset]
kind = mackey
steps = 500
[input_maps]
map = random_matrix 80x1 1.0 seed=4
[reservoir]
seed = 6
[solver]
method = tikhonov
beta = 0.001
[trend]
degree = 1
cycle_length = 25
[window]
l_trans = 20
l_train = 200
l_pred = 25
)");
    REQUIRE(run_cli("generate --config " + cfg + " --out test_tmp/cli/p1") == 0);
    REQUIRE(run_cli("predict --config " + cfg + " --input test_tmp/cli/p1/series --start 300 "
                    "--steps 50 --out test_tmp/cli/p1_out") == 0);
    for (const char* f : {"esn_pred", "cycle_pred", "trivial_pred"}) {
        const Tensor t = read_tensor((fs::path("test_tmp/cli/p1_out") / f).string());
        CHECK(t.shape[0] == 50);
    }
    for (const char* f : {"esn_error.csv", "cycle_error.csv", "trivial_error.csv"})
        CHECK(count_data_lines((fs::path("test_tmp/cli/p1_out") / f).string()) == 50);

    // steps = 0: empty artifacts, exit 0
    REQUIRE(run_cli("predict --config " + cfg + " --input test_tmp/cli/p1/series --start 300 "
                    "--steps 0 --out test_tmp/cli/p0_out") == 0);
    CHECK(read_tensor("test_tmp/cli/p0_out/esn_pred").shape[0] == 0);
    CHECK(count_data_lines("test_tmp/cli/p0_out/esn_error.csv") == 0);
}

TEST_CASE("bifurcation outputs are deterministic and carry the expected schema") {
    REQUIRE(run_cli("bifurcation --w 3 --b 0.1 --x0 -0.5 --steps 40 --out test_tmp/cli/bif") == 0);
    CHECK(count_data_lines("test_tmp/cli/bif/fixed_points.csv") == 3);
    CHECK(count_data_lines("test_tmp/cli/bif/trajectory.csv") == 41);
    CHECK(count_data_lines("test_tmp/cli/bif/cobweb.csv") == 81);
    const std::string first = slurp("test_tmp/cli/bif/fixed_points.csv");
    CHECK(first.rfind("x,stability", 0) == 0);

    REQUIRE(run_cli("bifurcation --w 3 --b 0.1 --x0 -0.5 --steps 40 --out test_tmp/cli/bif2") == 0);
    CHECK(slurp("test_tmp/cli/bif2/fixed_points.csv") == first);
    CHECK(slurp("test_tmp/cli/bif2/trajectory.csv") == slurp("test_tmp/cli/bif/trajectory.csv"));

    REQUIRE(run_cli("bifurcation --w 0.5 --b 0 --x0 0.3 --steps 10 --out test_tmp/cli/bif3") == 0);
    CHECK(count_data_lines("test_tmp/cli/bif3/fixed_points.csv") == 1);
    CHECK(slurp("test_tmp/cli/bif3/fixed_points.csv").find("stable") != std::string::npos);
}
