#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torsk/datasets.hpp"

using namespace torsk;

TEST_CASE("mackey-glass equilibrium stays put") {
    // beta*x/(1+x^n) - gamma*x = 0 at x = (beta/gamma - 1)^(1/n) = 1
    MackeyGlassParams p;
    p.x0 = 1.0;
    const Series1D s = mackey_glass(p, 200, {}, 0);
    for (Eigen::Index t = 0; t < s.values.size(); ++t)
        CHECK(std::abs(s.values[t] - 1.0) < 1e-12);
}

TEST_CASE("general equilibrium invariant") {
    MackeyGlassParams p;
    p.beta = 0.4;
    p.gamma = 0.2;
    p.x0 = std::pow(p.beta / p.gamma - 1.0, 1.0 / p.n_exponent);
    const Series1D s = mackey_glass(p, 300, {}, 0);
    for (Eigen::Index t = 0; t < s.values.size(); ++t)
        CHECK(std::abs(s.values[t] - p.x0) < 1e-12);
}

TEST_CASE("gamma trace switches exactly over the anomaly window") {
    MackeyGlassParams p;
    std::vector<AnomalySpec> a{{1000, 50, 0.13}};
    CHECK(effective_gamma(p, a, 999) == 0.10);
    for (long long t = 1000; t < 1050; ++t) CHECK(effective_gamma(p, a, t) == 0.13);
    CHECK(effective_gamma(p, a, 1050) == 0.10);
}

TEST_CASE("integrator matches an independent dt/10 RK4 oracle") {
    MackeyGlassParams p;  // beta=0.2 gamma=0.1 n=10 tau=17 dt=1 x0=1.2
    const long long steps = 500;
    const Series1D s = mackey_glass(p, steps, {}, 0);
    const auto fine = oracle::mg_rk4(p.beta, p.gamma, p.n_exponent, p.tau, 0.1, p.x0,
                                     (steps - 1) * 10 + 1);
    for (long long t = 0; t < steps; ++t)
        CHECK(std::abs(s.values[t] - fine[static_cast<std::size_t>(t) * 10]) < 1e-6);
}

TEST_CASE("mackey-glass is deterministic per seed and decorrelated across seeds") {
    MackeyGlassParams p;
    const Series1D a = mackey_glass(p, 300, {}, 42);
    const Series1D b = mackey_glass(p, 300, {}, 42);
    const Series1D c = mackey_glass(p, 300, {}, 43);
    bool differs = false;
    for (Eigen::Index t = 0; t < 300; ++t) {
        CHECK(a.values[t] == b.values[t]);
        differs = differs || a.values[t] != c.values[t];
    }
    CHECK(differs);
}

TEST_CASE("invalid mackey-glass parameters are rejected") {
    MackeyGlassParams p;
    p.tau = 17.5;  // tau/dt not integer
    CHECK_THROWS(mackey_glass(p, 100, {}, 0));
    p.tau = 17.0;
    CHECK_THROWS(mackey_glass(p, 17, {}, 0));  // steps <= delay
}

TEST_CASE("constant lissajous blob") {
    BlobParams p;
    p.alpha = 0.0;
    p.beta_freq = 0.0;
    const ImageSeries im = lissajous_blob(p, 5);
    REQUIRE(im.size() == 5);
    for (int t = 1; t < 5; ++t) CHECK((im.frames[t] - im.frames[0]).cwiseAbs().maxCoeff() == 0.0);
    // center at the map of (sin 0, cos 0) = (0, 1): middle column, bottom margin row
    Eigen::Index r, c;
    im.frames[0].maxCoeff(&r, &c);
    CHECK(r == p.rows - 3);  // 2-pixel margin, rounded
    CHECK(std::abs(static_cast<double>(c) - (p.cols - 1) / 2.0) <= 0.5);
}

TEST_CASE("blob peak lands within one pixel of the mapped center") {
    BlobParams p;
    const ImageSeries im = lissajous_blob(p, 50);
    for (long long t = 0; t < 50; ++t) {
        const double x = std::sin(p.alpha * t), y = std::cos(p.beta_freq * t);
        const double cc = 2.0 + 0.5 * (x + 1.0) * (p.cols - 5);
        const double cr = 2.0 + 0.5 * (y + 1.0) * (p.rows - 5);
        Eigen::Index r, c;
        im.frames[static_cast<std::size_t>(t)].maxCoeff(&r, &c);
        CHECK(std::abs(r - cr) <= 1.0);
        CHECK(std::abs(c - cc) <= 1.0);
    }
}

TEST_CASE("every blob frame has unit peak") {
    BlobParams p;
    p.blob_sigma = 1.5;
    const ImageSeries im = lissajous_blob(p, 40);
    for (const auto& f : im.frames) CHECK(f.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chaotic blob at equilibrium traces a vertical cosine line") {
    MackeyGlassParams mg;
    mg.x0 = 1.0;  // equilibrium: constant driver -> constant x coordinate
    BlobParams p;
    const ImageSeries im = chaotic_blob(mg, p, 60, {}, 0);
    Eigen::Index r0, c0, r1, c1;
    im.frames[10].maxCoeff(&r0, &c0);
    im.frames[40].maxCoeff(&r1, &c1);
    CHECK(c0 == c1);
    CHECK(r0 != r1);
}

TEST_CASE("chaotic blob values stay in [0,1] on a 30x30 grid for 2000 steps") {
    MackeyGlassParams mg;
    BlobParams p;
    const ImageSeries im = chaotic_blob(mg, p, 2000, {{700, 50, 0.13}}, 1);
    for (const auto& f : im.frames) {
        CHECK(f.minCoeff() >= 0.0);
        CHECK(f.maxCoeff() <= 1.0 + 1e-12);
        CHECK(f.allFinite());
    }
}

TEST_CASE("chaotic blob shares its driver with mackey_glass") {
    MackeyGlassParams mg;
    BlobParams p;
    std::vector<AnomalySpec> an{{500, 50, 0.13}, {800, 50, 0.13}};
    const Series1D driver = mackey_glass(mg, 1000, an, 5);
    const ImageSeries im = chaotic_blob(mg, p, 1000, an, 5);
    // reconstruct the x pixel coordinate from the driver and compare peaks
    const double lo = driver.values.minCoeff(), hi = driver.values.maxCoeff();
    for (long long t : {0L, 250L, 520L, 999L}) {
        const double x = 2.0 * (driver.values[t] - lo) / (hi - lo) - 1.0;
        const double cc = 2.0 + 0.5 * (x + 1.0) * (p.cols - 5);
        Eigen::Index r, c;
        im.frames[static_cast<std::size_t>(t)].maxCoeff(&r, &c);
        CHECK(std::abs(c - cc) <= 1.0);
    }
}
