#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "torsk/imed.hpp"
#include "torsk/rng.hpp"

using namespace torsk;

TEST_CASE("1x1 kernel equals the analytic diagonal value") {
    const double sigma = 0.7;
    GKernel k(1, 1, sigma);
    const double g = k.gx()(0, 0) * k.gy()(0, 0);
    CHECK(g == doctest::Approx(1.0 / (2.0 * std::numbers::pi * sigma * sigma)).epsilon(1e-12));
}

TEST_CASE("factor rows are translation invariant in the interior") {
    // rows far enough from both edges see the full kernel support
    GKernel k(25, 25, 1.0);
    const Matrix& gx = k.gx();
    CHECK(gx.row(11).sum() == doctest::Approx(gx.row(12).sum()).epsilon(1e-12));
    CHECK(gx.row(12).sum() == doctest::Approx(gx.row(13).sum()).epsilon(1e-12));
}

TEST_CASE("kronecker eigenvalues match the dense kernel") {
    GKernel k(4, 3, 1.0);
    const Matrix g = oracle::dense_g(4, 3, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    Vector dense = es.eigenvalues();
    std::vector<double> kron;
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) kron.push_back(k.eigenvalues_x()[i] * k.eigenvalues_y()[j]);
    std::sort(kron.begin(), kron.end());
    for (Eigen::Index i = 0; i < dense.size(); ++i)
        CHECK(kron[static_cast<std::size_t>(i)] == doctest::Approx(dense[i]).epsilon(1e-10));
}

TEST_CASE("sqrt transform matches the dense matrix square root") {
    GKernel k(4, 3, 1.2);
    const Matrix f = random_uniform_matrix(4, 3, 17);
    const Matrix via_axes = k.sqrt_apply(f);
    const Matrix gs = oracle::dense_sqrt(oracle::dense_g(4, 3, 1.2));
    const Vector dense = gs * flatten(f);
    CHECK((flatten(via_axes) - dense).cwiseAbs().maxCoeff() < 1e-10);

    // zero frame stays zero, applying the transform twice applies G itself
    CHECK(k.sqrt_apply(Matrix::Zero(4, 3)).cwiseAbs().maxCoeff() == 0.0);
    const Matrix twice = k.sqrt_apply(k.sqrt_apply(f));
    const Matrix direct = k.gx() * f * k.gy();
    CHECK((twice - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("inverse sqrt undoes the sqrt transform") {
    GKernel k(5, 4, 1.0);
    const Matrix f = random_uniform_matrix(5, 4, 23);
    CHECK((k.inv_sqrt_apply(k.sqrt_apply(f)) - f).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(k.inv_sqrt_apply(Matrix::Zero(5, 4)).cwiseAbs().maxCoeff() == 0.0);

    const Matrix gs = oracle::dense_sqrt(oracle::dense_g(5, 4, 1.0));
    const Matrix gsi = gs.inverse();
    const Vector dense = gsi * flatten(f);
    CHECK((flatten(k.inv_sqrt_apply(f)) - dense).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("distance: identity, single pixel, dense oracle") {
    GKernel k(5, 5, 0.9);
    const Matrix a = random_uniform_matrix(5, 5, 31);
    CHECK(k.distance(a, a) == 0.0);

    Matrix b = a;
    b(2, 3) += 1.0;
    const double gii = 1.0 / (2.0 * std::numbers::pi * 0.9 * 0.9);
    CHECK(k.distance(a, b) == doctest::Approx(std::sqrt(gii)).epsilon(1e-10));

    const Matrix c = random_uniform_matrix(5, 5, 32);
    const Matrix g = oracle::dense_g(5, 5, 0.9);
    const Vector d = flatten(a) - flatten(c);
    CHECK(k.distance(a, c) == doctest::Approx(std::sqrt(d.dot(g * d))).epsilon(1e-10));
}

TEST_CASE("metric axioms on random frames") {
    GKernel k(4, 4, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_uniform_matrix(4, 4, 100 + trial);
        const Matrix b = random_uniform_matrix(4, 4, 200 + trial);
        const Matrix c = random_uniform_matrix(4, 4, 300 + trial);
        CHECK(k.distance(a, b) >= 0.0);
        CHECK(k.distance(a, b) == doctest::Approx(k.distance(b, a)).epsilon(1e-12));
        CHECK(k.distance(a, a) < 1e-12);
        CHECK(k.distance(a, c) <= k.distance(a, b) + k.distance(b, c) + 1e-10);
    }
}

TEST_CASE("G-norm identity against per-axis application") {
    GKernel k(6, 5, 1.1);
    const Matrix g = oracle::dense_g(6, 5, 1.1);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix z = random_uniform_matrix(6, 5, 400 + trial);
        const double quad = flatten(z).dot(g * flatten(z));
        const double via_sqrt = k.sqrt_apply(z).squaredNorm();
        CHECK(via_sqrt == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("kronecker equivalence holds on every shape up to 8x8") {
    for (Eigen::Index m = 1; m <= 8; ++m)
        for (Eigen::Index n = 1; n <= 8; ++n) {
            GKernel k(m, n, 1.0);
            const Matrix f = random_uniform_matrix(m, n, 1000 + 8 * m + n);
            const Matrix gs = oracle::dense_sqrt(oracle::dense_g(m, n, 1.0));
            const Vector dense = gs * flatten(f);
            const Vector mine = flatten(k.sqrt_apply(f));
            const double scale = dense.cwiseAbs().maxCoeff();
            CHECK((mine - dense).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, scale));
        }
}

TEST_CASE("invalid kernels are rejected") {
    CHECK_THROWS(GKernel(4, 4, 0.0));
    CHECK_THROWS(GKernel(0, 4, 1.0));
    GKernel k(3, 3, 1.0);
    CHECK_THROWS(k.sqrt_apply(Matrix::Zero(4, 3)));
    CHECK_THROWS(k.distance(Matrix::Zero(3, 3), Matrix::Zero(3, 4)));
}
