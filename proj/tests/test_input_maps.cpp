#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torsk/input_maps.hpp"
#include "torsk/rng.hpp"

using namespace torsk;

TEST_CASE("resample identity and constants") {
    const Matrix f = random_uniform_matrix(6, 5, 1);
    const Vector same = resample_pixels(f, 6, 5);
    CHECK((same - flatten(f)).cwiseAbs().maxCoeff() == 0.0);

    const Matrix c = Matrix::Constant(8, 8, 3.25);
    const Vector small = resample_pixels(c, 3, 5);
    for (Eigen::Index i = 0; i < small.size(); ++i) CHECK(small[i] == doctest::Approx(3.25));

    CHECK_THROWS(resample_pixels(c, 9, 8));  // upsampling
}

TEST_CASE("4x4 ramp to 2x2 equals block averages") {
    Matrix f(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) f(r, c) = 4 * r + c;
    const Vector out = resample_pixels(f, 2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double avg = f.block(2 * i, 2 * j, 2, 2).mean();
            CHECK(out[2 * i + j] == doctest::Approx(avg).epsilon(1e-12));
        }
}

TEST_CASE("gaussian kernel normalization and limits") {
    CHECK(gaussian_kernel(1, 1.0)(0, 0) == doctest::Approx(1.0));
    const Matrix flat = gaussian_kernel(3, 1e6);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(flat(a, b) == doctest::Approx(1.0 / 9).epsilon(1e-9));
    const Matrix k5 = gaussian_kernel(5, 1.0);
    CHECK(k5.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // symmetric under 90 degree rotation
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) CHECK(k5(a, b) == doctest::Approx(k5(b, 4 - a)).epsilon(1e-12));
}

TEST_CASE("convolution identities and brute-force oracle") {
    const Matrix f = random_uniform_matrix(6, 6, 3);
    Matrix one(1, 1);
    one << 1.0;
    CHECK((convolve_valid(f, one) - flatten(f)).cwiseAbs().maxCoeff() == 0.0);

    // impulse response reproduces the kernel at the delta's neighborhood
    Matrix delta = Matrix::Zero(7, 7);
    delta(3, 3) = 1.0;
    const Matrix g = gaussian_kernel(3, 0.8);
    const Matrix r = unflatten(convolve_valid(delta, g), 5, 5);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(r(2 + 1 - a, 2 + 1 - b) == doctest::Approx(g(a, b)));

    const Matrix k = random_uniform_matrix(3, 3, 4);
    const Vector mine = convolve_valid(f, k);
    const Vector brute = oracle::brute_convolve(f, k);
    CHECK((mine - brute).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS(convolve_valid(Matrix::Zero(2, 2), Matrix::Zero(3, 3)));
}

TEST_CASE("dct features: constants, zeros, round trip") {
    const Matrix c = Matrix::Constant(6, 4, 2.0);
    const Vector coeffs = dct2_features(c, 6, 4);
    CHECK(coeffs[0] == doctest::Approx(2.0 * std::sqrt(24.0)).epsilon(1e-12));
    for (Eigen::Index i = 1; i < coeffs.size(); ++i) CHECK(std::abs(coeffs[i]) < 1e-12);

    CHECK(dct2_features(Matrix::Zero(5, 5), 3, 3).cwiseAbs().maxCoeff() == 0.0);

    const Matrix f = random_uniform_matrix(8, 8, 9);
    const Matrix y = unflatten(dct2_features(f, 8, 8), 8, 8);
    const Matrix d8 = dct_matrix(8);
    const Matrix back = d8.transpose() * y * d8;
    CHECK((back - f).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gradient features") {
    const Matrix c = Matrix::Constant(5, 5, 1.0);
    CHECK(gradient_features(c, 0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(gradient_features(c, 1).cwiseAbs().maxCoeff() == 0.0);

    Matrix ramp(4, 6);  // slope 2 along x (columns)
    for (int r = 0; r < 4; ++r)
        for (int cc = 0; cc < 6; ++cc) ramp(r, cc) = 2.0 * cc;
    const Vector gx = gradient_features(ramp, 0);
    for (Eigen::Index i = 0; i < gx.size(); ++i) CHECK(gx[i] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gradient_features(ramp, 1).cwiseAbs().maxCoeff() < 1e-12);

    // finite-difference oracle on random data
    const Matrix f = random_uniform_matrix(5, 5, 11);
    const Matrix g = unflatten(gradient_features(f, 1), 5, 5);
    for (int r = 1; r < 4; ++r)
        for (int cc = 0; cc < 5; ++cc)
            CHECK(g(r, cc) == doctest::Approx(0.5 * (f(r + 1, cc) - f(r - 1, cc))).epsilon(1e-12));
    for (int cc = 0; cc < 5; ++cc) {
        CHECK(g(0, cc) == doctest::Approx(f(1, cc) - f(0, cc)));
        CHECK(g(4, cc) == doctest::Approx(f(4, cc) - f(3, cc)));
    }
}

TEST_CASE("random projection: zeros, determinism, linearity") {
    const Matrix z = Matrix::Zero(4, 4);
    CHECK(random_projection(z, 7, 5).cwiseAbs().maxCoeff() == 0.0);

    const Matrix u = random_uniform_matrix(4, 4, 6), v = random_uniform_matrix(4, 4, 7);
    const Vector a = random_projection(u, 9, 5), a2 = random_projection(u, 9, 5);
    CHECK((a - a2).cwiseAbs().maxCoeff() == 0.0);

    const Vector lhs = random_projection(2.0 * u + 3.0 * v, 9, 5);
    const Vector rhs = 2.0 * random_projection(u, 9, 5) + 3.0 * random_projection(v, 9, 5);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

namespace {

std::vector<InputMapSpec> paper_table() {
    std::vector<InputMapSpec> specs;
    specs.push_back({MapKind::Pixels, 30, 30, 3.0});
    specs.push_back({MapKind::GaussianConv, 5, 5, 2.0});
    specs.push_back({MapKind::GaussianConv, 10, 10, 1.5});
    specs.push_back({MapKind::GaussianConv, 15, 15, 1.0});
    specs.push_back({MapKind::RandomConv, 5, 5, 1.0, 0.0, 1});
    specs.push_back({MapKind::RandomConv, 10, 10, 1.0, 0.0, 2});
    specs.push_back({MapKind::RandomConv, 20, 20, 1.0, 0.0, 3});
    specs.push_back({MapKind::DCT, 15, 15, 1.0});
    specs.push_back({MapKind::DCT, 15, 15, 1.0});
    specs.push_back({MapKind::Gradient, 30, 30, 1.0});
    specs.push_back({MapKind::Gradient, 30, 30, 1.0});
    return specs;
}

}  // namespace

TEST_CASE("pipeline of the reference table produces the expected dimension") {
    InputPipeline p(paper_table(), 30, 30);
    // 900 + 676 + 441 + 256 + 676 + 441 + 121 + 225 + 225 + 900 + 900
    CHECK(p.output_dim() == 5761);
    const Matrix f = random_uniform_matrix(30, 30, 20);
    CHECK(p.apply(f).size() == 5761);
    // the two gradient entries pick up the two axes
    CHECK(p.specs()[9].axis == 0);
    CHECK(p.specs()[10].axis == 1);
}

TEST_CASE("single pixels map with unit scale is the flattened frame") {
    InputPipeline p({{MapKind::Pixels, 4, 4, 1.0}}, 4, 4);
    const Matrix f = random_uniform_matrix(4, 4, 21);
    CHECK((p.apply(f) - flatten(f)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("doubling every scale doubles the output") {
    auto specs = paper_table();
    InputPipeline p1(specs, 30, 30);
    for (auto& s : specs) s.scale *= 2.0;
    InputPipeline p2(specs, 30, 30);
    const Matrix f = random_uniform_matrix(30, 30, 22);
    const Vector a = p1.apply(f), b = p2.apply(f);
    CHECK((2.0 * a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pipeline is linear in the frame") {
    InputPipeline p(paper_table(), 30, 30);
    const Matrix u = random_uniform_matrix(30, 30, 23), v = random_uniform_matrix(30, 30, 24);
    const Vector lhs = p.apply(0.7 * u - 1.3 * v);
    const Vector rhs = 0.7 * p.apply(u) - 1.3 * p.apply(v);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pipeline rejects mismatched frames and bad specs") {
    InputPipeline p({{MapKind::Pixels, 4, 4, 1.0}}, 4, 4);
    CHECK_THROWS(p.apply(Matrix::Zero(5, 4)));
    CHECK_THROWS(InputPipeline({{MapKind::Pixels, 5, 4, 1.0}}, 4, 4));   // output too big
    CHECK_THROWS(InputPipeline({{MapKind::Pixels, 4, 4, -1.0}}, 4, 4));  // bad scale
    CHECK_THROWS(InputPipeline({{MapKind::DCT, 6, 6, 1.0}}, 4, 4));      // dct block too big
    CHECK_THROWS(InputPipeline({}, 4, 4));
}
