#include "torsk/bifurcation.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace torsk {

namespace {

constexpr int kGridPoints = 10000;
constexpr double kEdge = 1e-9;  // tanh confines the dynamics to (-1,1)

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

// all roots of f on (-1,1) via grid scan + bisection
std::vector<double> grid_roots(const std::function<double(double)>& f) {
    std::vector<double> roots;
    const double lo = -1.0 + kEdge, hi = 1.0 - kEdge;
    double xprev = lo, fprev = f(lo);
    for (int i = 1; i <= kGridPoints; ++i) {
        const double x = lo + (hi - lo) * i / kGridPoints;
        const double fx = f(x);
        if (fprev == 0.0) {
            roots.push_back(xprev);
        } else if ((fprev < 0) != (fx < 0)) {
            roots.push_back(bisect(f, xprev, x));
        }
        xprev = x;
        fprev = fx;
    }
    if (fprev == 0.0) roots.push_back(xprev);
    // merge near-duplicates from roots landing on grid nodes
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || std::abs(r - out.back()) > 1e-9) out.push_back(r);
    return out;
}

}  // namespace

std::vector<double> iterate_map(double w, double b, double x0, long long steps) {
    if (steps < 0) throw std::invalid_argument("iterate_map: steps must be nonnegative");
    std::vector<double> xs(static_cast<std::size_t>(steps) + 1);
    xs[0] = x0;
    for (long long t = 0; t < steps; ++t)
        xs[static_cast<std::size_t>(t) + 1] = std::tanh(w * xs[static_cast<std::size_t>(t)] + b);
    return xs;
}

std::vector<FixedPoint> fixed_points(double w, double b) {
    auto f = [w, b](double x) { return std::tanh(w * x + b) - x; };
    std::vector<FixedPoint> fps;
    for (double r : grid_roots(f)) {
        const double fx = std::tanh(w * r + b);
        // map derivative at the root; tangency (|d| == 1) counts as unstable
        const double d = w * (1.0 - fx * fx);
        fps.push_back({r, std::abs(d) < 1.0});
    }
    return fps;
}

std::vector<std::pair<double, double>> period2_cycles(double w, double b) {
    auto f1 = [w, b](double x) { return std::tanh(w * x + b); };
    auto f2 = [&](double x) { return f1(f1(x)) - x; };
    std::vector<std::pair<double, double>> cycles;
    for (double r : grid_roots(f2)) {
        if (std::abs(f1(r) - r) < 1e-8) continue;  // fixed point of the single map
        const double partner = f1(r);
        const double a = std::min(r, partner), bb = std::max(r, partner);
        bool seen = false;
        for (const auto& c : cycles)
            if (std::abs(c.first - a) < 1e-9 && std::abs(c.second - bb) < 1e-9) seen = true;
        if (!seen) cycles.emplace_back(a, bb);
    }
    return cycles;
}

std::vector<std::pair<double, double>> cobweb_trace(double w, double b, double x0,
                                                    long long steps) {
    if (steps < 1) throw std::invalid_argument("cobweb_trace: steps must be >= 1");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(2 * steps) + 1);
    double x = x0;
    pts.emplace_back(x, x);
    for (long long t = 0; t < steps; ++t) {
        const double xn = std::tanh(w * x + b);
        pts.emplace_back(x, xn);   // vertical segment endpoint
        pts.emplace_back(xn, xn);  // horizontal back to the diagonal
        x = xn;
    }
    return pts;
}

}  // namespace torsk
