#pragma once

#include <utility>
#include <vector>

namespace torsk {

/// Fixed point of the scalar map x -> tanh(w x + b).
struct FixedPoint {
    double x = 0.0;
    bool stable = false;
};

/// Trajectory of length steps+1 starting at x0.
std::vector<double> iterate_map(double w, double b, double x0, long long steps);

/// All real fixed points in (-1,1), found by sign-change bisection on a
/// fine grid, with stability from the map derivative w*(1 - x*^2).
std::vector<FixedPoint> fixed_points(double w, double b);

/// Period-2 cycles: roots of the twice-iterated map that are not fixed
/// points of the single map, paired as (x1, x2) with x2 = tanh(w x1 + b).
std::vector<std::pair<double, double>> period2_cycles(double w, double b);

/// Cobweb segment endpoints: (x0,x0), then per step (x_t, x_{t+1}) and
/// (x_{t+1}, x_{t+1}); 2*steps + 1 points.
std::vector<std::pair<double, double>> cobweb_trace(double w, double b, double x0,
                                                    long long steps);

}  // namespace torsk
