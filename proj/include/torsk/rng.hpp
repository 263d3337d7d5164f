#pragma once

#include <cstdint>
#include <random>

#include "torsk/types.hpp"

namespace torsk {

// 53-bit uniform in [0,1). std::uniform_real_distribution is not pinned down
// by the standard, so we map engine output ourselves to keep seeded streams
// identical across toolchains.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(std::mt19937_64& g) { return 2.0 * uniform01(g) - 1.0; }

/// Dense matrix with i.i.d. uniform(-1,1) entries, filled row by row.
inline Matrix random_uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform_pm1(g);
    return m;
}

}  // namespace torsk
