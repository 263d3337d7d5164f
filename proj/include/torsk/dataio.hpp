#pragma once

#include <string>
#include <vector>

#include "torsk/types.hpp"

namespace torsk {

/// N-dimensional float64 tensor in row-major order, the on-disk unit.
/// A tensor lives in two files: `<base>.header` (text key/value) and
/// `<base>.bin` (raw little-endian payload).
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    std::size_t element_count() const {
        std::size_t n = 1;
        for (std::size_t s : shape) n *= s;
        return n;
    }
};

/// Writes `<base>.header` and `<base>.bin`. Rejects non-finite values and
/// shape/payload disagreement. `base` may carry a .header/.bin suffix.
void write_tensor(const Tensor& t, const std::string& base);

/// Reads a tensor back; fails on missing files, unknown dtype/version, or a
/// payload whose byte length disagrees with the header shape.
Tensor read_tensor(const std::string& base);

Tensor from_series(const Series1D& s);
Tensor from_images(const ImageSeries& im);
Series1D to_series(const Tensor& t);   // rank-1 tensors
ImageSeries to_images(const Tensor& t);  // rank-3 tensors

void write_series(const Series1D& s, const std::string& base);
void write_images(const ImageSeries& im, const std::string& base);

/// CSV with a single `t,<name>` header line; one row per element.
void write_series_csv(const std::string& path, const Vector& values,
                      const std::string& value_name = "value", long long t0 = 0);

}  // namespace torsk
