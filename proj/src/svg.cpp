#include "torsk/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace torsk {

namespace {

// five-stop ramp, dark violet to yellow
void colormap(double v, int& r, int& g, int& b) {
    static const int stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    v = std::clamp(v, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(v));
    const double f = v - i;
    r = static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]));
    g = static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]));
    b = static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]));
}

}  // namespace

void write_heatmap_svg(const Matrix& values, const std::string& path, int cell_px) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_heatmap_svg: cannot open " + path);
    const Eigen::Index rows = values.rows(), cols = values.cols();
    const double lo = values.size() ? values.minCoeff() : 0.0;
    const double hi = values.size() ? values.maxCoeff() : 1.0;
    const double span = hi > lo ? hi - lo : 1.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell_px << "\" height=\""
        << rows * cell_px << "\">\n";
    char buf[128];
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            int cr, cg, cb;
            colormap((values(r, c) - lo) / span, cr, cg, cb);
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%lld\" y=\"%lld\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n",
                          static_cast<long long>(c) * cell_px, static_cast<long long>(r) * cell_px,
                          cell_px, cell_px, cr, cg, cb);
            out << buf;
        }
    out << "</svg>\n";
    if (!out.flush()) throw std::runtime_error("write_heatmap_svg: write failed for " + path);
}

}  // namespace torsk
