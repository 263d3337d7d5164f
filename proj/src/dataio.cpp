#include "torsk/dataio.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace torsk {

namespace {

std::string strip_suffix(const std::string& base) {
    for (const char* suf : {".header", ".bin"}) {
        std::string s(suf);
        if (base.size() > s.size() && base.compare(base.size() - s.size(), s.size(), s) == 0)
            return base.substr(0, base.size() - s.size());
    }
    return base;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("tensor io: big-endian hosts are not supported");
}

}  // namespace

void write_tensor(const Tensor& t, const std::string& base_in) {
    require_little_endian();
    const std::string base = strip_suffix(base_in);
    if (t.data.size() != t.element_count())
        throw std::runtime_error("write_tensor: shape/payload mismatch for " + base);
    for (double v : t.data)
        if (!std::isfinite(v))
            throw std::runtime_error("write_tensor: non-finite value, refusing to write " + base);

    std::ostringstream shape;
    for (std::size_t i = 0; i < t.shape.size(); ++i) {
        if (i) shape << ",";
        shape << t.shape[i];
    }

    std::ofstream hdr(base + ".header");
    if (!hdr) throw std::runtime_error("write_tensor: cannot open " + base + ".header");
    hdr << "dtype = float64\n"
        << "shape = " << shape.str() << "\n"
        << "byte_order = little\n"
        << "version = 1\n";
    if (!hdr.flush()) throw std::runtime_error("write_tensor: write failed for " + base + ".header");

    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("write_tensor: cannot open " + base + ".bin");
    bin.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    if (!bin.flush()) throw std::runtime_error("write_tensor: write failed for " + base + ".bin");
}

Tensor read_tensor(const std::string& base_in) {
    require_little_endian();
    const std::string base = strip_suffix(base_in);
    std::ifstream hdr(base + ".header");
    if (!hdr) throw std::runtime_error("read_tensor: cannot open " + base + ".header");

    std::string dtype, byte_order, shape_str;
    long long version = -1;
    bool saw_shape = false;
    std::string line;
    while (std::getline(hdr, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("read_tensor: malformed header line '" + line + "' in " + base);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "dtype") dtype = val;
        else if (key == "shape") { shape_str = val; saw_shape = true; }
        else if (key == "byte_order") byte_order = val;
        else if (key == "version") version = std::stoll(val);
        else throw std::runtime_error("read_tensor: unknown header key '" + key + "' in " + base);
    }
    if (dtype != "float64")
        throw std::runtime_error("read_tensor: unknown dtype '" + dtype + "' in " + base);
    if (byte_order != "little")
        throw std::runtime_error("read_tensor: unknown byte_order '" + byte_order + "' in " + base);
    if (version != 1)
        throw std::runtime_error("read_tensor: unsupported version " + std::to_string(version) + " in " + base);
    if (!saw_shape) throw std::runtime_error("read_tensor: missing shape in " + base);

    Tensor t;
    std::stringstream ss(shape_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        long long v = std::stoll(tok);
        if (v < 0) throw std::runtime_error("read_tensor: negative shape entry in " + base);
        t.shape.push_back(static_cast<std::size_t>(v));
    }
    if (t.shape.empty()) throw std::runtime_error("read_tensor: empty shape in " + base);

    std::ifstream bin(base + ".bin", std::ios::binary | std::ios::ate);
    if (!bin) throw std::runtime_error("read_tensor: cannot open " + base + ".bin");
    const std::size_t bytes = static_cast<std::size_t>(bin.tellg());
    const std::size_t want = t.element_count() * sizeof(double);
    if (bytes != want)
        throw std::runtime_error("read_tensor: payload of " + base + ".bin is " + std::to_string(bytes) +
                                 " bytes, header shape requires " + std::to_string(want));
    bin.seekg(0);
    t.data.resize(t.element_count());
    bin.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(want));
    if (static_cast<std::size_t>(bin.gcount()) != want)
        throw std::runtime_error("read_tensor: short read on " + base + ".bin");
    for (double v : t.data)
        if (!std::isfinite(v))
            throw std::runtime_error("read_tensor: non-finite value in " + base + ".bin");
    return t;
}

Tensor from_series(const Series1D& s) {
    Tensor t;
    t.shape = {static_cast<std::size_t>(s.values.size())};
    t.data.assign(s.values.data(), s.values.data() + s.values.size());
    return t;
}

Tensor from_images(const ImageSeries& im) {
    Tensor t;
    t.shape = {static_cast<std::size_t>(im.size()), static_cast<std::size_t>(im.rows()),
               static_cast<std::size_t>(im.cols())};
    t.data.reserve(t.element_count());
    for (const Matrix& f : im.frames)
        for (Eigen::Index r = 0; r < f.rows(); ++r)
            for (Eigen::Index c = 0; c < f.cols(); ++c) t.data.push_back(f(r, c));
    return t;
}

Series1D to_series(const Tensor& t) {
    if (t.shape.size() != 1)
        throw std::runtime_error("to_series: expected rank-1 tensor, got rank " +
                                 std::to_string(t.shape.size()));
    Series1D s;
    s.values = Eigen::Map<const Vector>(t.data.data(), static_cast<Eigen::Index>(t.data.size()));
    return s;
}

ImageSeries to_images(const Tensor& t) {
    if (t.shape.size() != 3)
        throw std::runtime_error("to_images: expected rank-3 tensor, got rank " +
                                 std::to_string(t.shape.size()));
    const auto T = t.shape[0], M = t.shape[1], N = t.shape[2];
    if (T < 1 || M < 1 || N < 1)
        throw std::runtime_error("to_images: all dimensions must be positive");
    ImageSeries im;
    im.frames.reserve(T);
    const double* p = t.data.data();
    for (std::size_t k = 0; k < T; ++k) {
        Matrix f(M, N);
        for (std::size_t r = 0; r < M; ++r)
            for (std::size_t c = 0; c < N; ++c) f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *p++;
        im.frames.push_back(std::move(f));
    }
    return im;
}

void write_series(const Series1D& s, const std::string& base) { write_tensor(from_series(s), base); }
void write_images(const ImageSeries& im, const std::string& base) { write_tensor(from_images(im), base); }

void write_series_csv(const std::string& path, const Vector& values, const std::string& value_name,
                      long long t0) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_series_csv: cannot open " + path);
    out << "t," << value_name << "\n";
    char buf[40];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << (t0 + i) << "," << buf << "\n";
    }
    if (!out.flush()) throw std::runtime_error("write_series_csv: write failed for " + path);
}

}  // namespace torsk
