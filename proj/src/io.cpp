#include "io.h"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "errors.h"
#include "experiments.h"

namespace sharplab {

namespace {

constexpr char magic[4] = {'S', 'L', 'B', 'F'};
constexpr std::uint32_t format_version = 1;

std::string grid_tag(std::uint32_t shape, std::uint32_t a, std::uint32_t b, double p,
                     double q) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "grid:%u,%u,%u,%.17g,%.17g", shape, a, b, p, q);
    return buf;
}

struct Header {
    std::uint32_t version = format_version;
    std::uint32_t scalar_bytes = 8;
    std::uint32_t shape = 0; // 0 rectangle, 1 disk
    std::uint32_t a = 0, b = 0;
    double p = 0.0, q = 0.0;
    std::uint64_t hash = 0;
};

void put(std::ofstream& os, const void* ptr, size_t n) {
    os.write(static_cast<const char*>(ptr), static_cast<std::streamsize>(n));
}

void write_container(const std::string& path, Header h, const double* data, long count) {
    h.hash = fnv1a64(grid_tag(h.shape, h.a, h.b, h.p, h.q));
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open \"" + path + "\" for writing");
    put(os, magic, 4);
    put(os, &h.version, 4);
    put(os, &h.scalar_bytes, 4);
    put(os, &h.shape, 4);
    put(os, &h.a, 4);
    put(os, &h.b, 4);
    put(os, &h.p, 8);
    put(os, &h.q, 8);
    put(os, &h.hash, 8);
    put(os, data, static_cast<size_t>(count) * 8);
    if (!os)
        throw IoError("short write to \"" + path + "\"");
}

} // namespace

void write_field(const std::string& path, const Grid& g, const Array2& u) {
    if (u.rows() != g.n1 || u.cols() != g.n2)
        throw IoError("field does not match its grid");
    Header h;
    h.shape = 0;
    h.a = static_cast<std::uint32_t>(g.n1);
    h.b = static_cast<std::uint32_t>(g.n2);
    h.p = g.L1;
    h.q = g.L2;
    // row-major: the first index is the slow one
    std::vector<double> buf(static_cast<size_t>(g.n1) * g.n2);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            buf[static_cast<size_t>(i) * g.n2 + j] = u(i, j);
    write_container(path, h, buf.data(), g.count());
}

void write_field(const std::string& path, const DiskGrid& dg, const Eigen::ArrayXd& u) {
    if (u.size() != dg.size())
        throw IoError("field does not match its grid");
    Header h;
    h.shape = 1;
    h.a = static_cast<std::uint32_t>(dg.nr);
    h.b = static_cast<std::uint32_t>(dg.nt);
    h.p = dg.R;
    h.q = 0.0;
    write_container(path, h, u.data(), u.size());
}

FieldFile read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open \"" + path + "\"");
    char m[4];
    Header h;
    is.read(m, 4);
    is.read(reinterpret_cast<char*>(&h.version), 4);
    is.read(reinterpret_cast<char*>(&h.scalar_bytes), 4);
    is.read(reinterpret_cast<char*>(&h.shape), 4);
    is.read(reinterpret_cast<char*>(&h.a), 4);
    is.read(reinterpret_cast<char*>(&h.b), 4);
    is.read(reinterpret_cast<char*>(&h.p), 8);
    is.read(reinterpret_cast<char*>(&h.q), 8);
    is.read(reinterpret_cast<char*>(&h.hash), 8);
    if (!is || std::memcmp(m, magic, 4) != 0)
        throw IoError("\"" + path + "\" is not a field container");
    if (h.version != format_version)
        throw IoError("unsupported field container version in \"" + path + "\"");
    if (h.scalar_bytes != 8)
        throw IoError("unsupported scalar width in \"" + path + "\"");
    if (h.hash != fnv1a64(grid_tag(h.shape, h.a, h.b, h.p, h.q)))
        throw IoError("grid hash mismatch in \"" + path + "\"");

    FieldFile f;
    long count = 0;
    if (h.shape == 0) {
        f.shape = Shape::rectangle;
        f.grid = make_grid(static_cast<int>(h.a), static_cast<int>(h.b), h.p, h.q);
        count = f.grid.count();
    } else if (h.shape == 1) {
        f.shape = Shape::disk;
        f.nr = static_cast<int>(h.a);
        f.nt = static_cast<int>(h.b);
        f.R = h.p;
        count = 1 + static_cast<long>(f.nr) * f.nt;
    } else {
        throw IoError("unknown grid shape in \"" + path + "\"");
    }
    f.values.resize(count);
    is.read(reinterpret_cast<char*>(f.values.data()), count * 8);
    if (!is)
        throw IoError("truncated field container \"" + path + "\"");
    return f;
}

Array2 rectangle_samples(const FieldFile& f) {
    if (f.shape != Shape::rectangle)
        throw IoError("field container does not hold a rectangle field");
    Array2 u(f.grid.n1, f.grid.n2);
    for (int i = 0; i < f.grid.n1; ++i)
        for (int j = 0; j < f.grid.n2; ++j)
            u(i, j) = f.values(static_cast<long>(i) * f.grid.n2 + j);
    return u;
}

void write_field_csv(const std::string& path, const Grid& g, const Array2& u) {
    std::string s = "x1,x2,value\n";
    char line[128];
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", g.x1(i), g.x2(j), u(i, j));
            s += line;
        }
    write_text(path, s);
}

void write_field_csv(const std::string& path, const DiskGrid& dg, const Eigen::ArrayXd& u) {
    std::string s = "r,theta,value\n";
    char line[128];
    for (long i = 0; i < dg.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", dg.radius(i), dg.theta(i),
                      u(i));
        s += line;
    }
    write_text(path, s);
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open \"" + path + "\" for writing");
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!os)
        throw IoError("short write to \"" + path + "\"");
}

std::string read_text(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open \"" + path + "\"");
    std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return s;
}

} // namespace sharplab
