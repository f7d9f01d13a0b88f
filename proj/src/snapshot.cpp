#include "nsf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double d) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t& pos) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos++])) << (8 * b);
    return v;
}

double get_f64(const std::string& in, std::size_t& pos) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos++])) << (8 * b);
    return std::bit_cast<double>(v);
}

} // namespace

void write_snapshot(const std::string& path, const TorusGrid& grid, const VecField& values,
                    double t, double eps) {
    std::string buf;
    buf.reserve(64 + values.size() * 24);
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(grid.m));
    for (int j = 0; j < grid.m; ++j) put_u32(buf, static_cast<std::uint32_t>(grid.n[j]));
    for (int j = 0; j < grid.m; ++j) put_f64(buf, grid.L[j]);
    put_f64(buf, t);
    put_f64(buf, eps);
    for (const Vec3& v : values) {
        put_f64(buf, v.x);
        put_f64(buf, v.y);
        put_f64(buf, v.z);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("snapshot: cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("snapshot: short write to " + path);
}

Snapshot read_snapshot(const std::string& path, bool require_unit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("snapshot: cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 12 || std::memcmp(buf.data(), kMagic, 4) != 0)
        throw BadMagic("snapshot: bad magic in " + path);
    std::size_t pos = 4;
    const std::uint32_t version = get_u32(buf, pos);
    if (version != kVersion)
        throw BadMagic("snapshot: unsupported version " + std::to_string(version));
    const std::uint32_t m = get_u32(buf, pos);
    if (m != 1 && m != 2) throw BadMagic("snapshot: dimension must be 1 or 2");

    const std::size_t header = 12 + m * 4 + m * 8 + 16;
    if (buf.size() < header)
        throw LengthMismatch("snapshot: truncated header, expected >= " +
                             std::to_string(header) + " bytes, got " +
                             std::to_string(buf.size()));

    std::uint32_t n[2] = {0, 0};
    double L[2] = {0.0, 0.0};
    for (std::uint32_t j = 0; j < m; ++j) n[j] = get_u32(buf, pos);
    for (std::uint32_t j = 0; j < m; ++j) L[j] = get_f64(buf, pos);
    const double t = get_f64(buf, pos);
    const double eps = get_f64(buf, pos);

    Snapshot snap;
    snap.t = t;
    snap.eps = eps;
    snap.grid = m == 1 ? TorusGrid::line(static_cast<int>(n[0]), L[0])
                       : TorusGrid::plane(static_cast<int>(n[0]), static_cast<int>(n[1]), L[0],
                                          L[1]);

    const std::size_t npts = snap.grid.points();
    const std::size_t expected = header + npts * 24;
    if (buf.size() != expected)
        throw LengthMismatch("snapshot: expected " + std::to_string(expected) +
                             " bytes, got " + std::to_string(buf.size()));

    snap.values.resize(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        snap.values[i] = {get_f64(buf, pos), get_f64(buf, pos), get_f64(buf, pos)};
        if (require_unit && std::fabs(norm(snap.values[i]) - 1.0) > 1e-9)
            throw NormViolation("snapshot: non-unit triple at index " + std::to_string(i));
    }
    return snap;
}

} // namespace nsf
