#include "agg/agf.hpp"

#include "agg/error.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace agg {
namespace {

constexpr char kMagic[4] = {'A', 'G', 'F', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError("AGF1: truncated stream");
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_agf(std::ostream& out, const ScalarField& f) {
    f.validate();
    out.write(kMagic, 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.dimension()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.points_per_axis()));
    put_le<double>(out, f.grid.box_length());
    put_le<double>(out, f.time);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) put_le<double>(out, f.values(i));
    if (!out) throw FormatError("AGF1: write failed");
}

ScalarField read_agf(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError("AGF1: truncated header");
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("AGF1: bad magic");
    const auto d = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint32_t>(in);
    const double length = get_le<double>(in);
    const double time = get_le<double>(in);
    if (n > (1u << 16) || !is_valid_grid(static_cast<int>(d), static_cast<int>(n), length)) {
        throw FormatError("AGF1: invalid grid header");
    }
    Grid grid(static_cast<int>(d), static_cast<int>(n), length);
    Eigen::ArrayXd values(grid.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        try {
            values(i) = get_le<double>(in);
        } catch (const FormatError&) {
            throw FormatError("AGF1: size mismatch, expected " + std::to_string(grid.size()) + " values");
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("AGF1: size mismatch, trailing bytes after values");
    }
    return ScalarField(grid, std::move(values), time);
}

void write_agf(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_agf(out, f);
}

ScalarField read_agf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_agf(in);
}

std::string snapshot_filename(double time) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "rho_t%.6f.agf", time);
    return buf;
}

}  // namespace agg
