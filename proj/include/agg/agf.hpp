#pragma once

#include "agg/grid.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace agg {

/// AGF1 field dump: "AGF1", u32 d, u32 n, f64 L, f64 t, then n^d f64 values
/// in storage order. All multi-byte values little-endian.
void write_agf(std::ostream& out, const ScalarField& f);
ScalarField read_agf(std::istream& in);

void write_agf(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_agf(const std::filesystem::path& path);

/// `rho_t<time>.agf` with the time in fixed 6-decimal notation.
std::string snapshot_filename(double time);

}  // namespace agg
