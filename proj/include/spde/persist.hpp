// SPDX-License-Identifier: Apache-2.0
//
// On-disk formats: plain CSV with a header row and 17 significant digits, and
// the binary field snapshot
//
//   bytes  0..7   magic "SPDEFLD1"
//   bytes  8..11  nx  (u32, little endian)
//   bytes 12..15  nt  (u32)
//   bytes 16..23  T   (f64)
//   bytes 24..31  reserved, zero
//   then rows of nx-1 interior values (f64), time-major.
#pragma once

#include "spde/lattice.hpp"

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace spde {

inline constexpr char snapshot_magic[8] = {'S', 'P', 'D', 'E', 'F', 'L', 'D', '1'};
inline constexpr std::size_t snapshot_header_bytes = 32;

struct Snapshot {
    std::uint32_t nx = 0;
    std::uint32_t nt = 0;
    double T = 0.0;
    std::size_t rows = 0;
    std::vector<double> data;  // rows x (nx-1)
};

void write_snapshot(const std::string& path, const GridSpec& grid, std::span<const double> data);
Snapshot read_snapshot(const std::string& path);

/// Shortest round-trip-safe rendering with 17 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    /// Throws Io if the file cannot be opened.
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    CsvWriter& cell(double v);
    CsvWriter& cell(std::int64_t v);
    CsvWriter& cell(const std::string& v);
    void end_row();
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::size_t current_ = 0;
};

/// Creates `dir` (and parents) and checks that it is writable. Throws Io.
void ensure_directory(const std::string& dir);

}  // namespace spde
