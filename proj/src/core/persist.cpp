// SPDX-License-Identifier: Apache-2.0
#include "spde/persist.hpp"

#include "spde/error.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>

namespace spde {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::vector<char>& buf, std::size_t at, T v) {
    std::memcpy(buf.data() + at, &v, sizeof(T));
}

template <class T>
T get(const std::vector<char>& buf, std::size_t at) {
    T v;
    std::memcpy(&v, buf.data() + at, sizeof(T));
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const GridSpec& grid, std::span<const double> data) {
    const std::size_t n = grid.interior();
    require(n > 0 && data.size() % n == 0, ErrorCode::Dimension,
            "snapshot data is not a whole number of rows");
    std::vector<char> header(snapshot_header_bytes, 0);
    std::memcpy(header.data(), snapshot_magic, 8);
    put<std::uint32_t>(header, 8, grid.nx);
    put<std::uint32_t>(header, 12, grid.nt);
    put<double>(header, 16, grid.T);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + path + "' for writing");
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    require(static_cast<bool>(out), ErrorCode::Io, "write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open '" + path + "'");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(bytes.size() >= snapshot_header_bytes, ErrorCode::Io,
            "'" + path + "' is shorter than a snapshot header");
    require(std::memcmp(bytes.data(), snapshot_magic, 8) == 0, ErrorCode::Io,
            "'" + path + "' is not a field snapshot (bad magic)");
    Snapshot s;
    s.nx = get<std::uint32_t>(bytes, 8);
    s.nt = get<std::uint32_t>(bytes, 12);
    s.T = get<double>(bytes, 16);
    require(s.nx >= 2, ErrorCode::Io, "snapshot has nx < 2");
    const std::size_t n = s.nx - 1;
    const std::size_t payload = bytes.size() - snapshot_header_bytes;
    require(payload % (n * sizeof(double)) == 0, ErrorCode::Io,
            "snapshot payload is not a whole number of rows");
    s.rows = payload / (n * sizeof(double));
    s.data.resize(s.rows * n);
    std::memcpy(s.data.data(), bytes.data() + snapshot_header_bytes, payload);
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), path_(path), columns_(header.size()) {
    require(static_cast<bool>(out_), ErrorCode::Io, "cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(std::int64_t v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
    require(current_ < columns_, ErrorCode::Internal, "too many CSV cells in a row of " + path_);
    out_ << (current_ ? "," : "") << v;
    ++current_;
    return *this;
}

void CsvWriter::end_row() {
    require(current_ == columns_, ErrorCode::Internal, "short CSV row in " + path_);
    out_ << '\n';
    current_ = 0;
}

void CsvWriter::close() {
    out_.close();
    require(!out_.fail(), ErrorCode::Io, "write to '" + path_ + "' failed");
}

void ensure_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec && fs::is_directory(dir), ErrorCode::Io,
            "cannot create output directory '" + dir + "'");
    const fs::path probe = fs::path(dir) / ".spdelab_write_probe";
    {
        std::ofstream f(probe);
        require(static_cast<bool>(f), ErrorCode::Io, "output directory '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
}

}  // namespace spde
