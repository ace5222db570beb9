#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frec/linalg.hpp"

namespace frec {

// Shortest decimal form that round-trips a double exactly (17 significant
// digits, '.' separator, no locale).
std::string format_real(double v);

// One CSV record per inner vector, RFC 4180: CRLF line ends, fields quoted
// when they contain a comma, quote, or line break.
void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> read_csv(const std::string& path);

// Numeric matrices and vectors as header-less CSV; vectors are one column.
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vec& v);
Vec read_vector_csv(const std::string& path);

// Binary P5 PGM, maxval 65535, big-endian samples. Values are mapped
// affinely from [lo, hi] (clamping outliers); hi must exceed lo. The
// caller records (lo, hi) wherever the image is indexed.
void write_pgm16(const std::string& path, const Mat& img, double lo, double hi);

struct Pgm16 {
    int rows = 0;
    int cols = 0;
    int maxval = 0;
    std::vector<std::uint16_t> px; // row-major
};
Pgm16 read_pgm16(const std::string& path);

// Lowercase hex SHA-256.
std::string sha256_bytes(const void* data, std::size_t len);
std::string sha256_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace frec
