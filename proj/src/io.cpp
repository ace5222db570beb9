#include "frec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace frec {

namespace {

bool needs_quotes(const std::string& f) {
    return f.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& f) {
    if (!needs_quotes(f)) return f;
    std::string out = "\"";
    for (char c : f) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("csv: not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::runtime_error("csv: trailing junk in '" + s + "'");
    return v;
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

} // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f = open_out(path, true); // binary keeps CRLF exact on any platform
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) f << ',';
            f << quoted(row[i]);
        }
        f << "\r\n";
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started && field.empty()) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_row();
            ++i;
        } else if (c == '\n') {
            end_row();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quote in " + path);
    if (field_started || !row.empty()) end_row();
    return rows;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::vector<std::vector<std::string>> rows(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        rows[i].reserve(m.cols);
        for (int j = 0; j < m.cols; ++j)
            rows[i].push_back(format_real(m.a[static_cast<std::size_t>(i) * m.cols + j]));
    }
    write_csv(path, rows);
}

Mat read_matrix_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw std::runtime_error("csv: empty matrix in " + path);
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols)
            throw std::runtime_error("csv: ragged rows in " + path);
        for (int j = 0; j < m.cols; ++j)
            m.a[static_cast<std::size_t>(i) * m.cols + j] = parse_real(rows[i][j]);
    }
    return m;
}

void write_vector_csv(const std::string& path, const Vec& v) {
    Mat m(static_cast<int>(v.size()), 1);
    m.a = v;
    write_matrix_csv(path, m);
}

Vec read_vector_csv(const std::string& path) {
    Mat m = read_matrix_csv(path);
    if (m.cols != 1) throw std::runtime_error("csv: expected one column in " + path);
    return m.a;
}

void write_pgm16(const std::string& path, const Mat& img, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("pgm: need hi > lo");
    if (img.rows < 1 || img.cols < 1) throw std::invalid_argument("pgm: empty image");
    std::ofstream f = open_out(path, true);
    f << "P5\n" << img.cols << ' ' << img.rows << "\n65535\n";
    const double s = 65535.0 / (hi - lo);
    std::string bytes;
    bytes.reserve(img.a.size() * 2);
    for (double v : img.a) {
        double t = (v - lo) * s;
        t = std::min(65535.0, std::max(0.0, t));
        const auto q = static_cast<std::uint16_t>(std::lround(t));
        bytes += static_cast<char>(q >> 8);
        bytes += static_cast<char>(q & 0xff);
    }
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Pgm16 read_pgm16(const std::string& path) {
    std::ifstream f = open_in(path, true);
    std::string magic;
    f >> magic;
    if (magic != "P5") throw std::runtime_error("pgm: not binary P5: " + path);
    Pgm16 out;
    f >> out.cols >> out.rows >> out.maxval;
    if (!f || out.cols < 1 || out.rows < 1 || out.maxval < 256 || out.maxval > 65535)
        throw std::runtime_error("pgm: bad header in " + path);
    f.get(); // single whitespace byte after maxval
    const std::size_t count = static_cast<std::size_t>(out.rows) * out.cols;
    std::string bytes(count * 2, '\0');
    f.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (f.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw std::runtime_error("pgm: truncated data in " + path);
    out.px.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        out.px[i] = static_cast<std::uint16_t>(
            (static_cast<unsigned char>(bytes[2 * i]) << 8) |
            static_cast<unsigned char>(bytes[2 * i + 1]));
    return out;
}

std::string sha256_bytes(const void* data, std::size_t len) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int dlen = 0;
    if (EVP_Digest(data, len, digest, &dlen, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * dlen);
    for (unsigned int i = 0; i < dlen; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    const std::string bytes = read_text_file(path);
    return sha256_bytes(bytes.data(), bytes.size());
}

std::string read_text_file(const std::string& path) {
    std::ifstream f = open_in(path, true);
    std::ostringstream ss;
    ss << f.rdbuf();
    if (!f && !f.eof()) throw std::runtime_error("read failed: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f = open_out(path, true);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace frec
