#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mimome/errors.hpp"

namespace mimome {

// Complex flat-fading channel matrix: one column per transmit antenna,
// one row per receive antenna.
using ChannelMatrix = Eigen::MatrixXcd;

struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

// Top 53 bits of a 64-bit word mapped to [0, 1).
inline double uniform53(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Draws an i.i.d. CN(0,1) matrix. The generator is pinned so that a seed
// identifies the matrix exactly: std::mt19937_64 seeded with `seed.value`,
// entries filled row-major, two engine draws per entry mapped to [0,1) by
// 53-bit scaling, then Box-Muller with radius sqrt(-2 ln(1-u1)) and angle
// 2*pi*u2; the cosine branch feeds the real part, the sine branch the
// imaginary part, both scaled by sqrt(1/2) for unit complex variance.
inline ChannelMatrix generate_rayleigh(int rows, int cols, Seed seed) {
    if (rows < 1 || cols < 1) {
        throw DimensionError("generate_rayleigh: rows and cols must be >= 1 (got " +
                             std::to_string(rows) + "x" + std::to_string(cols) + ")");
    }
    std::mt19937_64 rng(seed.value);
    ChannelMatrix h(rows, cols);
    const double scale = std::sqrt(0.5);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double u1 = detail::uniform53(rng());
            const double u2 = detail::uniform53(rng());
            const double radius = std::sqrt(-2.0 * std::log1p(-u1));
            const double angle = 2.0 * std::numbers::pi * u2;
            h(r, c) = scale * std::complex<double>(radius * std::cos(angle),
                                                   radius * std::sin(angle));
        }
    }
    return h;
}

// Returns the submatrix holding the named columns. Indices are 1-based and
// must be strictly increasing (duplicates and out-of-range indices are
// selection errors).
inline ChannelMatrix select_columns(const ChannelMatrix& h, const std::vector<int>& indices) {
    int prev = 0;
    for (int idx : indices) {
        if (idx < 1 || idx > h.cols()) {
            throw DimensionError("select_columns: index " + std::to_string(idx) +
                                 " out of range [1, " + std::to_string(h.cols()) + "]");
        }
        if (idx <= prev) {
            throw DimensionError("select_columns: indices must be strictly increasing (got " +
                                 std::to_string(idx) + " after " + std::to_string(prev) + ")");
        }
        prev = idx;
    }
    ChannelMatrix sub(h.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        sub.col(static_cast<Eigen::Index>(j)) = h.col(indices[j] - 1);
    }
    return sub;
}

enum class MatrixFileFormat { text, binary };

namespace detail {

inline constexpr char kMatrixTextHeader[] = "MIMOME-MAT v1";
inline constexpr char kMatrixBinaryMagic[8] = {'M', 'I', 'M', 'O', 'M', 'T', 'B', '1'};

inline void check_loaded_entries(const ChannelMatrix& h) {
    if (!h.allFinite()) {
        throw FormatError("load_matrix: matrix contains non-finite entries");
    }
}

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32_le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("load_matrix: truncated binary header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

// Text format: line 1 `MIMOME-MAT v1 <rows> <cols>`, then rows*cols lines in
// row-major order, each "<re> <im>" printed with round-trip precision.
// Binary format: 16-byte header (8-byte magic "MIMOMTB1", rows and cols as
// little-endian u32) followed by rows*cols little-endian double pairs,
// row-major.
inline void store_matrix(const ChannelMatrix& h, std::ostream& out,
                         MatrixFileFormat format = MatrixFileFormat::text) {
    if (format == MatrixFileFormat::text) {
        out << detail::kMatrixTextHeader << ' ' << h.rows() << ' ' << h.cols() << '\n';
        char line[64];
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                std::snprintf(line, sizeof line, "%.17g %.17g", h(r, c).real(), h(r, c).imag());
                out << line << '\n';
            }
        }
    } else {
        out.write(detail::kMatrixBinaryMagic, sizeof detail::kMatrixBinaryMagic);
        detail::put_u32_le(out, static_cast<std::uint32_t>(h.rows()));
        detail::put_u32_le(out, static_cast<std::uint32_t>(h.cols()));
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                const double pair[2] = {h(r, c).real(), h(r, c).imag()};
                out.write(reinterpret_cast<const char*>(pair), sizeof pair);
            }
        }
    }
    if (!out) throw FormatError("store_matrix: write failed");
}

// Loads either format, detected from the leading bytes.
inline ChannelMatrix load_matrix(std::istream& in) {
    char magic[8] = {};
    in.read(magic, sizeof magic);
    if (!in) throw FormatError("load_matrix: missing header");

    if (std::memcmp(magic, detail::kMatrixBinaryMagic, sizeof magic) == 0) {
        const std::uint32_t rows = detail::get_u32_le(in);
        const std::uint32_t cols = detail::get_u32_le(in);
        if (rows < 1 || cols < 1) throw FormatError("load_matrix: invalid dimensions in header");
        ChannelMatrix h(rows, cols);
        for (std::uint32_t r = 0; r < rows; ++r) {
            for (std::uint32_t c = 0; c < cols; ++c) {
                double pair[2];
                in.read(reinterpret_cast<char*>(pair), sizeof pair);
                if (!in) throw FormatError("load_matrix: truncated binary payload");
                h(r, c) = std::complex<double>(pair[0], pair[1]);
            }
        }
        if (in.get() != std::istream::traits_type::eof()) {
            throw FormatError("load_matrix: trailing bytes after binary payload");
        }
        detail::check_loaded_entries(h);
        return h;
    }

    // Text path: re-read from the start of the stream contents we consumed.
    std::string rest(magic, sizeof magic);
    {
        std::ostringstream tail;
        tail << in.rdbuf();
        rest += tail.str();
    }
    std::istringstream text(rest);
    std::string tag, version;
    long rows = 0, cols = 0;
    text >> tag >> version >> rows >> cols;
    if (!text || tag + " " + version != detail::kMatrixTextHeader) {
        throw FormatError("load_matrix: unrecognized header");
    }
    if (rows < 1 || cols < 1) throw FormatError("load_matrix: invalid dimensions in header");
    ChannelMatrix h(rows, cols);
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            double re = 0.0, im = 0.0;
            if (!(text >> re >> im)) {
                throw FormatError("load_matrix: payload shorter than rows*cols entries");
            }
            h(r, c) = std::complex<double>(re, im);
        }
    }
    std::string extra;
    if (text >> extra) {
        throw FormatError("load_matrix: payload longer than rows*cols entries");
    }
    detail::check_loaded_entries(h);
    return h;
}

inline void store_matrix_file(const ChannelMatrix& h, const std::string& path,
                              MatrixFileFormat format = MatrixFileFormat::text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("store_matrix: cannot open '" + path + "' for writing");
    store_matrix(h, out, format);
}

inline ChannelMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("load_matrix: cannot open '" + path + "'");
    return load_matrix(in);
}

}  // namespace mimome
