#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlam/densemat.hpp"

namespace rlam::io {

enum class Format { csv, bin, pgm };

/// Malformed or unreadable matrix file. The message names the line (csv,
/// pgm P2) or byte offset (bin, pgm P5) where parsing failed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// From the extension: .csv, .bin, .pgm. Empty if unknown.
std::optional<Format> infer_format(const std::filesystem::path& path);

/// Gray image with its declared maximum value.
struct Image {
  DenseMatrix pixels;  // values in [0, maxval]
  unsigned maxval = 255;
  bool binary = true;  // P5 when true, P2 otherwise
};

/// "RLAM" magic, u32 version 1, u64 rows, u64 cols, then float64 entries,
/// all little-endian, row-major.
std::vector<unsigned char> encode_bin(const DenseMatrix& a);
DenseMatrix decode_bin(const std::vector<unsigned char>& bytes);

/// Numeric cells separated by commas; a non-numeric first row is a header.
DenseMatrix parse_csv(const std::string& text);
/// 17 significant digits, no header.
std::string format_csv(const DenseMatrix& a);

Image parse_pgm(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_pgm(const Image& img);

DenseMatrix read_matrix(const std::filesystem::path& path,
                        std::optional<Format> format = std::nullopt);
void write_matrix(const DenseMatrix& a, const std::filesystem::path& path,
                  std::optional<Format> format = std::nullopt);

Image read_pgm(const std::filesystem::path& path);
void write_pgm(const Image& img, const std::filesystem::path& path);

/// One value per line.
void write_vector_csv(const std::vector<double>& v, const std::filesystem::path& path,
                      const std::string& header);

std::vector<unsigned char> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::vector<unsigned char>& bytes, const std::filesystem::path& path);

}  // namespace rlam::io
