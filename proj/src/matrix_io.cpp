#include "rlam/matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rlam::io {

namespace {

constexpr char kMagic[4] = {'R', 'L', 'A', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8;

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<unsigned char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const std::vector<unsigned char>& in, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(in[offset + i]) << (8 * i);
  }
  return value;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::optional<Format> infer_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".csv") return Format::csv;
  if (ext == ".bin") return Format::bin;
  if (ext == ".pgm") return Format::pgm;
  return std::nullopt;
}

std::vector<unsigned char> encode_bin(const DenseMatrix& a) {
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + a.size() * 8);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, a.rows());
  put_le<std::uint64_t>(out, a.cols());
  for (double x : a.entries()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(x));
  return out;
}

DenseMatrix decode_bin(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("truncated header: " + std::to_string(bytes.size()) + " bytes at offset 0");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic at offset 0");
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kVersion) {
    throw FormatError("unsupported version " + std::to_string(version) + " at offset 4");
  }
  const auto rows = get_le<std::uint64_t>(bytes, 8);
  const auto cols = get_le<std::uint64_t>(bytes, 16);
  if (rows == 0 || cols == 0) throw FormatError("zero dimension at offset 8");
  if (cols > (bytes.size() - kHeaderBytes) / 8 / rows ||
      bytes.size() != kHeaderBytes + rows * cols * 8) {
    throw FormatError("payload size " + std::to_string(bytes.size() - kHeaderBytes) +
                      " does not match " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " at offset " + std::to_string(kHeaderBytes));
  }
  std::vector<double> entries(rows * cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::size_t off = kHeaderBytes + 8 * i;
    entries[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, off));
    if (!std::isfinite(entries[i])) {
      throw FormatError("non-finite value at offset " + std::to_string(off));
    }
  }
  return DenseMatrix::from_entries(rows, cols, std::move(entries));
}

DenseMatrix parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> entries;
  std::size_t cols = 0, rows = 0, lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    std::vector<double> values;
    values.reserve(cells.size());
    bool numeric = true;
    for (const auto& c : cells) {
      const auto v = parse_number(c);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;
        cols = cells.size();
        continue;  // header row
      }
      throw FormatError("non-numeric cell on line " + std::to_string(lineno));
    }
    if (first_content) {
      first_content = false;
      cols = values.size();
    }
    if (values.size() != cols) {
      throw FormatError("line " + std::to_string(lineno) + " has " +
                        std::to_string(values.size()) + " cells, expected " +
                        std::to_string(cols));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw FormatError("non-finite value on line " + std::to_string(lineno));
    }
    entries.insert(entries.end(), values.begin(), values.end());
    ++rows;
  }
  if (rows == 0 || cols == 0) throw FormatError("no numeric rows");
  return DenseMatrix::from_entries(rows, cols, std::move(entries));
}

std::string format_csv(const DenseMatrix& a) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out.push_back(',');
      const int len = std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

// Tokenizer over the PGM header that skips whitespace and '#' comments.
struct PgmHeaderReader {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;
  std::size_t line = 1;

  void skip_space() {
    while (pos < bytes.size()) {
      const unsigned char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(c)) {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space();
    const std::size_t start = pos;
    unsigned long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 100000000UL) throw FormatError(std::string(what) + " too large on line " + std::to_string(line));
      ++pos;
    }
    if (pos == start) {
      throw FormatError(std::string("expected ") + what + " on line " + std::to_string(line));
    }
    return v;
  }
};

}  // namespace

Image parse_pgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw FormatError("not a P2/P5 PGM at offset 0");
  }
  Image img;
  img.binary = bytes[1] == '5';
  PgmHeaderReader rd{bytes, 2};
  const auto width = rd.number("width");
  const auto height = rd.number("height");
  const auto maxval = rd.number("maxval");
  if (width == 0 || height == 0) throw FormatError("zero image dimension");
  if (maxval == 0 || maxval > 65535) {
    throw FormatError("maxval " + std::to_string(maxval) + " outside [1, 65535]");
  }
  img.maxval = static_cast<unsigned>(maxval);
  std::vector<double> px(width * height);
  if (img.binary) {
    if (rd.pos >= bytes.size() || !std::isspace(bytes[rd.pos])) {
      throw FormatError("missing separator before raster at offset " + std::to_string(rd.pos));
    }
    std::size_t off = rd.pos + 1;
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() < off + px.size() * bpp) {
      throw FormatError("raster truncated at offset " + std::to_string(bytes.size()));
    }
    for (std::size_t i = 0; i < px.size(); ++i, off += bpp) {
      unsigned v = bpp == 2 ? (static_cast<unsigned>(bytes[off]) << 8) | bytes[off + 1] : bytes[off];
      if (v > maxval) throw FormatError("pixel exceeds maxval at offset " + std::to_string(off));
      px[i] = v;
    }
  } else {
    for (auto& p : px) {
      const auto v = rd.number("pixel");
      if (v > maxval) throw FormatError("pixel exceeds maxval on line " + std::to_string(rd.line));
      p = static_cast<double>(v);
    }
  }
  img.pixels = DenseMatrix::from_entries(height, width, std::move(px));
  return img;
}

std::vector<unsigned char> encode_pgm(const Image& img) {
  std::ostringstream head;
  head << (img.binary ? "P5" : "P2") << "\n"
       << img.pixels.cols() << " " << img.pixels.rows() << "\n"
       << img.maxval << "\n";
  const std::string h = head.str();
  std::vector<unsigned char> out(h.begin(), h.end());
  auto level = [&](double x) {
    const double c = std::clamp(std::round(x), 0.0, static_cast<double>(img.maxval));
    return static_cast<unsigned>(c);
  };
  if (img.binary) {
    const bool wide = img.maxval > 255;
    for (double x : img.pixels.entries()) {
      const unsigned v = level(x);
      if (wide) out.push_back(static_cast<unsigned char>(v >> 8));
      out.push_back(static_cast<unsigned char>(v & 0xFF));
    }
  } else {
    for (std::size_t i = 0; i < img.pixels.rows(); ++i) {
      std::string line;
      for (std::size_t j = 0; j < img.pixels.cols(); ++j) {
        if (j) line.push_back(' ');
        line += std::to_string(level(img.pixels(i, j)));
      }
      line.push_back('\n');
      out.insert(out.end(), line.begin(), line.end());
    }
  }
  return out;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

namespace {

Format resolve(const std::filesystem::path& path, std::optional<Format> format) {
  if (format) return *format;
  if (auto f = infer_format(path)) return *f;
  throw FormatError("cannot infer matrix format from " + path.string());
}

}  // namespace

DenseMatrix read_matrix(const std::filesystem::path& path, std::optional<Format> format) {
  const auto bytes = read_bytes(path);
  switch (resolve(path, format)) {
    case Format::bin: return decode_bin(bytes);
    case Format::csv: return parse_csv(std::string(bytes.begin(), bytes.end()));
    case Format::pgm: return parse_pgm(bytes).pixels;
  }
  return {};
}

void write_matrix(const DenseMatrix& a, const std::filesystem::path& path,
                  std::optional<Format> format) {
  switch (resolve(path, format)) {
    case Format::bin: write_bytes(encode_bin(a), path); break;
    case Format::csv: {
      const std::string s = format_csv(a);
      write_bytes(std::vector<unsigned char>(s.begin(), s.end()), path);
      break;
    }
    case Format::pgm: {
      double mx = 0.0;
      for (double x : a.entries()) mx = std::max(mx, x);
      Image img{a, mx > 255.0 ? 65535u : 255u, true};
      write_bytes(encode_pgm(img), path);
      break;
    }
  }
}

Image read_pgm(const std::filesystem::path& path) { return parse_pgm(read_bytes(path)); }

void write_pgm(const Image& img, const std::filesystem::path& path) {
  write_bytes(encode_pgm(img), path);
}

void write_vector_csv(const std::vector<double>& v, const std::filesystem::path& path,
                      const std::string& header) {
  std::string s = header.empty() ? "" : header + "\n";
  char buf[40];
  for (double x : v) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g\n", x);
    s.append(buf, static_cast<std::size_t>(len));
  }
  write_bytes(std::vector<unsigned char>(s.begin(), s.end()), path);
}

}  // namespace rlam::io
