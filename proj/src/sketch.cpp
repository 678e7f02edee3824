#include "rlam/sketch.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rlam/error.hpp"

namespace rlam {

namespace {

// 53 random bits mapped to the open interval (0, 1).
double open_unit(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::normal: return "normal";
    case Distribution::uniform: return "unif";
    case Distribution::rademacher: return "rademacher";
  }
  return "?";
}

std::string_view to_string(PowerScheme s) {
  switch (s) {
    case PowerScheme::direct: return "direct";
    case PowerScheme::subspace: return "subspace";
    case PowerScheme::normalized: return "normalized";
  }
  return "?";
}

std::optional<Distribution> parse_distribution(std::string_view name) {
  if (name == "normal") return Distribution::normal;
  if (name == "unif" || name == "uniform") return Distribution::uniform;
  if (name == "rademacher") return Distribution::rademacher;
  return std::nullopt;
}

std::optional<PowerScheme> parse_power_scheme(std::string_view name) {
  if (name == "direct") return PowerScheme::direct;
  if (name == "subspace") return PowerScheme::subspace;
  if (name == "normalized") return PowerScheme::normalized;
  return std::nullopt;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Distribution dist,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  DenseMatrix out(rows, cols);
  double* p = out.data();
  const std::size_t total = out.size();
  switch (dist) {
    case Distribution::normal:
      for (std::size_t i = 0; i < total; i += 2) {
        const double r = std::sqrt(-2.0 * std::log(open_unit(gen)));
        const double theta = 2.0 * std::numbers::pi * open_unit(gen);
        p[i] = r * std::cos(theta);
        if (i + 1 < total) p[i + 1] = r * std::sin(theta);
      }
      break;
    case Distribution::uniform:
      for (std::size_t i = 0; i < total; ++i) p[i] = 2.0 * open_unit(gen) - 1.0;
      break;
    case Distribution::rademacher:
      for (std::size_t i = 0; i < total; ++i) p[i] = (gen() >> 63) ? 1.0 : -1.0;
      break;
  }
  return out;
}

DenseMatrix random_test_matrix(std::size_t n, std::size_t l, const SketchSpec& spec) {
  if (l == 0) throw ArgumentError("test matrix needs at least one column");
  if (l > n) {
    throw ArgumentError("test matrix with " + std::to_string(l) +
                        " columns is wider than the sampled dimension " + std::to_string(n));
  }
  return random_matrix(n, l, spec.distribution, spec.seed);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rlam
