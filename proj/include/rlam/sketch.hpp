#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rlam/densemat.hpp"

namespace rlam {

enum class Distribution { normal, uniform, rademacher };
enum class PowerScheme { direct, subspace, normalized };

/// Parameters of the random sketch shared by every randomized routine.
struct SketchSpec {
  Distribution distribution = Distribution::normal;
  std::uint64_t seed = 0;
  std::size_t p = 10;  // oversampling
  std::size_t q = 2;   // power iterations
  PowerScheme scheme = PowerScheme::subspace;

  /// Same spec with the seed replaced.
  SketchSpec with_seed(std::uint64_t s) const {
    SketchSpec out = *this;
    out.seed = s;
    return out;
  }
};

std::string_view to_string(Distribution d);
std::string_view to_string(PowerScheme s);
/// Accepts "normal", "unif"/"uniform", "rademacher".
std::optional<Distribution> parse_distribution(std::string_view name);
std::optional<PowerScheme> parse_power_scheme(std::string_view name);

/// rows x cols matrix of i.i.d. draws, filled row-major from a 64-bit
/// Mersenne Twister seeded with `seed`. Normal draws use Box-Muller, uniform
/// draws lie in (-1, 1), Rademacher draws in {-1, +1}.
DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Distribution dist,
                          std::uint64_t seed);

/// The n x l test matrix Omega of a sketch. Rejects l > n and l == 0.
DenseMatrix random_test_matrix(std::size_t n, std::size_t l, const SketchSpec& spec);

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace rlam
