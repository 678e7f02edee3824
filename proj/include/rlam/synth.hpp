#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rlam/densemat.hpp"

namespace rlam {

enum class SpectrumKind { exact_rank, power_decay, exp_decay };

/// Planted singular-value profile for gen_decaying.
struct SpectrumProfile {
  SpectrumKind kind = SpectrumKind::power_decay;
  std::size_t rank = 0;   // exact_rank: number of unit singular values
  double rate = 1.0;      // power_decay: sigma_j = j^-rate; exp_decay: exp(-rate (j-1))
  double noise = 0.0;     // standard deviation of additive Gaussian noise

  /// sigma_1 .. sigma_count, 1-based j.
  std::vector<double> values(std::size_t count) const;
};

/// m x r times r x n standard normal factors.
DenseMatrix gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed);

struct LowRankPlusSparse {
  DenseMatrix a;
  DenseMatrix low_rank;
  DenseMatrix sparse;
};

/// gen_lowrank plus a sparse matrix with Bernoulli(density) support and
/// uniform(-amplitude, amplitude) values.
LowRankPlusSparse gen_lowrank_plus_sparse(std::size_t m, std::size_t n, std::size_t r,
                                          double density, double amplitude,
                                          std::uint64_t seed);

/// U diag(sigma) V^T with orthonormal factors from QR of Gaussian matrices.
DenseMatrix gen_decaying(std::size_t m, std::size_t n, const SpectrumProfile& profile,
                         std::uint64_t seed);

}  // namespace rlam
