#include "rlam/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rlam/detfact.hpp"
#include "rlam/error.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

std::vector<double> SpectrumProfile::values(std::size_t count) const {
  std::vector<double> s(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const double jj = static_cast<double>(j + 1);
    switch (kind) {
      case SpectrumKind::exact_rank: s[j] = j < rank ? 1.0 : 0.0; break;
      case SpectrumKind::power_decay: s[j] = std::pow(jj, -rate); break;
      case SpectrumKind::exp_decay: s[j] = std::exp(-rate * (jj - 1.0)); break;
    }
  }
  return s;
}

DenseMatrix gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
  if (r < 1 || r > std::min(m, n)) {
    throw ArgumentError("rank " + std::to_string(r) + " must lie in [1, min(m, n)]");
  }
  const DenseMatrix left = random_matrix(m, r, Distribution::normal, derive_seed(seed, 0));
  const DenseMatrix right = random_matrix(r, n, Distribution::normal, derive_seed(seed, 1));
  return matmul(left, right);
}

LowRankPlusSparse gen_lowrank_plus_sparse(std::size_t m, std::size_t n, std::size_t r,
                                          double density, double amplitude,
                                          std::uint64_t seed) {
  if (!(density > 0.0 && density < 1.0)) throw ArgumentError("density must lie in (0, 1)");
  if (amplitude < 0.0) throw ArgumentError("amplitude must be nonnegative");
  LowRankPlusSparse out;
  out.low_rank = gen_lowrank(m, n, r, seed);
  out.sparse = DenseMatrix(m, n);
  std::mt19937_64 gen(derive_seed(seed, 2));
  for (std::size_t i = 0; i < out.sparse.size(); ++i) {
    const double u_support = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double u_value = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (u_support < density) out.sparse.data()[i] = amplitude * (2.0 * u_value - 1.0);
  }
  out.a = combine(1.0, out.low_rank, 1.0, out.sparse);
  return out;
}

DenseMatrix gen_decaying(std::size_t m, std::size_t n, const SpectrumProfile& profile,
                         std::uint64_t seed) {
  const std::size_t r = std::min(m, n);
  const std::vector<double> sigma = profile.values(r);
  const DenseMatrix u = orthonormal_basis(random_matrix(m, r, Distribution::normal, derive_seed(seed, 0)));
  const DenseMatrix v = orthonormal_basis(random_matrix(n, r, Distribution::normal, derive_seed(seed, 1)));
  DenseMatrix a = matmul_nt(scale_columns(u, sigma), v);
  if (profile.noise > 0.0) {
    const DenseMatrix e = random_matrix(m, n, Distribution::normal, derive_seed(seed, 2));
    a = combine(1.0, a, profile.noise, e);
  }
  return a;
}

}  // namespace rlam
