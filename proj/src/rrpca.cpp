#include "rlam/rrpca.hpp"

#include <algorithm>
#include <cmath>

#include "rlam/detfact.hpp"
#include "rlam/error.hpp"
#include "rlam/rsvd.hpp"

namespace rlam {

DenseMatrix soft_threshold(const DenseMatrix& m, double tau) {
  if (tau < 0.0) throw ArgumentError("soft threshold must be nonnegative");
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.data()[i];
    const double mag = std::abs(x) - tau;
    out.data()[i] = mag > 0.0 ? std::copysign(mag, x) : 0.0;
  }
  return out;
}

RankPrediction predict_rank(const std::vector<double>& d, double mu_inv, std::size_t k,
                            std::size_t minmn, double growth) {
  std::size_t l = 0;
  for (double s : d) {
    if (s > mu_inv) ++l;
  }
  l = std::max<std::size_t>(l, 1);
  RankPrediction out;
  out.l = l;
  if (l < k) {
    out.k_next = std::min(l + 1, minmn);
  } else {
    const auto step = static_cast<std::size_t>(std::ceil(growth * static_cast<double>(minmn)));
    out.k_next = std::min(l + step, minmn);
  }
  return out;
}

double dual_norm(const DenseMatrix& a, double lambda, std::optional<double> spectral) {
  if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
  const double two = spectral.value_or(norm(a, NormKind::spectral));
  return std::max(two, norm(a, NormKind::maxabs) / lambda);
}

double spectral_norm_estimate(const DenseMatrix& a, std::size_t steps, std::uint64_t seed) {
  DenseMatrix v = random_matrix(a.cols(), 1, Distribution::normal, seed);
  double est = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double nv = norm(v, NormKind::frobenius);
    if (nv == 0.0) return 0.0;
    v = scaled(v, 1.0 / nv);
    const DenseMatrix av = matmul(a, v);
    est = norm(av, NormKind::frobenius);
    v = matmul_tn(a, av);
  }
  return est;
}

RpcaResult rrpca(const DenseMatrix& a, const IalmParams& params) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t minmn = std::min(m, n);
  const double a_fro = norm(a, NormKind::frobenius);
  if (minmn == 0 || a_fro == 0.0) throw ArgumentError("robust PCA of a zero matrix");
  if (!(params.tol > 0.0)) throw ArgumentError("tol must be positive");
  const double lambda =
      params.lambda.value_or(1.0 / std::sqrt(static_cast<double>(std::max(m, n))));
  if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");

  const double a_two = spectral_norm_estimate(a, 30, params.spec.seed);
  // mu_0 = 1.25 / ||A||_2
  double mu = 1.25 / a_two;
  const double mu_max = mu * params.mu_cap_factor;
  DenseMatrix z = scaled(a, 1.0 / dual_norm(a, lambda, a_two));
  DenseMatrix s(m, n);
  DenseMatrix l_mat(m, n);
  std::size_t k = std::min<std::size_t>(2, minmn);

  RpcaResult res;
  for (std::size_t it = 1; it <= params.maxiter; ++it) {
    const double mu_inv = 1.0 / mu;
    // A - S + Z / mu
    DenseMatrix target = combine(1.0, combine(1.0, a, -1.0, s), mu_inv, z);
    const bool use_rand = params.rand && 4 * k <= minmn;
    const TruncatedSvd svd =
        use_rand ? rsvd(target, k, params.spec.with_seed(derive_seed(params.spec.seed, it)))
                 : svd_truncated(target, minmn);
    const RankPrediction pred = predict_rank(svd.d(), mu_inv, k, minmn, params.rank_growth);

    std::vector<double> shrunk(pred.l);
    for (std::size_t i = 0; i < pred.l; ++i) shrunk[i] = std::max(svd.d()[i] - mu_inv, 0.0);
    l_mat = matmul_nt(scale_columns(svd.u().leading_columns(pred.l), shrunk),
                      svd.v().leading_columns(pred.l));

    s = soft_threshold(combine(1.0, combine(1.0, a, -1.0, l_mat), mu_inv, z), lambda * mu_inv);
    DenseMatrix gap = combine(1.0, combine(1.0, a, -1.0, l_mat), -1.0, s);
    z = combine(1.0, z, mu, gap);

    const double residual = norm(gap, NormKind::frobenius) / a_fro;
    if (!std::isfinite(residual)) {
      throw NumericalError("robust PCA produced non-finite values at iteration " +
                           std::to_string(it));
    }
    res.trace.push_back({it, residual, pred.k_next, pred.l, mu, use_rand});
    res.iterations = it;
    k = pred.k_next;
    mu = std::min(mu * params.rho, mu_max);
    if (residual <= params.tol) {
      res.converged = true;
      break;
    }
  }
  res.low_rank = std::move(l_mat);
  res.sparse = std::move(s);
  return res;
}

}  // namespace rlam
