#include "rlam/rsvd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlam/error.hpp"
#include "rlam/rqb.hpp"

namespace rlam {

namespace {

void check_rank(const DenseMatrix& a, std::size_t k) {
  const std::size_t r = std::min(a.rows(), a.cols());
  if (k < 1 || k > r) {
    throw ArgumentError("target rank k=" + std::to_string(k) + " must lie in [1, " +
                        std::to_string(r) + "] for a " + a.shape_string() + " matrix");
  }
}

std::size_t clamp_count(std::optional<std::size_t> requested, std::size_t k, const char* name,
                        std::vector<std::string>& notes) {
  if (!requested) return k;
  if (*requested > k) {
    notes.push_back(std::string(name) + "=" + std::to_string(*requested) +
                    " exceeds k; clamped to " + std::to_string(k));
    return k;
  }
  return *requested;
}

}  // namespace

TruncatedSvd rsvd(const DenseMatrix& a, std::size_t k, const SketchSpec& spec,
                  std::optional<std::size_t> nu, std::optional<std::size_t> nv) {
  check_rank(a, k);
  if (a.rows() < a.cols()) {
    TruncatedSvd t = rsvd(transpose(a), k, spec, nv, nu);
    std::swap(t.factors.u, t.factors.v);
    std::swap(t.nu, t.nv);
    for (auto& note : t.notes) {
      // Messages were produced for the transposed problem.
      if (note.rfind("nu=", 0) == 0) note[1] = 'v';
      else if (note.rfind("nv=", 0) == 0) note[1] = 'u';
    }
    return t;
  }
  TruncatedSvd out;
  const std::size_t minmn = std::min(a.rows(), a.cols());
  if (4 * k >= minmn) {
    out.notes.push_back("target rank k=" + std::to_string(k) +
                        " is not below min(m, n)/4; a deterministic SVD may be as fast");
  }
  out.nu = clamp_count(nu, k, "nu", out.notes);
  out.nv = clamp_count(nv, k, "nv", out.notes);

  const QbFactors qb = rqb(a, k, spec);
  SvdFactors small = svd_dense(qb.b);
  out.factors.d.assign(small.d.begin(), small.d.begin() + k);
  out.factors.u = matmul(qb.q, small.u.leading_columns(out.nu));
  out.factors.v = small.v.leading_columns(out.nv);
  return out;
}

TruncatedSvd svd_truncated(const DenseMatrix& a, std::size_t k) {
  check_rank(a, k);
  SvdFactors full = svd_dense(a);
  TruncatedSvd out;
  out.nu = out.nv = k;
  out.factors.d.assign(full.d.begin(), full.d.begin() + k);
  out.factors.u = full.u.leading_columns(k);
  out.factors.v = full.v.leading_columns(k);
  return out;
}

double expected_error_bound(std::size_t k, std::size_t p, std::size_t q, std::size_t m,
                            std::size_t n, double sigma_k_plus_1) {
  if (p < 2) throw ArgumentError("error bound requires oversampling p >= 2");
  const std::size_t minmn = std::min(m, n);
  if (k > minmn) throw ArgumentError("error bound requires k <= min(m, n)");
  const double kd = static_cast<double>(k), pd = static_cast<double>(p);
  const double bracket = 1.0 + std::sqrt(kd / (pd - 1.0)) +
                         std::numbers::e * std::sqrt(kd + pd) / pd *
                             std::sqrt(static_cast<double>(minmn - k));
  return std::pow(bracket, 1.0 / (2.0 * static_cast<double>(q) + 1.0)) * sigma_k_plus_1;
}

double nrmse(const DenseMatrix& a, const DenseMatrix& approx) {
  return relative_error(a, approx);
}

}  // namespace rlam
