#include "rlam/detfact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rlam/error.hpp"

namespace rlam {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kJacobiBlock = 16;

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

// Householder reflectors stored below the diagonal of `work`, LAPACK style:
// H_j = I - tau_j v_j v_j^T with v_j(j) = 1 implicit.
struct Reflectors {
  DenseMatrix work;
  std::vector<double> tau;
};

// Builds the reflector annihilating work(j+1:, j) and applies it to the
// trailing columns j+1..n-1.
void householder_step(DenseMatrix& w, std::size_t j, std::vector<double>& tau,
                      std::vector<double>& scratch) {
  const std::size_t m = w.rows(), n = w.cols();
  double tail2 = 0.0;
  for (std::size_t i = j + 1; i < m; ++i) tail2 += w(i, j) * w(i, j);
  const double alpha = w(j, j);
  if (tail2 == 0.0) {
    tau[j] = 0.0;
    return;
  }
  const double xnorm = std::hypot(alpha, std::sqrt(tail2));
  const double beta = alpha >= 0.0 ? -xnorm : xnorm;
  const double t = (beta - alpha) / beta;
  const double inv = 1.0 / (alpha - beta);
  for (std::size_t i = j + 1; i < m; ++i) w(i, j) *= inv;
  w(j, j) = beta;
  tau[j] = t;

  const std::size_t nt = n - j - 1;
  if (nt == 0) return;
  // scratch = v^T W(j:, j+1:)
  scratch.assign(nt, 0.0);
  {
    const double* wr = w.data() + j * n + j + 1;
    for (std::size_t c = 0; c < nt; ++c) scratch[c] = wr[c];
  }
  for (std::size_t i = j + 1; i < m; ++i) {
    const double vi = w(i, j);
    if (vi == 0.0) continue;
    const double* wr = w.data() + i * n + j + 1;
    double* s = scratch.data();
#pragma omp simd
    for (std::size_t c = 0; c < nt; ++c) s[c] += vi * wr[c];
  }
  {
    double* wr = w.data() + j * n + j + 1;
    for (std::size_t c = 0; c < nt; ++c) wr[c] -= t * scratch[c];
  }
  for (std::size_t i = j + 1; i < m; ++i) {
    const double f = t * w(i, j);
    if (f == 0.0) continue;
    double* wr = w.data() + i * n + j + 1;
    const double* s = scratch.data();
#pragma omp simd
    for (std::size_t c = 0; c < nt; ++c) wr[c] -= f * s[c];
  }
}

// Accumulates Q = H_0 H_1 ... H_{r-1} I(:, 0:r).
DenseMatrix form_q(const Reflectors& h, std::size_t r) {
  const std::size_t m = h.work.rows();
  DenseMatrix q(m, r);
  for (std::size_t i = 0; i < r; ++i) q(i, i) = 1.0;
  std::vector<double> s;
  for (std::size_t jj = r; jj-- > 0;) {
    const double t = h.tau[jj];
    if (t == 0.0) continue;
    const std::size_t nc = r - jj;
    s.assign(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) s[c] = q(jj, jj + c);
    for (std::size_t i = jj + 1; i < m; ++i) {
      const double vi = h.work(i, jj);
      if (vi == 0.0) continue;
      const double* qr = q.data() + i * r + jj;
#pragma omp simd
      for (std::size_t c = 0; c < nc; ++c) s[c] += vi * qr[c];
    }
    for (std::size_t c = 0; c < nc; ++c) q(jj, jj + c) -= t * s[c];
    for (std::size_t i = jj + 1; i < m; ++i) {
      const double f = t * h.work(i, jj);
      if (f == 0.0) continue;
      double* qr = q.data() + i * r + jj;
#pragma omp simd
      for (std::size_t c = 0; c < nc; ++c) qr[c] -= f * s[c];
    }
  }
  return q;
}

DenseMatrix upper_part(const DenseMatrix& w, std::size_t r) {
  DenseMatrix rr(r, w.cols());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < w.cols(); ++j) rr(i, j) = w(i, j);
  }
  return rr;
}

// R diagonal made nonnegative by flipping matching rows of R / columns of Q.
void fix_qr_signs(QrFactors& f) {
  const std::size_t r = std::min(f.r.rows(), f.r.cols());
  for (std::size_t i = 0; i < r; ++i) {
    if (f.r(i, i) >= 0.0) continue;
    for (double& x : f.r.row(i)) x = -x;
    for (std::size_t k = 0; k < f.q.rows(); ++k) f.q(k, i) = -f.q(k, i);
  }
}

void swap_columns(DenseMatrix& a, std::size_t c1, std::size_t c2) {
  if (c1 == c2) return;
  for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, c1), a(i, c2));
}

Reflectors householder(const DenseMatrix& a) {
  const std::size_t r = std::min(a.rows(), a.cols());
  Reflectors h{a, std::vector<double>(r, 0.0)};
  std::vector<double> scratch;
  for (std::size_t j = 0; j < r; ++j) householder_step(h.work, j, h.tau, scratch);
  return h;
}

// Jacobi result in the coordinates of the pivoted triangular factor.
struct JacobiResult {
  std::vector<double> sigma;
  DenseMatrix g;   // rows are the rotated rows of R (columns of R^T W)
  DenseMatrix wt;  // accumulated rotations, transposed; empty if not wanted
};

// One-sided Jacobi on the columns of R^T, i.e. the rows of the row-major R.
JacobiResult jacobi_rows(DenseMatrix g, bool want_rotations, const SvdOptions& opts) {
  const std::size_t n = g.rows();
  const std::size_t len = g.cols();
  DenseMatrix wt = want_rotations ? DenseMatrix::identity(n) : DenseMatrix();
  std::vector<double> nrm2(n);
  constexpr double tiny = std::numeric_limits<double>::min();

  double worst = 0.0;
  bool converged = n < 2;
  for (std::size_t sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) nrm2[i] = dot(g.data() + i * len, g.data() + i * len, len);
    converged = true;
    worst = 0.0;
    auto rotate_pair = [&](std::size_t p, std::size_t q) {
      const double alpha = nrm2[p];
      const double beta = nrm2[q];
      if (alpha <= tiny || beta <= tiny) return;
      double* gp = g.data() + p * len;
      double* gq = g.data() + q * len;
      const double gamma = dot(gp, gq, len);
      const double cosine = std::abs(gamma) / std::sqrt(alpha) / std::sqrt(beta);
      worst = std::max(worst, cosine);
      if (cosine <= opts.tol) return;
      converged = false;
      const double zeta = (beta - alpha) / (2.0 * gamma);
      const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
      const double cs = 1.0 / std::sqrt(1.0 + t * t);
      const double sn = cs * t;
#pragma omp simd
      for (std::size_t k = 0; k < len; ++k) {
        const double x = gp[k], y = gq[k];
        gp[k] = cs * x - sn * y;
        gq[k] = sn * x + cs * y;
      }
      nrm2[p] = alpha - t * gamma;
      nrm2[q] = beta + t * gamma;
      if (want_rotations) {
        double* wp = wt.data() + p * n;
        double* wq = wt.data() + q * n;
#pragma omp simd
        for (std::size_t k = 0; k < n; ++k) {
          const double x = wp[k], y = wq[k];
          wp[k] = cs * x - sn * y;
          wq[k] = sn * x + cs * y;
        }
      }
    };
    // Block-cyclic ordering, every pair once per sweep.
    for (std::size_t b0 = 0; b0 < n; b0 += kJacobiBlock) {
      const std::size_t b1 = std::min(n, b0 + kJacobiBlock);
      for (std::size_t p = b0; p < b1; ++p) {
        for (std::size_t q = p + 1; q < b1; ++q) rotate_pair(p, q);
      }
      for (std::size_t c0 = b1; c0 < n; c0 += kJacobiBlock) {
        const std::size_t c1 = std::min(n, c0 + kJacobiBlock);
        for (std::size_t p = b0; p < b1; ++p) {
          for (std::size_t q = c0; q < c1; ++q) rotate_pair(p, q);
        }
      }
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Jacobi SVD did not converge in " << opts.max_sweeps
        << " sweeps; largest off-diagonal cosine " << worst;
    throw NumericalError(msg.str());
  }
  JacobiResult res{std::vector<double>(n), std::move(g), std::move(wt)};
  for (std::size_t i = 0; i < n; ++i) {
    res.sigma[i] = std::sqrt(dot(res.g.data() + i * len, res.g.data() + i * len, len));
  }
  return res;
}

// Fills the columns flagged in `missing` with unit vectors orthogonal to all
// other columns of the square matrix x.
void complete_basis(DenseMatrix& x, const std::vector<bool>& missing) {
  const std::size_t n = x.rows();
  std::vector<bool> filled(missing.size());
  for (std::size_t j = 0; j < missing.size(); ++j) filled[j] = !missing[j];
  std::vector<double> v(n);
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < missing.size(); ++j) {
    if (!missing[j]) continue;
    double best = -1.0;
    std::vector<double> best_v;
    for (std::size_t e = 0; e < n; ++e) {
      std::fill(v.begin(), v.end(), 0.0);
      v[(candidate + e) % n] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
          if (!filled[c]) continue;
          double s = 0.0;
          for (std::size_t i = 0; i < n; ++i) s += x(i, c) * v[i];
          for (std::size_t i = 0; i < n; ++i) v[i] -= s * x(i, c);
        }
      }
      double nv = 0.0;
      for (double t : v) nv += t * t;
      if (nv > best) {
        best = nv;
        best_v = v;
      }
      if (nv > 0.5) break;
    }
    const double inv = 1.0 / std::sqrt(best);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = best_v[i] * inv;
    filled[j] = true;
    ++candidate;
  }
}

// Core for m >= n. Signs are not normalized here.
SvdFactors svd_tall(const DenseMatrix& a, bool want_vectors, const SvdOptions& opts) {
  const std::size_t n = a.cols();
  QrFactors qr = qr_pivoted(a);
  JacobiResult jr = jacobi_rows(std::move(qr.r), want_vectors, opts);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return jr.sigma[x] > jr.sigma[y]; });

  SvdFactors out;
  out.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.d[i] = jr.sigma[order[i]];
  if (!want_vectors) return out;

  // Right vectors: V(P[j], i) = g_i[j] / sigma_i.
  const auto& perm = qr.pivots->indices();
  constexpr double tiny = std::numeric_limits<double>::min();
  DenseMatrix ux(n, n);
  std::vector<bool> missing(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[i];
    const double s = jr.sigma[src];
    if (s <= tiny * 16) {
      missing[i] = true;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) ux(j, i) = jr.g(src, j) / s;
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    complete_basis(ux, missing);
  }
  out.v = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) out.v(perm[j], i) = ux(j, i);
  }

  // Left vectors: U = Q W, with W = wt^T reordered.
  DenseMatrix wt_sorted(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = jr.wt.row(order[i]);
    std::copy(src.begin(), src.end(), wt_sorted.row(i).begin());
  }
  out.u = matmul_nt(qr.q, wt_sorted);
  return out;
}

void normalize_signs(SvdFactors& f) {
  for (std::size_t c = 0; c < f.v.cols(); ++c) {
    double best = 0.0;
    for (std::size_t i = 0; i < f.v.rows(); ++i) {
      if (std::abs(f.v(i, c)) > std::abs(best)) best = f.v(i, c);
    }
    if (best >= 0.0) continue;
    for (std::size_t i = 0; i < f.v.rows(); ++i) f.v(i, c) = -f.v(i, c);
    for (std::size_t i = 0; i < f.u.rows(); ++i) f.u(i, c) = -f.u(i, c);
  }
}

SvdFactors svd_impl(const DenseMatrix& a, bool want_vectors, const SvdOptions& opts) {
  if (a.rows() == 0 || a.cols() == 0) {
    return {DenseMatrix(a.rows(), 0), {}, DenseMatrix(a.cols(), 0)};
  }
  if (a.rows() < a.cols()) {
    SvdFactors t = svd_tall(transpose(a), want_vectors, opts);
    return {std::move(t.v), std::move(t.d), std::move(t.u)};
  }
  return svd_tall(a, want_vectors, opts);
}

}  // namespace

QrFactors qr_economy(const DenseMatrix& a) {
  const std::size_t r = std::min(a.rows(), a.cols());
  Reflectors h = householder(a);
  QrFactors f{form_q(h, r), upper_part(h.work, r), std::nullopt};
  fix_qr_signs(f);
  return f;
}

DenseMatrix orthonormal_basis(const DenseMatrix& a) {
  const std::size_t r = std::min(a.rows(), a.cols());
  Reflectors h = householder(a);
  DenseMatrix q = form_q(h, r);
  for (std::size_t i = 0; i < r; ++i) {
    if (h.work(i, i) >= 0.0) continue;
    for (std::size_t k = 0; k < q.rows(); ++k) q(k, i) = -q(k, i);
  }
  return q;
}

QrFactors qr_pivoted(const DenseMatrix& a, std::optional<std::size_t> steps) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t full = std::min(m, n);
  const std::size_t r = steps.value_or(full);
  if (r > full) {
    throw ArgumentError("qr_pivoted: steps " + std::to_string(r) + " exceeds min(m, n) = " +
                        std::to_string(full));
  }
  Reflectors h{a, std::vector<double>(full, 0.0)};
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  // vn1: running column norms of the trailing block; vn2: norms at last
  // recomputation, used to detect cancellation in the downdate.
  std::vector<double> vn1(n, 0.0), vn2(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    vn1[j] = vn2[j] = std::sqrt(s);
  }
  const double tol3z = std::sqrt(kEps);
  std::vector<double> scratch;
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t best = j;
    for (std::size_t c = j + 1; c < n; ++c) {
      if (vn1[c] > vn1[best]) best = c;
    }
    if (best != j) {
      swap_columns(h.work, j, best);
      std::swap(perm[j], perm[best]);
      std::swap(vn1[j], vn1[best]);
      std::swap(vn2[j], vn2[best]);
    }
    householder_step(h.work, j, h.tau, scratch);
    for (std::size_t c = j + 1; c < n; ++c) {
      if (vn1[c] == 0.0) continue;
      double temp = std::abs(h.work(j, c)) / vn1[c];
      temp = std::max(0.0, 1.0 - temp * temp);
      const double ratio = vn1[c] / vn2[c];
      if (temp * ratio * ratio <= tol3z) {
        double s = 0.0;
        for (std::size_t i = j + 1; i < m; ++i) s += h.work(i, c) * h.work(i, c);
        vn1[c] = vn2[c] = std::sqrt(s);
      } else {
        vn1[c] *= std::sqrt(temp);
      }
    }
  }
  QrFactors f{form_q(h, r), upper_part(h.work, r), IndexSet(std::move(perm), n)};
  fix_qr_signs(f);
  return f;
}

LuFactors lu_partial(const DenseMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t r = std::min(m, n);
  DenseMatrix w = a;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t piv = j;
    for (std::size_t i = j + 1; i < m; ++i) {
      if (std::abs(w(i, j)) > std::abs(w(piv, j))) piv = i;
    }
    if (piv != j) {
      std::swap_ranges(w.row(j).begin(), w.row(j).end(), w.row(piv).begin());
      std::swap(perm[j], perm[piv]);
    }
    const double d = w(j, j);
    if (d == 0.0) continue;
    for (std::size_t i = j + 1; i < m; ++i) {
      const double f = w(i, j) / d;
      w(i, j) = f;
      if (f == 0.0) continue;
      double* wi = w.data() + i * n;
      const double* wj = w.data() + j * n;
#pragma omp simd
      for (std::size_t c = j + 1; c < n; ++c) wi[c] -= f * wj[c];
    }
  }
  LuFactors out{DenseMatrix(m, r), DenseMatrix(r, n), perm};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < std::min(i, r); ++c) out.lower(perm[i], c) = w(i, c);
    if (i < r) out.lower(perm[i], i) = 1.0;
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = i; c < n; ++c) out.upper(i, c) = w(i, c);
  }
  return out;
}

SvdFactors svd_dense(const DenseMatrix& a, const SvdOptions& opts) {
  SvdFactors f = svd_impl(a, true, opts);
  normalize_signs(f);
  return f;
}

std::vector<double> singular_values(const DenseMatrix& a) {
  return svd_impl(a, false, SvdOptions{}).d;
}

DenseMatrix reconstruct(const SvdFactors& f) {
  return matmul_nt(scale_columns(f.u, f.d), f.v);
}

DenseMatrix pinv(const DenseMatrix& a, std::optional<double> rtol) {
  const double tol = rtol.value_or(static_cast<double>(std::max(a.rows(), a.cols())) * kEps);
  SvdFactors f = svd_dense(a);
  const double cutoff = f.d.empty() ? 0.0 : tol * f.d.front();
  std::vector<double> inv(f.d.size(), 0.0);
  for (std::size_t i = 0; i < f.d.size(); ++i) {
    if (f.d[i] > cutoff) inv[i] = 1.0 / f.d[i];
  }
  return matmul_nt(scale_columns(f.v, inv), f.u);
}

DenseMatrix solve_upper(const DenseMatrix& r, const DenseMatrix& b) {
  const std::size_t k = r.rows();
  if (r.cols() != k || b.rows() != k) {
    throw ShapeError("solve_upper: R is " + r.shape_string() + ", B is " + b.shape_string());
  }
  DenseMatrix x = b;
  const std::size_t p = b.cols();
  for (std::size_t ii = k; ii-- > 0;) {
    double* xi = x.data() + ii * p;
    for (std::size_t c = ii + 1; c < k; ++c) {
      const double f = r(ii, c);
      if (f == 0.0) continue;
      const double* xc = x.data() + c * p;
      for (std::size_t t = 0; t < p; ++t) xi[t] -= f * xc[t];
    }
    const double d = r(ii, ii);
    for (std::size_t t = 0; t < p; ++t) xi[t] /= d;
  }
  return x;
}

}  // namespace rlam
