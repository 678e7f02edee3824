#include "rlam/rpca.hpp"

#include <algorithm>
#include <cmath>

#include "rlam/error.hpp"
#include "rlam/rsvd.hpp"

namespace rlam {

CenterScaleResult center_scale(const DenseMatrix& x, bool center, bool scale) {
  const std::size_t m = x.rows(), n = x.cols();
  if (m < 2) throw ArgumentError("centering/scaling needs at least two rows");
  CenterScaleResult out{x, std::nullopt, std::nullopt};
  if (center) {
    std::vector<double> means(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) means[j] += x(i, j);
    }
    for (double& v : means) v /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) out.x(i, j) -= means[j];
    }
    out.center = std::move(means);
  }
  if (scale) {
    // Root mean square about the (possibly zero) center, denominator m-1.
    std::vector<double> sds(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) sds[j] += out.x(i, j) * out.x(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) {
      sds[j] = std::sqrt(sds[j] / static_cast<double>(m - 1));
      if (!(sds[j] > 0.0)) {
        throw ArgumentError("column " + std::to_string(j) + " has zero variance; cannot scale");
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) out.x(i, j) /= sds[j];
    }
    out.scale = std::move(sds);
  }
  return out;
}

PcaModel rpca(const DenseMatrix& x, std::size_t k, const PcaOptions& opts) {
  const std::size_t m = x.rows(), n = x.cols();
  if (m < 2) throw ArgumentError("PCA needs at least two observations");
  if (k < 1 || k > std::min(m - 1, n)) {
    throw ArgumentError("target rank k=" + std::to_string(k) + " must lie in [1, " +
                        std::to_string(std::min(m - 1, n)) + "]");
  }
  CenterScaleResult pre = center_scale(x, opts.center, opts.scale);
  const TruncatedSvd svd = opts.rand ? rsvd(pre.x, k, opts.spec) : svd_truncated(pre.x, k);

  const double denom = static_cast<double>(m - 1);
  PcaModel model;
  model.rotation = svd.v();
  model.eigvals.resize(k);
  model.sdev.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    model.eigvals[i] = svd.d()[i] * svd.d()[i] / denom;
    model.sdev[i] = svd.d()[i] / std::sqrt(denom);
  }
  if (opts.retx) model.scores = scale_columns(svd.u(), svd.d());
  const double fro = norm(pre.x, NormKind::frobenius);
  model.total_variance = fro * fro / denom;
  model.center = std::move(pre.center);
  model.scale = std::move(pre.scale);
  model.n_obs = m;
  return model;
}

DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& xnew) {
  const std::size_t n = model.rotation.rows();
  if (xnew.cols() != n) {
    throw ShapeError("model expects " + std::to_string(n) + " columns, got " +
                     xnew.shape_string());
  }
  DenseMatrix x = xnew;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (model.center) r[j] -= (*model.center)[j];
      if (model.scale) r[j] /= (*model.scale)[j];
    }
  }
  return matmul(x, model.rotation);
}

Whitened whiten(const PcaModel& model) {
  for (std::size_t i = 0; i < model.eigvals.size(); ++i) {
    if (!(model.eigvals[i] > 0.0)) {
      throw ArgumentError("component " + std::to_string(i) + " has zero eigenvalue");
    }
  }
  Whitened out;
  std::vector<double> root(model.eigvals.size()), inv_root(model.eigvals.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    root[i] = std::sqrt(model.eigvals[i]);
    inv_root[i] = 1.0 / root[i];
  }
  out.loadings = scale_columns(model.rotation, root);
  if (model.scores) out.scores_white = scale_columns(*model.scores, inv_root);
  return out;
}

ExplainedVariance explained_variance(const PcaModel& model) {
  ExplainedVariance out;
  double total = model.total_variance;
  if (!(total > 0.0)) {
    total = 0.0;
    for (double v : model.eigvals) total += v;
    out.partial_denominator = true;
  }
  double running = 0.0;
  for (double v : model.eigvals) {
    const double prop = total > 0.0 ? v / total : 0.0;
    running += prop;
    out.proportions.push_back(prop);
    out.cumulative.push_back(running);
  }
  return out;
}

}  // namespace rlam
