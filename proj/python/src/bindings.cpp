#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "rlam/cli.hpp"
#include "rlam/error.hpp"
#include "rlam/idcur.hpp"
#include "rlam/rpca.hpp"
#include "rlam/rqb.hpp"
#include "rlam/rrpca.hpp"
#include "rlam/rsvd.hpp"
#include "rlam/synth.hpp"

namespace py = pybind11;
using namespace rlam;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw ShapeError("expected a 2-D array, got " + std::to_string(a.ndim()) + "-D");
  const auto m = static_cast<std::size_t>(a.shape(0));
  const auto n = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix::from_entries(m, n, std::vector<double>(a.data(), a.data() + m * n));
}

py::array_t<double> to_array(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data(), m.data() + m.size(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<std::int64_t> to_array(const IndexSet& idx) {
  py::array_t<std::int64_t> out(idx.size());
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < idx.size(); ++i) p[i] = static_cast<std::int64_t>(idx[i]);
  return out;
}

SketchSpec make_spec(std::size_t p, std::size_t q, const std::string& sdist,
                     const std::string& scheme, std::uint64_t seed) {
  SketchSpec s;
  s.p = p;
  s.q = q;
  s.seed = seed;
  const auto d = parse_distribution(sdist);
  if (!d) throw ArgumentError("unknown sdist '" + sdist + "'");
  s.distribution = *d;
  const auto sc = parse_power_scheme(scheme);
  if (!sc) throw ArgumentError("unknown scheme '" + scheme + "'");
  s.scheme = *sc;
  return s;
}

py::tuple svd_tuple(const TruncatedSvd& t) {
  return py::make_tuple(to_array(t.u()), to_array(t.d()), to_array(t.v()));
}

IdMode parse_mode(const std::string& mode) {
  if (mode == "col") return IdMode::col;
  if (mode == "row") return IdMode::row;
  throw ArgumentError("mode must be 'col' or 'row'");
}

}  // namespace

#define SKETCH_ARGS                                                                       \
  py::arg("p") = 10, py::arg("q") = 2, py::arg("sdist") = "normal",                      \
  py::arg("scheme") = "subspace", py::arg("seed") = 0

PYBIND11_MODULE(_rlam, m) {
  m.doc() = "Randomized low-rank matrix decompositions";
  m.attr("__version__") = cli::version();
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "rsvd",
      [](const Array& a, std::size_t k, std::size_t p, std::size_t q, const std::string& sdist,
         const std::string& scheme, std::uint64_t seed, std::optional<std::size_t> nu,
         std::optional<std::size_t> nv) {
        return svd_tuple(rsvd(to_matrix(a), k, make_spec(p, q, sdist, scheme, seed), nu, nv));
      },
      py::arg("a"), py::arg("k"), SKETCH_ARGS, py::arg("nu") = py::none(),
      py::arg("nv") = py::none(), "Randomized truncated SVD. Returns (U, d, V).");

  m.def(
      "svd",
      [](const Array& a, std::optional<std::size_t> k) {
        const DenseMatrix x = to_matrix(a);
        return svd_tuple(svd_truncated(x, k.value_or(std::min(x.rows(), x.cols()))));
      },
      py::arg("a"), py::arg("k") = py::none(), "Deterministic (truncated) SVD. Returns (U, d, V).");

  m.def(
      "rqb",
      [](const Array& a, std::size_t k, std::size_t p, std::size_t q, const std::string& sdist,
         const std::string& scheme, std::uint64_t seed) {
        const QbFactors f = rqb(to_matrix(a), k, make_spec(p, q, sdist, scheme, seed));
        return py::make_tuple(to_array(f.q), to_array(f.b));
      },
      py::arg("a"), py::arg("k"), SKETCH_ARGS, "Randomized QB decomposition. Returns (Q, B).");

  m.def(
      "rpca",
      [](const Array& x, std::size_t k, bool center, bool scale, bool retx, bool rand,
         std::size_t p, std::size_t q, const std::string& sdist, const std::string& scheme,
         std::uint64_t seed) {
        PcaOptions o{center, scale, retx, rand, make_spec(p, q, sdist, scheme, seed)};
        const PcaModel model = rpca(to_matrix(x), k, o);
        const ExplainedVariance ev = explained_variance(model);
        py::dict out;
        out["rotation"] = to_array(model.rotation);
        out["eigvals"] = to_array(model.eigvals);
        out["sdev"] = to_array(model.sdev);
        out["scores"] = model.scores ? py::object(to_array(*model.scores)) : py::none();
        out["center"] = model.center ? py::object(to_array(*model.center)) : py::none();
        out["scale"] = model.scale ? py::object(to_array(*model.scale)) : py::none();
        out["proportion"] = to_array(ev.proportions);
        out["cumulative"] = to_array(ev.cumulative);
        return out;
      },
      py::arg("x"), py::arg("k"), py::arg("center") = true, py::arg("scale") = true,
      py::arg("retx") = true, py::arg("rand") = true, SKETCH_ARGS,
      "Randomized PCA. Returns a dict of rotation, eigvals, sdev, scores, center, scale, "
      "proportion and cumulative.");

  m.def(
      "rrpca",
      [](const Array& a, std::optional<double> lam, std::size_t maxiter, double tol, bool rand,
         std::size_t p, std::size_t q, const std::string& sdist, const std::string& scheme,
         std::uint64_t seed) {
        IalmParams params;
        params.lambda = lam;
        params.maxiter = maxiter;
        params.tol = tol;
        params.rand = rand;
        params.spec = make_spec(p, q, sdist, scheme, seed);
        const RpcaResult r = rrpca(to_matrix(a), params);
        py::list trace;
        for (const auto& t : r.trace) {
          trace.append(py::dict(py::arg("iteration") = t.iteration, py::arg("residual") = t.residual,
                                py::arg("k") = t.k, py::arg("l") = t.l, py::arg("mu") = t.mu));
        }
        py::dict out;
        out["L"] = to_array(r.low_rank);
        out["S"] = to_array(r.sparse);
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["trace"] = trace;
        return out;
      },
      py::arg("a"), py::arg("lam") = py::none(), py::arg("maxiter") = 50, py::arg("tol") = 1e-5,
      py::arg("rand") = true, SKETCH_ARGS,
      "Robust PCA by inexact ALM. Returns a dict with L, S, iterations, converged, trace.");

  m.def(
      "rid",
      [](const Array& a, std::size_t k, const std::string& mode, bool rand, std::size_t p,
         std::size_t q, const std::string& sdist, const std::string& scheme, std::uint64_t seed) {
        const DenseMatrix x = to_matrix(a);
        const IdMode md = parse_mode(mode);
        const IdFactors f = rand ? rid(x, k, md, make_spec(p, q, sdist, scheme, seed))
                                 : id_deterministic(x, k, md);
        py::dict out;
        out[md == IdMode::col ? "C" : "R"] = to_array(f.skeleton);
        out["Z"] = to_array(f.z);
        out["idx"] = to_array(f.idx);
        return out;
      },
      py::arg("a"), py::arg("k"), py::arg("mode") = "col", py::arg("rand") = true, SKETCH_ARGS,
      "Interpolative decomposition. Column mode returns C, Z, idx; row mode returns R, Z, idx.");

  m.def(
      "rcur",
      [](const Array& a, std::size_t k, bool rand, std::size_t p, std::size_t q,
         const std::string& sdist, const std::string& scheme, std::uint64_t seed) {
        const CurFactors f = rcur(to_matrix(a), k, make_spec(p, q, sdist, scheme, seed), rand);
        py::dict out;
        out["C"] = to_array(f.c);
        out["U"] = to_array(f.u);
        out["R"] = to_array(f.r);
        out["col_idx"] = to_array(f.col_idx);
        out["row_idx"] = to_array(f.row_idx);
        return out;
      },
      py::arg("a"), py::arg("k"), py::arg("rand") = true, SKETCH_ARGS,
      "CUR decomposition. Returns a dict with C, U, R, col_idx, row_idx.");

  m.def("expected_error_bound", &expected_error_bound, py::arg("k"), py::arg("p"), py::arg("q"),
        py::arg("m"), py::arg("n"), py::arg("sigma"));

  m.def(
      "gen_lowrank",
      [](std::size_t mm, std::size_t n, std::size_t r, std::uint64_t seed) {
        return to_array(gen_lowrank(mm, n, r, seed));
      },
      py::arg("m"), py::arg("n"), py::arg("r"), py::arg("seed") = 0);

  m.def(
      "gen_lowrank_plus_sparse",
      [](std::size_t mm, std::size_t n, std::size_t r, double density, double amplitude,
         std::uint64_t seed) {
        const auto g = gen_lowrank_plus_sparse(mm, n, r, density, amplitude, seed);
        return py::make_tuple(to_array(g.a), to_array(g.low_rank), to_array(g.sparse));
      },
      py::arg("m"), py::arg("n"), py::arg("r"), py::arg("density") = 0.2,
      py::arg("amplitude") = 500.0, py::arg("seed") = 0, "Returns (A, L0, S0).");
}
