#include "rlam/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "rlam/bench.hpp"
#include "rlam/error.hpp"
#include "rlam/idcur.hpp"
#include "rlam/matrix_io.hpp"
#include "rlam/rpca.hpp"
#include "rlam/rrpca.hpp"
#include "rlam/rsvd.hpp"
#include "rlam/synth.hpp"

#ifndef RLAM_VERSION
#define RLAM_VERSION "0.0.0"
#endif

namespace rlam::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Thrown for invalid flag values detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RLAM_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
  }
  return 0;
}

struct SketchArgs {
  std::size_t p = 10;
  std::size_t q = 2;
  std::string sdist = "normal";
  std::string scheme = "subspace";
  std::uint64_t seed = 0;

  SketchSpec spec() const {
    SketchSpec s;
    s.p = p;
    s.q = q;
    s.seed = seed;
    const auto d = parse_distribution(sdist);
    if (!d) throw UsageError("unknown --sdist '" + sdist + "' (normal|unif|rademacher)");
    s.distribution = *d;
    const auto sc = parse_power_scheme(scheme);
    if (!sc) throw UsageError("unknown --scheme '" + scheme + "' (direct|subspace|normalized)");
    s.scheme = *sc;
    return s;
  }

  json to_json() const {
    const SketchSpec s = spec();
    return {{"p", p}, {"q", q}, {"sdist", std::string(to_string(s.distribution))},
            {"scheme", std::string(to_string(s.scheme))}, {"seed", seed}};
  }
};

void add_sketch_options(CLI::App* app, SketchArgs& s) {
  app->add_option("--p", s.p, "Oversampling")->capture_default_str();
  app->add_option("--q", s.q, "Power iterations")->capture_default_str();
  app->add_option("--sdist", s.sdist, "Test matrix distribution: normal|unif|rademacher")
      ->capture_default_str();
  app->add_option("--scheme", s.scheme, "Power scheme: direct|subspace|normalized")
      ->capture_default_str();
  app->add_option("--seed", s.seed, "Random seed (default: $RLAM_SEED or 0)");
}

struct DecompArgs {
  std::string input;
  std::string out_prefix;
  std::optional<std::size_t> k;
  std::optional<std::size_t> nu, nv;
  SketchArgs sketch;
  bool center = true, scale = true, retx = true, whiten = false;
  bool rand = true;
  std::optional<double> lambda;
  std::size_t maxiter = 50;
  double tol = 1e-5;
  bool trace = false;
  std::string mode = "col";
  bool idx_only = false;
};

struct CompressArgs {
  std::string input, output;
  std::size_t k = 0;
  bool rand = true;
  SketchArgs sketch;
};

struct BenchArgs {
  std::vector<std::size_t> sizes{500, 1000};
  std::size_t k = 20, p = 10, trials = 5;
  std::vector<std::size_t> q_list{0, 1, 2};
  std::uint64_t seed = 0;
  double decay = 1.0;
  bool no_warmup = false;
  std::string output;
};

struct GenArgs {
  std::size_t m = 0, n = 0, r = 5;
  std::uint64_t seed = 0;
  double density = 0.2, amplitude = 500.0;
  std::string kind = "power";
  double rate = 1.0, noise = 0.0;
  std::string output, out_prefix;
};

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args) {
    doc_["tool"] = "rlam";
    doc_["version"] = version();
    doc_["command"] = std::move(command);
    doc_["argv"] = args;
    doc_["params"] = json::object();
    doc_["outputs"] = json::array();
  }
  json& params() { return doc_["params"]; }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  void set(const std::string& key, json v) { doc_[key] = std::move(v); }
  void write(const fs::path& path) const {
    std::ofstream f(path);
    if (!f) throw io::FormatError("cannot write manifest " + path.string());
    f << doc_.dump(2) << "\n";
  }

 private:
  json doc_;
};

// argv with an explicit --seed.
std::vector<std::string> pinned_argv(std::vector<std::string> args, std::uint64_t seed,
                                     bool has_seed_flag) {
  const bool present = std::any_of(args.begin(), args.end(), [](const std::string& a) {
    return a == "--seed" || a.rfind("--seed=", 0) == 0;
  });
  if (has_seed_flag && !present) {
    args.push_back("--seed");
    args.push_back(std::to_string(seed));
  }
  return args;
}

std::string prefix_or_stem(const std::string& prefix, const std::string& input) {
  if (!prefix.empty()) return prefix;
  fs::path p(input);
  return (p.parent_path() / p.stem()).string();
}

void write_index_csv(const IndexSet& idx, const fs::path& path, const std::string& header) {
  std::string s = header + "\n";
  for (std::size_t i : idx.indices()) s += std::to_string(i) + "\n";
  io::write_bytes(std::vector<unsigned char>(s.begin(), s.end()), path);
}

std::size_t require_k(const DecompArgs& a) {
  if (!a.k) throw UsageError("--k is required");
  return *a.k;
}

int run_decomp(const std::string& algo, const DecompArgs& a, const std::vector<std::string>& args,
               std::ostream& out, std::ostream& err) {
  const DenseMatrix x = io::read_matrix(a.input);
  const std::string prefix = prefix_or_stem(a.out_prefix, a.input);
  Manifest man("decomp", pinned_argv(args, a.sketch.seed, true));
  man.set("algorithm", algo);
  man.set("input", a.input);
  man.params() = a.sketch.to_json();
  auto emit = [&](const DenseMatrix& m, const std::string& role) {
    const fs::path p = prefix + "." + role + ".bin";
    io::write_matrix(m, p, io::Format::bin);
    man.output(p);
  };
  auto emit_vec = [&](const std::vector<double>& v, const std::string& role) {
    const fs::path p = prefix + "." + role + ".csv";
    io::write_vector_csv(v, p, role);
    man.output(p);
  };
  auto note = [&](const std::vector<std::string>& notes) {
    for (const auto& n : notes) err << "note: " << n << "\n";
  };
  const SketchSpec spec = a.sketch.spec();

  if (algo == "svd" || algo == "rsvd") {
    TruncatedSvd t;
    if (algo == "svd") {
      const std::size_t k = a.k.value_or(std::min(x.rows(), x.cols()));
      t = svd_truncated(x, k);
      man.params()["k"] = k;
    } else {
      t = rsvd(x, require_k(a), spec, a.nu, a.nv);
      man.params()["k"] = *a.k;
    }
    note(t.notes);
    emit(t.u(), "U");
    emit_vec(t.d(), "d");
    emit(t.v(), "V");
    out << algo << ": " << t.d().size() << " singular values, largest " << t.d().front() << "\n";
  } else if (algo == "rpca") {
    PcaOptions opts{a.center, a.scale, a.retx, a.rand, spec};
    const PcaModel model = rpca(x, require_k(a), opts);
    man.params()["k"] = *a.k;
    man.params()["center"] = a.center;
    man.params()["scale"] = a.scale;
    man.params()["retx"] = a.retx;
    man.params()["rand"] = a.rand;
    emit(model.rotation, "rotation");
    emit_vec(model.eigvals, "eigvals");
    if (model.scores) emit(*model.scores, "scores");
    if (model.center) emit_vec(*model.center, "center");
    if (model.scale) emit_vec(*model.scale, "scale");
    const ExplainedVariance ev = explained_variance(model);
    std::string s = "component,sdev,proportion,cumulative\n";
    char buf[128];
    for (std::size_t i = 0; i < model.sdev.size(); ++i) {
      std::snprintf(buf, sizeof buf, "PC%zu,%.10g,%.10g,%.10g\n", i + 1, model.sdev[i],
                    ev.proportions[i], ev.cumulative[i]);
      s += buf;
    }
    const fs::path summary = prefix + ".summary.csv";
    io::write_bytes(std::vector<unsigned char>(s.begin(), s.end()), summary);
    man.output(summary);
    if (ev.partial_denominator) err << "note: proportions use the retained eigenvalue sum\n";
    if (a.whiten) {
      const Whitened w = whiten(model);
      emit(w.loadings, "loadings");
      if (w.scores_white) emit(*w.scores_white, "scores_white");
    }
    out << s;
  } else if (algo == "rrpca") {
    IalmParams params;
    params.lambda = a.lambda;
    params.maxiter = a.maxiter;
    params.tol = a.tol;
    params.rand = a.rand;
    params.spec = spec;
    if (a.maxiter < 1) throw UsageError("--maxiter must be at least 1");
    const RpcaResult r = rrpca(x, params);
    man.params()["lambda"] = a.lambda ? json(*a.lambda) : json(nullptr);
    man.params()["maxiter"] = a.maxiter;
    man.params()["tol"] = a.tol;
    man.params()["rand"] = a.rand;
    emit(r.low_rank, "L");
    emit(r.sparse, "S");
    if (a.trace) {
      std::string s = "iteration,residual,k,l,mu\n";
      char buf[160];
      for (const auto& t : r.trace) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%zu,%zu,%.10g\n", t.iteration, t.residual, t.k,
                      t.l, t.mu);
        s += buf;
        err << "iter " << t.iteration << " residual " << t.residual << " k " << t.k << " l "
            << t.l << "\n";
      }
      const fs::path p = prefix + ".trace.csv";
      io::write_bytes(std::vector<unsigned char>(s.begin(), s.end()), p);
      man.output(p);
    }
    out << "rrpca: " << r.iterations << " iterations, "
        << (r.converged ? "converged" : "stopped at maxiter") << ", residual "
        << (r.trace.empty() ? 0.0 : r.trace.back().residual) << "\n";
  } else if (algo == "rid") {
    IdMode mode;
    if (a.mode == "col") mode = IdMode::col;
    else if (a.mode == "row") mode = IdMode::row;
    else throw UsageError("--mode must be col or row");
    const IdFactors f = a.rand ? rid(x, require_k(a), mode, spec, a.idx_only)
                               : id_deterministic(x, require_k(a), mode, a.idx_only);
    man.params()["k"] = *a.k;
    man.params()["mode"] = a.mode;
    man.params()["rand"] = a.rand;
    man.params()["idx_only"] = a.idx_only;
    if (!a.idx_only) {
      emit(f.skeleton, mode == IdMode::col ? "C" : "R");
      emit(f.z, "Z");
    }
    const fs::path p = prefix + ".idx.csv";
    write_index_csv(f.idx, p, "idx");
    man.output(p);
    out << "rid: selected " << f.idx.size() << " " << (mode == IdMode::col ? "columns" : "rows")
        << "\n";
  } else if (algo == "rcur") {
    const CurFactors f = rcur(x, require_k(a), spec, a.rand, a.idx_only);
    man.params()["k"] = *a.k;
    man.params()["rand"] = a.rand;
    man.params()["idx_only"] = a.idx_only;
    if (!a.idx_only) {
      emit(f.c, "C");
      emit(f.u, "U");
      emit(f.r, "R");
    }
    const fs::path pc = prefix + ".col_idx.csv";
    const fs::path pr = prefix + ".row_idx.csv";
    write_index_csv(f.col_idx, pc, "col_idx");
    write_index_csv(f.row_idx, pr, "row_idx");
    man.output(pc);
    man.output(pr);
    out << "rcur: selected " << f.col_idx.size() << " columns and " << f.row_idx.size()
        << " rows\n";
  }
  man.write(prefix + ".manifest.json");
  return kExitOk;
}

int run_compress(const CompressArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const io::Image img = io::read_pgm(a.input);
  const std::size_t minmn = std::min(img.pixels.rows(), img.pixels.cols());
  if (a.k < 1 || a.k > minmn) {
    throw UsageError("--k must lie in [1, " + std::to_string(minmn) + "]");
  }
  const TruncatedSvd t = a.rand ? rsvd(img.pixels, a.k, a.sketch.spec()) : svd_truncated(img.pixels, a.k);
  const DenseMatrix approx = reconstruct(t.factors);
  const double err = nrmse(img.pixels, approx);
  std::string output = a.output;
  if (output.empty()) {
    fs::path p(a.input);
    output = ((p.parent_path() / p.stem()).string() + ".k" + std::to_string(a.k) + ".pgm");
  }
  io::write_pgm(io::Image{approx, img.maxval, img.binary}, output);
  Manifest man("compress", pinned_argv(args, a.sketch.seed, true));
  man.set("input", a.input);
  man.params() = a.sketch.to_json();
  man.params()["k"] = a.k;
  man.params()["rand"] = a.rand;
  man.output(output);
  man.set("nrmse", err);
  man.write(output + ".manifest.json");
  char buf[64];
  std::snprintf(buf, sizeof buf, "nrmse=%.6g\n", err);
  out << buf;
  return kExitOk;
}

int run_bench_cmd(const BenchArgs& a, const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  if (a.sizes.empty() || a.q_list.empty()) throw UsageError("--sizes and --q-list must be non-empty");
  BenchConfig cfg;
  cfg.sizes = a.sizes;
  cfg.k = a.k;
  cfg.p = a.p;
  cfg.q_list = a.q_list;
  cfg.trials = a.trials;
  cfg.warmup = !a.no_warmup;
  cfg.seed = a.seed;
  cfg.decay = a.decay;
  const auto rows = run_bench(cfg, [&](const BenchRow& r) {
    err << r.algorithm << " m=" << r.m << " q=" << r.q << " median " << r.median_seconds
        << "s\n";
  });
  const std::string csv = bench_csv(rows);
  if (a.output.empty()) {
    out << csv;
    return kExitOk;
  }
  io::write_bytes(std::vector<unsigned char>(csv.begin(), csv.end()), a.output);
  Manifest man("bench", pinned_argv(args, a.seed, true));
  man.params() = {{"sizes", a.sizes}, {"k", a.k},           {"p", a.p},
                  {"q_list", a.q_list}, {"trials", a.trials}, {"warmup", cfg.warmup},
                  {"seed", a.seed},   {"decay", a.decay}};
  man.output(a.output);
  man.write(a.output + ".manifest.json");
  return kExitOk;
}

int run_gen(const std::string& kind, const GenArgs& a, const std::vector<std::string>& args,
            std::ostream& out) {
  if (a.m == 0 || a.n == 0) throw UsageError("--m and --n must be positive");
  Manifest man("gen", pinned_argv(args, a.seed, true));
  man.set("generator", kind);
  man.params() = {{"m", a.m}, {"n", a.n}, {"seed", a.seed}};
  std::string manifest_path;
  if (kind == "sparse") {
    if (a.out_prefix.empty()) throw UsageError("--out-prefix is required");
    const auto g = gen_lowrank_plus_sparse(a.m, a.n, a.r, a.density, a.amplitude, a.seed);
    for (const auto& [m, role] : {std::pair{&g.a, "A"}, {&g.low_rank, "L0"}, {&g.sparse, "S0"}}) {
      const fs::path p = a.out_prefix + "." + role + ".bin";
      io::write_matrix(*m, p, io::Format::bin);
      man.output(p);
    }
    man.params()["r"] = a.r;
    man.params()["density"] = a.density;
    man.params()["amplitude"] = a.amplitude;
    manifest_path = a.out_prefix + ".manifest.json";
  } else {
    if (a.output.empty()) throw UsageError("--out is required");
    DenseMatrix m;
    if (kind == "lowrank") {
      m = gen_lowrank(a.m, a.n, a.r, a.seed);
      man.params()["r"] = a.r;
    } else {
      SpectrumProfile prof;
      if (a.kind == "power") prof.kind = SpectrumKind::power_decay;
      else if (a.kind == "exp") prof.kind = SpectrumKind::exp_decay;
      else if (a.kind == "exact") prof.kind = SpectrumKind::exact_rank;
      else throw UsageError("--kind must be power, exp or exact");
      prof.rank = a.r;
      prof.rate = a.rate;
      prof.noise = a.noise;
      m = gen_decaying(a.m, a.n, prof, a.seed);
      man.params()["kind"] = a.kind;
      man.params()["rate"] = a.rate;
      man.params()["r"] = a.r;
      man.params()["noise"] = a.noise;
    }
    io::write_matrix(m, a.output);
    man.output(a.output);
    manifest_path = a.output + ".manifest.json";
  }
  man.write(manifest_path);
  out << "gen " << kind << ": " << a.m << "x" << a.n << "\n";
  return kExitOk;
}

// Re-runs the argv recorded in a manifest, redirecting its outputs.
std::vector<std::string> replay_args(const std::string& manifest, const std::string& redirect) {
  std::ifstream f(manifest);
  if (!f) throw io::FormatError("cannot open manifest " + manifest);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw io::FormatError(std::string("malformed manifest: ") + e.what());
  }
  if (!doc.contains("argv") || !doc["argv"].is_array()) {
    throw io::FormatError("manifest has no argv array");
  }
  std::vector<std::string> args = doc["argv"].get<std::vector<std::string>>();
  if (redirect.empty()) return args;
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    for (const std::string flag : {"--out-prefix", "--out"}) {
      if (args[i] == flag && i + 1 < args.size()) {
        args[i + 1] = redirect;
        replaced = true;
      } else if (args[i].rfind(flag + "=", 0) == 0) {
        args[i] = flag + "=" + redirect;
        replaced = true;
      }
    }
  }
  if (!replaced) {
    args.push_back(doc.value("command", "") == "decomp" || doc.value("generator", "") == "sparse"
                       ? "--out-prefix"
                       : "--out");
    args.push_back(redirect);
  }
  return args;
}

}  // namespace

const char* version() { return RLAM_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rlam: randomized low-rank matrix decompositions", "rlam"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  // decomp
  DecompArgs da;
  da.sketch.seed = default_seed();
  auto* decomp = app.add_subcommand("decomp", "Factor a matrix file");
  decomp->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> algos = {
      {"svd", "Deterministic truncated SVD"},
      {"rsvd", "Randomized SVD"},
      {"rpca", "Randomized PCA"},
      {"rrpca", "Robust PCA (inexact ALM)"},
      {"rid", "Interpolative decomposition"},
      {"rcur", "CUR decomposition"}};
  std::vector<CLI::App*> algo_apps;
  for (const auto& [name, desc] : algos) {
    auto* sub = decomp->add_subcommand(name, desc);
    sub->add_option("input", da.input, "Input matrix (.bin, .csv, .pgm)")->required();
    sub->add_option("--out-prefix", da.out_prefix, "Prefix for factor files");
    sub->add_option("--k", da.k, "Target rank");
    add_sketch_options(sub, da.sketch);
    if (name == "svd" || name == "rsvd") {
      sub->add_option("--nu", da.nu, "Left singular vectors to return");
      sub->add_option("--nv", da.nv, "Right singular vectors to return");
    }
    if (name == "rpca") {
      sub->add_flag("--center,!--no-center", da.center, "Center columns (default on)");
      sub->add_flag("--scale,!--no-scale", da.scale, "Scale columns (default on)");
      sub->add_flag("--retx,!--no-retx", da.retx, "Write scores (default on)");
      sub->add_flag("--whiten", da.whiten, "Also write loadings and whitened scores");
    }
    if (name == "rrpca") {
      sub->add_option("--lambda", da.lambda, "Sparsity weight (default max(m,n)^-1/2)");
      sub->add_option("--maxiter", da.maxiter, "Iteration cap")->capture_default_str();
      sub->add_option("--tol", da.tol, "Relative residual tolerance")->capture_default_str();
      sub->add_flag("--trace", da.trace, "Write per-iteration trace CSV");
    }
    if (name == "rid") {
      sub->add_option("--mode", da.mode, "col|row")->capture_default_str();
    }
    if (name == "rid" || name == "rcur") {
      sub->add_flag("--idx-only", da.idx_only, "Write index sets only");
    }
    if (name != "svd" && name != "rsvd") {
      sub->add_flag("--rand,!--deterministic", da.rand, "Randomized (default) or deterministic");
    }
    algo_apps.push_back(sub);
  }

  // compress
  CompressArgs ca;
  ca.sketch.seed = default_seed();
  auto* compress = app.add_subcommand("compress", "Rank-k image compression of a PGM file");
  compress->add_option("input", ca.input, "Input PGM")->required();
  compress->add_option("--k", ca.k, "Target rank")->required();
  compress->add_option("--out", ca.output, "Output PGM");
  compress->add_flag("--rand,!--deterministic", ca.rand, "Randomized (default) or deterministic");
  add_sketch_options(compress, ca.sketch);

  // bench
  BenchArgs ba;
  ba.seed = default_seed();
  auto* bench = app.add_subcommand("bench", "Runtime/accuracy table versus the deterministic SVD");
  bench->add_option("--sizes", ba.sizes, "Row counts m (n = 0.75 m)")->delimiter(',');
  bench->add_option("--k", ba.k, "Target rank")->capture_default_str();
  bench->add_option("--p", ba.p, "Oversampling")->capture_default_str();
  bench->add_option("--q-list", ba.q_list, "Power iteration counts")->delimiter(',');
  bench->add_option("--trials", ba.trials, "Timed runs per row (median)")->capture_default_str();
  bench->add_option("--seed", ba.seed, "Random seed");
  bench->add_option("--decay", ba.decay, "Planted spectrum j^-decay")->capture_default_str();
  bench->add_flag("--no-warmup", ba.no_warmup, "Do not discard a warm-up run");
  bench->add_option("--out", ba.output, "CSV output file (default stdout)");

  // gen
  GenArgs ga;
  ga.seed = default_seed();
  auto* gen = app.add_subcommand("gen", "Write a synthetic test matrix");
  gen->require_subcommand(1);
  std::vector<CLI::App*> gen_apps;
  for (const std::string name : {"lowrank", "sparse", "decaying"}) {
    auto* sub = gen->add_subcommand(name);
    sub->add_option("--m", ga.m, "Rows")->required();
    sub->add_option("--n", ga.n, "Columns")->required();
    sub->add_option("--r", ga.r, "Rank")->capture_default_str();
    sub->add_option("--seed", ga.seed, "Random seed");
    if (name == "sparse") {
      sub->add_option("--density", ga.density)->capture_default_str();
      sub->add_option("--amplitude", ga.amplitude)->capture_default_str();
      sub->add_option("--out-prefix", ga.out_prefix, "Writes <prefix>.A/.L0/.S0.bin");
    } else {
      sub->add_option("--out", ga.output, "Output matrix file");
    }
    if (name == "decaying") {
      sub->add_option("--kind", ga.kind, "power|exp|exact")->capture_default_str();
      sub->add_option("--rate", ga.rate, "Decay rate")->capture_default_str();
      sub->add_option("--noise", ga.noise, "Additive noise level")->capture_default_str();
    }
    gen_apps.push_back(sub);
  }

  // replay
  std::string manifest_path, redirect;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "Manifest JSON")->required();
  replay->add_option("--out", redirect, "Replacement output path or prefix");

  std::vector<std::string> argv_store{"rlam"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (decomp->parsed()) {
      for (std::size_t i = 0; i < algo_apps.size(); ++i) {
        if (algo_apps[i]->parsed()) return run_decomp(algos[i].first, da, args, out, err);
      }
    }
    if (compress->parsed()) return run_compress(ca, args, out);
    if (bench->parsed()) return run_bench_cmd(ba, args, out, err);
    if (gen->parsed()) {
      for (auto* sub : gen_apps) {
        if (sub->parsed()) return run_gen(sub->get_name(), ga, args, out);
      }
    }
    if (replay->parsed()) {
      const auto again = replay_args(manifest_path, redirect);
      if (!again.empty() && again.front() == "replay") throw UsageError("manifest replays itself");
      return run(again, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rlam::cli
