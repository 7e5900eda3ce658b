#include "cli.hpp"

#include "otsense/bootstrap.hpp"
#include "otsense/error.hpp"
#include "otsense/estimators.hpp"
#include "otsense/io.hpp"
#include "otsense/models.hpp"
#include "otsense/partition.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace otsense::cli {

namespace {

struct Options {
  std::string data;
  std::string inputs;
  std::string outputs;
  int partitions = 20;
  std::string solver = "exact";
  double epsilon = 0.0;
  int iterations = 1000;
  double max_err = 1e-9;
  double p = 2.0;
  std::string cost = "sq-euclidean";
  double minkowski_p = 2.0;
  double minkowski_q = 2.0;
  bool boot = false;
  int replicates = 1000;
  double conf = 0.95;
  std::string ci_type = "normal";
  std::uint64_t seed = 0;
  std::string out = "results";
  bool plot = false;
  unsigned threads = 0;
  std::string dummy;
  int ranking = 0;
  bool weighted = false;
  // example
  std::string model = "linear-gaussian";
  long n = 2000;
  std::string file;
};

void add_data_flags(CLI::App* sub, Options& o, bool with_inputs = true) {
  sub->add_option("--data", o.data, "Dataset CSV (header + numeric rows)")->required();
  if (with_inputs) sub->add_option("--inputs", o.inputs, "Input columns: names or 1-based ranges (default: all non-outputs)");
  sub->add_option("--outputs", o.outputs, "Output columns: names or 1-based ranges")->required();
  sub->add_option("--M", o.partitions, "Number of partitions per input")->check(CLI::Range(2, 1 << 30));
  sub->add_option("--threads", o.threads, "Worker cap (default: OTSENSE_THREADS or all cores)");
  sub->add_option("--out", o.out, "Output directory");
}

void add_solver_flags(CLI::App* sub, Options& o) {
  sub->add_option("--solver", o.solver, "1d | wass-bures | exact | sinkhorn | sinkhorn-stable");
  sub->add_option("--epsilon", o.epsilon, "Entropic regularization (default 0.01 x mean scaled cost)");
  sub->add_option("--iterations", o.iterations, "Sinkhorn iteration cap");
  sub->add_option("--max-err", o.max_err, "Sinkhorn marginal tolerance");
  sub->add_option("--p", o.p, "Order of the |.|^p cost for the 1d solver");
  sub->add_option("--cost", o.cost, "sq-euclidean | minkowski");
  sub->add_option("--minkowski-p", o.minkowski_p, "Minkowski order p");
  sub->add_option("--minkowski-q", o.minkowski_q, "Power q applied to the Minkowski distance");
  sub->add_flag("--weighted", o.weighted, "Weight classes by size instead of 1/M");
}

void add_boot_flags(CLI::App* sub, Options& o) {
  sub->add_flag("--boot", o.boot, "Bootstrap confidence intervals");
  sub->add_option("--R", o.replicates, "Bootstrap replicates");
  sub->add_option("--conf", o.conf, "Confidence level");
  sub->add_option("--ci-type", o.ci_type, "normal | basic | percentile");
  sub->add_option("--seed", o.seed, "Seed for bootstrap and dummy draws");
}

GroundCost make_cost(const Options& o) {
  if (o.cost == "sq-euclidean") return GroundCost::sq_euclidean();
  if (o.cost == "minkowski") return GroundCost::minkowski_power(o.minkowski_p, o.minkowski_q);
  throw std::invalid_argument("unknown cost '" + o.cost + "'");
}

SolverConfig make_solver(const Options& o) {
  SolverConfig cfg;
  cfg.solver = parse_solver(o.solver);
  if (o.epsilon != 0.0) cfg.epsilon = o.epsilon;
  cfg.num_iterations = o.iterations;
  cfg.max_err = o.max_err;
  cfg.p = o.p;
  cfg.validate();
  return cfg;
}

EstimatorOptions make_estimator(const Options& o) {
  EstimatorOptions e;
  e.threads = o.threads;
  e.weighted = o.weighted;
  return e;
}

DummyDistribution parse_dummy(const std::string& s) {
  if (s == "normal" || s == "rnorm") return DummyDistribution::standard_normal;
  if (s == "uniform" || s == "runif") return DummyDistribution::uniform;
  throw std::invalid_argument("unknown dummy distribution '" + s + "'");
}

void print_estimate(std::ostream& out, const IndexEstimate& est, std::optional<double> threshold) {
  out << "method: " << est.method << "\n";
  out << "bound: " << format_number(est.bound) << "\n";
  if (!est.converged) out << "warning: some Sinkhorn solves hit the iteration cap\n";
  std::size_t w = 5;
  for (const auto& in : est.inputs) w = std::max(w, in.name.size());
  out << std::left << std::setw(static_cast<int>(w) + 2) << "input" << "index";
  const bool comps = !est.inputs.empty() && est.inputs.front().components.has_value();
  if (comps) out << "       advective   diffusive   residual";
  if (est.bootstrap) out << "    low.ci      high.ci";
  out << "\n";
  char buf[64];
  for (const auto& in : est.inputs) {
    out << std::left << std::setw(static_cast<int>(w) + 2) << in.name;
    std::snprintf(buf, sizeof buf, "%-12.6g", in.index);
    out << buf;
    if (comps && in.components) {
      std::snprintf(buf, sizeof buf, "%-12.6g%-12.6g%-12.6g", in.components->advective, in.components->diffusive,
                    in.components->residual);
      out << buf;
    }
    if (est.bootstrap) {
      if (const auto* e = est.bootstrap->find(in.name, est.method)) {
        std::snprintf(buf, sizeof buf, "%-12.6g%-12.6g", e->ci_low, e->ci_high);
        out << buf;
      }
    }
    out << "\n";
  }
  if (threshold) out << "irrelevance threshold: " << format_number(*threshold) << "\n";
}

int run_indices(const Options& o, bool wb_only, std::ostream& out) {
  const auto ds = read_dataset_csv(o.data, o.inputs, o.outputs);
  SolverConfig cfg = make_solver(o);
  if (wb_only) cfg.solver = SolverKind::wass_bures;
  const auto cost = make_cost(o);
  const auto eopts = make_estimator(o);
  IndexEstimate est;
  if (o.boot) {
    BootstrapOptions b;
    b.replicates = o.replicates;
    b.confidence = o.conf;
    b.type = parse_ci_type(o.ci_type);
    b.seed = o.seed;
    est = estimate_with_bootstrap(ds, o.partitions, cost, cfg, b, eopts);
  } else {
    est = estimate_indices(ds, o.partitions, cost, cfg, eopts);
  }
  std::optional<double> threshold;
  if (!o.dummy.empty()) {
    SolverConfig tcfg = cfg;
    if (tcfg.solver == SolverKind::wass_bures || tcfg.solver == SolverKind::one_d) tcfg.solver = SolverKind::exact;
    threshold = irrelevance_threshold(ds.y(), o.partitions, parse_dummy(o.dummy), cost, tcfg, o.seed, eopts)
                    .inputs.front()
                    .index;
  }
  write_results(est, threshold, o.out, o.plot);
  print_estimate(out, est, threshold);
  return 0;
}

int run_smap(const Options& o, std::ostream& out) {
  const auto ds = read_dataset_csv(o.data, o.inputs, o.outputs);
  const auto map = ot_indices_smap(ds, o.partitions, make_estimator(o));
  write_smap(map, o.out);
  out << std::left << std::setw(10) << "output";
  for (const auto& n : map.inputs) out << std::setw(14) << n;
  out << "\n";
  for (Index r = 0; r < map.values.rows(); ++r) {
    out << std::setw(10) << map.outputs[static_cast<std::size_t>(r)];
    for (Index c = 0; c < map.values.cols(); ++c) out << std::setw(14) << map.values(r, c);
    out << "\n";
  }
  return 0;
}

int run_threshold(const Options& o, std::ostream& out) {
  const auto table = read_csv(o.data);
  const auto cols = resolve_columns(table.header, o.outputs);
  Matrix y(table.values.rows(), static_cast<Index>(cols.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    y.col(static_cast<Index>(j)) = table.values.col(cols[j]);
    names.push_back(table.header[static_cast<std::size_t>(cols[j])]);
  }
  const auto ys = SampleMatrix::create(std::move(y), std::move(names), "Y");
  SolverConfig cfg = make_solver(o);
  if (cfg.solver == SolverKind::wass_bures || cfg.solver == SolverKind::one_d) {
    throw std::invalid_argument("threshold needs exact, sinkhorn or sinkhorn-stable");
  }
  const auto est = irrelevance_threshold(ys, o.partitions, parse_dummy(o.dummy.empty() ? "normal" : o.dummy),
                                         make_cost(o), cfg, o.seed, make_estimator(o));
  write_results(est, std::nullopt, o.out, o.plot);
  out << est.inputs.front().name << " " << format_number(est.inputs.front().index) << "\n";
  return 0;
}

int run_separations(const Options& o, std::ostream& out) {
  const auto ds = read_dataset_csv(o.data, o.inputs, o.outputs);
  const auto est = estimate_indices(ds, o.partitions, make_cost(o), make_solver(o), make_estimator(o));
  std::vector<const InputIndex*> order;
  for (const auto& in : est.inputs) order.push_back(&in);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->index > b->index; });
  const std::size_t keep = o.ranking > 0 ? std::min<std::size_t>(static_cast<std::size_t>(o.ranking), order.size())
                                         : order.size();
  std::vector<std::string> shown;
  for (std::size_t i = 0; i < keep; ++i) shown.push_back(order[i]->name);

  IndexEstimate subset = est;
  subset.bootstrap.reset();
  subset.inputs.clear();
  for (const auto& name : shown) subset.inputs.push_back(*est.find(name));
  write_results(subset, std::nullopt, o.out, false);
  if (o.plot) {
    std::ofstream svg(std::filesystem::path(o.out) / "separations.svg", std::ios::binary | std::ios::trunc);
    if (!svg) throw DataError("cannot write separations.svg");
    svg << separations_svg(subset);
  }
  out << "input,class,x,value\n";
  for (const auto& row : local_separations(subset)) {
    out << row.input << "," << row.partition << "," << format_number(row.x) << "," << format_number(row.value) << "\n";
  }
  return 0;
}

int run_example(const Options& o, std::ostream& out) {
  if (o.n < 2) throw std::invalid_argument("--n must be >= 2");
  std::vector<std::string> header;
  Matrix values;
  const auto glue = [&](const std::vector<const SampleMatrix*>& parts, const std::vector<std::string>& prefixes) {
    Index cols = 0;
    for (const auto* p : parts) cols += p->cols();
    values.resize(parts.front()->rows(), cols);
    Index at = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      values.middleCols(at, parts[k]->cols()) = parts[k]->values();
      for (const auto& nm : parts[k]->names()) header.push_back(prefixes[k] + nm);
      at += parts[k]->cols();
    }
  };
  if (o.model == "linear-gaussian") {
    const auto ds = gen_linear_gaussian(o.n, o.seed);
    glue({&ds.x(), &ds.y()}, {"", ""});
  } else if (o.model == "budworm") {
    BudwormOptions bo;
    bo.threads = o.threads;
    const auto s = gen_budworm(o.n, o.seed, bo);
    glue({&s.x, &s.B, &s.S, &s.E}, {"", "B_", "S_", "E_"});
  } else if (o.model == "climate") {
    ClimateOptions co;
    co.threads = o.threads;
    const auto ds = gen_climate(o.n, o.seed, co);
    glue({&ds.x(), &ds.y()}, {"", ""});
  } else {
    throw std::invalid_argument("unknown model '" + o.model + "'");
  }
  const std::filesystem::path path(o.file);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_csv(path, header, values);
  out << "wrote " << values.rows() << " rows x " << values.cols() << " columns to " << o.file << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal-transport global sensitivity indices from given data"};
  app.name("otsense");
  app.require_subcommand(1);
  Options o;

  auto* indices = app.add_subcommand("indices", "OT indices for the selected outputs");
  add_data_flags(indices, o);
  add_solver_flags(indices, o);
  add_boot_flags(indices, o);
  indices->add_option("--dummy", o.dummy, "Also compute the irrelevance threshold (normal | uniform)");
  indices->add_flag("--plot", o.plot, "Write indices.svg and separations.svg");

  auto* wb = app.add_subcommand("wb", "Wasserstein-Bures indices with advective/diffusive split");
  add_data_flags(wb, o);
  add_boot_flags(wb, o);
  wb->add_option("--dummy", o.dummy, "Also compute the irrelevance threshold (normal | uniform)");
  wb->add_flag("--plot", o.plot, "Write indices.svg and separations.svg");

  auto* smap = app.add_subcommand("smap", "One-dimensional index for every (output, input) pair");
  add_data_flags(smap, o);

  auto* threshold = app.add_subcommand("threshold", "Index of an independent dummy input");
  add_data_flags(threshold, o, false);
  add_solver_flags(threshold, o);
  threshold->add_option("--dummy", o.dummy, "normal | uniform (default normal)");
  threshold->add_option("--seed", o.seed, "Seed for the dummy draw");
  threshold->add_flag("--plot", o.plot, "Write indices.svg");

  auto* seps = app.add_subcommand("separations", "Local separations per class");
  add_data_flags(seps, o);
  add_solver_flags(seps, o);
  seps->add_option("--ranking", o.ranking, "Keep only the top-k inputs (0 = all)");
  seps->add_flag("--plot", o.plot, "Write separations.svg");

  auto* example = app.add_subcommand("example", "Write a sample from a built-in model");
  example->add_option("--model", o.model, "linear-gaussian | budworm | climate");
  example->add_option("--n", o.n, "Sample size");
  example->add_option("--seed", o.seed, "RNG seed");
  example->add_option("--out", o.file, "CSV path")->required();
  example->add_option("--threads", o.threads, "Worker cap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (indices->parsed()) return run_indices(o, false, out);
    if (wb->parsed()) return run_indices(o, true, out);
    if (smap->parsed()) return run_smap(o, out);
    if (threshold->parsed()) return run_threshold(o, out);
    if (seps->parsed()) return run_separations(o, out);
    if (example->parsed()) return run_example(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace otsense::cli
