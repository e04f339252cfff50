#include "wigneg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigneg/mc.hpp"
#include "wigneg/oracle.hpp"
#include "wigneg/randstates.hpp"
#include "wigneg/report.hpp"
#include "wigneg/swkernel.hpp"

namespace wigneg {

namespace {

/// Bad arguments or input files; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Family {
  int two_block = 1;
  std::uint64_t random_seed = 0;
  CLI::Option* random_opt = nullptr;

  void attach(CLI::App* cmd) {
    auto* tb = cmd->add_option("--two-block", two_block,
                               "two-block kernel with k negative eigenvalues (default 1)");
    random_opt = cmd->add_option("--random", random_seed, "random kernel drawn from this seed");
    tb->excludes(random_opt);
  }

  KernelSelector selector() const {
    return random_opt && random_opt->count() > 0 ? KernelSelector::random(random_seed)
                                                 : KernelSelector::two_block(two_block);
  }
};

struct Common {
  std::string format = "csv";
  unsigned workers = default_workers();

  void attach_format(CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json", "pretty"}))
        ->capture_default_str();
  }
  void attach_workers(CLI::App* cmd) {
    cmd->add_option("--workers", workers, "worker threads (default: $WIGNEG_WORKERS or cores)")
        ->check(CLI::PositiveNumber);
  }
  OutputFormat output_format() const { return output_format_from_string(format); }
};

void check_dimension(int n) {
  if (n < 2) throw UsageError("N must be ≥ 2");
}

KernelSpectrum build_kernel(int n, const KernelSelector& selector) {
  check_dimension(n);
  if (!selector.valid_for(n))
    throw UsageError("k must satisfy 1 ≤ k ≤ N−1 (got k=" + selector.k_column() +
                     ", N=" + std::to_string(n) + ")");
  return selector.build(n);
}

OracleResult oracle_for(int n, const KernelSelector& selector, const KernelSpectrum& spectrum,
                        double tol = 1e-10) {
  return selector.kind == KernelSelector::Kind::TwoBlock ? two_block_exact(n, selector.k)
                                                         : cf_inversion_exact(spectrum, tol);
}

// Output sink: stdout, or a file opened before any work starts.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    out_ = file_.get();
  }
  std::ostream& stream() { return *out_; }
  void finish() {
    out_->flush();
    if (!*out_) throw std::runtime_error("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void print_kernel(std::ostream& out, const KernelSpectrum& s, OutputFormat format) {
  const auto r = master_residuals(s);
  const auto m = moments(s);
  switch (format) {
    case OutputFormat::Csv:
      out << "quantity,value,multiplicity\n";
      out << "label," << s.label() << ",\n";
      out << "N," << s.dimension() << ",\n";
      for (const auto& b : s.blocks())
        out << "eigenvalue," << format_double(b.value) << ',' << b.multiplicity << '\n';
      out << "residual_trace," << format_double(r.trace) << ",\n";
      out << "residual_trace_sq," << format_double(r.trace_sq) << ",\n";
      out << "Z1," << format_double(m.z1) << ",\n";
      out << "Z2," << format_double(m.z2) << ",\n";
      out << "M1," << format_double(m.m1) << ",\n";
      out << "M2," << format_double(m.m2) << ",\n";
      out << "m," << m.nonnegative_count << ",\n";
      out << "t," << format_double(m.t) << ",\n";
      break;
    case OutputFormat::Json: {
      nlohmann::ordered_json j;
      j["label"] = s.label();
      j["N"] = s.dimension();
      auto eig = nlohmann::ordered_json::array();
      for (const auto& b : s.blocks())
        eig.push_back({{"value", b.value}, {"multiplicity", b.multiplicity}});
      j["eigenvalues"] = eig;
      j["residuals"] = {{"trace", r.trace}, {"trace_sq", r.trace_sq}};
      j["moments"] = {{"Z1", m.z1}, {"Z2", m.z2}, {"M1", m.m1},
                      {"M2", m.m2}, {"m", m.nonnegative_count}, {"t", m.t}};
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Pretty:
      out << s.label() << " (N = " << s.dimension() << ")\n";
      out << std::setprecision(10);
      for (const auto& b : s.blocks())
        out << "  " << std::setw(16) << b.value << "  x" << b.multiplicity << '\n';
      out << std::setprecision(3) << "residuals: trace " << r.trace << ", trace_sq " << r.trace_sq
          << '\n';
      out << std::setprecision(10) << "Z1 " << m.z1 << "  Z2 " << m.z2 << "  M1 " << m.m1
          << "  M2 " << m.m2 << "  m " << m.nonnegative_count << "  t " << m.t << '\n';
      out << std::defaultfloat << std::setprecision(6);
      break;
  }
}

void print_oracle(std::ostream& out, const OracleResult& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv:
      out << "method,value,estimated_abs_error\n"
          << to_string(r.method) << ',' << format_double(r.value) << ','
          << format_double(r.estimated_abs_error) << '\n';
      break;
    case OutputFormat::Json: {
      nlohmann::ordered_json j;
      j["method"] = std::string(to_string(r.method));
      j["value"] = r.value;
      j["estimated_abs_error"] = r.estimated_abs_error;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Pretty:
      out << to_string(r.method) << ": " << format_double(r.value) << "  (+/- "
          << std::setprecision(2) << r.estimated_abs_error << std::setprecision(6) << ")\n";
      break;
  }
}

DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read state file '" + path + "'");
  auto malformed = [&](const std::string& why) {
    return UsageError("malformed state file '" + path + "': " + why);
  };
  std::string line;
  if (!std::getline(in, line)) throw malformed("missing dimension line");
  int n = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n) || (ls >> extra)) throw malformed("first line must be the dimension N");
  }
  if (n < 1) throw malformed("dimension must be positive");
  ComplexMatrix rho(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!std::getline(in, line))
        throw malformed("expected " + std::to_string(n * n) + " entries");
      std::istringstream ls(line);
      double re = 0.0, im = 0.0;
      std::string extra;
      if (!(ls >> re >> im) || (ls >> extra))
        throw malformed("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") must be 're im'");
      rho(i, j) = {re, im};
    }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw malformed("trailing data");
  try {
    return DensityMatrix::validated(std::move(rho));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid state in '") + path + "': " + e.what());
  }
}

SweepConfig load_sweep_config(const std::string& path, bool& with_oracle) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  SweepConfig config;
  try {
    const auto j = nlohmann::json::parse(in);
    config.dimensions = j.value("dimensions", std::vector<int>{});
    for (const auto& kernel : j.value("kernels", nlohmann::json::array())) {
      if (kernel.contains("two_block"))
        config.kernels.push_back(KernelSelector::two_block(kernel.at("two_block").get<int>()));
      else if (kernel.contains("random"))
        config.kernels.push_back(KernelSelector::random(kernel.at("random").get<std::uint64_t>()));
      else
        throw UsageError("kernel entries need a 'two_block' or 'random' key");
    }
    config.trials = j.value("trials", config.trials);
    config.seed = j.value("seed", config.seed);
    config.method = method_from_string(j.value("method", std::string("fast-gamma")));
    config.workers = j.value("workers", default_workers());
    config.z = j.value("z", config.z);
    with_oracle = j.value("oracle", false);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config file '" + path + "': " + e.what());
  }
  return config;
}

}  // namespace

unsigned default_workers() {
  if (const char* env = std::getenv("WIGNEG_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wigner-function negativity of Hilbert-Schmidt random states"};
  app.name("wigneg");
  app.require_subcommand(1);

  Common common;

  // kernel
  auto* kernel = app.add_subcommand("kernel", "print a kernel spectrum, residuals and moments");
  int kernel_n = 0;
  Family kernel_family;
  kernel->add_option("--n", kernel_n, "number of levels")->required();
  kernel_family.attach(kernel);
  common.attach_format(kernel);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of the global measure");
  int est_n = 0;
  Family est_family;
  std::uint64_t est_trials = 1'000'000, est_seed = 1;
  std::string est_method = "fast-gamma", est_out;
  double est_z = 1.96;
  bool est_oracle = false;
  estimate->add_option("--n", est_n, "number of levels")->required();
  est_family.attach(estimate);
  estimate->add_option("--trials", est_trials, "number of sampled states")->capture_default_str();
  estimate->add_option("--seed", est_seed, "master seed")->capture_default_str();
  estimate->add_option("--method", est_method, "sampling path")
      ->check(CLI::IsMember({"fast-gamma", "full-ginibre"}))
      ->capture_default_str();
  estimate->add_option("--z", est_z, "z-value of the Wilson interval")->capture_default_str();
  estimate->add_flag("--oracle", est_oracle, "fill the oracle_value column");
  estimate->add_option("--out", est_out, "write to this file instead of stdout");
  common.attach_workers(estimate);
  common.attach_format(estimate);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "estimate over a grid of N and kernels");
  std::vector<int> sweep_n, sweep_k;
  std::vector<std::uint64_t> sweep_random;
  std::uint64_t sweep_trials = 100'000, sweep_seed = 1;
  std::string sweep_method = "fast-gamma", sweep_out, sweep_config;
  double sweep_z = 1.96;
  bool sweep_oracle = false;
  auto* sweep_n_opt = sweep->add_option("--n", sweep_n, "levels, e.g. 2,4,8")->delimiter(',');
  auto* sweep_k_opt =
      sweep->add_option("--two-block", sweep_k, "two-block k values")->delimiter(',');
  auto* sweep_r_opt =
      sweep->add_option("--random", sweep_random, "random-kernel seeds")->delimiter(',');
  auto* sweep_trials_opt =
      sweep->add_option("--trials", sweep_trials, "trials per point")->capture_default_str();
  auto* sweep_seed_opt =
      sweep->add_option("--seed", sweep_seed, "master seed")->capture_default_str();
  auto* sweep_method_opt = sweep->add_option("--method", sweep_method, "sampling path")
                               ->check(CLI::IsMember({"fast-gamma", "full-ginibre"}))
                               ->capture_default_str();
  auto* sweep_z_opt = sweep->add_option("--z", sweep_z, "z-value of the Wilson interval");
  sweep->add_flag("--oracle", sweep_oracle, "fill the oracle_value column");
  sweep->add_option("--out", sweep_out, "write to this file instead of stdout");
  sweep->add_option("--config", sweep_config, "JSON sweep configuration");
  common.attach_workers(sweep);
  auto* sweep_workers_opt = sweep->get_option("--workers");
  common.attach_format(sweep);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact or asymptotic negativity probability");
  bool oracle_limit = false, oracle_cf = false;
  double oracle_clt = 0.0, oracle_tol = 1e-10;
  int oracle_n = 0;
  Family oracle_family;
  auto* limit_opt = oracle->add_flag("--limit", oracle_limit, "large-N limit");
  auto* clt_opt = oracle->add_option("--clt", oracle_clt, "CLT probability P(t) at this t");
  auto* oracle_n_opt = oracle->add_option("--n", oracle_n, "number of levels");
  oracle_family.attach(oracle);
  oracle->add_flag("--cf", oracle_cf, "use characteristic-function inversion for two-block kernels");
  oracle->add_option("--tol", oracle_tol, "tolerance of the inversion")->capture_default_str();
  limit_opt->excludes(clt_opt)->excludes(oracle_n_opt);
  clt_opt->excludes(oracle_n_opt);
  common.attach_format(oracle);

  // state
  auto* state = app.add_subcommand("state", "per-state measure over Haar-random phase-space points");
  int state_n = 0, pure_index = 0;
  bool mixed = false;
  std::string state_file;
  Family state_family;
  std::uint64_t state_trials = 1'000'000, state_seed = 1;
  double state_z = 1.96;
  auto* state_n_opt = state->add_option("--n", state_n, "number of levels");
  auto* mixed_opt = state->add_flag("--maximally-mixed", mixed, "the state I/N");
  auto* pure_opt = state->add_option("--pure-basis", pure_index, "basis state |i>, 1-based");
  auto* file_opt = state->add_option("--state-file", state_file, "density matrix file");
  mixed_opt->excludes(pure_opt)->excludes(file_opt);
  pure_opt->excludes(file_opt);
  state_family.attach(state);
  state->add_option("--trials", state_trials, "phase-space points")->capture_default_str();
  state->add_option("--seed", state_seed, "master seed")->capture_default_str();
  state->add_option("--z", state_z, "z-value of the Wilson interval")->capture_default_str();
  common.attach_workers(state);
  common.attach_format(state);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("wigneg");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (kernel->parsed()) {
      print_kernel(out, build_kernel(kernel_n, kernel_family.selector()), common.output_format());
      return kExitOk;
    }

    if (estimate->parsed()) {
      if (est_trials == 0) throw UsageError("trials must be ≥ 1");
      const auto selector = est_family.selector();
      const auto spectrum = build_kernel(est_n, selector);
      Sink sink(est_out, out);
      const auto start = std::chrono::steady_clock::now();
      const auto estimate_result = estimate_global(spectrum, method_from_string(est_method),
                                                   {est_trials, est_seed, common.workers, est_z});
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      auto record =
          make_record(est_n, spectrum, selector.k_column(), estimate_result, elapsed.count());
      if (est_oracle) record.oracle_value = oracle_for(est_n, selector, spectrum).value;
      write_records(sink.stream(), std::span(&record, 1), common.output_format(), true);
      sink.finish();
      return kExitOk;
    }

    if (sweep->parsed()) {
      SweepConfig config;
      bool with_oracle = false;
      if (!sweep_config.empty()) config = load_sweep_config(sweep_config, with_oracle);
      if (sweep_n_opt->count() > 0 || sweep_config.empty()) config.dimensions = sweep_n;
      if (sweep_k_opt->count() > 0 || sweep_r_opt->count() > 0 || sweep_config.empty()) {
        config.kernels.clear();
        for (int k : sweep_k) config.kernels.push_back(KernelSelector::two_block(k));
        for (auto s : sweep_random) config.kernels.push_back(KernelSelector::random(s));
      }
      if (sweep_trials_opt->count() > 0 || sweep_config.empty()) config.trials = sweep_trials;
      if (sweep_seed_opt->count() > 0 || sweep_config.empty()) config.seed = sweep_seed;
      if (sweep_method_opt->count() > 0 || sweep_config.empty())
        config.method = method_from_string(sweep_method);
      if (sweep_z_opt->count() > 0 || sweep_config.empty()) config.z = sweep_z;
      if (sweep_workers_opt->count() > 0 || sweep_config.empty()) config.workers = common.workers;
      with_oracle = with_oracle || sweep_oracle;
      if (config.kernels.empty()) config.kernels.push_back(KernelSelector::two_block(1));
      if (config.trials == 0) throw UsageError("trials must be ≥ 1");
      for (int n : config.dimensions) check_dimension(n);

      Sink sink(sweep_out, out);
      for (int n : config.dimensions)
        for (const auto& selector : config.kernels)
          if (!selector.valid_for(n))
            err << "skipping N=" << n << " k=" << selector.k_column() << " (needs k ≤ N−1)\n";
      config.skip_invalid = true;
      auto records = run_sweep(config);
      if (with_oracle) {
        // Records follow the grid order with invalid points left out.
        auto record = records.begin();
        for (int n : config.dimensions)
          for (const auto& selector : config.kernels)
            if (selector.valid_for(n))
              (record++)->oracle_value = oracle_for(n, selector, selector.build(n)).value;
      }
      write_records(sink.stream(), records, common.output_format());
      sink.finish();
      return kExitOk;
    }

    if (oracle->parsed()) {
      OracleResult result{};
      if (oracle_limit) {
        result = limit_quantumness();
      } else if (clt_opt->count() > 0) {
        if (!(oracle_clt >= 0.0)) throw UsageError("t must be ≥ 0");
        result = clt_probability(oracle_clt);
      } else if (oracle_n_opt->count() > 0) {
        const auto selector = oracle_family.selector();
        const auto spectrum = build_kernel(oracle_n, selector);
        result = oracle_cf ? cf_inversion_exact(spectrum, oracle_tol)
                           : oracle_for(oracle_n, selector, spectrum, oracle_tol);
      } else {
        throw UsageError("oracle needs one of --limit, --clt or --n");
      }
      print_oracle(out, result, common.output_format());
      return kExitOk;
    }

    if (state->parsed()) {
      if (state_trials == 0) throw UsageError("trials must be ≥ 1");
      std::optional<DensityMatrix> rho;
      if (file_opt->count() > 0) {
        rho = load_state_file(state_file);
        if (state_n_opt->count() > 0 && state_n != rho->dimension())
          throw UsageError("--n does not match the dimension of the state file");
        state_n = rho->dimension();
      } else {
        if (state_n_opt->count() == 0) throw UsageError("--n is required");
        check_dimension(state_n);
        if (pure_opt->count() > 0) {
          if (pure_index < 1 || pure_index > state_n)
            throw UsageError("--pure-basis must be between 1 and N");
          rho = DensityMatrix::basis_state(state_n, pure_index - 1);
        } else if (mixed) {
          rho = DensityMatrix::maximally_mixed(state_n);
        } else {
          throw UsageError("state needs one of --maximally-mixed, --pure-basis or --state-file");
        }
      }
      const auto selector = state_family.selector();
      const auto spectrum = build_kernel(state_n, selector);
      const auto start = std::chrono::steady_clock::now();
      const auto est =
          estimate_state(*rho, spectrum, {state_trials, state_seed, common.workers, state_z});
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      const auto record = make_record(state_n, spectrum, selector.k_column(), est, elapsed.count());
      write_records(out, std::span(&record, 1), common.output_format(), true);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace wigneg
