#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "adaptor/cli.hpp"
#include "adaptor/csv.hpp"
#include "adaptor/oracle.hpp"

namespace adaptor::cli {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OracleError& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

void prepare_out_dir(const fs::path& dir) {
  if (dir.empty()) throw ConfigError("--out: output directory required");
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_directory(dir, ec)) {
    throw ConfigError("--out: " + dir.string() + " exists and is not a directory");
  }
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("--out: cannot create " + dir.string() + ": " + ec.message());
}

void check_positive(std::uint64_t v, const char* flag) {
  if (v < 1) throw ConfigError(std::string(flag) + ": must be at least 1");
}

constexpr const char* kSeriesPlot =
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 'transmission index'\n"
    "set ylabel 'transmissions per packet'\n"
    "plot 'series.csv' using 1:2 with lines\n";

constexpr const char* kComparePlot =
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 'packets terminated'\n"
    "set ylabel 'transmissions per packet'\n"
    "plot for [c=2:4] 'series.csv' using 1:c with lines\n";

constexpr const char* kSweepPlot =
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 'R'\n"
    "set ylabel 'delivery ratio'\n"
    "set yrange [0:1.05]\n"
    "plot 'sweep.csv' using 1:2 with linespoints\n";

}  // namespace

std::vector<double> sweep_points(double r_min, double r_max, double r_step) {
  if (!(r_step > 0.0)) throw ConfigError("--r-step: must be positive");
  if (!(r_min <= r_max)) throw ConfigError("--r-min must not exceed --r-max");
  if (!(r_min >= 0.0)) throw ConfigError("--r-min: must be non-negative");
  const auto count = static_cast<std::size_t>(std::floor((r_max - r_min) / r_step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(r_min + static_cast<double>(k) * r_step);
  return out;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("ADAPTOR_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t n = worker_count(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto topology = load_topology(o.topology);
    check_positive(o.packets, "--packets");
    check_positive(o.window, "--window");
    check_positive(o.cap, "--cap");
    prepare_out_dir(o.out);

    RunConfig config{topology, o.packets, o.seed, o.cap, o.policy};
    const auto result = run(config);
    const auto s = summarize(result.records);

    csv::write_file(o.out / "records.csv", csv::records(result.records));
    csv::write_file(o.out / "series.csv", csv::series(transmissions_series(result.records, o.window)));
    csv::write_file(o.out / "summary.csv", csv::summary(s));
    csv::write_file(o.out / "series.gp", kSeriesPlot);
    if (o.policy == PolicyKind::Adaptor) {
      csv::write_file(o.out / "learner_dump.csv", csv::learner_dump(result.learners));
    }
    out << "policy=" << to_string(o.policy) << " packets=" << s.packets << " j_n=" << csv::format(s.j_n)
        << " delivery_ratio=" << csv::format(s.delivery_ratio) << " mean_tx=" << csv::format(s.mean_tx)
        << " cap_hits=" << s.cap_hits << '\n';
  });
}

int cmd_sweep_r(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto topology = load_topology(o.topology);
    const auto points = sweep_points(o.r_min, o.r_max, o.r_step);
    check_positive(o.packets, "--packets");
    check_positive(o.cap, "--cap");
    prepare_out_dir(o.out);

    std::vector<csv::SweepRow> rows(points.size());
    parallel_for(points.size(), [&](std::size_t k) {
      RunConfig config{topology.with_reward(points[k]), o.packets, o.seed, o.cap, PolicyKind::Adaptor};
      const auto result = run(config);
      const auto last = tail(result.records);
      rows[k] = {points[k], delivery_ratio(last), j_n(last), mean_transmissions(last)};
    });

    csv::write_file(o.out / "sweep.csv", csv::sweep(rows));
    csv::write_file(o.out / "sweep.gp", kSweepPlot);
    out << "sweep points=" << rows.size() << '\n';
  });
}

int cmd_oracle(const OracleCliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto topology = load_topology(o.topology);
    if (!(o.tol > 0.0)) throw ConfigError("--tol: must be positive");
    prepare_out_dir(o.out);

    OracleOptions options;
    options.tol = o.tol;
    options.max_iter = o.max_iter;
    options.mc_samples = o.mc_samples;
    const auto values = value_iteration(topology, options);

    csv::write_file(o.out / "values.csv", csv::oracle_values(values));
    csv::write_file(o.out / "policy.csv", csv::oracle_policy(values));
    out << "residual=" << csv::format(values.residual) << " iterations=" << values.iterations << '\n';
  });
}

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto topology = load_topology(o.topology);
    check_positive(o.packets, "--packets");
    check_positive(o.window, "--window");
    check_positive(o.cap, "--cap");
    check_positive(o.genie_trials, "--trials");
    prepare_out_dir(o.out);

    const std::vector<PolicyKind> policies{PolicyKind::Adaptor, PolicyKind::Genie, PolicyKind::Random};
    std::vector<std::vector<PacketRecord>> logs(policies.size());
    RolloutStats genie_mc;
    parallel_for(policies.size() + 1, [&](std::size_t k) {
      if (k == policies.size()) {
        Rng rng(o.seed);
        genie_mc = expected_transmissions(value_iteration(topology), topology, rng, o.genie_trials, o.cap);
        return;
      }
      logs[k] = run(RunConfig{topology, o.packets, o.seed, o.cap, policies[k]}).records;
    });

    std::vector<std::vector<SeriesPoint>> series;
    for (const auto& log : logs) series.push_back(transmissions_series(log, o.window));

    std::ostringstream combined;
    combined << "packet";
    for (auto p : policies) combined << ',' << to_string(p);
    combined << '\n';
    const std::size_t first_packet = o.window > o.packets ? o.packets : o.window;
    for (std::size_t row = 0; row < series.front().size(); ++row) {
      combined << first_packet + row;
      for (const auto& s : series) combined << ',' << csv::format(s[row].tx_per_packet);
      combined << '\n';
    }

    std::ostringstream summary;
    summary << "policy,packets,j_n,delivery_ratio,mean_tx,first_window_tx,last_window_tx\n";
    for (std::size_t k = 0; k < policies.size(); ++k) {
      summary << to_string(policies[k]) << ',' << logs[k].size() << ',' << csv::format(j_n(logs[k])) << ','
              << csv::format(delivery_ratio(logs[k])) << ',' << csv::format(mean_transmissions(logs[k])) << ','
              << csv::format(series[k].front().tx_per_packet) << ','
              << csv::format(series[k].back().tx_per_packet) << '\n';
    }

    std::ostringstream mc;
    mc << "trials,delivered,mean_tx,std_error,mean_net_reward\n"
       << genie_mc.trials << ',' << genie_mc.delivered << ',' << csv::format(genie_mc.mean_transmissions) << ','
       << csv::format(genie_mc.transmissions_std_error) << ',' << csv::format(genie_mc.mean_net_reward) << '\n';

    csv::write_file(o.out / "series.csv", combined.str());
    for (std::size_t k = 0; k < policies.size(); ++k) {
      const auto name = std::string(to_string(policies[k]));
      csv::write_file(o.out / ("records_" + name + ".csv"), csv::records(logs[k]));
      csv::write_file(o.out / ("series_" + name + ".csv"), csv::series(series[k]));
    }
    csv::write_file(o.out / "compare_summary.csv", summary.str());
    csv::write_file(o.out / "genie_mc.csv", mc.str());
    csv::write_file(o.out / "series.gp", kComparePlot);
    out << "genie_mc_tx=" << csv::format(genie_mc.mean_transmissions) << '\n';
  });
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive opportunistic routing simulator", "adaptor_sim"};
  app.require_subcommand(1);

  RunOptions run_o;
  std::string policy_name = "adaptor";
  auto* run_cmd = app.add_subcommand("run", "Simulate one policy and write records, series and summary");
  run_cmd->add_option("--topology", run_o.topology, "Topology JSON file")->required();
  run_cmd->add_option("--packets", run_o.packets, "Packets to inject")->capture_default_str();
  run_cmd->add_option("--seed", run_o.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--policy", policy_name, "adaptor | genie | random")
      ->check(CLI::IsMember({"adaptor", "genie", "random"}))
      ->capture_default_str();
  run_cmd->add_option("--window", run_o.window, "Moving-average window (packets)")->capture_default_str();
  run_cmd->add_option("--cap", run_o.cap, "Transmission cap per packet")->capture_default_str();
  run_cmd->add_option("--out", run_o.out, "Output directory")->required();

  SweepOptions sweep_o;
  auto* sweep_cmd = app.add_subcommand("sweep-r", "Delivery ratio and J_N across delivery rewards");
  sweep_cmd->add_option("--topology", sweep_o.topology, "Topology JSON file")->required();
  sweep_cmd->add_option("--r-min", sweep_o.r_min)->required();
  sweep_cmd->add_option("--r-max", sweep_o.r_max)->required();
  sweep_cmd->add_option("--r-step", sweep_o.r_step)->required();
  sweep_cmd->add_option("--packets", sweep_o.packets, "Packets per R value")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_o.seed)->capture_default_str();
  sweep_cmd->add_option("--cap", sweep_o.cap)->capture_default_str();
  sweep_cmd->add_option("--out", sweep_o.out)->required();

  OracleCliOptions oracle_o;
  auto* oracle_cmd = app.add_subcommand("oracle", "Genie-aided optimal values and policy table");
  oracle_cmd->add_option("--topology", oracle_o.topology, "Topology JSON file")->required();
  oracle_cmd->add_option("--tol", oracle_o.tol, "Sup-norm stopping tolerance")->capture_default_str();
  oracle_cmd->add_option("--max-iter", oracle_o.max_iter)->capture_default_str();
  oracle_cmd->add_option("--mc-samples", oracle_o.mc_samples,
                         "Sampled reception sets for nodes above the enumeration limit")
      ->capture_default_str();
  oracle_cmd->add_option("--out", oracle_o.out)->required();

  CompareOptions cmp_o;
  auto* cmp_cmd = app.add_subcommand("compare", "Adaptor, genie and random policies on identical seeds");
  cmp_cmd->add_option("--topology", cmp_o.topology, "Topology JSON file")->required();
  cmp_cmd->add_option("--packets", cmp_o.packets)->capture_default_str();
  cmp_cmd->add_option("--seed", cmp_o.seed)->capture_default_str();
  cmp_cmd->add_option("--window", cmp_o.window)->capture_default_str();
  cmp_cmd->add_option("--cap", cmp_o.cap)->capture_default_str();
  cmp_cmd->add_option("--trials", cmp_o.genie_trials, "Genie Monte Carlo rollouts")->capture_default_str();
  cmp_cmd->add_option("--out", cmp_o.out)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run_cmd) {
    run_o.policy = parse_policy(policy_name);
    return cmd_run(run_o, out, err);
  }
  if (*sweep_cmd) return cmd_sweep_r(sweep_o, out, err);
  if (*oracle_cmd) return cmd_oracle(oracle_o, out, err);
  return cmd_compare(cmp_o, out, err);
}

}  // namespace adaptor::cli
