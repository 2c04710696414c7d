#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adaptor/engine.hpp"
#include "adaptor/metrics.hpp"

namespace adaptor::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kRuntimeError = 2;

struct RunOptions {
  std::filesystem::path topology;
  std::uint64_t packets = 1000;
  std::uint64_t seed = 1;
  PolicyKind policy = PolicyKind::Adaptor;
  std::size_t window = kDefaultWindow;
  std::uint64_t cap = 1000;
  std::filesystem::path out;
};

struct SweepOptions {
  std::filesystem::path topology;
  double r_min = 0.5;
  double r_max = 6.0;
  double r_step = 0.5;
  std::uint64_t packets = 10000;
  std::uint64_t seed = 1;
  std::uint64_t cap = 1000;
  std::filesystem::path out;
};

struct OracleCliOptions {
  std::filesystem::path topology;
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  std::size_t mc_samples = 0;
  std::filesystem::path out;
};

struct CompareOptions {
  std::filesystem::path topology;
  std::uint64_t packets = 1000;
  std::uint64_t seed = 1;
  std::size_t window = kDefaultWindow;
  std::uint64_t cap = 1000;
  std::size_t genie_trials = 100000;
  std::filesystem::path out;
};

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err);
int cmd_sweep_r(const SweepOptions& o, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleCliOptions& o, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err);

// R values of a sweep: r_min, r_min + step, ... up to r_max inclusive.
std::vector<double> sweep_points(double r_min, double r_max, double r_step);

// Worker count: ADAPTOR_SIM_THREADS when set and positive, else the hardware
// concurrency; never more than `jobs`.
std::size_t worker_count(std::size_t jobs);

// Runs job(k) for k in [0, jobs) on up to worker_count(jobs) threads.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& job);

// Full command-line entry point; args[0] is the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adaptor::cli
