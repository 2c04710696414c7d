#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adaptor/engine.hpp"
#include "adaptor/metrics.hpp"
#include "adaptor/oracle.hpp"

namespace adaptor::csv {

// Shortest round-trip decimal form.
std::string format(double x);

std::string records(std::span<const PacketRecord> log);
std::string series(std::span<const SeriesPoint> points);
std::string summary(const Summary& s);
std::string learner_dump(std::span<const LearnerState> learners);
std::string oracle_values(const OracleValues& values);
std::string oracle_policy(const OracleValues& values);

struct SweepRow {
  double reward;
  double delivery_ratio;
  double j_n;
  double mean_tx;
};
std::string sweep(std::span<const SweepRow> rows);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

Table parse(const std::string& text);
Table read(const std::filesystem::path& path);

// Writes with LF line endings; throws ConfigError when the file cannot be created.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace adaptor::csv
