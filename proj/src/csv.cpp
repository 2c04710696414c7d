#include "adaptor/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adaptor::csv {

std::string format(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string records(std::span<const PacketRecord> log) {
  std::ostringstream out;
  out << "packet_id,outcome,transmissions,cost_sum,reward,terminated_at\n";
  for (const auto& r : log) {
    out << r.packet_id << ',' << to_string(r.outcome) << ',' << r.transmissions << ',' << format(r.cost_sum) << ','
        << format(r.reward) << ',' << r.terminated_at << '\n';
  }
  return out.str();
}

std::string series(std::span<const SeriesPoint> points) {
  std::ostringstream out;
  out << "terminated_at,tx_per_packet\n";
  for (const auto& p : points) out << p.terminated_at << ',' << format(p.tx_per_packet) << '\n';
  return out.str();
}

std::string summary(const Summary& s) {
  std::ostringstream out;
  out << "packets,j_n,delivery_ratio,mean_tx,cap_hits,tail_j_n,tail_delivery_ratio,tail_mean_tx\n";
  out << s.packets << ',' << format(s.j_n) << ',' << format(s.delivery_ratio) << ',' << format(s.mean_tx) << ','
      << s.cap_hits << ',' << format(s.tail_j_n) << ',' << format(s.tail_delivery_ratio) << ','
      << format(s.tail_mean_tx) << '\n';
  return out.str();
}

std::string learner_dump(std::span<const LearnerState> learners) {
  std::ostringstream out;
  out << "node,ebs,reception_set,action,score,visits,seen\n";
  for (const auto& l : learners) {
    for (const auto& [s, st] : l.table()) {
      for (const auto& e : st.entries) {
        out << l.owner() << ',' << format(l.ebs()) << ',' << s.encode() << ',' << e.action.encode() << ','
            << format(e.score) << ',' << e.visits << ',' << st.seen << '\n';
      }
    }
  }
  return out.str();
}

std::string oracle_values(const OracleValues& values) {
  std::ostringstream out;
  out << "node,value\n";
  for (std::size_t i = 0; i < values.v.size(); ++i) out << i << ',' << format(values.v[i]) << '\n';
  return out.str();
}

std::string oracle_policy(const OracleValues& values) {
  std::ostringstream out;
  out << "node,reception_set,probability,action\n";
  for (const auto& e : values.policy) {
    out << e.node << ',' << e.set.encode() << ',' << format(e.probability) << ',' << e.action.encode() << '\n';
  }
  return out.str();
}

std::string sweep(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "R,delivery_ratio,j_n,mean_tx\n";
  for (const auto& r : rows) {
    out << format(r.reward) << ',' << format(r.delivery_ratio) << ',' << format(r.j_n) << ',' << format(r.mean_tx)
        << '\n';
  }
  return out.str();
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::out_of_range("csv: no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(std::move(cell));
  return out;
}

}  // namespace

Table parse(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

Table read(const std::filesystem::path& path) { return parse(read_file(path)); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace adaptor::csv
