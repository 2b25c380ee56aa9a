#include "geodissip/trajectory_io.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace geodissip::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ConfigError("trajectory parse: bad number '" + std::string(token) +
                      "'");
  }
  return value;
}

void write_csv(std::ostream& out, std::span<const TrajectorySample> traj,
               int stride) {
  const auto& first = traj.front();
  const int n = first.x.dim();
  const int k = static_cast<int>(first.F_values.size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= k; ++i) out << ",F" << i;
  out << ",G,detSigma_full,dG_dt_fd\n";
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (j % static_cast<std::size_t>(stride) != 0 && j + 1 != traj.size()) {
      continue;
    }
    const auto& s = traj[j];
    out << format_double(s.t);
    for (int i = 0; i < n; ++i) out << ',' << format_double(s.x[i]);
    for (int i = 0; i < k; ++i) out << ',' << format_double(s.F_values(i));
    out << ',' << format_double(s.G_value) << ','
        << format_double(s.detSigma_full) << ',' << format_double(s.G_rate_fd)
        << '\n';
  }
}

void write_jsonl(std::ostream& out, std::span<const TrajectorySample> traj,
                 int stride) {
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (j % static_cast<std::size_t>(stride) != 0 && j + 1 != traj.size()) {
      continue;
    }
    const auto& s = traj[j];
    out << "{\"t\":" << format_double(s.t) << ",\"x\":[";
    for (int i = 0; i < s.x.dim(); ++i) {
      if (i) out << ',';
      out << format_double(s.x[i]);
    }
    out << "],\"F\":[";
    for (int i = 0; i < s.F_values.size(); ++i) {
      if (i) out << ',';
      out << format_double(s.F_values(i));
    }
    out << "],\"G\":" << format_double(s.G_value)
        << ",\"detSigma_full\":" << format_double(s.detSigma_full)
        << ",\"dG_dt_fd\":" << format_double(s.G_rate_fd) << "}\n";
  }
}

std::vector<TrajectorySample> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("trajectory parse: missing CSV header");
  }
  int n = 0, k = 0;
  {
    std::stringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) {
      if (col.size() > 1 && col[0] == 'x') ++n;
      if (col.size() > 1 && col[0] == 'F') ++k;
    }
  }
  std::vector<TrajectorySample> traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string token;
    std::vector<double> values;
    while (std::getline(row, token, ',')) values.push_back(parse_double(token));
    if (static_cast<int>(values.size()) != n + k + 4) {
      throw ConfigError("trajectory parse: wrong column count");
    }
    TrajectorySample s;
    s.t = values[0];
    s.x.coords = Eigen::Map<const Eigen::VectorXd>(values.data() + 1, n);
    s.F_values = Eigen::Map<const Eigen::VectorXd>(values.data() + 1 + n, k);
    s.G_value = values[1 + n + k];
    s.detSigma_full = values[2 + n + k];
    s.G_rate_fd = values[3 + n + k];
    s.rate_expected = std::numeric_limits<double>::quiet_NaN();
    traj.push_back(std::move(s));
  }
  return traj;
}

std::vector<TrajectorySample> read_jsonl(std::istream& in) {
  std::vector<TrajectorySample> traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw ConfigError("trajectory parse: invalid JSON line");
    }
    TrajectorySample s;
    s.t = j.at("t").get<double>();
    const auto& xs = j.at("x");
    s.x.coords.resize(static_cast<long>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s.x.coords(static_cast<long>(i)) = xs[i].get<double>();
    }
    const auto& fs = j.at("F");
    s.F_values.resize(static_cast<long>(fs.size()));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      s.F_values(static_cast<long>(i)) = fs[i].get<double>();
    }
    s.G_value = j.at("G").get<double>();
    s.detSigma_full = j.at("detSigma_full").get<double>();
    s.G_rate_fd = j.at("dG_dt_fd").get<double>();
    s.rate_expected = std::numeric_limits<double>::quiet_NaN();
    traj.push_back(std::move(s));
  }
  return traj;
}

}  // namespace

void write_trajectory(std::ostream& out, std::span<const TrajectorySample> traj,
                      Format format, int stride) {
  if (traj.empty()) throw EmptyTrajectory("write_trajectory: no samples");
  if (stride < 1) throw InvalidParameter("stride must be at least 1");
  if (format == Format::csv) {
    write_csv(out, traj, stride);
  } else {
    write_jsonl(out, traj, stride);
  }
}

std::vector<TrajectorySample> read_trajectory(std::istream& in, Format format) {
  return format == Format::csv ? read_csv(in) : read_jsonl(in);
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "jsonl") return Format::jsonl;
  throw ConfigError("unknown output format '" + name + "' (csv or jsonl)");
}

}  // namespace geodissip::io
