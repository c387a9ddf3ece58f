#include "tvb/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tvb {

namespace {

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      return fields;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void fail_row(const std::string& path, long row, const std::string& what) {
  throw std::runtime_error(path + ": row " + std::to_string(row) + ": " + what);
}

long parse_count(const std::string& path, long row, const std::string& field) {
  if (field.empty()) fail_row(path, row, "empty count field");
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(field.c_str(), &end, 10);
  if (errno != 0 || end != field.c_str() + field.size())
    fail_row(path, row, "count '" + field + "' is not an integer");
  if (value < 0) fail_row(path, row, "negative count '" + field + "'");
  return value;
}

double parse_real(const std::string& path, long row, const std::string& field) {
  if (field.empty()) fail_row(path, row, "empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (errno != 0 || end != field.c_str() + field.size())
    fail_row(path, row, "value '" + field + "' is not a number");
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

void check_written(const std::ofstream& out, const std::string& path) {
  if (!out) throw std::runtime_error("failed while writing " + path);
}

}  // namespace

CountSeries read_count_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const std::string header = trimmed(line);
  if (header != "t,x" && header != "date,count")
    throw std::runtime_error(path + ": expected header 't,x' or 'date,count', got '" + header +
                             "'");
  const bool dated = header == "date,count";  // plain t,x indices are not worth keeping
  std::vector<std::string> labels;
  std::vector<long> counts;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2)
      fail_row(path, row, "expected 2 fields, got " + std::to_string(fields.size()));
    if (dated) labels.push_back(fields[0]);
    counts.push_back(parse_count(path, row, fields[1]));
  }
  if (counts.empty()) throw std::runtime_error(path + ": no data rows");
  Eigen::VectorXi values(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i)
    values(static_cast<Eigen::Index>(i)) = static_cast<int>(counts[i]);
  return CountSeries(values, std::move(labels));
}

void write_count_csv(const std::string& path, const CountSeries& series) {
  std::ofstream out = open_output(path);
  const bool dated = !series.labels.empty();
  out << (dated ? "date,count" : "t,x") << "\n";
  for (Eigen::Index t = 0; t < series.length(); ++t) {
    if (dated)
      out << series.labels[static_cast<std::size_t>(t)];
    else
      out << t;
    out << "," << series.values(t) << "\n";
  }
  check_written(out, path);
}

void write_band_csv(const std::string& path, const CredibleBand& band) {
  std::ofstream out = open_output(path);
  out << "x,lower,mean,upper\n";
  for (Eigen::Index g = 0; g < band.grid.size(); ++g)
    out << band.grid(g) << "," << band.lower(g) << "," << band.mean(g) << "," << band.upper(g)
        << "\n";
  check_written(out, path);
}

void write_chain_csv(const std::string& path, const Chain& chain,
                     const std::vector<int>& exp_columns) {
  std::ofstream out = open_output(path);
  out << "iteration,postburn";
  for (const std::string& name : chain.coordinate_names) out << "," << name;
  out << "\n";
  for (Eigen::Index it = 0; it < chain.n_draws(); ++it) {
    out << it << "," << (it >= chain.burn_in ? 1 : 0);
    Eigen::VectorXd row = chain.draws.row(it);
    for (int c : exp_columns) row(c) = std::exp(row(c));
    for (Eigen::Index j = 0; j < row.size(); ++j) out << "," << row(j);
    out << "\n";
  }
  check_written(out, path);
}

StoredChain read_chain_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> header = split_fields(trimmed(line));
  if (header.size() < 3 || header[0] != "iteration" || header[1] != "postburn")
    throw std::runtime_error(path + ": expected header 'iteration,postburn,<names...>'");

  StoredChain stored;
  stored.names.assign(header.begin() + 2, header.end());
  const auto width = static_cast<Eigen::Index>(stored.names.size());
  std::vector<Eigen::VectorXd> rows;
  int burn_in = 0;
  bool seen_post = false;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size())
      fail_row(path, row, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    const long flag = parse_count(path, row, fields[1]);
    if (flag != 0 && flag != 1) fail_row(path, row, "postburn flag must be 0 or 1");
    if (flag == 0) {
      if (seen_post) fail_row(path, row, "pre-burn-in row after a post-burn-in row");
      ++burn_in;
    } else {
      seen_post = true;
    }
    Eigen::VectorXd values(width);
    for (Eigen::Index j = 0; j < width; ++j)
      values(j) = parse_real(path, row, fields[static_cast<std::size_t>(j) + 2]);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no draws");
  stored.burn_in = burn_in;
  stored.draws.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    stored.draws.row(static_cast<Eigen::Index>(i)) = rows[i];
  return stored;
}

void to_sampler_scale(StoredChain& chain, const std::vector<int>& exp_columns) {
  for (int c : exp_columns) {
    if (c < 0 || c >= chain.draws.cols())
      throw std::invalid_argument("to_sampler_scale: column " + std::to_string(c) +
                                  " out of range");
    chain.draws.col(c) = chain.draws.col(c).array().log();
  }
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in = open_input(path);
  KeyValues kv;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string s = trimmed(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_row(path, row, "expected key=value");
    const std::string key = trimmed(s.substr(0, eq));
    if (key.empty()) fail_row(path, row, "empty key");
    kv[key] = trimmed(s.substr(eq + 1));
  }
  return kv;
}

void write_key_values(const std::string& path, const KeyValues& kv) {
  std::ofstream out = open_output(path);
  for (const auto& [key, value] : kv) out << key << "=" << value << "\n";
  check_written(out, path);
}

void write_amse_report(const std::string& path, double amse_value) {
  std::ofstream out = open_output(path);
  out << "amse=" << amse_value << "\n";
  check_written(out, path);
}

}  // namespace tvb
