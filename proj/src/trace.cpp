#include "tocs/trace.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "tocs/errors.hpp"

namespace tocs::harness {

bool Trace::has(const std::string& name) const {
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

const std::vector<double>& Trace::channel(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return channels[i];
  throw ConfigError("trace: no channel named '" + name + "'");
}

std::vector<double>& Trace::add_channel(const std::string& name) {
  names.push_back(name);
  channels.emplace_back();
  return channels.back();
}

namespace {

void append_value(std::string& line, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  line.append(buf, res.ptr);
}

}  // namespace

void write_csv(const Trace& tr, std::ostream& out) {
  std::string line = "t";
  for (const auto& n : tr.names) {
    line += ',';
    line += n;
  }
  line += '\n';
  out << line;
  for (std::size_t row = 0; row < tr.t.size(); ++row) {
    line.clear();
    append_value(line, tr.t[row]);
    for (const auto& col : tr.channels) {
      line += ',';
      append_value(line, col[row]);
    }
    line += '\n';
    out << line;
  }
}

void write_csv_file(const Trace& tr, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(tr, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Trace read_csv(std::istream& in) {
  Trace tr;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  std::stringstream header(line);
  std::string field;
  bool first = true;
  while (std::getline(header, field, ',')) {
    if (first) {
      if (field != "t") throw std::runtime_error("read_csv: first column must be t");
      first = false;
    } else {
      tr.add_channel(field);
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0, idx = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      const std::string cell = line.substr(pos, next - pos);
      const double v = std::strtod(cell.c_str(), nullptr);
      if (idx == 0)
        tr.t.push_back(v);
      else if (idx - 1 < tr.channels.size())
        tr.channels[idx - 1].push_back(v);
      else
        throw std::runtime_error("read_csv: row wider than header");
      ++idx;
      pos = next + 1;
      if (next == line.size()) break;
    }
    if (idx != tr.channels.size() + 1)
      throw std::runtime_error("read_csv: row narrower than header");
  }
  return tr;
}

Trace read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_csv(in);
}

void write_plot_script(const Trace& tr, const std::string& csv_relpath,
                       std::ostream& out) {
  out << "# gnuplot script; run from the directory containing the CSV\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 't [s]'\n"
      << "set grid\n"
      << "plot ";
  for (std::size_t i = 0; i < tr.names.size(); ++i) {
    if (i) out << ", \\\n     ";
    out << "'" << csv_relpath << "' using 1:" << (i + 2) << " with lines";
  }
  out << "\n";
}

}  // namespace tocs::harness
