#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tocs::harness {

// Time-indexed named channels; the unit of CSV export and metric computation.
struct Trace {
  std::vector<double> t;
  std::vector<std::string> names;              // channel order for export
  std::vector<std::vector<double>> channels;   // parallel to names

  std::size_t size() const { return t.size(); }
  bool has(const std::string& name) const;
  const std::vector<double>& channel(const std::string& name) const;
  std::vector<double>& add_channel(const std::string& name);
};

// CSV with header "t,<channels...>", '.' decimal separator, one row per
// sample, newline terminated. Values round-trip losslessly (17 significant
// digits via to_chars).
void write_csv(const Trace& tr, std::ostream& out);
void write_csv_file(const Trace& tr, const std::string& path);
Trace read_csv(std::istream& in);
Trace read_csv_file(const std::string& path);

// Gnuplot script plotting every channel of the CSV it sits next to.
void write_plot_script(const Trace& tr, const std::string& csv_relpath,
                       std::ostream& out);

}  // namespace tocs::harness
