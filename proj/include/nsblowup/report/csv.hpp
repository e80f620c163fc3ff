#pragma once

// CSV output: one '#' comment line (version, seed, parameters), a header
// row, then data rows. Numbers use a fixed printf format so identical runs
// give identical bytes.

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "nsblowup/params.hpp"
#include "nsblowup/version.hpp"

namespace nsblowup::report {

using Cell = std::variant<double, long, std::string>;

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline std::string params_echo(const SolutionParams& p) {
  return "family=" + std::string(to_string(p.family())) + " a=" + format_number(p.a()) +
         " k=" + format_number(p.k()) + " t_star=" + format_number(p.t_star()) + " nu=" + format_number(p.nu());
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& comment, std::vector<std::string> columns)
      : out_(out), columns_(std::move(columns)) {
    out_ << "# nsblowup " << kVersion << ' ' << comment << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
  }

  void row(std::initializer_list<Cell> cells) {
    if (cells.size() != columns_.size()) throw Error("CSV row width does not match the header");
    std::size_t i = 0;
    for (const Cell& c : cells) {
      if (i++) out_ << ',';
      if (const auto* d = std::get_if<double>(&c)) out_ << format_number(*d);
      else if (const auto* l = std::get_if<long>(&c)) out_ << *l;
      else out_ << std::get<std::string>(c);
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

}  // namespace nsblowup::report
