#ifndef NEARQUAD_IO_HPP
#define NEARQUAD_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nearquad/errors.hpp"
#include "nearquad/experiments.hpp"
#include "nearquad/rulegen.hpp"

namespace nearquad {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Rule as read back from its text form.
struct RuleRecord {
  double x = 0.0;
  double y = 0.0;
  int nodes = 0;
  int order = 0;
  double residual_norm = 0.0;
  std::vector<double> node_values;
  std::vector<double> weights;
};

inline RuleRecord to_record(const QuadratureRule& rule) {
  return RuleRecord{rule.spec.point.x(), rule.spec.point.y(), rule.spec.nodes, rule.spec.order,
                    rule.residual_norm,   rule.nodes,          rule.weights};
}

// Text form: "x y N M residual", then N lines "t_i w_i".
inline void write_rule_text(std::ostream& os, const QuadratureRule& rule) {
  os << format_double(rule.spec.point.x()) << ' ' << format_double(rule.spec.point.y()) << ' '
     << rule.spec.nodes << ' ' << rule.spec.order << ' ' << format_double(rule.residual_norm)
     << '\n';
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    os << format_double(rule.nodes[i]) << ' ' << format_double(rule.weights[i]) << '\n';
}

inline RuleRecord read_rule_text(std::istream& is) {
  RuleRecord rec;
  if (!(is >> rec.x >> rec.y >> rec.nodes >> rec.order >> rec.residual_norm))
    throw contract_violation("read_rule_text: malformed header");
  if (rec.nodes < 1) throw contract_violation("read_rule_text: node count must be positive");
  rec.node_values.resize(static_cast<std::size_t>(rec.nodes));
  rec.weights.resize(static_cast<std::size_t>(rec.nodes));
  for (int i = 0; i < rec.nodes; ++i)
    if (!(is >> rec.node_values[i] >> rec.weights[i]))
      throw contract_violation("read_rule_text: expected " + std::to_string(rec.nodes) +
                               " node lines, got " + std::to_string(i));
  return rec;
}

inline nlohmann::json rule_to_json(const QuadratureRule& rule) {
  nlohmann::json j;
  j["x"] = rule.spec.point.x();
  j["y"] = rule.spec.point.y();
  j["N"] = rule.spec.nodes;
  j["M"] = rule.spec.order;
  j["residual"] = rule.residual_norm;
  j["rank"] = rule.rank;
  j["basis"] = {"unit", "log", "invr", "invr2"};
  j["nodes"] = rule.nodes;
  j["weights"] = rule.weights;
  return j;
}

inline RuleRecord rule_from_json(const nlohmann::json& j) {
  RuleRecord rec;
  rec.x = j.at("x").get<double>();
  rec.y = j.at("y").get<double>();
  rec.nodes = j.at("N").get<int>();
  rec.order = j.at("M").get<int>();
  rec.residual_norm = j.at("residual").get<double>();
  rec.node_values = j.at("nodes").get<std::vector<double>>();
  rec.weights = j.at("weights").get<std::vector<double>>();
  return rec;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr const char* kErrorReportHeader = "R,theta,n,eps_modified,eps_gauss,delta";
inline constexpr const char* kTableHeader = "R,n,eps_modified,eps_gauss";

inline void write_error_report_csv(std::ostream& os, const ErrorReport& report) {
  os << kErrorReportHeader << '\n';
  for (const auto& r : report.rows)
    os << format_double(r.radius) << ',' << format_double(r.theta) << ',' << r.degree << ','
       << format_double(r.eps_modified) << ',' << format_double(r.eps_gauss) << ','
       << format_double(r.delta) << '\n';
}

inline void write_table_csv(std::ostream& os, const TableReport& report) {
  os << kTableHeader << '\n';
  for (const auto& r : report.rows)
    os << format_double(r.radius) << ',' << r.degree << ',' << format_double(r.eps_modified)
       << ',' << format_double(r.eps_gauss) << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// strtod rather than stod: stod rejects subnormals.
inline double parse_double(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) throw contract_violation("not a number: '" + cell + "'");
  return v;
}

inline void expect_header(std::istream& is, const char* header) {
  std::string line;
  if (!std::getline(is, line) || line != header)
    throw contract_violation(std::string("CSV header mismatch, expected: ") + header);
}

}  // namespace detail

inline ErrorReport read_error_report_csv(std::istream& is) {
  detail::expect_header(is, kErrorReportHeader);
  ErrorReport report;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 6) throw contract_violation("error report row needs 6 columns: " + line);
    report.rows.push_back(ErrorRow{detail::parse_double(c[0]), detail::parse_double(c[1]), std::stoi(c[2]),
                                   detail::parse_double(c[3]), detail::parse_double(c[4]), detail::parse_double(c[5])});
  }
  return report;
}

inline TableReport read_table_csv(std::istream& is) {
  detail::expect_header(is, kTableHeader);
  TableReport report;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 4) throw contract_violation("table row needs 4 columns: " + line);
    report.rows.push_back(
        TableRow{detail::parse_double(c[0]), std::stoi(c[1]), detail::parse_double(c[2]), detail::parse_double(c[3])});
  }
  return report;
}

}  // namespace nearquad

#endif  // NEARQUAD_IO_HPP
