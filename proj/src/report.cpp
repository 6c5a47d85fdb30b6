#include "lkgeo/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lkgeo {

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown format '" + s + "' (json, csv, text)");
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json matrix_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(number(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["meta"] = {{"example_id", rep.example_id},
               {"k", rep.k},
               {"seed", rep.seed},
               {"tol", rep.tol},
               {"samples", rep.sample_count},
               {"tool_version", kToolVersion}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"measured", number(c.measured)}, {"bound", c.bound}});
  }
  j["results"] = {{"residual_max", number(rep.residual_max)},
                  {"A_recovered", matrix_json(rep.A_recovered)},
                  {"A_predicted", matrix_json(rep.A_predicted)},
                  {"b_recovered", vector_json(rep.b_recovered)},
                  {"b_predicted", vector_json(rep.b_predicted)},
                  {"checks", checks}};
  return j;
}

void write_report(std::ostream& os, const VerificationReport& rep, ReportFormat fmt) {
  switch (fmt) {
    case ReportFormat::json:
      os << to_json(rep).dump(2) << "\n";
      break;
    case ReportFormat::csv:
      os << "example_id,k,seed,check,pass,measured,bound\n";
      for (const auto& c : rep.checks) {
        os << csv_quote(rep.example_id) << "," << rep.k << "," << rep.seed << "," << c.name
           << "," << (c.pass ? "true" : "false") << "," << std::setprecision(17) << c.measured
           << "," << c.bound << "\n";
      }
      break;
    case ReportFormat::text: {
      os << rep.example_id << "  k=" << rep.k << "  seed=" << rep.seed
         << "  samples=" << rep.sample_count << "  tol=" << rep.tol << "\n";
      if (!rep.metadata.empty()) os << "  " << rep.metadata << "\n";
      os << "  shape kind " << rep.shape_kind << ", design rank " << rep.rank << " (nullity "
         << rep.nullity << ")" << (rep.A_nondiagonalizable ? ", A non-diagonalizable" : "")
         << "\n";
      const Eigen::IOFormat f(10, 0, " ", "\n", "    [", "]");
      os << "  A recovered\n" << rep.A_recovered.format(f) << "\n";
      os << "  A predicted\n" << rep.A_predicted.format(f) << "\n";
      os << "  b recovered\n" << rep.b_recovered.transpose().format(f) << "\n";
      os << "  b predicted\n" << rep.b_predicted.transpose().format(f) << "\n";
      for (const auto& c : rep.checks) {
        os << "  " << (c.pass ? "ok  " : "FAIL") << "  " << std::left << std::setw(32) << c.name
           << std::right << fmt_double(c.measured) << " <= " << fmt_double(c.bound);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
      }
      os << (rep.pass() ? "PASS" : "FAIL") << "\n";
      break;
    }
  }
}

void write_props(std::ostream& os, const PropsSummary& sum) {
  if (sum.vacuous) {
    os << "warning: suite '" << sum.suite << "' ran with 0 trials; nothing was checked\n";
    return;
  }
  for (const auto& o : sum.outcomes) {
    os << (o.pass ? "ok  " : "FAIL") << "  " << std::left << std::setw(30) << o.name << std::right
       << " max " << fmt_double(o.max_deviation) << " bound " << fmt_double(o.bound)
       << " trials " << o.trials;
    if (!o.pass) os << "  failing seed " << o.failing_seed << " trial " << o.failing_trial;
    os << "\n";
  }
  os << (sum.pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace lkgeo
