#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fracstep/errors.hpp"
#include "fracstep/harness.hpp"

namespace fracstep::harness {

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string e2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string f2(double x) {
  if (!std::isfinite(x)) return "--";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// x from a label of the form name=value.
double x_of_label(const std::string& label) {
  const auto eq = label.find('=');
  return eq == std::string::npos ? 0.0 : std::strtod(label.c_str() + eq + 1, nullptr);
}

template <class T>
std::vector<T> list_of(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

std::string emit_csv(const ConvergenceReport& r) {
  std::string out = "label,error_l2,error_h1,rate\n";
  for (const auto& row : r.rows)
    out += row.label + "," + g17(row.error_l2) + "," + g17(row.error_h1) + "," + g17(row.rate) + "\n";
  return out;
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "label,error_l2,error_h1,rate")
    throw ConfigError("not a report CSV (header mismatch)");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell[4];
    for (auto& c : cell)
      if (!std::getline(ls, c, ',')) throw ConfigError("malformed report row: " + line);
    ReportRow r;
    r.label = cell[0];
    r.x = x_of_label(cell[0]);
    r.error_l2 = std::strtod(cell[1].c_str(), nullptr);
    r.error_h1 = std::strtod(cell[2].c_str(), nullptr);
    r.rate = std::strtod(cell[3].c_str(), nullptr);
    rows.push_back(r);
  }
  return rows;
}

std::string emit_markdown(const std::vector<ConvergenceReport>& reports) {
  if (reports.empty()) return "";
  const auto& first = reports.front();
  std::string out = "| case | alpha | method |";
  std::string rule = "|---|---|---|";
  for (const auto& row : first.rows) {
    out += " " + row.label + " |";
    rule += "---|";
  }
  out += " rate |\n" + rule + "---|\n";
  for (const auto& r : reports) {
    char head[64];
    std::snprintf(head, sizeof head, "| (%c) | %g | %s |", r.case_id, r.alpha, r.scheme.c_str());
    out += head;
    for (const auto& row : r.rows) out += " " + e2(row.error_l2) + " |";
    out += " " + f2(r.summary_rate) + " (" + f2(r.theoretical_rate) + ") |\n";
  }
  if (first.kind == StudyKind::spatial) {
    out += "\nH1-seminorm\n\n| case | alpha | method |";
    for (const auto& row : first.rows) out += " " + row.label + " |";
    out += " rate |\n" + rule + "---|\n";
    for (const auto& r : reports) {
      char head[64];
      std::snprintf(head, sizeof head, "| (%c) | %g | %s |", r.case_id, r.alpha, r.scheme.c_str());
      out += head;
      for (const auto& row : r.rows) out += " " + e2(row.error_h1) + " |";
      out += " " + f2(r.summary_rate_h1) + " (1.00) |\n";
    }
  }
  out += "\nreference: " + std::string(reference_name(first.reference)) +
         ", discretization: " + std::string(discretization_name(first.discretization)) +
         (first.normalized ? ", errors normalized by ||v||" : ", raw errors (v = 0)") + "\n";
  return out;
}

StudyConfig load_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    StudyConfig c = default_config(j.contains("study") ? parse_study(j["study"].get<std::string>()) : StudyKind::temporal);
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (k == "study") continue;
      if (k == "case") {
        const auto s = v.get<std::string>();
        if (s.size() != 1) throw ConfigError("case must be a single letter a-g");
        c.case_id = s[0];
      } else if (k == "alpha") c.alphas = list_of<double>(v);
      else if (k == "scheme") c.schemes = list_of<std::string>(v);
      else if (k == "M") c.M = list_of<int>(v);
      else if (k == "N") c.N = list_of<std::size_t>(v);
      else if (k == "t") c.t = v.get<double>();
      else if (k == "decades") c.decades = v.get<int>();
      else if (k == "reference") c.reference = parse_reference(v.get<std::string>());
      else if (k == "discretization") c.discretization = parse_discretization(v.get<std::string>());
      else if (k == "corrected") c.corrected = v.get<bool>();
      else if (k == "projection") {
        const auto p = v.get<std::string>();
        if (p == "L2" || p == "l2") c.projection = reference::Projection::L2;
        else if (p == "Ritz" || p == "ritz") c.projection = reference::Projection::Ritz;
        else throw ConfigError("projection must be L2 or Ritz");
      } else if (k == "k_max") c.k_max = v.get<int>();
      else if (k == "self_convergence_factor") c.self_convergence_factor = v.get<std::size_t>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
}

StudyConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_json(ss.str());
}

}  // namespace fracstep::harness
