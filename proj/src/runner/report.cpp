#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "postmarkov/errors.hpp"
#include "postmarkov/runner.hpp"

namespace postmarkov::runner {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kNotApplicable: return "not-applicable";
  }
  return "?";
}

bool ExperimentReport::any_fail() const {
  for (const auto& v : verdicts) {
    if (v.verdict == Verdict::kFail) return true;
  }
  return false;
}

const Panel* ExperimentReport::panel(std::string_view name) const {
  for (const auto& p : panels) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const VerdictEntry* ExperimentReport::verdict(std::string_view name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string panel_csv(const Panel& panel) {
  std::string out;
  for (size_t c = 0; c < panel.columns.size(); ++c) {
    if (c) out += ',';
    out += panel.columns[c];
  }
  out += '\n';
  for (const auto& row : panel.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_value(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string summary_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = std::string(experiment_name(report.experiment));
  j["status"] = report.any_fail() ? "fail" : "pass";
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : report.verdicts) {
    j["verdicts"].push_back(
        {{"name", v.name}, {"verdict", std::string(verdict_name(v.verdict))}, {"detail", v.detail}});
  }
  j["panels"] = nlohmann::ordered_json::array();
  for (const auto& p : report.panels) {
    j["panels"].push_back({{"name", p.name},
                           {"file", p.name + ".csv"},
                           {"columns", p.columns},
                           {"rows", p.rows.size()}});
  }
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.provenance) prov[k] = v;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

void emit_csv(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& p : report.panels) write_file(dir / (p.name + ".csv"), panel_csv(p));
  write_file(dir / "summary.json", summary_json(report));
}

}  // namespace postmarkov::runner
