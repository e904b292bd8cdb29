#include "qtomo/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qtomo/serialize.hpp"

namespace qtomo {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw IoError("report CSV: malformed number '" + s + "'");
  return v;
}

std::string provenance_line(const ExperimentReport& r) {
  return "# provenance " + (r.provenance.empty() ? std::string("{}") : r.provenance) + "\n";
}

bool has_infidelity(const ExperimentReport& r) {
  return !r.records.empty() && r.records.front().infidelity.has_value();
}

// JSON cannot hold inf; encode non-finite numbers as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

double from_number(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

json summary_json(const ReportSummary& s) {
  json p = json::array();
  for (double v : s.percentiles) p.push_back(number(v));
  return {{"count", s.count},
          {"mean_L", number(s.mean_loss)},
          {"se_L", number(s.se_loss)},
          {"median_L", number(s.median_loss)},
          {"percentiles", p},
          {"mean_eff", number(s.mean_efficiency)},
          {"se_eff", number(s.se_efficiency)},
          {"nonconverged", s.nonconverged}};
}

ReportSummary summary_from(const json& j) {
  ReportSummary s;
  s.count = j.at("count").get<std::size_t>();
  s.mean_loss = from_number(j.at("mean_L"));
  s.se_loss = from_number(j.at("se_L"));
  s.median_loss = from_number(j.at("median_L"));
  for (const auto& v : j.at("percentiles")) s.percentiles.push_back(from_number(v));
  s.mean_efficiency = from_number(j.at("mean_eff"));
  s.se_efficiency = from_number(j.at("se_eff"));
  s.nonconverged = j.at("nonconverged").get<std::size_t>();
  return s;
}

json provenance_value(const ExperimentReport& r) {
  return r.provenance.empty() ? json::object() : json::parse(r.provenance);
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw InvalidArgument("unknown report format '" + s + "'");
}

std::string records_to_csv(const ExperimentReport& report) {
  const bool mc = has_infidelity(report);
  std::string out = provenance_line(report);
  out += mc ? "state_index,L,eff,one_minus_F\n" : "state_index,L,eff\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.index);
    out += ',' + fmt_double(r.loss) + ',' + fmt_double(r.efficiency);
    if (mc) out += ',' + fmt_double(r.infidelity.value_or(std::nan("")));
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const ExperimentReport& report) {
  std::string out = provenance_line(report);
  out += "percentile,L\n";
  for (std::size_t i = 0; i < report.summary.percentiles.size(); ++i)
    out += std::to_string(i + 1) + ',' + fmt_double(report.summary.percentiles[i]) + '\n';
  return out;
}

std::string summary_to_json(const ExperimentReport& report) {
  json j = {{"provenance", provenance_value(report)}, {"summary", summary_json(report.summary)}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const ExperimentReport& report) {
  json recs = json::array();
  for (const auto& r : report.records) {
    json rec = {{"state_index", r.index},
                {"L", number(r.loss)},
                {"eff", number(r.efficiency)},
                {"converged", r.converged}};
    if (r.infidelity) rec["one_minus_F"] = number(*r.infidelity);
    recs.push_back(std::move(rec));
  }
  json j = {{"provenance", provenance_value(report)},
            {"summary", summary_json(report.summary)},
            {"records", std::move(recs)}};
  return j.dump(1) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentReport rep;
    const json& prov = j.at("provenance");
    rep.provenance = prov.empty() ? std::string() : prov.dump();
    rep.summary = summary_from(j.at("summary"));
    for (const auto& r : j.at("records")) {
      StateRecord rec;
      rec.index = r.at("state_index").get<std::size_t>();
      rec.loss = from_number(r.at("L"));
      rec.efficiency = from_number(r.at("eff"));
      rec.converged = r.value("converged", true);
      if (r.contains("one_minus_F")) rec.infidelity = from_number(r.at("one_minus_F"));
      rep.records.push_back(rec);
    }
    return rep;
  } catch (const json::exception& e) {
    throw IoError(std::string("report JSON: ") + e.what());
  }
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& base) {
  std::vector<std::filesystem::path> written;
  auto with_suffix = [&](const char* suffix) {
    std::filesystem::path p = base;
    p += suffix;
    return p;
  };
  if (format == ReportFormat::csv) {
    written.push_back(with_suffix(".csv"));
    write_text_file(written.back(), records_to_csv(report));
    written.push_back(with_suffix(".summary.json"));
    write_text_file(written.back(), summary_to_json(report));
  } else {
    written.push_back(with_suffix(".json"));
    write_text_file(written.back(), report_to_json(report));
  }
  written.push_back(with_suffix(".curve.csv"));
  write_text_file(written.back(), curve_to_csv(report));
  return written;
}

ExperimentReport load_report(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") return report_from_json(text);

  ExperimentReport rep;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  bool mc = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# provenance ", 0) == 0) {
      const std::string p = line.substr(13);
      rep.provenance = p == "{}" ? std::string() : p;
      continue;
    }
    if (line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("state_index,L,eff", 0) != 0)
        throw IoError("report CSV: expected header 'state_index,L,eff[,one_minus_F]'");
      mc = line.find("one_minus_F") != std::string::npos;
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != (mc ? 4u : 3u)) {
      throw IoError("report CSV: wrong column count on line " + std::to_string(line_no));
    }
    try {
      StateRecord rec;
      rec.index = static_cast<std::size_t>(std::stoull(f[0]));
      rec.loss = parse_double(f[1]);
      rec.efficiency = parse_double(f[2]);
      if (mc) rec.infidelity = parse_double(f[3]);
      rep.records.push_back(rec);
    } catch (const std::logic_error&) {
      throw IoError("report CSV: malformed number on line " + std::to_string(line_no));
    }
  }
  if (!header_seen) throw IoError("report CSV: missing header");
  int s = 2;
  int r = 1;
  const json prov = rep.provenance.empty() ? json::object() : json::parse(rep.provenance);
  if (prov.contains("config")) {
    s = prov.at("config").at("protocol").at("s").get<int>();
    r = prov.at("config").at("rank").get<int>();
  } else if (mc) {
    // eta(mean L) needs s and r.
    throw IoError("report CSV: Monte Carlo report without a config in its provenance");
  }
  rep.summary = summarize(rep.records, s, r, mc);
  return rep;
}

}  // namespace qtomo
