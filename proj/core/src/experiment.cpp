#include "qtomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qtomo/information.hpp"
#include "qtomo/mub.hpp"
#include "qtomo/parallel.hpp"
#include "qtomo/random.hpp"
#include "qtomo/serialize.hpp"
#include "qtomo/statistics.hpp"

#ifndef QTOMO_VERSION
#define QTOMO_VERSION "dev"
#endif

namespace qtomo {

using nlohmann::json;

const char* to_string(StateMeasure m) {
  return m == StateMeasure::haar_pure ? "haar" : "hilbert-schmidt";
}

const char* to_string(RunMode m) { return m == RunMode::theory ? "theory" : "monte-carlo"; }

StateMeasure state_measure_from_string(const std::string& s) {
  if (s == "haar" || s == "haar-pure") return StateMeasure::haar_pure;
  if (s == "hs" || s == "hilbert-schmidt") return StateMeasure::hilbert_schmidt;
  throw InvalidArgument("unknown state measure '" + s + "'");
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "theory") return RunMode::theory;
  if (s == "mc" || s == "monte-carlo") return RunMode::monte_carlo;
  throw InvalidArgument("unknown run mode '" + s + "'");
}

const char* to_string(CrossingKind k) {
  switch (k) {
    case CrossingKind::crossing: return "crossing";
    case CrossingKind::identical: return "identical";
    case CrossingKind::first_dominates: return "first-dominates";
    case CrossingKind::second_dominates: return "second-dominates";
  }
  return "unknown";
}

void validate(const ExperimentConfig& cfg) {
  const int s = cfg.protocol.s;
  if (cfg.protocol.path.empty() && s < 2) throw InvalidArgument("config: s must be >= 2");
  if (cfg.ensemble < 1) throw InvalidArgument("config: ensemble must be >= 1");
  if (cfg.rank < 1) throw InvalidArgument("config: rank must be >= 1");
  if (cfg.protocol.path.empty() && cfg.rank > s) throw InvalidArgument("config: rank exceeds s");
  if (cfg.measure == StateMeasure::haar_pure && cfg.rank != 1)
    throw InvalidArgument("config: Haar pure states require rank 1");
  if (cfg.shots < 1) throw InvalidArgument("config: shots must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json")
    throw InvalidArgument("config: format must be csv or json");
  if (!(cfg.max_nonconverged_fraction >= 0.0))
    throw InvalidArgument("config: max_nonconverged_fraction must be >= 0");
}

namespace {

json frame_to_json(const FrameOptions& f) {
  return {{"exponent", f.exponent},       {"packing_exponent", f.packing_exponent},
          {"restarts", f.restarts},       {"max_iterations", f.max_iterations},
          {"tolerance", f.tolerance},     {"closure_tolerance", f.closure_tolerance},
          {"seed", f.seed}};
}

json config_json(const ExperimentConfig& cfg, bool with_output) {
  json proto = {{"kind", cfg.protocol.kind}, {"s", cfg.protocol.s}};
  if (cfg.protocol.m > 0) proto["m"] = cfg.protocol.m;
  if (!cfg.protocol.path.empty()) proto["path"] = cfg.protocol.path;
  if (cfg.protocol.kind == "symmetric") proto["frame"] = frame_to_json(cfg.protocol.frame);
  json j = {{"schema_version", kConfigSchemaVersion},
            {"protocol", proto},
            {"rank", cfg.rank},
            {"ensemble", cfg.ensemble},
            {"measure", to_string(cfg.measure)},
            {"mode", to_string(cfg.mode)},
            {"shots", cfg.shots},
            {"seed", cfg.seed},
            {"sampling", to_string(cfg.sampling)},
            {"mle",
             {{"max_iterations", cfg.mle.max_iterations},
              {"tolerance", cfg.mle.tolerance},
              {"method", cfg.mle.method == MleMethod::scoring ? "scoring" : "fixed-point"}}},
            {"max_nonconverged_fraction", cfg.max_nonconverged_fraction}};
  if (with_output) {
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    j["threads"] = cfg.threads;
  }
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }) ==
        known.end()) {
      throw InvalidArgument(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
  }
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg, true).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    reject_unknown(j,
                   {"schema_version", "protocol", "rank", "ensemble", "measure", "mode", "shots",
                    "seed", "sampling", "mle", "max_nonconverged_fraction", "threads", "out",
                    "format"},
                   "config");
    const int version = j.value("schema_version", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion) {
      std::ostringstream os;
      os << "config: unsupported schema_version " << version;
      throw InvalidArgument(os.str());
    }
    if (j.contains("protocol")) {
      const json& p = j.at("protocol");
      reject_unknown(p, {"kind", "s", "m", "path", "frame"}, "protocol");
      cfg.protocol.kind = p.value("kind", cfg.protocol.kind);
      cfg.protocol.s = p.value("s", cfg.protocol.s);
      cfg.protocol.m = p.value("m", cfg.protocol.m);
      cfg.protocol.path = p.value("path", cfg.protocol.path);
      if (p.contains("frame")) {
        const json& f = p.at("frame");
        reject_unknown(f,
                       {"exponent", "packing_exponent", "restarts", "max_iterations", "tolerance",
                        "closure_tolerance", "seed"},
                       "frame");
        auto& fo = cfg.protocol.frame;
        fo.exponent = f.value("exponent", fo.exponent);
        fo.packing_exponent = f.value("packing_exponent", fo.packing_exponent);
        fo.restarts = f.value("restarts", fo.restarts);
        fo.max_iterations = f.value("max_iterations", fo.max_iterations);
        fo.tolerance = f.value("tolerance", fo.tolerance);
        fo.closure_tolerance = f.value("closure_tolerance", fo.closure_tolerance);
        fo.seed = f.value("seed", fo.seed);
      }
    }
    cfg.rank = j.value("rank", cfg.rank);
    cfg.ensemble = j.value("ensemble", cfg.ensemble);
    if (j.contains("measure")) cfg.measure = state_measure_from_string(j.at("measure").get<std::string>());
    if (j.contains("mode")) cfg.mode = run_mode_from_string(j.at("mode").get<std::string>());
    cfg.shots = j.value("shots", cfg.shots);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("sampling"))
      cfg.sampling = sampling_mode_from_string(j.at("sampling").get<std::string>());
    if (j.contains("mle")) {
      const json& m = j.at("mle");
      reject_unknown(m, {"max_iterations", "tolerance", "method"}, "mle");
      cfg.mle.max_iterations = m.value("max_iterations", cfg.mle.max_iterations);
      cfg.mle.tolerance = m.value("tolerance", cfg.mle.tolerance);
      const std::string method = m.value("method", std::string("scoring"));
      if (method == "scoring") cfg.mle.method = MleMethod::scoring;
      else if (method == "fixed-point") cfg.mle.method = MleMethod::fixed_point;
      else throw InvalidArgument("config: unknown mle method '" + method + "'");
    }
    cfg.max_nonconverged_fraction = j.value("max_nonconverged_fraction", cfg.max_nonconverged_fraction);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.out = j.value("out", cfg.out);
    cfg.format = j.value("format", cfg.format);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config JSON: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

Protocol make_protocol(const ProtocolSpec& spec) {
  if (!spec.path.empty()) return load_protocol(spec.path);
  if (spec.kind == "mub") return build_mub(spec.s);
  if (spec.kind == "two-level") return build_two_level(spec.s);
  if (spec.kind == "symmetric") {
    if (spec.m < spec.s * spec.s) throw InvalidArgument("symmetric protocol needs m >= s^2");
    return build_symmetric(spec.s, spec.m, spec.frame);
  }
  throw InvalidArgument("unknown protocol kind '" + spec.kind + "'");
}

Purification ensemble_state(const ExperimentConfig& cfg, std::size_t index) {
  Rng rng = Rng::stream(domain_seed(cfg.seed, StreamDomain::state), index);
  if (cfg.measure == StateMeasure::haar_pure)
    return random_haar_pure(cfg.protocol.s, rng).purification();
  return random_hs_mixed(cfg.protocol.s, cfg.rank, rng);
}

ReportSummary summarize(const std::vector<StateRecord>& records, int s, int r,
                        bool efficiency_of_mean) {
  ReportSummary sum;
  sum.count = records.size();
  if (records.empty()) return sum;
  std::vector<double> losses;
  std::vector<double> effs;
  losses.reserve(records.size());
  for (const auto& rec : records) {
    losses.push_back(rec.loss);
    effs.push_back(rec.efficiency);
    if (!rec.converged) ++sum.nonconverged;
  }
  const auto l = mean_with_error(losses);
  sum.mean_loss = l.mean;
  sum.se_loss = l.standard_error;
  std::vector<double> sorted = losses;
  std::sort(sorted.begin(), sorted.end());
  sum.median_loss = quantile_sorted(sorted, 0.5);
  sum.percentiles = percentile_curve(losses);
  if (efficiency_of_mean) {
    sum.mean_efficiency = sum.mean_loss > 0.0 ? efficiency(sum.mean_loss, s, r)
                                              : std::numeric_limits<double>::infinity();
    // Delta method: se(eta) = eta * se(L) / L.
    sum.se_efficiency = sum.mean_loss > 0.0 ? sum.mean_efficiency * sum.se_loss / sum.mean_loss : 0.0;
  } else {
    const auto e = mean_with_error(effs);
    sum.mean_efficiency = e.mean;
    sum.se_efficiency = e.standard_error;
  }
  return sum;
}

namespace {

std::string provenance_json(const ExperimentConfig& cfg, const Protocol& p) {
  json j;
  j["software"] = std::string("qtomo ") + QTOMO_VERSION;
  j["config"] = config_json(cfg, false);
  j["protocol"] = {{"name", p.name()}, {"s", p.dim()}, {"m", p.rows()}, {"a", p.closure_constant()}};
  j["sampling"] = to_string(cfg.sampling);
  j["information_convention"] =
      "single multinomial over Lambda_j/a with N total shots; d_j = 1/(2 h_j)";
  j["efficiency_summary"] = cfg.mode == RunMode::theory ? "mean of per-state eta" : "eta of mean L";
  return j.dump();
}

template <typename Fn>
std::vector<StateRecord> run_states(const ExperimentConfig& cfg, Fn&& per_state) {
  std::vector<StateRecord> records(cfg.ensemble);
  parallel_for(cfg.ensemble, cfg.threads, [&](std::size_t i) {
    try {
      records[i] = per_state(i);
      records[i].index = i;
    } catch (const ClassificationError& e) {
      std::ostringstream os;
      os << "state " << i << " (seed " << cfg.seed << ", stream " << i << "): " << e.what();
      throw ClassificationError(os.str(), e.expected_gauge(), e.found_gauge());
    }
  });
  return records;
}

void check_dims(const ExperimentConfig& cfg, const Protocol& p) {
  validate(cfg);
  if (p.dim() != cfg.protocol.s) {
    std::ostringstream os;
    os << "protocol dimension " << p.dim() << " does not match config s = " << cfg.protocol.s;
    throw DimensionError(os.str());
  }
  if (cfg.rank > p.dim()) throw InvalidArgument("config: rank exceeds protocol dimension");
}

}  // namespace

ExperimentReport run_theory(const ExperimentConfig& cfg, const Protocol& p) {
  check_dims(cfg, p);
  check_povm(p, std::max(kClosureTolerance, cfg.protocol.frame.closure_tolerance));
  const int s = p.dim();
  const auto shots = static_cast<double>(cfg.shots);
  ExperimentReport rep;
  rep.records = run_states(cfg, [&](std::size_t i) {
    const Purification state = ensemble_state(cfg, i);
    const LossSpectrum spec = loss_spectrum(p, state, shots);
    StateRecord rec;
    rec.loss = mean_loss(spec).loss;
    rec.efficiency = efficiency(rec.loss, s, state.rank());
    return rec;
  });
  const int r = cfg.measure == StateMeasure::haar_pure ? 1 : cfg.rank;
  rep.summary = summarize(rep.records, s, r, false);
  rep.provenance = provenance_json(cfg, p);
  return rep;
}

ExperimentReport run_monte_carlo(const ExperimentConfig& cfg, const Protocol& p) {
  check_dims(cfg, p);
  const int s = p.dim();
  const int r = cfg.rank;
  const auto shots = static_cast<double>(cfg.shots);
  const std::uint64_t counts_seed = domain_seed(cfg.seed, StreamDomain::counts);
  MleOptions opts = cfg.mle;
  opts.rank = r;
  opts.record_trace = false;

  ExperimentReport rep;
  rep.records = run_states(cfg, [&](std::size_t i) {
    const Purification truth = ensemble_state(cfg, i);
    const std::uint64_t seed_i = splitmix64(counts_seed ^ splitmix64(i));
    const CountsRecord counts = simulate_counts(p, truth, cfg.shots, seed_i, cfg.sampling);
    const MleResult fit = reconstruct(p, counts, opts);
    StateRecord rec;
    rec.infidelity = std::max(0.0, 1.0 - fidelity(truth, fit.estimate));
    rec.loss = shots * *rec.infidelity;
    rec.efficiency = rec.loss > 0.0 ? efficiency(rec.loss, s, r)
                                    : std::numeric_limits<double>::infinity();
    rec.converged = fit.converged;
    return rec;
  });
  rep.summary = summarize(rep.records, s, r, true);
  rep.provenance = provenance_json(cfg, p);
  const double allowed = cfg.max_nonconverged_fraction * static_cast<double>(cfg.ensemble);
  if (static_cast<double>(rep.summary.nonconverged) > allowed) {
    std::ostringstream os;
    os << rep.summary.nonconverged << " of " << cfg.ensemble
       << " reconstructions did not converge (limit " << cfg.max_nonconverged_fraction * 100.0
       << "%)";
    throw Error("mle_nonconvergence", os.str());
  }
  return rep;
}

ExperimentReport run_theory(const ExperimentConfig& cfg) {
  return run_theory(cfg, make_protocol(cfg.protocol));
}

ExperimentReport run_monte_carlo(const ExperimentConfig& cfg) {
  return run_monte_carlo(cfg, make_protocol(cfg.protocol));
}

ExperimentReport run(const ExperimentConfig& cfg) {
  return cfg.mode == RunMode::theory ? run_theory(cfg) : run_monte_carlo(cfg);
}

Crossing crossing_percentile(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.records.empty() || b.records.empty()) throw InvalidArgument("crossing: empty report");
  if (a.records.size() != b.records.size())
    throw InvalidArgument("crossing: reports cover different ensemble sizes");
  if (!a.provenance.empty() && !b.provenance.empty()) {
    const json ca = json::parse(a.provenance).at("config");
    const json cb = json::parse(b.provenance).at("config");
    for (const char* key : {"seed", "measure", "ensemble", "rank"}) {
      if (ca.at(key) != cb.at(key))
        throw InvalidArgument(std::string("crossing: reports differ in '") + key +
                              "'; a shared ensemble is required");
    }
    if (ca.at("protocol").at("s") != cb.at("protocol").at("s"))
      throw InvalidArgument("crossing: reports differ in dimension");
  }
  std::vector<double> la;
  std::vector<double> lb;
  for (const auto& r : a.records) la.push_back(r.loss);
  for (const auto& r : b.records) lb.push_back(r.loss);
  const auto qa = percentile_curve(la);
  const auto qb = percentile_curve(lb);

  double scale = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i) scale = std::max({scale, std::abs(qa[i]), std::abs(qb[i])});
  const double eps = 1e-12 * std::max(scale, 1.0);
  std::vector<double> diff(qa.size());
  bool identical = true;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    diff[i] = qa[i] - qb[i];
    if (std::abs(diff[i]) > eps) identical = false;
  }
  if (identical) return {std::nullopt, CrossingKind::identical};

  for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
    const double d0 = diff[i];
    const double d1 = diff[i + 1];
    if ((d0 < -eps && d1 >= -eps) || (d0 > eps && d1 <= eps)) {
      const double p0 = static_cast<double>(i + 1);
      return {p0 + d0 / (d0 - d1), CrossingKind::crossing};
    }
  }
  const bool first_left = std::all_of(diff.begin(), diff.end(), [&](double d) { return d <= eps; });
  return {std::nullopt, first_left ? CrossingKind::first_dominates : CrossingKind::second_dominates};
}

}  // namespace qtomo
