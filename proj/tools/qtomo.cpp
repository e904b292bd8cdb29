// qtomo: build tomography protocols, predict and simulate their accuracy.
//
//   qtomo protocol build|check|export
//   qtomo run theory|mc
//   qtomo compare crossing
//   qtomo frame optimize

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtomo/qtomo.hpp"

namespace {

using nlohmann::json;
using namespace qtomo;

struct ProtocolFlags {
  std::string kind = "mub";
  int s = 3;
  int m = 0;
  std::string file;
  FrameOptions frame;
};

void add_protocol_flags(CLI::App* app, ProtocolFlags& f) {
  app->add_option("--kind", f.kind, "Protocol kind")
      ->check(CLI::IsMember({"mub", "two-level", "symmetric"}));
  app->add_option("--s", f.s, "Qudit dimension")->check(CLI::PositiveNumber);
  app->add_option("--m", f.m, "Row count (symmetric frames)");
  app->add_option("--protocol-file", f.file, "Serialized protocol JSON");
  app->add_option("--restarts", f.frame.restarts, "Frame optimizer restarts");
  app->add_option("--exponent", f.frame.exponent, "Frame potential exponent");
  app->add_option("--packing-exponent", f.frame.packing_exponent,
                  "Packing stage exponent (<= 0 disables)");
  app->add_option("--frame-seed", f.frame.seed, "Frame optimizer seed");
}

ProtocolSpec to_spec(const ProtocolFlags& f) {
  ProtocolSpec spec;
  spec.kind = f.kind;
  spec.s = f.s;
  spec.m = f.m;
  spec.path = f.file;
  spec.frame = f.frame;
  return spec;
}

json protocol_summary(const Protocol& p) {
  return {{"name", p.name()},
          {"s", p.dim()},
          {"m", p.rows()},
          {"a", p.closure_constant()},
          {"closure_residual", closure_residual(p)},
          {"blocks", p.blocks().size()}};
}

std::string protocol_to_csv(const Protocol& p) {
  std::string out = "row,block,col,re,im\n";
  std::vector<int> block_of(static_cast<std::size_t>(p.rows()), -1);
  for (std::size_t b = 0; b < p.blocks().size(); ++b)
    for (int j : p.blocks()[b]) block_of[static_cast<std::size_t>(j)] = static_cast<int>(b);
  char buf[128];
  for (int j = 0; j < p.rows(); ++j) {
    for (int c = 0; c < p.dim(); ++c) {
      const Complex z = p.matrix()(j, c);
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", j, block_of[static_cast<std::size_t>(j)],
                    c, z.real(), z.imag());
      out += buf;
    }
  }
  return out;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtomo: qudit tomography protocol benchmarks"};
  app.require_subcommand(1);

  // protocol -----------------------------------------------------------------
  auto* protocol = app.add_subcommand("protocol", "Build, check or export protocols");
  protocol->require_subcommand(1);

  ProtocolFlags build_flags;
  std::string build_out;
  auto* build = protocol->add_subcommand("build", "Build a protocol and write it as JSON");
  add_protocol_flags(build, build_flags);
  build->add_option("--out", build_out, "Output protocol JSON")->required();

  std::string check_in;
  double check_tol = kClosureTolerance;
  auto* check = protocol->add_subcommand("check", "Verify X^dagger X = a I");
  check->add_option("--in", check_in, "Protocol JSON")->required();
  check->add_option("--tolerance", check_tol, "Max closure residual");

  ProtocolFlags export_flags;
  std::string export_out;
  std::string export_format = "csv";
  auto* exp = protocol->add_subcommand("export", "Export a protocol matrix as CSV or JSON");
  add_protocol_flags(exp, export_flags);
  exp->add_option("--in", export_flags.file, "Protocol JSON (overrides --kind)");
  exp->add_option("--format", export_format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", export_out, "Output path (stdout if omitted)");

  // run ----------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run an ensemble experiment");
  run_cmd->require_subcommand(1);
  ExperimentConfig cfg;
  ProtocolFlags run_flags;
  std::string config_path;
  std::string measure = "haar";
  std::string sampling = "single-multinomial";
  std::vector<CLI::Option*> overrides;
  auto* theory = run_cmd->add_subcommand("theory", "Predicted losses from the information matrix");
  auto* mc = run_cmd->add_subcommand("mc", "Monte Carlo maximum-likelihood tomography");
  for (auto* sub : {theory, mc}) {
    add_protocol_flags(sub, run_flags);
    overrides.push_back(sub->add_option("--rank", cfg.rank, "State / model rank"));
    overrides.push_back(sub->add_option("--ensemble", cfg.ensemble, "Number of random states"));
    overrides.push_back(sub->add_option("--shots", cfg.shots, "Shots N per experiment"));
    overrides.push_back(sub->add_option("--seed", cfg.seed, "Master seed"));
    overrides.push_back(sub->add_option("--measure", measure, "haar | hilbert-schmidt"));
    overrides.push_back(sub->add_option("--sampling", sampling, "single-multinomial | per-block"));
    overrides.push_back(sub->add_option("--threads", cfg.threads, "Worker threads (0 = all)"));
    overrides.push_back(sub->add_option("--out", cfg.out, "Output base path"));
    overrides.push_back(sub->add_option("--format", cfg.format, "csv | json"));
    sub->add_option("--config", config_path, "JSON config file (flags override)");
  }

  // compare ------------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "Compare two reports");
  compare->require_subcommand(1);
  std::string report_a;
  std::string report_b;
  auto* crossing = compare->add_subcommand("crossing", "Percentile where cumulative L curves cross");
  crossing->add_option("a", report_a, "First report (.csv or .json)")->required();
  crossing->add_option("b", report_b, "Second report (.csv or .json)")->required();

  // frame --------------------------------------------------------------------
  auto* frame = app.add_subcommand("frame", "Symmetric frame construction");
  frame->require_subcommand(1);
  ProtocolFlags frame_flags;
  frame_flags.kind = "symmetric";
  std::string frame_out;
  auto* optimize = frame->add_subcommand("optimize", "Optimize a symmetric frame");
  add_protocol_flags(optimize, frame_flags);
  optimize->add_option("--out", frame_out, "Output protocol JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (build->parsed()) {
      const Protocol p = make_protocol(to_spec(build_flags));
      save_protocol(p, build_out);
      std::cout << protocol_summary(p).dump() << "\n";
      return 0;
    }
    if (check->parsed()) {
      const Protocol p = load_protocol(check_in);
      json out = protocol_summary(p);
      try {
        check_povm(p, check_tol);
        out["ok"] = true;
        std::cout << out.dump() << "\n";
        return 0;
      } catch (const ClosureError& e) {
        out["ok"] = false;
        std::cout << out.dump() << "\n";
        return fail(e.kind(), e.what());
      }
    }
    if (exp->parsed()) {
      const Protocol p = make_protocol(to_spec(export_flags));
      const std::string text = export_format == "csv" ? protocol_to_csv(p) : protocol_to_json(p) + "\n";
      if (export_out.empty()) std::cout << text;
      else write_text_file(export_out, text);
      return 0;
    }
    if (theory->parsed() || mc->parsed()) {
      if (!config_path.empty()) {
        const ExperimentConfig file_cfg = config_from_json(read_text_file(config_path));
        // Flags given on the command line win over the file.
        ExperimentConfig merged = file_cfg;
        auto* sub = theory->parsed() ? theory : mc;
        auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
        if (given("--rank")) merged.rank = cfg.rank;
        if (given("--ensemble")) merged.ensemble = cfg.ensemble;
        if (given("--shots")) merged.shots = cfg.shots;
        if (given("--seed")) merged.seed = cfg.seed;
        if (given("--threads")) merged.threads = cfg.threads;
        if (given("--out")) merged.out = cfg.out;
        if (given("--format")) merged.format = cfg.format;
        if (given("--measure")) merged.measure = state_measure_from_string(measure);
        if (given("--sampling")) merged.sampling = sampling_mode_from_string(sampling);
        if (given("--kind")) merged.protocol.kind = run_flags.kind;
        if (given("--s")) merged.protocol.s = run_flags.s;
        if (given("--m")) merged.protocol.m = run_flags.m;
        if (given("--protocol-file")) merged.protocol.path = run_flags.file;
        cfg = merged;
      } else {
        cfg.protocol = to_spec(run_flags);
        cfg.measure = state_measure_from_string(measure);
        cfg.sampling = sampling_mode_from_string(sampling);
      }
      cfg.mode = theory->parsed() ? RunMode::theory : RunMode::monte_carlo;
      validate(cfg);
      const ExperimentReport rep = run(cfg);
      json out = json::parse(summary_to_json(rep));
      out["summary"].erase("percentiles");  // the curve file carries them
      if (!cfg.out.empty()) {
        json files = json::array();
        for (const auto& path : emit_report(rep, report_format_from_string(cfg.format), cfg.out))
          files.push_back(path.string());
        out["files"] = files;
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (crossing->parsed()) {
      const Crossing c = crossing_percentile(load_report(report_a), load_report(report_b));
      json out = {{"kind", to_string(c.kind)}};
      out["percentile"] = c.percentile ? json(*c.percentile) : json(nullptr);
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (optimize->parsed()) {
      if (frame_flags.m < frame_flags.s * frame_flags.s)
        throw InvalidArgument("frame optimize: --m must be >= s^2");
      const FrameResult fr = optimize_frame(frame_flags.s, frame_flags.m, frame_flags.frame);
      json restarts = json::array();
      for (const auto& r : fr.restarts) {
        restarts.push_back({{"packing_potential", r.packing_potential},
                            {"potential", r.potential},
                            {"closure_residual", r.closure_residual},
                            {"iterations", r.iterations}});
      }
      const Protocol p("symmetric", fr.vectors);
      if (!frame_out.empty()) save_protocol(p, frame_out);
      json out = protocol_summary(p);
      out["restarts"] = restarts;
      out["sic_residual"] = sic_residual(fr.vectors);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
