#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mslab/harness.hpp"

using namespace mslab;

namespace {

void print_summary(const Report& r) {
  std::fprintf(stderr, "%s: %d instances, %d pass, %d fail, %d inconclusive, %d rejected\n",
               std::string(to_string(r.scenario.suite)).c_str(), static_cast<int>(r.records.size()), r.count("pass"),
               r.count("fail"), r.count("inconclusive"), r.count("rejected"));
  for (const auto& rec : r.records) {
    if (rec.at("status") != "fail") continue;
    std::fprintf(stderr, "  instance %d failed:", rec.at("index").get<int>());
    if (rec.contains("error")) std::fprintf(stderr, " %s", rec["error"]["message"].get<std::string>().c_str());
    for (const auto& f : rec.at("failures"))
      std::fprintf(stderr, " [%s] %s;", f["check"].get<std::string>().c_str(), f["detail"].get<std::string>().c_str());
    std::fprintf(stderr, "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-space operator verification harness"};
  app.require_subcommand(1);

  Scenario scenario;
  std::string suite;
  std::vector<std::string> tol_overrides;
  std::string out_path;
  auto* verify = app.add_subcommand("verify", "Run a verification suite and emit a JSON report");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", scenario.seed, "Base seed")->capture_default_str();
  verify->add_option("--count", scenario.instance_count, "Number of instances")->capture_default_str();
  verify->add_option("--deg", scenario.degree_cap, "Degree cap (1-12)")->capture_default_str();
  verify->add_option("--n", scenario.n_cap, "Multiplicity cap (1-3)")->capture_default_str();
  verify->add_option("--tol", tol_overrides, "Tolerance override name=value (repeatable)");
  verify->add_option("--out", out_path, "Report file (default: stdout)");
  verify->add_option("--jobs", scenario.jobs, "Worker threads")->capture_default_str();

  std::string replay_path;
  int replay_index = 0;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run one instance of a stored report");
  replay_cmd->add_option("file", replay_path, "Report file")->required();
  replay_cmd->add_option("--index", replay_index, "Instance index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      scenario.suite = suite_from_string(suite);
      for (const auto& kv : tol_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::invalid_input, "--tol expects name=value: " + kv);
        scenario.tol.set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
      }
      const Report report = run_suite(scenario);
      if (out_path.empty()) std::cout << canonical_dump(report.to_json()) << '\n';
      else emit_report(report, out_path);
      print_summary(report);
      return report.hard_failure() ? 1 : 0;
    }
    const ReplayResult r = replay(load_report(replay_path), replay_index);
    std::cout << canonical_dump(r.record) << '\n';
    std::fprintf(stderr, "replay of instance %d: %s\n", replay_index,
                 r.identical ? "identical to the stored record" : "DIFFERS from the stored record");
    return r.identical ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
