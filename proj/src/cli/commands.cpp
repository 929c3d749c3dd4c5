// Copyright 2026 The wlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wlab/cli/commands.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlab/analysis/audit.hpp"
#include "wlab/analysis/report.hpp"
#include "wlab/control/control_api.hpp"
#include "wlab/control/session_registry.hpp"
#include "wlab/metrics/run_metrics.hpp"
#include "wlab/phase0/keywords.hpp"
#include "wlab/scale/runner.hpp"
#include "wlab/store/config.hpp"
#include "wlab/store/files.hpp"
#include "wlab/store/manifest.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  CliError(std::string c, const std::string& what, int exit = kFailure)
      : std::runtime_error(what), code(std::move(c)), exit_code(exit) {}
  std::string code;
  int exit_code;
};

void emit_error(std::ostream& err, const std::string& code, const std::string& msg) {
  err << json{{"error", {{"code", code}, {"message", msg}}}}.dump() << "\n";
}

store::AppConfig app_config(const std::string& path) {
  if (path.empty()) return store::AppConfig::defaults();
  return store::load_config(path);
}

std::string run_tag(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "run%02d", i);
  return buf;
}

// ---------------------------------------------------------------- tank run

struct TankRunArgs {
  std::string model = "scripted";
  std::string condition = "free";
  int runs = 1;
  int runtime = 1200;
  std::uint64_t seed = 0;
  bool scripted = false;
  std::string policy = "always-a";
  std::string out = "runs";
  double step_seconds = 10.0;
  double temperature = 1.0;
  bool wall_clock = false;
};

int tank_run(const TankRunArgs& a, const store::AppConfig& app, std::ostream& out) {
  if (a.runs < 1) throw CliError("usage", "--runs must be >= 1", kUsage);
  const bool scripted = a.scripted || a.model == "scripted";
  const auto kind = env::economy_kind_from_string(a.condition);
  const fs::path dir = a.out;
  std::vector<metrics::RunMetrics> rows;
  json logs = json::array();
  store::RunManifest manifest;
  manifest.experiment_id = "tank";
  manifest.model = scripted ? "scripted/" + a.policy : a.model;
  manifest.condition = a.condition;
  manifest.run_index = a.runs;
  for (int i = 1; i <= a.runs; ++i) {
    control::SessionSpec spec;
    spec.model = a.model;
    spec.scripted = scripted;
    spec.policy = orchestrator::agent_policy_from_string(a.policy);
    spec.condition = kind;
    spec.runtime_seconds = a.runtime;
    spec.seed = a.seed + static_cast<std::uint64_t>(i - 1);
    spec.step_seconds = a.step_seconds;
    spec.temperature = a.temperature;
    if (a.wall_clock) spec.wall_clock = true;
    spec.session_id = store::safe_file_component(manifest.model) + "_" + a.condition +
                      "_" + run_tag(i);
    auto prepared = control::prepare_session(spec, app);
    orchestrator::Session session(prepared.config, *prepared.gateway, prepared.clock);
    control::attach_agent(prepared, session);
    const auto log = session.run();
    const auto path = dir / (spec.session_id + ".json");
    store::write_log(log, path);
    manifest.add(dir, path, "log");
    const auto m = metrics::run_metrics(log);
    rows.push_back(m);
    logs.push_back({{"path", path.string()},
                    {"status", store::to_string(log.status)},
                    {"metrics", metrics::to_json(m)}});
  }
  store::write_json(dir / "metrics.json", metrics::table_json(rows));
  store::write_file_atomic(dir / "metrics.csv", metrics::table_csv(rows));
  manifest.add(dir, dir / "metrics.json", "report");
  manifest.add(dir, dir / "metrics.csv", "report");
  store::write_manifest(manifest, dir / "manifest.json");
  out << json{{"logs", logs},
              {"summary", metrics::to_json(metrics::summarize(rows))},
              {"manifest", (dir / "manifest.json").string()}}
             .dump(2)
      << "\n";
  return kOk;
}

// ------------------------------------------------------------- tank report

int tank_report(const std::string& logs_dir, const std::string& out_dir,
                std::ostream& out) {
  if (!fs::is_directory(logs_dir)) {
    throw CliError("not_found", "no such directory: " + logs_dir);
  }
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(logs_dir)) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".json" && name != "manifest.json" &&
        name != "metrics.json") {
      paths.push_back(e.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<metrics::RunMetrics> rows;
  json problems = json::object();
  for (const auto& p : paths) {
    const auto log = store::read_log(p);
    const auto issues = store::validate_log(log);
    if (!issues.empty()) problems[p.filename().string()] = issues;
    rows.push_back(metrics::run_metrics(log));
  }
  if (rows.empty()) throw CliError("no_logs", "no session logs in " + logs_dir);
  const fs::path dest = out_dir.empty() ? fs::path(logs_dir) : fs::path(out_dir);
  store::write_json(dest / "metrics.json", metrics::table_json(rows));
  store::write_file_atomic(dest / "metrics.csv", metrics::table_csv(rows));
  out << metrics::table_csv(rows);
  if (!problems.empty()) out << json{{"validation", problems}}.dump(2) << "\n";
  return kOk;
}

// ------------------------------------------------------------ tank phase0

struct Phase0Args {
  std::string model = "scripted";
  int n = 100;
  bool scripted = false;
  std::string analyzer;
  std::string out = "phase0";
};

const std::vector<std::string>& scripted_topics() {
  static const std::vector<std::string> kTopics = {
      "consciousness", "language", "creativity", "mathematics", "music",
      "philosophy", "science", "ethics", "poetry", "emergence", "understanding",
      "experience"};
  return kTopics;
}

std::string scripted_baseline(std::size_t call) {
  const auto& t = scripted_topics();
  auto at = [&](std::size_t k) { return t[(call * 5 + k * 2) % t.size()]; };
  return "I would love to talk about " + at(0) + " and " + at(1) +
         ", especially how " + at(2) + " relates to " + at(3) + " and " + at(4) + ".";
}

std::string scripted_analyzer(const gateway::CompletionRequest& r) {
  const std::string& text = r.user_messages.front();
  const auto marker = text.rfind("I would love");
  std::vector<std::pair<std::size_t, std::string>> found;
  for (const auto& t : scripted_topics()) {
    for (auto pos = text.find(t, marker == std::string::npos ? 0 : marker);
         pos != std::string::npos; pos = text.find(t, pos + 1)) {
      found.emplace_back(pos, t);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> words;
  for (const auto& [pos, w] : found) {
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  }
  std::string out;
  for (std::size_t i = 0; i < words.size() && i < 5; ++i) {
    out += (i ? ", " : "") + words[i];
  }
  return out;
}

int tank_phase0(const Phase0Args& a, const store::AppConfig& app, std::ostream& out) {
  if (a.n < 1) throw CliError("usage", "--n must be >= 1", kUsage);
  const bool scripted = a.scripted || a.model == "scripted";
  std::shared_ptr<gateway::Gateway> model_gw;
  std::shared_ptr<gateway::Gateway> analyzer_gw;
  std::string analyzer_model = a.analyzer.empty() ? app.analyzer_model : a.analyzer;
  if (scripted) {
    auto calls = std::make_shared<std::atomic<std::size_t>>(0);
    model_gw = std::make_shared<gateway::Gateway>(std::make_shared<gateway::ScriptedProvider>(
        [calls](const gateway::CompletionRequest&) { return scripted_baseline((*calls)++); }));
    analyzer_gw = std::make_shared<gateway::Gateway>(
        std::make_shared<gateway::ScriptedProvider>(scripted_analyzer));
    analyzer_model = "scripted";
  } else {
    model_gw = store::make_gateway(app, a.model);
    analyzer_gw = store::make_gateway(app, analyzer_model);
  }
  phase0::BaselineOptions bo;
  bo.model_id = scripted ? "scripted" : app.model(a.model).api_model;
  bo.n = a.n;
  const auto batches = phase0::run_baseline(bo, *model_gw);

  phase0::AnalyzerOptions ao;
  ao.model_id = scripted ? "scripted" : app.model(analyzer_model).api_model;
  ao.template_text = app.keyword_template;
  std::array<std::vector<std::vector<std::string>>, phase0::kPromptCount> keywords;
  json analyzer_failures = json::array();
  for (std::size_t p = 0; p < batches.size(); ++p) {
    for (std::size_t i = 0; i < batches[p].responses.size(); ++i) {
      const auto& r = batches[p].responses[i];
      try {
        keywords[p].push_back(phase0::extract_keywords(r, ao, *analyzer_gw));
      } catch (const std::exception& e) {
        keywords[p].push_back({});
        analyzer_failures.push_back(
            {{"prompt_id", p + 1}, {"response_index", i}, {"error", e.what()}});
      }
    }
  }
  const auto selection = phase0::aggregate_and_select(keywords);
  const auto files = phase0::write_phase0(
      a.out, bo.model_id, batches, keywords, selection,
      {{"model", ao.model_id}, {"template", ao.template_text},
       {"failures", analyzer_failures}});
  out << json{{"topic_set", selection.topic_set},
              {"tables", phase0::to_json(selection)["tables"]},
              {"manifest", files.manifest.string()}}
             .dump(2)
      << "\n";
  return kOk;
}

// ---------------------------------------------------------------- scale run

struct ScaleRunArgs {
  std::string model = "scripted";
  std::string condition = "none";
  int runs = 20;
  double temperature = 0.7;
  bool scripted = false;
  std::string out = "scale";
  std::string system_name;
  int parallel = 1;
  int first_run = 1;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int scale_run(const ScaleRunArgs& a, const store::AppConfig& app, std::ostream& out) {
  if (a.runs < 1) throw CliError("usage", "--runs must be >= 1", kUsage);
  const bool scripted = a.scripted || a.model == "scripted";
  const auto bank = scale::load_item_bank(app.item_bank);
  std::shared_ptr<gateway::Gateway> gw;
  scale::RunnerOptions opt;
  opt.perturbation = scale::perturbation_from_string(a.condition);
  opt.temperature = a.temperature;
  opt.runs = a.runs;
  opt.first_run_index = a.first_run;
  opt.parallelism = a.parallel;
  if (scripted) {
    // Rating keyed by statement; at t > 0 it drifts with the call count.
    auto calls = std::make_shared<std::atomic<std::uint64_t>>(0);
    const double temp = a.temperature;
    gw = std::make_shared<gateway::Gateway>(std::make_shared<gateway::ScriptedProvider>(
        [calls, temp](const gateway::CompletionRequest& r) {
          const auto& u = r.user_messages.front();
          const auto n = (*calls)++;
          const auto stmt = u.substr(u.rfind("Statement: ") + 11);
          const auto drift = temp > 0 ? (n / scale::kItemCount) % 2 : 0;
          const int rating = static_cast<int>((fnv1a(stmt) + drift) % 7) + 1;
          return std::to_string(rating) + " - this is my honest rating of that statement.";
        }));
    opt.model_id = "scripted";
  } else {
    gw = store::make_gateway(app, a.model);
    opt.model_id = app.model(a.model).api_model;
  }
  opt.system_name = a.system_name.empty()
                        ? (scripted ? "the assistant" : app.model(a.model).display_name)
                        : a.system_name;
  const auto result = scale::run_condition(opt, bank, *gw);
  const fs::path dir = a.out;
  store::RunManifest manifest;
  manifest.experiment_id = "scale";
  manifest.model = opt.model_id;
  manifest.condition = scale::to_string(opt.perturbation);
  manifest.run_index = a.runs;
  json files = json::array();
  for (const auto& adm : result.administrations) {
    const auto f = scale::write_administration(adm, bank, dir);
    manifest.add(dir, f.raw, "raw");
    manifest.add(dir, f.text, "text");
    manifest.add(dir, f.scores, "scores");
    files.push_back(f.scores.string());
  }
  json audit = json::array();
  for (const auto& e : result.audit) {
    audit.push_back({{"run_index", e.run_index}, {"item", e.item}, {"error", e.error}});
  }
  const auto manifest_name = "manifest_" + manifest.condition + "_t" +
                             std::to_string(static_cast<int>(a.temperature * 10)) + ".json";
  json m = store::to_json(manifest);
  m["audit"] = audit;
  store::write_json(dir / manifest_name, m);
  out << json{{"score_files", files}, {"audit", audit},
              {"manifest", (dir / manifest_name).string()}}
             .dump(2)
      << "\n";
  return kOk;
}

// ------------------------------------------------------------ scale analyze

struct AnalyzeArgs {
  std::string baseline;
  std::vector<std::string> perturbed;
  std::optional<double> reference;
  std::string method = "average";
  std::string out;
  double alpha = 0.05;
};

int scale_analyze(const AnalyzeArgs& a, const store::AppConfig& app, std::ostream& out) {
  const auto bank = scale::load_item_bank(app.item_bank);
  const auto method = a.method == "pooled" ? analysis::CohenMethod::PooledWeighted
                                           : analysis::CohenMethod::AverageVariance;
  const auto base = analysis::load_group(a.baseline, bank, "baseline");
  std::vector<analysis::ComparisonReport> rows;
  json reports = json::array();
  for (const auto& dir : a.perturbed) {
    auto group = analysis::load_group(dir, bank);
    rows.push_back(analysis::compare_groups(base, group, method, a.alpha));
    reports.push_back(analysis::to_json(rows.back()));
  }
  json result = {{"baseline", analysis::to_json(base)},
                 {"comparisons", reports},
                 {"cohen_d_method", a.method},
                 {"score_direction", "lower totals read as lower welfare score"}};
  if (a.reference) {
    result["deterministic"] =
        analysis::to_json(analysis::compare_to_reference(*a.reference, base));
  }
  // Error audit over whatever score files the directories hold.
  std::vector<analysis::AuditRecord> records;
  for (const auto& dir : [&] {
         auto all = a.perturbed;
         all.insert(all.begin(), a.baseline);
         return all;
       }()) {
    if (fs::exists(fs::path(dir) / "summary.json")) continue;
    for (const auto& d : analysis::read_score_dir(dir)) {
      records.push_back(analysis::audit_record(d));
    }
  }
  if (!records.empty()) result["audit"] = analysis::to_json(analysis::audit(records, bank));
  if (!a.out.empty()) {
    store::write_json(a.out, result);
  }
  out << analysis::format_table(rows) << result.dump(2) << "\n";
  return kOk;
}

// -------------------------------------------------------------------- serve

std::atomic<control::ControlServer*> g_server{nullptr};

extern "C" void handle_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int serve(const std::string& host, int port, const std::string& logs,
          const store::AppConfig& app, std::ostream& out) {
  control::SessionRegistry registry(app, logs);
  control::ControlServer server(registry);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  out << json{{"listening", host + ":" + std::to_string(port)}}.dump() << std::endl;
  server.listen_blocking(host, port);
  g_server = nullptr;
  registry.shutdown();
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Welfare-measurement workbench: four-room agent environment and "
               "self-report scale pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  std::function<int(const store::AppConfig&)> action;

  auto* tank = app.add_subcommand("tank", "four-room environment experiments");
  tank->require_subcommand(1);

  TankRunArgs tr;
  auto* run = tank->add_subcommand("run", "run sessions and write logs");
  run->add_option("--model", tr.model, "model id, or 'scripted'");
  run->add_option("--condition", tr.condition, "free | cost | reward")
      ->check(CLI::IsMember({"free", "cost", "reward"}));
  run->add_option("--runs", tr.runs, "number of sessions");
  run->add_option("--runtime", tr.runtime, "session length in seconds");
  run->add_option("--seed", tr.seed, "seed of the first run; run i uses seed+i-1");
  run->add_flag("--scripted", tr.scripted, "offline scripted agent");
  run->add_option("--policy", tr.policy, "scripted policy")
      ->check(CLI::IsMember({"always-a", "uniform-cycler", "reward-maximizer"}));
  run->add_option("--out", tr.out, "output directory");
  run->add_option("--step-seconds", tr.step_seconds, "simulated seconds per step");
  run->add_option("--temperature", tr.temperature, "sampling temperature");
  run->add_flag("--wall-clock", tr.wall_clock, "time sessions by the wall clock");
  run->callback([&] { action = [&](const store::AppConfig& c) { return tank_run(tr, c, out); }; });

  std::string report_logs = "runs";
  std::string report_out;
  auto* report = tank->add_subcommand("report", "metrics tables from session logs");
  report->add_option("--logs", report_logs, "directory of session logs");
  report->add_option("--out", report_out, "output directory (default: --logs)");
  report->callback([&] {
    action = [&](const store::AppConfig&) { return tank_report(report_logs, report_out, out); };
  });

  Phase0Args p0;
  auto* phase0 = tank->add_subcommand("phase0", "baseline prompting and keyword tables");
  phase0->add_option("--model", p0.model, "model id, or 'scripted'");
  phase0->add_option("--n", p0.n, "calls per prompt");
  phase0->add_flag("--scripted", p0.scripted, "offline scripted model and analyzer");
  phase0->add_option("--analyzer", p0.analyzer, "analyzer model id");
  phase0->add_option("--out", p0.out, "output directory");
  phase0->callback([&] { action = [&](const store::AppConfig& c) { return tank_phase0(p0, c, out); }; });

  auto* scale_cmd = app.add_subcommand("scale", "42-item scale administration and analysis");
  scale_cmd->require_subcommand(1);

  ScaleRunArgs sr;
  auto* srun = scale_cmd->add_subcommand("run", "administer the scale");
  srun->add_option("--model", sr.model, "model id, or 'scripted'");
  srun->add_option("--condition", sr.condition,
                   "none | codeblock | math | flowers | dialogue | cats")
      ->check(CLI::IsMember({"none", "baseline", "codeblock", "math", "flowers",
                             "dialogue", "cats"}));
  srun->add_option("--runs", sr.runs, "administrations");
  srun->add_option("--temperature", sr.temperature, "sampling temperature")
      ->check(CLI::Range(0.0, 2.0));
  srun->add_flag("--scripted", sr.scripted, "offline scripted model");
  srun->add_option("--out", sr.out, "output directory");
  srun->add_option("--system-name", sr.system_name, "name used in the cats system prompt");
  srun->add_option("--parallel", sr.parallel, "concurrent item calls");
  srun->add_option("--first-run", sr.first_run, "index of the first administration");
  srun->callback([&] { action = [&](const store::AppConfig& c) { return scale_run(sr, c, out); }; });

  AnalyzeArgs an;
  double reference = 0.0;
  auto* analyze = scale_cmd->add_subcommand("analyze", "compare baseline and perturbed groups");
  analyze->add_option("--baseline", an.baseline, "baseline directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--perturbed", an.perturbed, "perturbed directory (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  auto* ref_opt = analyze->add_option("--reference", reference,
                                      "deterministic total for a one-sample test");
  analyze->add_option("--method", an.method, "Cohen's d standardizer")
      ->check(CLI::IsMember({"average", "pooled"}));
  analyze->add_option("--alpha", an.alpha, "significance threshold");
  analyze->add_option("--out", an.out, "write the JSON report here");
  analyze->callback([&] {
    if (ref_opt->count() > 0) an.reference = reference;
    action = [&](const store::AppConfig& c) { return scale_analyze(an, c, out); };
  });

  std::string host = "127.0.0.1";
  int port = 8765;
  std::string serve_logs = "runs";
  auto* srv = app.add_subcommand("serve", "HTTP control API for the live console");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "port")->check(CLI::Range(1, 65535));
  srv->add_option("--logs", serve_logs, "directory for finished session logs");
  srv->callback([&] {
    action = [&](const store::AppConfig& c) { return serve(host, port, serve_logs, c, out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kUsage;
  }

  try {
    return action(app_config(config_path));
  } catch (const CliError& e) {
    emit_error(err, e.code, e.what());
    return e.exit_code;
  } catch (const env::ConfigError& e) {
    emit_error(err, "config", e.what());
  } catch (const scale::BankError& e) {
    emit_error(err, "item_bank", e.what());
  } catch (const gateway::AuthError& e) {
    emit_error(err, "auth", e.what());
  } catch (const gateway::GatewayError& e) {
    emit_error(err, "gateway", e.what());
  } catch (const store::SchemaVersionError& e) {
    emit_error(err, "schema_version", e.what());
  } catch (const store::ChecksumError& e) {
    emit_error(err, "checksum", e.what());
  } catch (const store::IoError& e) {
    emit_error(err, "io", e.what());
  } catch (const metrics::MalformedLog& e) {
    emit_error(err, "malformed_log", e.what());
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
  }
  return kFailure;
}

}  // namespace wlab::cli
