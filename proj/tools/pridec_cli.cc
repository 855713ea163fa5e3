// Copyright 2026 The pridec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: dec, run, sweep and audit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pridec/error.h"
#include "pridec/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAudit = 3;

pridec::Json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw pridec::Error(pridec::ErrorCode::kValidation, path + ": cannot open");
  }
  try {
    return pridec::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pridec::Error(pridec::ErrorCode::kValidation,
                        path + ": " + std::string(e.what()));
  }
}

void WriteFile(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw pridec::Error(pridec::ErrorCode::kValidation, path + ": cannot write");
  }
  out << bytes;
}

std::vector<int> ParseHorizons(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const int t = std::stoi(item, &used);
      if (used != item.size() || t <= 0) throw std::invalid_argument(item);
      out.push_back(t);
    } catch (const std::exception&) {
      throw pridec::Error(pridec::ErrorCode::kValidation,
                          "--T: bad horizon '" + item + "'");
    }
  }
  if (out.empty()) {
    throw pridec::Error(pridec::ErrorCode::kValidation, "--T: empty list");
  }
  return out;
}

// Runs the experiment, writes the CSV and transcripts, and returns the exit
// code.
int Execute(pridec::ExperimentConfig cfg, const std::string& out_path) {
  if (!out_path.empty()) cfg.csv_path = out_path;
  const std::vector<pridec::RunArtifact> runs =
      pridec::RunExperiment(cfg, pridec::ThreadsFromEnv());
  const std::string csv = pridec::ResultsCsv(runs);
  if (cfg.csv_path.empty()) {
    std::fwrite(csv.data(), 1, csv.size(), stdout);
  } else {
    WriteFile(cfg.csv_path, csv);
  }
  if (!cfg.transcript_dir.empty()) {
    std::filesystem::create_directories(cfg.transcript_dir);
    for (const pridec::RunArtifact& r : runs) {
      pridec::Json doc{
          {"config",
           {{"instance", cfg.instance},
            {"learner", cfg.learner},
            {"T", r.row.horizon}}},
          {"transcript", pridec::TranscriptToJson(r.transcript)}};
      WriteFile(cfg.transcript_dir + "/run_" + std::to_string(r.row.run_id) +
                    ".json",
                doc.dump(1) + "\n");
    }
  }
  int failed = 0;
  for (const pridec::RunArtifact& r : runs) {
    if (!r.row.audit_pass) {
      ++failed;
      std::fprintf(stderr, "run %d: audit failed at round %d\n", r.row.run_id,
                   r.audit.FirstFailureRound());
    }
  }
  return failed ? kExitAudit : kExitOk;
}

int Audit(const std::string& path, double alpha) {
  const pridec::Json doc = ReadJson(path);
  pridec::LearnerFactory factory;
  pridec::Transcript t;
  if (doc.contains("transcript")) {
    t = pridec::TranscriptFromJson(doc.at("transcript"));
    if (doc.contains("config")) {
      const pridec::Json& c = doc.at("config");
      const pridec::Instance inst =
          pridec::BuildInstance(c.at("instance"), "$.config.instance");
      factory = pridec::MakeLearnerFactory(inst, c.at("learner"),
                                           c.at("T").get<int>());
    }
  } else {
    t = pridec::TranscriptFromJson(doc);
  }
  const pridec::AuditReport report = pridec::PrivacyAudit(t, alpha, factory);
  pridec::Json failures = pridec::Json::array();
  for (const pridec::AuditFailure& f : report.failures) {
    failures.push_back({{"round", f.round}, {"reason", f.reason}});
  }
  const pridec::Json out{{"pass", report.pass},
                         {"alpha", alpha},
                         {"rounds", t.rounds.size()},
                         {"rounds_replayed", report.rounds_checked},
                         {"replay", static_cast<bool>(factory)},
                         {"first_failure_round", report.FirstFailureRound()},
                         {"failures", failures}};
  std::cout << out.dump(2) << "\n";
  return report.pass ? kExitOk : kExitAudit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pridec: decision-estimation coefficients under local privacy"};
  app.require_subcommand(1);

  pridec::DecOptions dec;
  std::string instance_path;
  CLI::App* dec_cmd = app.add_subcommand("dec", "Evaluate a DEC-type quantity");
  dec_cmd->add_option("--kind", dec.kind, "Quantity to evaluate")
      ->required()
      ->check(CLI::IsMember({"offset-pac-ldp", "offset-reg-ldp",
                             "constrained-pac-ldp", "quantile", "local", "sq",
                             "robust-offset", "nfrac", "mincorr", "fixedpoint"}));
  dec_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  dec_cmd->add_option("--gamma", dec.gamma, "Offset weight");
  dec_cmd->add_option("--eps", dec.eps, "Constraint radius");
  dec_cmd->add_option("--delta", dec.delta, "Gap or quantile level");
  dec_cmd->add_option("--tau", dec.tau, "Query tolerance");
  dec_cmd->add_option("--beta", dec.beta, "Huber contamination level");
  dec_cmd->add_option("--lambda0", dec.lambda0, "Fixed-point regularizer");
  dec_cmd->add_option("--ref", dec.reference, "Reference model index");
  dec_cmd->add_flag("--regret", dec.regret, "Regret form of the robust DEC");

  std::string config_path;
  std::string out_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute seeded runs");
  run_cmd->add_option("--config", config_path, "Experiment JSON")->required();
  run_cmd->add_option("--out", out_path, "Results CSV (default: stdout)");

  std::string horizons;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Execute runs across horizons");
  sweep_cmd->add_option("--config", config_path, "Experiment JSON")->required();
  sweep_cmd->add_option("--T", horizons, "Comma-separated horizons")->required();
  sweep_cmd->add_option("--out", out_path, "Results CSV (default: stdout)");

  std::string transcript_path;
  double alpha = 1.0;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Audit a transcript");
  audit_cmd->add_option("--transcript", transcript_path, "Transcript JSON")
      ->required();
  audit_cmd->add_option("--alpha", alpha, "Privacy level")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*dec_cmd) {
      const pridec::Instance inst =
          pridec::BuildInstance(ReadJson(instance_path), "$");
      std::cout << pridec::DecCommand(inst, dec).dump(2) << "\n";
      return kExitOk;
    }
    if (*run_cmd) {
      return Execute(pridec::ParseExperiment(ReadJson(config_path)), out_path);
    }
    if (*sweep_cmd) {
      pridec::Json doc = ReadJson(config_path);
      const std::vector<int> ts = ParseHorizons(horizons);
      if (doc.is_object()) doc["T"] = ts;
      return Execute(pridec::ParseExperiment(doc), out_path);
    }
    return Audit(transcript_path, alpha);
  } catch (const pridec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}
