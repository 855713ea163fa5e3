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

// Experiment configuration, instance builders, seeded parallel runs, result
// emission and transcript serialization.

#ifndef PRIDEC_HARNESS_H_
#define PRIDEC_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pridec/environments.h"
#include "pridec/learners.h"
#include "pridec/models.h"

namespace pridec {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Instance {
  std::string builder;
  std::optional<ModelClass> cls;
  std::optional<QueryModelClass> qcls;
  // Reference law for correlation searches and OMD, when the builder has one.
  std::optional<Model> reference;
  // Responses of the uniform mixture over the query class.
  RandomizedQueryModel sq_reference;
  // Fixed-point data.
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

// Throws Error(kValidation) naming the offending field path.
Instance BuildInstance(const Json& spec, const std::string& path = "$.instance");

struct ExperimentConfig {
  Json instance;
  Json learner;
  Json environment;
  std::vector<int> horizons;
  int seed_count = 1;
  uint64_t master_seed = 0;
  std::string csv_path;
  std::string transcript_dir;
};

ExperimentConfig ParseExperiment(const Json& doc);

struct ResultRow {
  int run_id = 0;
  uint64_t seed = 0;
  int horizon = 0;
  double alpha = 0.0;
  std::string algorithm;
  double risk = 0.0;
  double regret = 0.0;
  double bound = 0.0;
  double cert_value = 0.0;
  bool audit_pass = false;
};

struct RunArtifact {
  ResultRow row;
  Transcript transcript;
  AuditReport audit;
};

// Runs every (T, seed) pair on up to `threads` workers; output is sorted by
// run_id regardless of scheduling.
std::vector<RunArtifact> RunExperiment(const ExperimentConfig& cfg, int threads);

inline constexpr const char* kCsvHeader =
    "run_id,seed,T,alpha,algorithm,risk,regret,bound,cert_value,audit_pass";
std::string ResultsCsv(const std::vector<RunArtifact>& runs);

// PRIDEC_THREADS, else the hardware concurrency; at least 1.
int ThreadsFromEnv();

// Rebuilds the learner of a run from its instance, learner spec and horizon.
LearnerFactory MakeLearnerFactory(const Instance& instance,
                                  const Json& learner, int horizon);

Json TranscriptToJson(const Transcript& t);
Transcript TranscriptFromJson(const Json& j);

struct DecOptions {
  std::string kind;
  double gamma = 1.0;
  double eps = 0.1;
  double delta = 0.5;
  double tau = 0.1;
  double beta = 0.0;
  double lambda0 = 0.5;
  int reference = 0;
  bool regret = false;
};

// Evaluates one DEC-type quantity and returns it as a JSON certificate.
Json DecCommand(const Instance& instance, const DecOptions& opt);

}  // namespace pridec

#endif  // PRIDEC_HARNESS_H_
