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

#include "pridec/harness.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "pridec/dec.h"
#include "pridec/error.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

[[noreturn]] void Invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kValidation, path + ": " + what);
}

// Typed access to one JSON object with unknown keys rejected up front.
class Fields {
 public:
  Fields(const Json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) Invalid(path_, "expected an object");
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed.count(key)) Invalid(path_ + "." + key, "unknown field");
    }
  }

  bool Has(const std::string& key) const { return obj_.contains(key); }
  std::string Path(const std::string& key) const { return path_ + "." + key; }

  const Json& Get(const std::string& key) const {
    if (!Has(key)) Invalid(Path(key), "missing required field");
    return obj_.at(key);
  }

  double Number(const std::string& key, std::optional<double> dflt = {}) const {
    if (!Has(key)) {
      if (dflt) return *dflt;
      Invalid(Path(key), "missing required field");
    }
    const Json& v = obj_.at(key);
    if (!v.is_number()) Invalid(Path(key), "expected a number");
    return v.get<double>();
  }

  int Int(const std::string& key, std::optional<int> dflt = {}) const {
    if (!Has(key)) {
      if (dflt) return *dflt;
      Invalid(Path(key), "missing required field");
    }
    const Json& v = obj_.at(key);
    if (!v.is_number_integer()) Invalid(Path(key), "expected an integer");
    return v.get<int>();
  }

  bool Bool(const std::string& key, bool dflt) const {
    if (!Has(key)) return dflt;
    const Json& v = obj_.at(key);
    if (!v.is_boolean()) Invalid(Path(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string String(const std::string& key, std::set<std::string> choices,
                     std::optional<std::string> dflt = {}) const {
    if (!Has(key)) {
      if (dflt) return *dflt;
      Invalid(Path(key), "missing required field");
    }
    const Json& v = obj_.at(key);
    if (!v.is_string()) Invalid(Path(key), "expected a string");
    const std::string s = v.get<std::string>();
    if (!choices.empty() && !choices.count(s)) Invalid(Path(key), "unknown value '" + s + "'");
    return s;
  }

  template <typename T>
  T As(const std::string& key) const {
    try {
      return Get(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      Invalid(Path(key), "wrong shape");
    }
  }

  template <typename T>
  T As(const std::string& key, T dflt) const {
    return Has(key) ? As<T>(key) : dflt;
  }

 private:
  const Json& obj_;
  std::string path_;
};

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

Model UniformMixture(const ModelClass& cls) {
  std::vector<const Model*> ptrs;
  for (const Model& m : cls.models()) ptrs.push_back(&m);
  const Vec w(ptrs.size(), 1.0 / static_cast<double>(ptrs.size()));
  return Model::Mixture(ptrs, w);
}

RandomizedQueryModel UniformQueryMixture(const QueryModelClass& cls) {
  RandomizedQueryModel mu(cls.queries().size());
  for (int j = 0; j < cls.queries().size(); ++j) {
    for (int m = 0; m < cls.size(); ++m) {
      mu[j].prob.push_back(1.0 / cls.size());
      mu[j].values.push_back(cls.Response(m, j));
    }
  }
  return mu;
}

// Hadamard sign of (row, col).
int Hadamard(int row, int col) {
  return std::popcount(static_cast<unsigned>(row & col)) % 2 ? -1 : 1;
}

QueryModelClass SqBlocks(int blocks, double separation) {
  const int n = 2 * blocks;
  int nz = 1;
  while (nz < n) nz *= 2;
  const FiniteSpace z = FiniteSpace::Indexed(nz, "z");
  std::vector<FiniteDist> dists;
  for (int i = 0; i < n; ++i) {
    Vec mass(nz, (1.0 - separation) / nz);
    mass[i] += separation;
    dists.emplace_back(z, mass);
  }
  Mat queries;
  for (int k = 1; k < nz; ++k) {
    Vec phi(nz);
    for (int c = 0; c < nz; ++c) phi[c] = Hadamard(k, c);
    queries.push_back(std::move(phi));
  }
  Mat loss(n, Vec(blocks, 1.0));
  for (int i = 0; i < n; ++i) loss[i][i / 2] = 0.0;
  return StatisticalQueryClass(dists, queries, FiniteSpace::Indexed(blocks, "b"),
                               std::move(loss));
}

void Wrap(const std::string& path, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    Invalid(path, e.what());
  }
}

double ParseProbability(const Fields& f, const std::string& key, double dflt) {
  const double v = f.Number(key, dflt);
  if (!(v > 0.0 && v < 1.0)) Invalid(f.Path(key), "must lie in (0,1)");
  return v;
}

SearchConfig ParseSearch(const Fields& parent, const std::string& key) {
  SearchConfig s;
  if (!parent.Has(key)) return s;
  Fields f(parent.Get(key), parent.Path(key),
           {"restarts", "steps", "step_scale", "exact_model_cap", "quantile_grid"});
  s.restarts = f.Int("restarts", s.restarts);
  s.steps = f.Int("steps", s.steps);
  s.step_scale = f.Number("step_scale", s.step_scale);
  s.exact_model_cap = f.Int("exact_model_cap", s.exact_model_cap);
  s.quantile_grid = f.Int("quantile_grid", s.quantile_grid);
  return s;
}

struct ExoSetup {
  InfoSetStructure info;
  double info_delta = 0.0;
  double delta = 0.1;
  ExoConfig cfg;
};

ExoSetup ParseExo(const ModelClass& cls, const Fields& f, int horizon) {
  ExoSetup s;
  s.cfg.horizon = horizon;
  s.cfg.gamma = f.Number("gamma", 1.0);
  s.cfg.clip = f.Number("clip", 0.0);
  s.cfg.regret_option = f.String("option", {"pac", "reg"}, "reg") == "reg";
  s.cfg.private_observations = f.Bool("private", false);
  s.cfg.alpha = f.Number("alpha", 1.0);
  s.cfg.max_alternations = f.Int("max_alternations", 50);
  s.delta = ParseProbability(f, "delta", 0.1);
  const Fields is(f.Get("info_sets"), f.Path("info_sets"),
                  {"kind", "delta", "sets", "anchors", "prior"});
  const std::string kind =
      is.String("kind", {"model_based", "policy_based", "value_based",
                         "contextual", "custom"});
  s.info_delta = is.Number("delta", 0.0);
  if (kind == "model_based") {
    s.info = ModelBasedInfoSets(cls);
  } else if (kind == "policy_based") {
    s.info = PolicyBasedInfoSets(cls, s.info_delta);
  } else if (kind == "value_based") {
    s.info = ValueBasedInfoSets(cls, s.info_delta);
  } else if (kind == "contextual") {
    s.info = ContextualInfoSets(cls, s.info_delta);
  } else {
    s.info.kind = "custom";
    s.info.sets = is.As<std::vector<std::vector<int>>>("sets");
    s.info.anchors = is.As<std::vector<int>>("anchors");
    s.info.prior = is.As<Vec>("prior", Vec(s.info.sets.size(),
                                           1.0 / std::max<size_t>(1, s.info.sets.size())));
  }
  try {
    s.info.Validate(cls.size(), cls.num_decisions());
  } catch (const Error& e) {
    Invalid(f.Path("info_sets"), e.what());
  }
  return s;
}

const ModelClass& NeedClass(const Instance& inst, const std::string& path) {
  if (!inst.cls) Invalid(path, "builder '" + inst.builder + "' has no model class");
  return *inst.cls;
}

const QueryModelClass& NeedQueries(const Instance& inst, const std::string& path) {
  if (!inst.qcls) Invalid(path, "builder '" + inst.builder + "' has no query class");
  return *inst.qcls;
}

FiniteDist ReferenceLaw(const Instance& inst) {
  if (inst.reference) return inst.reference->Dist(0);
  return UniformMixture(*inst.cls).Dist(0);
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

Json CertJson(const DecCertificate& c) {
  return Json{{"value", c.value},
              {"p", c.p},
              {"q", c.q},
              {"witness", c.witness},
              {"mode", CertModeName(c.mode)},
              {"upper_bound_only", c.upper_bound_only}};
}

}  // namespace

Instance BuildInstance(const Json& spec, const std::string& path) {
  const Fields top(spec, path, {"builder", "params"});
  Instance inst;
  inst.builder = top.String(
      "builder", {"mab", "canonical_mab", "parity", "contextual_bandit",
                  "regression", "linear", "sq_blocks", "hypothesis_selection",
                  "inline", "fixed_point"});
  const Json empty = Json::object();
  const Json& params = top.Has("params") ? top.Get("params") : empty;
  const std::string pp = path + ".params";
  const std::string& b = inst.builder;
  if (b == "mab") {
    const Fields f(params, pp, {"means"});
    Wrap(pp, [&] { inst.cls = MabClass(f.As<Mat>("means")); });
  } else if (b == "canonical_mab") {
    const Fields f(params, pp, {"k"});
    Wrap(pp, [&] { inst.cls = CanonicalMab(f.Int("k")); });
  } else if (b == "parity") {
    const Fields f(params, pp, {"d", "lambda", "policy_cap"});
    Wrap(pp, [&] {
      ParityInstance p = ParityClass(f.Int("d"), f.Number("lambda"),
                                     f.Int("policy_cap", kDefaultPolicyCap));
      inst.cls = p.cls;
      inst.reference = p.reference;
    });
  } else if (b == "contextual_bandit") {
    const Fields f(params, pp, {"contexts", "actions", "reward_fns",
                                "context_dists", "policy_cap"});
    Wrap(pp, [&] {
      inst.cls = ContextualBanditClass(
          f.Int("contexts"), f.Int("actions"),
          f.As<std::vector<Mat>>("reward_fns"), f.As<Mat>("context_dists"),
          f.Int("policy_cap", kDefaultPolicyCap));
    });
  } else if (b == "regression") {
    const Fields f(params, pp, {"fns", "nu_list"});
    Wrap(pp, [&] { inst.cls = RegressionClass(f.As<Mat>("fns"), f.As<Mat>("nu_list")); });
  } else if (b == "linear") {
    const Fields f(params, pp, {"points", "nu_list", "thetas", "decision_grid"});
    Wrap(pp, [&] {
      inst.cls = LinearModelClass(f.As<Mat>("points"), f.As<Mat>("nu_list"),
                                  f.As<Mat>("thetas"), f.As<Mat>("decision_grid"));
    });
  } else if (b == "sq_blocks") {
    const Fields f(params, pp, {"blocks", "separation"});
    Wrap(pp, [&] {
      const int blocks = f.Int("blocks");
      if (blocks < 1) Invalid(f.Path("blocks"), "must be >= 1");
      inst.qcls = SqBlocks(blocks, f.Number("separation", 0.5));
    });
  } else if (b == "hypothesis_selection") {
    const Fields f(params, pp, {"dists", "block_of", "num_blocks"});
    Wrap(pp, [&] {
      const Mat dists = f.As<Mat>("dists");
      if (dists.empty()) Invalid(f.Path("dists"), "must be non-empty");
      const FiniteSpace z = FiniteSpace::Indexed(static_cast<int>(dists[0].size()), "z");
      std::vector<FiniteDist> d;
      for (const Vec& v : dists) d.emplace_back(z, v);
      inst.cls = HypothesisSelection(std::move(d), f.As<std::vector<int>>("block_of"),
                                     f.Int("num_blocks"));
    });
  } else if (b == "inline") {
    const Fields f(params, pp, {"models", "reward"});
    Wrap(pp, [&] {
      const auto models = f.As<std::vector<Mat>>("models");
      const Mat reward = f.As<Mat>("reward");
      if (models.empty() || models[0].empty()) Invalid(f.Path("models"), "must be non-empty");
      const FiniteSpace pis = FiniteSpace::Indexed(static_cast<int>(models[0].size()), "a");
      const FiniteSpace zs = FiniteSpace::Indexed(static_cast<int>(models[0][0].size()), "z");
      std::vector<Model> ms;
      for (const Mat& m : models) ms.emplace_back(pis, zs, m);
      inst.cls = ModelClass::RewardBased(std::move(ms), RewardFn(zs, pis, reward));
    });
  } else {
    const Fields f(params, pp, {"points", "weights"});
    inst.points = f.As<Mat>("points");
    inst.weights = f.As<Vec>("weights");
    if (inst.points.empty() || inst.points.size() != inst.weights.size()) {
      Invalid(pp, "points and weights must be non-empty and aligned");
    }
  }
  if (inst.qcls) inst.sq_reference = UniformQueryMixture(*inst.qcls);
  return inst;
}

ExperimentConfig ParseExperiment(const Json& doc) {
  const Fields top(doc, "$", {"schema_version", "instance", "learner",
                              "environment", "T", "seeds", "output"});
  if (top.Int("schema_version") != kSchemaVersion) {
    Invalid("$.schema_version", "unsupported version");
  }
  ExperimentConfig cfg;
  cfg.instance = top.Get("instance");
  cfg.learner = top.Get("learner");
  cfg.environment = top.Get("environment");
  cfg.horizons = top.As<std::vector<int>>("T");
  if (cfg.horizons.empty()) Invalid("$.T", "must list at least one horizon");
  for (int t : cfg.horizons) {
    if (t <= 0) Invalid("$.T", "horizons must be positive");
  }
  const Fields seeds(top.Get("seeds"), "$.seeds", {"count", "master"});
  cfg.seed_count = seeds.Int("count");
  if (cfg.seed_count < 1) Invalid("$.seeds.count", "must be >= 1");
  const Json& master = seeds.Get("master");
  if (!master.is_number_unsigned() && !master.is_number_integer()) {
    Invalid("$.seeds.master", "expected a non-negative integer");
  }
  cfg.master_seed = master.get<uint64_t>();
  if (top.Has("output")) {
    const Fields out(top.Get("output"), "$.output", {"csv", "transcripts"});
    cfg.csv_path = out.String("csv", {}, "");
    cfg.transcript_dir = out.String("transcripts", {}, "");
  }
  // Build everything once so that configuration errors surface before any run.
  const Instance inst = BuildInstance(cfg.instance);
  MakeLearnerFactory(inst, cfg.learner, cfg.horizons.front())(0);
  const Fields env(cfg.environment, "$.environment", {"kind", "params"});
  env.String("kind", {"stationary", "huber", "gq_oracle", "adversarial_context"});
  return cfg;
}

LearnerFactory MakeLearnerFactory(const Instance& inst, const Json& learner,
                                  int horizon) {
  const std::string path = "$.learner";
  const Fields top(learner, path, {"algorithm", "params"});
  const std::string algo = top.String(
      "algorithm", {"ldp_e2d", "exo_plus", "brute_force_dc", "sq_e2d"});
  const Json empty = Json::object();
  const Json& params = top.Has("params") ? top.Get("params") : empty;
  const std::string pp = path + ".params";
  if (algo == "ldp_e2d") {
    const ModelClass& cls = NeedClass(inst, pp);
    const Fields f(params, pp, {"delta", "alpha", "oracle", "est_scale",
                                "solver", "search"});
    E2dConfig cfg;
    cfg.horizon = horizon;
    cfg.delta = ParseProbability(f, "delta", 0.1);
    cfg.alpha = f.Number("alpha", 1.0);
    cfg.est_scale = f.Number("est_scale", 1.0);
    cfg.solver = f.String("solver", {"exact", "sweep"}, "exact");
    cfg.search = ParseSearch(f, "search");
    const std::string oracle = f.String("oracle", {"vovk", "omd"}, "vovk");
    std::shared_ptr<EstimationOracle> proto;
    Wrap(pp, [&] {
      if (oracle == "vovk") {
        proto = std::make_shared<VovkOracle>(cls.models(), cfg.alpha);
      } else {
        const int k = static_cast<int>(std::ceil(std::log(2.0 / cfg.delta)));
        const int n = std::max(1, horizon / (k + 1));
        proto = std::make_shared<OmdOracle>(
            OmdOracle::ForClass(cls, ReferenceLaw(inst), n, cfg.alpha));
      }
      MakeE2dSchedule(cfg, *proto);
    });
    return [cls, cfg, proto](uint64_t seed) {
      E2dConfig c = cfg;
      c.seed = seed;
      return MakeE2dLearner(cls, c, *proto);
    };
  }
  if (algo == "exo_plus") {
    const ModelClass& cls = NeedClass(inst, pp);
    const Fields f(params, pp, {"gamma", "clip", "option", "private", "alpha",
                                "delta", "max_alternations", "info_sets"});
    const ExoSetup s = ParseExo(cls, f, horizon);
    return [cls, s](uint64_t seed) {
      ExoConfig c = s.cfg;
      c.seed = seed;
      return MakeExoLearner(cls, s.info, c);
    };
  }
  if (algo == "brute_force_dc") {
    const ModelClass& cls = NeedClass(inst, pp);
    const Fields f(params, pp, {"delta_gap", "delta", "alpha"});
    BruteForceConfig cfg;
    cfg.horizon = horizon;
    cfg.delta_gap = f.Number("delta_gap", 0.5);
    cfg.delta = ParseProbability(f, "delta", 0.05);
    cfg.alpha = f.Number("alpha", 1.0);
    Wrap(pp, [&] { MakeBruteForceSchedule(cls, cfg); });
    return [cls, cfg](uint64_t seed) {
      BruteForceConfig c = cfg;
      c.seed = seed;
      return MakeBruteForceLearner(cls, c);
    };
  }
  const QueryModelClass& qcls = NeedQueries(inst, pp);
  const Fields f(params, pp, {"delta", "tau", "c0", "search"});
  SqE2dConfig cfg;
  cfg.horizon = horizon;
  cfg.delta = ParseProbability(f, "delta", 0.1);
  cfg.tau = f.Number("tau", 0.1);
  cfg.c0 = f.Number("c0", 16.0);
  cfg.search = ParseSearch(f, "search");
  Wrap(pp, [&] { MakeSqE2dSchedule(qcls.size(), cfg); });
  return [qcls, cfg](uint64_t seed) {
    SqE2dConfig c = cfg;
    c.seed = seed;
    return MakeSqE2dLearner(qcls, c);
  };
}

namespace {

struct EnvSetup {
  std::unique_ptr<Environment> env;
  // Class members the environment can realize, by environment model index.
  std::vector<int> members;
  std::vector<double> truth_loss;
};

Vec ValuesOf(const ModelClass& cls, int m) {
  Vec v(cls.num_decisions());
  for (int pi = 0; pi < cls.num_decisions(); ++pi) v[pi] = cls.ValueOf(m, pi);
  return v;
}

int ParseTruth(const Fields& f, int size) {
  const int truth = f.Int("truth", 0);
  if (truth < 0 || truth >= size) Invalid(f.Path("truth"), "not a class member");
  return truth;
}

EnvSetup MakeEnvironment(const Instance& inst, const Json& spec, uint64_t seed) {
  const Fields top(spec, "$.environment", {"kind", "params"});
  const std::string kind = top.String(
      "kind", {"stationary", "huber", "gq_oracle", "adversarial_context"});
  const Json empty = Json::object();
  const Json& params = top.Has("params") ? top.Get("params") : empty;
  const std::string pp = "$.environment.params";
  EnvSetup s;
  if (kind == "gq_oracle") {
    const QueryModelClass& q = NeedQueries(inst, pp);
    const Fields f(params, pp, {"truth", "tau", "strategy"});
    const int truth = ParseTruth(f, q.size());
    const auto strategy =
        f.String("strategy", {"truthful", "reference_pull"}, "reference_pull") ==
                "truthful"
            ? GqOracleEnv::Strategy::kTruthful
            : GqOracleEnv::Strategy::kReferencePull;
    s.env = std::make_unique<GqOracleEnv>(q, truth, f.Number("tau", 0.1), strategy,
                                          inst.sq_reference, seed);
    s.members = {truth};
    s.truth_loss = q.loss_table()[truth];
    return s;
  }
  const ModelClass& cls = NeedClass(inst, pp);
  if (kind == "stationary") {
    const Fields f(params, pp, {"truth"});
    const int truth = ParseTruth(f, cls.size());
    s.env = std::make_unique<StationaryEnv>(cls.model(truth), ValuesOf(cls, truth), seed);
    s.members = {truth};
    s.truth_loss = cls.LossRow(truth);
  } else if (kind == "huber") {
    const Fields f(params, pp, {"truth", "beta", "strategy", "fixed_symbol"});
    const int truth = ParseTruth(f, cls.size());
    const auto strategy = f.String("strategy", {"fixed", "greedy"}, "fixed") == "fixed"
                              ? HuberEnv::Strategy::kFixed
                              : HuberEnv::Strategy::kGreedy;
    const double beta = f.Number("beta", 0.0);
    if (!(beta >= 0.0 && beta <= 1.0)) Invalid(f.Path("beta"), "must lie in [0,1]");
    s.env = std::make_unique<HuberEnv>(cls.model(truth), ValuesOf(cls, truth), beta,
                                       strategy, f.Int("fixed_symbol", 0), seed);
    s.members = {truth};
    s.truth_loss = cls.LossRow(truth);
  } else {
    const Fields f(params, pp, {"models", "strategy"});
    s.members = f.As<std::vector<int>>("models");
    if (s.members.empty()) Invalid(f.Path("models"), "must be non-empty");
    std::vector<Model> models;
    Mat values;
    for (int m : s.members) {
      if (m < 0 || m >= cls.size()) Invalid(f.Path("models"), "not a class member");
      models.push_back(cls.model(m));
      values.push_back(ValuesOf(cls, m));
    }
    const std::string st = f.String("strategy", {"fixed", "cycle", "greedy"}, "cycle");
    const auto strategy = st == "fixed"   ? AdversarialEnv::Strategy::kFixed
                          : st == "cycle" ? AdversarialEnv::Strategy::kCycle
                                          : AdversarialEnv::Strategy::kGreedy;
    s.env = std::make_unique<AdversarialEnv>(std::move(models), std::move(values),
                                             strategy, seed);
  }
  return s;
}

RunArtifact RunOne(const ExperimentConfig& cfg, const Instance& inst,
                   int run_id, int horizon) {
  const uint64_t run_seed = DeriveRunSeed(cfg.master_seed, run_id);
  const uint64_t learner_seed = Mix64(run_seed ^ 0x1);
  const uint64_t env_seed = Mix64(run_seed ^ 0x2);
  LearnerFactory factory = MakeLearnerFactory(inst, cfg.learner, horizon);
  std::unique_ptr<Learner> learner = factory(learner_seed);
  EnvSetup env = MakeEnvironment(inst, cfg.environment, env_seed);
  RunReport report = Run(*learner, *env.env, env.truth_loss);

  RunArtifact out;
  out.transcript = std::move(report.transcript);
  const Transcript& t = out.transcript;
  std::vector<int> realized;
  for (int m : report.realized_models) {
    realized.push_back(m >= 0 ? env.members[m] : env.members.front());
  }
  double risk = report.risk;
  if (env.truth_loss.empty() && inst.cls) {
    // Average loss over the realized models.
    risk = 0.0;
    for (int m : realized) {
      for (size_t pi = 0; pi < t.p_hat.size(); ++pi) {
        risk += t.p_hat[pi] * inst.cls->Loss(m, static_cast<int>(pi));
      }
    }
    risk /= std::max<size_t>(1, realized.size());
  }
  double bound = t.cert_value;
  if (t.algorithm == "exo_plus") {
    const Fields top(cfg.learner, "$.learner", {"algorithm", "params"});
    const Fields f(top.Get("params"), "$.learner.params",
                   {"gamma", "clip", "option", "private", "alpha", "delta",
                    "max_alternations", "info_sets"});
    const ExoSetup s = ParseExo(*inst.cls, f, horizon);
    bound = ExoRegretBound(*inst.cls, s.info, s.info_delta, s.cfg.gamma, s.delta,
                           realized, t.cert_value);
  }
  out.audit = PrivacyAudit(t, t.alpha, factory);
  out.row = {run_id, run_seed, horizon, t.alpha, t.algorithm, risk,
             report.regret, bound, t.cert_value, out.audit.pass};
  return out;
}

}  // namespace

std::vector<RunArtifact> RunExperiment(const ExperimentConfig& cfg, int threads) {
  const Instance inst = BuildInstance(cfg.instance);
  const int total = static_cast<int>(cfg.horizons.size()) * cfg.seed_count;
  std::vector<RunArtifact> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int id = next++; id < total; id = next++) {
      try {
        out[id] = RunOne(cfg, inst, id, cfg.horizons[id / cfg.seed_count]);
      } catch (...) {
        errors[id] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(threads, total));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string ResultsCsv(const std::vector<RunArtifact>& runs) {
  std::vector<const RunArtifact*> sorted;
  for (const RunArtifact& r : runs) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->row.run_id < b->row.run_id;
  });
  std::string csv = std::string(kCsvHeader) + "\n";
  for (const RunArtifact* r : sorted) {
    const ResultRow& row = r->row;
    csv += std::to_string(row.run_id) + "," + std::to_string(row.seed) + "," +
           std::to_string(row.horizon) + "," + FormatDouble(row.alpha) + "," +
           row.algorithm + "," + FormatDouble(row.risk) + "," +
           FormatDouble(row.regret) + "," + FormatDouble(row.bound) + "," +
           FormatDouble(row.cert_value) + "," +
           (row.audit_pass ? "true" : "false") + "\n";
  }
  return csv;
}

int ThreadsFromEnv() {
  if (const char* env = std::getenv("PRIDEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Json TranscriptToJson(const Transcript& t) {
  Json rounds = Json::array();
  for (const RoundRecord& r : t.rounds) {
    Json rec{{"round", r.round},
             {"phase", r.phase},
             {"decision", r.action.decision},
             {"column", r.action.column},
             {"query", r.action.query},
             {"symbol", r.obs.symbol},
             {"response", r.obs.response},
             {"p", r.p},
             {"q", r.q},
             {"cert", r.cert}};
    if (r.action.channel) {
      rec["channel"] = Json{{"input", r.action.channel->input().labels()},
                            {"output", r.action.channel->output().labels()},
                            {"kernel", r.action.channel->kernel()}};
    } else {
      rec["channel"] = nullptr;
    }
    rounds.push_back(std::move(rec));
  }
  return Json{{"algorithm", t.algorithm}, {"seed", t.seed},
              {"horizon", t.horizon},     {"alpha", t.alpha},
              {"p_hat", t.p_hat},         {"cert_value", t.cert_value},
              {"extras", t.extras},       {"rounds", std::move(rounds)}};
}

Transcript TranscriptFromJson(const Json& j) {
  try {
    Transcript t;
    t.algorithm = j.at("algorithm").get<std::string>();
    t.seed = j.at("seed").get<uint64_t>();
    t.horizon = j.at("horizon").get<int>();
    t.alpha = j.at("alpha").get<double>();
    t.p_hat = j.at("p_hat").get<Vec>();
    t.cert_value = j.at("cert_value").get<double>();
    t.extras = j.at("extras").get<std::map<std::string, double>>();
    for (const Json& rec : j.at("rounds")) {
      RoundRecord r;
      r.round = rec.at("round").get<int>();
      r.phase = rec.at("phase").get<std::string>();
      r.action.decision = rec.at("decision").get<int>();
      r.action.column = rec.at("column").get<int>();
      r.action.query = rec.at("query").get<int>();
      r.obs.symbol = rec.at("symbol").get<int>();
      r.obs.response = rec.at("response").get<Vec>();
      r.p = rec.at("p").get<Vec>();
      r.q = rec.at("q").get<Vec>();
      r.cert = rec.at("cert").get<double>();
      const Json& ch = rec.at("channel");
      if (!ch.is_null()) {
        r.action.channel = Channel(
            FiniteSpace(ch.at("input").get<std::vector<std::string>>()),
            FiniteSpace(ch.at("output").get<std::vector<std::string>>()),
            ch.at("kernel").get<Mat>());
      }
      t.rounds.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("transcript: ") + e.what());
  }
}

Json DecCommand(const Instance& inst, const DecOptions& opt) {
  const std::string path = "--instance";
  Json out{{"kind", opt.kind}};
  if (opt.kind == "fixedpoint") {
    if (inst.points.empty()) Invalid(path, "fixedpoint needs a fixed_point instance");
    FixedPointResult r = SolveFixedPointU(inst.points, inst.weights, opt.lambda0);
    out.update({{"u", r.u},
                {"lambda0", r.lambda0},
                {"residual", r.residual},
                {"trace_expect", r.trace_expect},
                {"iterations", r.iterations},
                {"converged", r.converged}});
    return out;
  }
  if (opt.kind == "sq") {
    const QueryModelClass& q = NeedQueries(inst, path);
    if (opt.reference < 0 || opt.reference >= q.size()) Invalid("--ref", "not a class member");
    out.update(CertJson(SqDec(q, AsRandomized(q, opt.reference), opt.eps, opt.tau)));
    return out;
  }
  const ModelClass& cls = NeedClass(inst, path);
  if (opt.reference < 0 || opt.reference >= cls.size()) Invalid("--ref", "not a class member");
  const Model& ref = cls.model(opt.reference);
  if (opt.kind == "offset-pac-ldp") {
    out.update(CertJson(OffsetPacDecLdp(cls, ref, opt.gamma)));
  } else if (opt.kind == "offset-reg-ldp") {
    out.update(CertJson(OffsetRegDecLdp(cls, ref, opt.gamma)));
  } else if (opt.kind == "constrained-pac-ldp") {
    out.update(CertJson(ConstrainedPacDecLdp(cls, ref, opt.eps)));
  } else if (opt.kind == "quantile") {
    out.update(CertJson(QuantilePacDec(cls, ref, opt.eps, opt.delta)));
  } else if (opt.kind == "robust-offset") {
    out.update(CertJson(RobustOffsetDec(cls, ref, opt.gamma, opt.beta, opt.regret)));
  } else if (opt.kind == "local") {
    out["value"] = LocalDec(cls, opt.reference, opt.eps);
  } else if (opt.kind == "nfrac") {
    CoveringResult r = FractionalCovering(cls, opt.delta);
    out["n_frac"] = std::isfinite(r.n_frac) ? Json(r.n_frac) : Json("inf");
    out["p_star"] = r.p_star;
  } else if (opt.kind == "mincorr") {
    CorrelationReport r = MinCorrelation(cls, opt.delta, {ReferenceLaw(inst)});
    out.update({{"reference", r.reference},
                {"family", r.family},
                {"pairwise", r.pairwise},
                {"eps_correlated_at", std::isfinite(r.eps_correlated_at)
                                          ? Json(r.eps_correlated_at)
                                          : Json("inf")},
                {"decision_coverage_ok", r.decision_coverage_ok}});
  } else {
    Invalid("--kind", "unknown kind '" + opt.kind + "'");
  }
  return out;
}

}  // namespace pridec
