#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorgate/featurizer.hpp"
#include "mirrorgate/textnorm.hpp"

namespace mirrorgate::trainer {

enum class Loss : std::uint8_t { kSquaredHinge = 0, kHinge = 1 };

const char* to_string(Loss l);
Loss loss_from_string(std::string_view s);

/// L2-regularized linear SVM training parameters. The bias is an always-on
/// appended feature, regularized like any other weight; fit_bias=false
/// removes it (used by analytic test instances).
struct TrainConfig {
  double C = 1.0;
  Loss loss = Loss::kSquaredHinge;
  double tol = 1e-6;
  std::uint32_t max_iter = 10000;  // epochs over the training set
  std::uint64_t seed = 0;
  bool fit_bias = true;

  bool operator==(const TrainConfig&) const = default;

  void validate() const;  // throws InvalidConfig
};

/// Trained linear model. Weights are dense in vocabulary id order; term
/// lookup goes through the vocabulary that carries the same fingerprint.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::string vocab_fingerprint;
  textnorm::NormConfig norm_config;
  featurizer::NGramConfig ngram_config;
  TrainConfig train_config;
  std::string train_manifest_hash;

  bool operator==(const LinearModel&) const = default;
};

/// Per-run optimizer telemetry. Models that hit max_iter without meeting
/// tol are flagged (converged=false), never silently accepted.
///
/// primal_trace logs the best (lowest) primal objective reached through
/// each epoch: a dual method does not guarantee per-epoch primal descent,
/// so the monotone envelope is what gets reported. dual_trace is the raw
/// dual value f(alpha), which exact coordinate minimization does drive
/// monotonically down.
struct TrainReport {
  bool converged = false;
  std::uint32_t epochs = 0;
  double final_violation = 0.0;       // max |projected gradient| in last epoch
  std::vector<double> primal_trace;   // best primal objective through each epoch
  std::vector<double> dual_trace;     // dual objective value f(alpha) per epoch
};

struct TrainResult {
  LinearModel model;
  TrainReport report;
};

/// Dual coordinate descent on the box-constrained SVM dual, with a seeded
/// random coordinate permutation per epoch. Deterministic for fixed inputs.
/// Throws DegenerateLabels (one class), DimensionMismatch (feature id out of
/// range), InvalidConfig (malformed labels/sizes/config).
TrainResult train_svm(const std::vector<featurizer::FeatureSet>& features,
                      const std::vector<int>& labels,
                      const featurizer::Vocabulary& vocab,
                      const TrainConfig& cfg,
                      const textnorm::NormConfig& norm_config = {});

/// Exact primal objective of `model` on a training set:
/// (1/2)(||w||^2 + b^2) + C * sum L(y_i * (w . x_i + b)).
double objective(const LinearModel& model,
                 const std::vector<featurizer::FeatureSet>& features,
                 const std::vector<int>& labels, const TrainConfig& cfg);

/// b + sum of weights at the present ids. Throws DimensionMismatch.
double margin(const LinearModel& model, const featurizer::FeatureSet& fs);

/// Versioned byte stream: magic "MIRM", version, configs, fingerprints,
/// bias, then (id, weight) pairs in id order.
std::string save_model(const LinearModel& model);

/// Throws CorruptModel on malformed input, UnsupportedVersion on an
/// unknown format version.
LinearModel load_model(std::string_view bytes);

}  // namespace mirrorgate::trainer
