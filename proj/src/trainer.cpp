#include "mirrorgate/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mirrorgate/errors.hpp"
#include "mirrorgate/util/binio.hpp"
#include "mirrorgate/util/rng.hpp"
#include "mirrorgate/util/sha256.hpp"

namespace mirrorgate::trainer {

namespace {

constexpr char kMagic[4] = {'M', 'I', 'R', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

double loss_value(Loss loss, double margin_y) {
  const double v = std::max(0.0, 1.0 - margin_y);
  return loss == Loss::kSquaredHinge ? v * v : v;
}

/// Reconstructs a deterministic provenance digest for the model from the
/// exact inputs that shaped it.
std::string manifest_hash(const featurizer::Vocabulary& vocab, const TrainConfig& cfg,
                          const textnorm::NormConfig& norm_config, std::size_t n_samples,
                          std::size_t n_positive) {
  util::ByteWriter w;
  w.bytes("mirrorgate.train");
  w.str(vocab.fingerprint());
  w.f64(cfg.C);
  w.u8(static_cast<std::uint8_t>(cfg.loss));
  w.f64(cfg.tol);
  w.u32(cfg.max_iter);
  w.u64(cfg.seed);
  w.u8(cfg.fit_bias ? 1 : 0);
  w.u8(norm_config.lowercase ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(norm_config.unicode_form));
  w.u8(norm_config.collapse_whitespace ? 1 : 0);
  w.u32(norm_config.max_bytes);
  w.u64(n_samples);
  w.u64(n_positive);
  return util::sha256_hex(w.data());
}

}  // namespace

const char* to_string(Loss l) {
  return l == Loss::kSquaredHinge ? "squared_hinge" : "hinge";
}

Loss loss_from_string(std::string_view s) {
  if (s == "squared_hinge") return Loss::kSquaredHinge;
  if (s == "hinge") return Loss::kHinge;
  throw InvalidConfig("unknown loss: " + std::string(s));
}

void TrainConfig::validate() const {
  if (!(C > 0)) throw InvalidConfig("C must be > 0");
  if (!(tol > 0)) throw InvalidConfig("tol must be > 0");
  if (max_iter < 1) throw InvalidConfig("max_iter must be >= 1");
}

TrainResult train_svm(const std::vector<featurizer::FeatureSet>& features,
                      const std::vector<int>& labels,
                      const featurizer::Vocabulary& vocab, const TrainConfig& cfg,
                      const textnorm::NormConfig& norm_config) {
  cfg.validate();
  const std::size_t n = features.size();
  if (n != labels.size()) {
    throw InvalidConfig("features and labels must have equal length");
  }
  if (n < 2) {
    throw InvalidConfig("need at least 2 training samples");
  }
  std::size_t n_positive = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) throw InvalidConfig("labels must be +1 or -1");
    if (y == 1) ++n_positive;
  }
  if (n_positive == 0 || n_positive == n) {
    throw DegenerateLabels("training set contains only one class");
  }
  const std::size_t vocab_size = vocab.size();
  for (const auto& fs : features) {
    for (std::uint32_t id : fs.present_ids) {
      if (id >= vocab_size) {
        throw DimensionMismatch("feature id " + std::to_string(id) +
                                " out of range for vocabulary of size " +
                                std::to_string(vocab_size));
      }
    }
  }

  // Dual: min f(a) = 1/2 a^T (Q + D) a - e^T a over 0 <= a_i <= U, with
  // Q_ij = y_i y_j x_i . x_j. Squared hinge: U = inf, D_ii = 1/(2C);
  // hinge: U = C, D = 0. w = sum y_i a_i x_i (bias as last coordinate).
  const bool squared = cfg.loss == Loss::kSquaredHinge;
  const double D = squared ? 1.0 / (2.0 * cfg.C) : 0.0;
  const double U = squared ? std::numeric_limits<double>::infinity() : cfg.C;
  const std::size_t dim = vocab_size + (cfg.fit_bias ? 1 : 0);

  std::vector<double> w(dim, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) {
    qii[i] = static_cast<double>(features[i].present_ids.size()) +
             (cfg.fit_bias ? 1.0 : 0.0) + D;
  }

  const auto dot_w = [&](std::size_t i) {
    double s = cfg.fit_bias ? w[dim - 1] : 0.0;
    for (std::uint32_t id : features[i].present_ids) s += w[id];
    return s;
  };
  const auto add_to_w = [&](std::size_t i, double delta) {
    for (std::uint32_t id : features[i].present_ids) w[id] += delta;
    if (cfg.fit_bias) w[dim - 1] += delta;
  };

  const auto primal_value = [&]() {
    double obj = 0.0;
    for (double v : w) obj += v * v;
    obj *= 0.5;
    for (std::size_t i = 0; i < n; ++i) {
      obj += cfg.C * loss_value(cfg.loss, labels[i] * dot_w(i));
    }
    return obj;
  };
  const auto dual_value = [&]() {
    // a^T Q a == ||w||^2, so f = 1/2 ||w||^2 + D/2 sum a^2 - sum a.
    double sq = 0.0;
    for (double v : w) sq += v * v;
    double asq = 0.0, asum = 0.0;
    for (double a : alpha) {
      asq += a * a;
      asum += a;
    }
    return 0.5 * sq + 0.5 * D * asq - asum;
  };

  util::Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  bool converged = false;
  std::uint32_t epoch = 0;
  double max_violation = 0.0;
  while (epoch < cfg.max_iter) {
    rng.shuffle(order);
    max_violation = 0.0;
    for (std::size_t i : order) {
      const double y = labels[i];
      const double g = y * dot_w(i) - 1.0 + D * alpha[i];

      double pg = g;
      if (alpha[i] <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= U) {
        pg = std::max(g, 0.0);
      }
      max_violation = std::max(max_violation, std::abs(pg));
      if (std::abs(pg) > 1e-12) {
        const double a_old = alpha[i];
        double a_new;
        if (qii[i] > 0.0) {
          a_new = std::min(std::max(a_old - g / qii[i], 0.0), U);
        } else {
          // All-zero sample: the dual is linear in this coordinate.
          a_new = g < 0.0 ? U : 0.0;
        }
        if (a_new != a_old) {
          add_to_w(i, (a_new - a_old) * y);
          alpha[i] = a_new;
        }
      }
    }
    ++epoch;
    const double primal = primal_value();
    const double best = report.primal_trace.empty()
                            ? primal
                            : std::min(primal, report.primal_trace.back());
    report.primal_trace.push_back(best);
    report.dual_trace.push_back(dual_value());
    if (max_violation <= cfg.tol) {
      converged = true;
      break;
    }
  }

  report.converged = converged;
  report.epochs = epoch;
  report.final_violation = max_violation;

  TrainResult result;
  result.model.weights.assign(w.begin(), w.begin() + vocab_size);
  result.model.bias = cfg.fit_bias ? w[dim - 1] : 0.0;
  result.model.vocab_fingerprint = vocab.fingerprint();
  result.model.norm_config = norm_config;
  result.model.ngram_config = vocab.config();
  result.model.train_config = cfg;
  result.model.train_manifest_hash =
      manifest_hash(vocab, cfg, norm_config, n, n_positive);
  result.report = std::move(report);
  return result;
}

double objective(const LinearModel& model,
                 const std::vector<featurizer::FeatureSet>& features,
                 const std::vector<int>& labels, const TrainConfig& cfg) {
  if (features.size() != labels.size()) {
    throw InvalidConfig("features and labels must have equal length");
  }
  double obj = model.bias * model.bias;
  for (double v : model.weights) obj += v * v;
  obj *= 0.5;
  for (std::size_t i = 0; i < features.size(); ++i) {
    obj += cfg.C * loss_value(cfg.loss, labels[i] * margin(model, features[i]));
  }
  return obj;
}

double margin(const LinearModel& model, const featurizer::FeatureSet& fs) {
  double s = model.bias;
  for (std::uint32_t id : fs.present_ids) {
    if (id >= model.weights.size()) {
      throw DimensionMismatch("feature id " + std::to_string(id) +
                              " out of range for model of size " +
                              std::to_string(model.weights.size()));
    }
    s += model.weights[id];
  }
  return s;
}

std::string save_model(const LinearModel& model) {
  util::ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kFormatVersion);

  w.u8(model.norm_config.lowercase ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(model.norm_config.unicode_form));
  w.u8(model.norm_config.collapse_whitespace ? 1 : 0);
  w.u32(model.norm_config.max_bytes);

  w.u32(model.ngram_config.n_min);
  w.u32(model.ngram_config.n_max);
  w.u32(model.ngram_config.min_df);
  w.u32(model.ngram_config.max_features);
  w.u8(model.ngram_config.binary ? 1 : 0);

  w.f64(model.train_config.C);
  w.u8(static_cast<std::uint8_t>(model.train_config.loss));
  w.f64(model.train_config.tol);
  w.u32(model.train_config.max_iter);
  w.u64(model.train_config.seed);
  w.u8(model.train_config.fit_bias ? 1 : 0);

  w.str(model.vocab_fingerprint);
  w.str(model.train_manifest_hash);
  w.f64(model.bias);
  w.u32(static_cast<std::uint32_t>(model.weights.size()));
  for (std::uint32_t id = 0; id < model.weights.size(); ++id) {
    w.u32(id);
    w.f64(model.weights[id]);
  }
  return w.take();
}

LinearModel load_model(std::string_view bytes) {
  try {
    util::ByteReader r(bytes);
    if (r.bytes(4) != std::string_view(kMagic, 4)) {
      throw CorruptModel("bad model magic");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
      throw UnsupportedVersion("model format version " + std::to_string(version));
    }
    LinearModel m;
    m.norm_config.lowercase = r.u8() != 0;
    m.norm_config.unicode_form = static_cast<textnorm::UnicodeForm>(r.u8());
    m.norm_config.collapse_whitespace = r.u8() != 0;
    m.norm_config.max_bytes = r.u32();

    m.ngram_config.n_min = r.u32();
    m.ngram_config.n_max = r.u32();
    m.ngram_config.min_df = r.u32();
    m.ngram_config.max_features = r.u32();
    m.ngram_config.binary = r.u8() != 0;

    m.train_config.C = r.f64();
    m.train_config.loss = static_cast<Loss>(r.u8());
    m.train_config.tol = r.f64();
    m.train_config.max_iter = r.u32();
    m.train_config.seed = r.u64();
    m.train_config.fit_bias = r.u8() != 0;

    m.vocab_fingerprint = r.str();
    m.train_manifest_hash = r.str();
    m.bias = r.f64();
    const std::uint32_t count = r.u32();
    m.weights.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint32_t id = r.u32();
      if (id != i) {
        throw CorruptModel("weight ids must be dense and in order");
      }
      m.weights[i] = r.f64();
    }
    if (r.remaining() != 0) {
      throw CorruptModel("trailing bytes after model");
    }
    m.ngram_config.validate();
    m.train_config.validate();
    return m;
  } catch (const std::out_of_range&) {
    throw CorruptModel("model stream truncated");
  } catch (const InvalidConfig& e) {
    throw CorruptModel(std::string("invalid model contents: ") + e.what());
  }
}

}  // namespace mirrorgate::trainer
