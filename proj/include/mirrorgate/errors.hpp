#pragma once

#include <stdexcept>
#include <string>

namespace mirrorgate {

/// Base for all domain errors. `code` is a stable machine-readable
/// identifier: the CLI maps it into JSON error output and exit codes, and
/// tests assert on it rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define MIRRORGATE_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

// Configuration and input contract violations.
MIRRORGATE_DEFINE_ERROR(InvalidConfig);
MIRRORGATE_DEFINE_ERROR(InvalidSample);
MIRRORGATE_DEFINE_ERROR(SpecError);

// Featurizer.
MIRRORGATE_DEFINE_ERROR(EmptyVocabulary);
MIRRORGATE_DEFINE_ERROR(CorruptVocabulary);

// Trainer.
MIRRORGATE_DEFINE_ERROR(DegenerateLabels);
MIRRORGATE_DEFINE_ERROR(DimensionMismatch);

// Artifact.
MIRRORGATE_DEFINE_ERROR(CorruptModel);
MIRRORGATE_DEFINE_ERROR(CorruptArtifact);
MIRRORGATE_DEFINE_ERROR(UnsupportedVersion);

// Mirror corpus geometry.
MIRRORGATE_DEFINE_ERROR(StratumTooSmall);
MIRRORGATE_DEFINE_ERROR(LeakageError);
MIRRORGATE_DEFINE_ERROR(PoolExhausted);

// Regex rule layer.
MIRRORGATE_DEFINE_ERROR(RuleCompileError);

// Eval harness.
MIRRORGATE_DEFINE_ERROR(EmptyHoldout);

#undef MIRRORGATE_DEFINE_ERROR

}  // namespace mirrorgate
