// Exercises the build-time embedding path: a model trained and compiled by
// gen_embedded_fixture is linked into this binary as a generated static
// table, then checked for exact parity against the runtime-loaded artifact,
// the source model file, and a fresh in-process compilation.
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mirrorgate/artifact.hpp"
#include "mirrorgate/errors.hpp"
#include "mirrorgate/featurizer.hpp"
#include "mirrorgate/textnorm.hpp"
#include "mirrorgate/trainer.hpp"
#include "mirrorgate/util/rng.hpp"
#include "mirrorgate/util/sha256.hpp"
#include "random_text.hpp"

namespace mirrorgate::embedded {
extern const ::mirrorgate::artifact::EmbeddedTable kScoringTable;
}

using namespace mirrorgate;

namespace {

std::string read_file(const std::string& name) {
  const std::string path = std::string(MIRRORGATE_EMBEDDED_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing fixture file: " << path);
  std::ostringstream out;
  out << in.rdbuf();
  return std::move(out).str();
}

}  // namespace

TEST_CASE("embedded table parity with artifact file, model file, and trainer") {
  const auto embedded = artifact::from_embedded(embedded::kScoringTable);

  const std::string artifact_bytes = read_file("fixture.mirc");
  const auto loaded = artifact::load_artifact(artifact_bytes);

  const std::string model_bytes = read_file("fixture_model.mirm");
  const auto model = trainer::load_model(model_bytes);
  const auto vocab = featurizer::Vocabulary::deserialize(read_file("fixture_vocab.mirv"));

  // Provenance chain: both delivery forms name the same model and vocabulary.
  CHECK(embedded.model_hash() == util::sha256_hex(model_bytes));
  CHECK(loaded.model_hash() == embedded.model_hash());
  CHECK(embedded.vocab_fingerprint() == vocab.fingerprint());
  CHECK(loaded.vocab_fingerprint() == vocab.fingerprint());
  CHECK(model.vocab_fingerprint == vocab.fingerprint());

  CHECK(embedded.bias() == model.bias);
  CHECK(loaded.bias() == model.bias);
  CHECK(embedded.size() == vocab.size());
  CHECK(embedded.norm_config() == model.norm_config);
  CHECK(embedded.ngram_config() == model.ngram_config);

  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    const auto we = embedded.weight_of(vocab.terms()[id]);
    const auto wl = loaded.weight_of(vocab.terms()[id]);
    REQUIRE(we.has_value());
    REQUIRE(wl.has_value());
    CHECK(*we == model.weights[id]);  // hex-float source: exact round trip
    CHECK(*wl == model.weights[id]);
  }

  util::Rng rng(2025);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = mgtest::random_text(rng);
    const auto ve = artifact::score(embedded, text);
    const auto vl = artifact::score(loaded, text);
    CHECK(ve.margin == vl.margin);
    CHECK(ve.matched_feature_count == vl.matched_feature_count);

    const std::string normalized = textnorm::normalize(text, embedded.norm_config());
    const double expected =
        trainer::margin(model, featurizer::vectorize(normalized, vocab));
    CHECK(ve.margin == expected);

    for (double t : {-1.0, 0.0, 2.0})
      CHECK(artifact::classify(embedded, text, t) ==
            artifact::classify(loaded, text, t));
  }
}

TEST_CASE("build pipeline outputs match a fresh in-process compilation") {
  const std::string model_bytes = read_file("fixture_model.mirm");
  const auto vocab = featurizer::Vocabulary::deserialize(read_file("fixture_vocab.mirv"));
  const auto compiled = artifact::compile_model(model_bytes, vocab);

  CHECK(compiled.artifact_bytes == read_file("fixture.mirc"));
  CHECK(compiled.generated_source == read_file("embedded_table.cpp"));
}
