#include <catch2/catch_amalgamated.hpp>

#include "recml/model_io.hpp"
#include "recml/rng.hpp"
#include "recml/synthetic.hpp"

using namespace recml;

namespace {

struct Fixture {
    EncodedDataset ds;
    Fixture() {
        const RawTable t = generate_synthetic({60, 4, 0.1, 9});
        ds = encode_dataset(t, Schema::default_survey());
    }
};

}  // namespace

TEST_CASE("every model kind round-trips through json", "[model_io]") {
    const Fixture f;
    const auto& kinds = f.ds.codec.feature_kinds;

    std::vector<AnyModel> models;
    models.emplace_back(train_gnb(f.ds.features, f.ds.target));
    models.emplace_back(train_lr(f.ds.features, f.ds.target, {.max_iterations = 50}));
    models.emplace_back(train_dt(f.ds.features, f.ds.target, {}, kinds));
    RfHyperparams rf_hp;
    rf_hp.n_trees = 8;
    rf_hp.seed = 4;
    models.emplace_back(train_rf(f.ds.features, f.ds.target, rf_hp, kinds));

    for (const AnyModel& model : models) {
        const ordered_json doc = model_to_json(model);
        REQUIRE(doc.at("version") == kModelFormatVersion);
        const AnyModel restored = model_from_json(ordered_json::parse(doc.dump()));
        REQUIRE(model == restored);
    }
}

TEST_CASE("unknown versions are rejected", "[model_io]") {
    const Fixture f;
    ordered_json doc = model_to_json(train_gnb(f.ds.features, f.ds.target));
    doc["version"] = kModelFormatVersion + 1;
    REQUIRE_THROWS_AS(model_from_json(doc), Error);
}

TEST_CASE("codec and pca round-trip", "[model_io]") {
    const Fixture f;
    REQUIRE(codec_from_json(codec_to_json(f.ds.codec)) == f.ds.codec);

    const PcaModel pca = fit_pca(f.ds.features, 2, true);
    REQUIRE(pca_from_json(pca_to_json(pca)) == pca);
}

TEST_CASE("model files carry codec and optional pca", "[model_io]") {
    const Fixture f;
    ModelFile file;
    file.model = train_dt(f.ds.features, f.ds.target, {}, f.ds.codec.feature_kinds);
    file.codec = f.ds.codec;
    file.pca = fit_pca(f.ds.features, 2, true);

    const std::string text = serialize_model_file(file);
    const ModelFile restored = parse_model_file(text);
    REQUIRE(restored.model == file.model);
    REQUIRE(restored.codec == file.codec);
    REQUIRE(restored.pca == file.pca);

    file.pca.reset();
    REQUIRE_FALSE(parse_model_file(serialize_model_file(file)).pca.has_value());
}

TEST_CASE("tampered kind tags are rejected", "[model_io]") {
    const Fixture f;
    ModelFile file;
    file.model = train_gnb(f.ds.features, f.ds.target);
    file.codec = f.ds.codec;
    std::string text = serialize_model_file(file);
    const auto pos = text.find("\"gnb\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "\"zzz\"");
    REQUIRE_THROWS_AS(parse_model_file(text), ParseError);

    REQUIRE_THROWS_AS(parse_model_file("not json at all"), ParseError);
    REQUIRE_THROWS_AS(parse_model_file("{}"), ParseError);
}

TEST_CASE("serialization is deterministic", "[model_io]") {
    const Fixture f;
    const DtModel m = train_dt(f.ds.features, f.ds.target, {}, f.ds.codec.feature_kinds);
    ModelFile file{m, f.ds.codec, std::nullopt};
    REQUIRE(serialize_model_file(file) == serialize_model_file(file));
}
