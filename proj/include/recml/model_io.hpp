#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "recml/decision_tree.hpp"
#include "recml/encoding.hpp"
#include "recml/logistic_regression.hpp"
#include "recml/naive_bayes.hpp"
#include "recml/pca.hpp"
#include "recml/random_forest.hpp"

namespace recml {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { rf, dt, gnb, lr };

inline std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::rf: return "rf";
        case ModelKind::dt: return "dt";
        case ModelKind::gnb: return "gnb";
        case ModelKind::lr: return "lr";
    }
    return "?";
}

inline ModelKind model_kind_from_string(std::string_view text) {
    if (text == "rf") return ModelKind::rf;
    if (text == "dt") return ModelKind::dt;
    if (text == "gnb") return ModelKind::gnb;
    if (text == "lr") return ModelKind::lr;
    throw BadConfig("unknown model kind: '" + std::string(text) + "'");
}

using AnyModel = std::variant<GnbModel, LrModel, DtModel, RfModel>;

inline ModelKind model_kind_of(const AnyModel& model) {
    if (std::holds_alternative<RfModel>(model)) return ModelKind::rf;
    if (std::holds_alternative<DtModel>(model)) return ModelKind::dt;
    if (std::holds_alternative<GnbModel>(model)) return ModelKind::gnb;
    return ModelKind::lr;
}

namespace detail {

inline ordered_json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const ordered_json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw ParseError("matrix size mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = data[i * m.cols() + k];
    return m;
}

inline ordered_json kinds_to_json(const std::vector<FeatureKind>& kinds) {
    ordered_json out = ordered_json::array();
    for (FeatureKind k : kinds)
        out.push_back(k == FeatureKind::categorical ? "categorical" : "numeric");
    return out;
}

inline std::vector<FeatureKind> kinds_from_json(const ordered_json& j) {
    std::vector<FeatureKind> kinds;
    for (const auto& item : j)
        kinds.push_back(item.get<std::string>() == "categorical" ? FeatureKind::categorical
                                                                 : FeatureKind::numeric);
    return kinds;
}

}  // namespace detail

inline ordered_json encoder_to_json(const LabelEncoder& enc) {
    return {{"categories", enc.categories()}};
}

inline LabelEncoder encoder_from_json(const ordered_json& j) {
    const auto cats = j.at("categories").get<std::vector<std::string>>();
    if (cats.empty()) throw ParseError("encoder with no categories");
    return LabelEncoder::fit(cats);
}

inline ordered_json schema_to_json(const Schema& schema) {
    ordered_json cols = ordered_json::array();
    for (const auto& col : schema.columns)
        cols.push_back({{"name", col.name}, {"kind", std::string(to_string(col.kind))}});
    return {{"columns", cols}, {"target", schema.target_column}};
}

inline Schema schema_from_json(const ordered_json& j) {
    Schema schema;
    for (const auto& col : j.at("columns"))
        schema.columns.push_back(
            {col.at("name").get<std::string>(),
             column_kind_from_string(col.at("kind").get<std::string>())});
    schema.target_column = j.at("target").get<std::string>();
    schema.validate();
    return schema;
}

inline ordered_json codec_to_json(const DatasetCodec& codec) {
    ordered_json encoders = ordered_json::object();
    for (const auto& [name, enc] : codec.feature_encoders)
        encoders[name] = encoder_to_json(enc);
    return {{"schema", schema_to_json(codec.schema)},
            {"feature_names", codec.feature_names},
            {"feature_kinds", detail::kinds_to_json(codec.feature_kinds)},
            {"feature_encoders", encoders},
            {"target_encoder", encoder_to_json(codec.target_encoder)}};
}

inline DatasetCodec codec_from_json(const ordered_json& j) {
    DatasetCodec codec;
    codec.schema = schema_from_json(j.at("schema"));
    codec.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    codec.feature_kinds = detail::kinds_from_json(j.at("feature_kinds"));
    for (const auto& [name, enc] : j.at("feature_encoders").items())
        codec.feature_encoders[name] = encoder_from_json(enc);
    codec.target_encoder = encoder_from_json(j.at("target_encoder"));
    return codec;
}

inline ordered_json pca_to_json(const PcaModel& model) {
    // Components stored column-major, one column per principal component.
    std::vector<double> components;
    components.reserve(model.d() * model.k());
    for (std::size_t j = 0; j < model.k(); ++j)
        for (std::size_t i = 0; i < model.d(); ++i)
            components.push_back(model.components(i, j));
    return {{"d", model.d()},
            {"k", model.k()},
            {"mean", model.mean},
            {"scale", model.scale},
            {"components", components},
            {"eigenvalues", model.eigenvalues},
            {"total_variance", model.total_variance}};
}

inline PcaModel pca_from_json(const ordered_json& j) {
    PcaModel model;
    const auto d = j.at("d").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    model.mean = j.at("mean").get<std::vector<double>>();
    model.scale = j.at("scale").get<std::vector<double>>();
    const auto components = j.at("components").get<std::vector<double>>();
    if (components.size() != d * k) throw ParseError("PCA component size mismatch");
    model.components = Matrix(d, k);
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t row = 0; row < d; ++row)
            model.components(row, col) = components[col * d + row];
    model.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    model.total_variance = j.at("total_variance").get<double>();
    return model;
}

namespace detail {

inline ordered_json gnb_params_to_json(const GnbModel& m) {
    return {{"priors", m.priors},
            {"means", matrix_to_json(m.means)},
            {"variances", matrix_to_json(m.variances)},
            {"variance_floor", m.variance_floor},
            {"n_classes", m.n_classes},
            {"n_features", m.n_features}};
}

inline GnbModel gnb_params_from_json(const ordered_json& j) {
    GnbModel m;
    m.priors = j.at("priors").get<std::vector<double>>();
    m.means = matrix_from_json(j.at("means"));
    m.variances = matrix_from_json(j.at("variances"));
    m.variance_floor = j.at("variance_floor").get<double>();
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<int>();
    return m;
}

inline ordered_json lr_params_to_json(const LrModel& m) {
    return {{"weights", matrix_to_json(m.weights)},
            {"biases", m.biases},
            {"learning_rate", m.hp.learning_rate},
            {"max_iterations", m.hp.max_iterations},
            {"tolerance", m.hp.tolerance},
            {"n_classes", m.n_classes},
            {"n_features", m.n_features}};
}

inline LrModel lr_params_from_json(const ordered_json& j) {
    LrModel m;
    m.weights = matrix_from_json(j.at("weights"));
    m.biases = j.at("biases").get<std::vector<double>>();
    m.hp.learning_rate = j.at("learning_rate").get<double>();
    m.hp.max_iterations = j.at("max_iterations").get<int>();
    m.hp.tolerance = j.at("tolerance").get<double>();
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<int>();
    return m;
}

inline ordered_json dt_params_to_json(const DtModel& m) {
    ordered_json nodes = ordered_json::array();
    for (const DtNode& node : m.nodes) {
        ordered_json n = {{"leaf", node.leaf}, {"label", node.label},
                          {"counts", node.counts}};
        if (!node.leaf) {
            n["feature"] = node.feature;
            n["categorical"] = node.categorical;
            if (node.categorical)
                n["categories"] = node.categories;
            else
                n["threshold"] = node.threshold;
            n["children"] = node.children;
        }
        nodes.push_back(std::move(n));
    }
    return {{"max_depth", m.hp.max_depth},
            {"min_samples", m.hp.min_samples},
            {"n_classes", m.n_classes},
            {"n_features", m.n_features},
            {"feature_kinds", kinds_to_json(m.feature_kinds)},
            {"nodes", nodes}};
}

inline DtModel dt_params_from_json(const ordered_json& j) {
    DtModel m;
    m.hp.max_depth = j.at("max_depth").get<int>();
    m.hp.min_samples = j.at("min_samples").get<int>();
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<int>();
    m.feature_kinds = kinds_from_json(j.at("feature_kinds"));
    for (const auto& n : j.at("nodes")) {
        DtNode node;
        node.leaf = n.at("leaf").get<bool>();
        node.label = n.at("label").get<int>();
        node.counts = n.at("counts").get<std::vector<int>>();
        if (!node.leaf) {
            node.feature = n.at("feature").get<int>();
            node.categorical = n.at("categorical").get<bool>();
            if (node.categorical)
                node.categories = n.at("categories").get<std::vector<double>>();
            else
                node.threshold = n.at("threshold").get<double>();
            node.children = n.at("children").get<std::vector<int>>();
        }
        m.nodes.push_back(std::move(node));
    }
    return m;
}

inline ordered_json rf_params_to_json(const RfModel& m) {
    ordered_json trees = ordered_json::array();
    for (const DtModel& tree : m.trees) trees.push_back(dt_params_to_json(tree));
    return {{"n_trees", m.hp.n_trees},
            {"features_per_split", m.hp.features_per_split},
            {"bootstrap", m.hp.bootstrap},
            {"seed", m.hp.seed},
            {"max_depth", m.hp.tree.max_depth},
            {"min_samples", m.hp.tree.min_samples},
            {"n_classes", m.n_classes},
            {"n_features", m.n_features},
            {"trees", trees}};
}

inline RfModel rf_params_from_json(const ordered_json& j) {
    RfModel m;
    m.hp.n_trees = j.at("n_trees").get<int>();
    m.hp.features_per_split = j.at("features_per_split").get<int>();
    m.hp.bootstrap = j.at("bootstrap").get<bool>();
    m.hp.seed = j.at("seed").get<std::uint64_t>();
    m.hp.tree.max_depth = j.at("max_depth").get<int>();
    m.hp.tree.min_samples = j.at("min_samples").get<int>();
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<int>();
    for (const auto& tree : j.at("trees")) m.trees.push_back(dt_params_from_json(tree));
    return m;
}

}  // namespace detail

/// Self-describing model document: kind tag, format version, parameters.
inline ordered_json model_to_json(const AnyModel& model) {
    ordered_json params;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GnbModel>)
                params = detail::gnb_params_to_json(m);
            else if constexpr (std::is_same_v<T, LrModel>)
                params = detail::lr_params_to_json(m);
            else if constexpr (std::is_same_v<T, DtModel>)
                params = detail::dt_params_to_json(m);
            else
                params = detail::rf_params_to_json(m);
        },
        model);
    return {{"kind", std::string(to_string(model_kind_of(model)))},
            {"version", kModelFormatVersion},
            {"params", params}};
}

inline AnyModel model_from_json(const ordered_json& j) {
    const auto version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
        throw Error("unsupported model format version " + std::to_string(version));
    ModelKind kind;
    try {
        kind = model_kind_from_string(j.at("kind").get<std::string>());
    } catch (const BadConfig& e) {
        throw ParseError(std::string("bad model file: ") + e.what());
    }
    const ordered_json& params = j.at("params");
    switch (kind) {
        case ModelKind::gnb: return detail::gnb_params_from_json(params);
        case ModelKind::lr: return detail::lr_params_from_json(params);
        case ModelKind::dt: return detail::dt_params_from_json(params);
        case ModelKind::rf: return detail::rf_params_from_json(params);
    }
    throw Error("unreachable");
}

/// A trained model bundled with the encoders it was fitted through, so
/// prediction can validate and decode new tables.
struct ModelFile {
    AnyModel model;
    DatasetCodec codec;
    std::optional<PcaModel> pca;
};

inline std::string serialize_model_file(const ModelFile& file) {
    ordered_json doc = model_to_json(file.model);
    doc["codec"] = codec_to_json(file.codec);
    doc["pca"] = file.pca ? pca_to_json(*file.pca) : ordered_json(nullptr);
    return doc.dump(2) + "\n";
}

inline ModelFile parse_model_file(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad model file: ") + e.what());
    }
    try {
        ModelFile file;
        file.model = model_from_json(doc);
        file.codec = codec_from_json(doc.at("codec"));
        if (!doc.at("pca").is_null()) file.pca = pca_from_json(doc.at("pca"));
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad model file: ") + e.what());
    }
}

}  // namespace recml
