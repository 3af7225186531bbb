#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "recml/csv.hpp"
#include "recml/encoding.hpp"
#include "recml/io.hpp"
#include "recml/metrics.hpp"
#include "recml/model_io.hpp"
#include "recml/numfmt.hpp"
#include "recml/pca.hpp"
#include "recml/split.hpp"
#include "recml/synthetic.hpp"

namespace recml {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Canonical model order used for tables and figure series.
inline constexpr ModelKind kAllModels[] = {ModelKind::rf, ModelKind::dt, ModelKind::gnb,
                                           ModelKind::lr};

struct PcaSetting {
    enum class Mode { off, fixed_k, variance };
    Mode mode = Mode::off;
    std::size_t k = 0;
    double variance_target = 0.95;
    bool standardize = true;

    bool enabled() const { return mode != Mode::off; }
    bool operator==(const PcaSetting&) const = default;
};

struct ModelHyperparams {
    DtHyperparams dt;
    RfHyperparams rf;
    LrHyperparams lr;
    bool operator==(const ModelHyperparams&) const = default;
};

struct ExperimentConfig {
    std::variant<std::string, SynthConfig> source;  // CSV path or generator config
    Schema schema = Schema::default_survey();
    std::vector<ModelKind> models{ModelKind::rf, ModelKind::dt, ModelKind::gnb,
                                  ModelKind::lr};
    int trials = 10;
    std::uint64_t base_seed = 0;
    double train_ratio = 0.75;
    PcaSetting pca;
    ModelHyperparams hp;
    bool fit_encoders_on_train = false;  // default: encoders fitted on the full table

    void validate() const {
        if (trials < 1) throw BadConfig("trials must be >= 1");
        if (models.empty()) throw BadConfig("no models selected");
        if (!(train_ratio > 0.0 && train_ratio < 1.0))
            throw BadConfig("train ratio must be in (0, 1)");
    }
};

struct TrialRow {
    std::uint64_t seed = 0;
    MetricReport metrics;
};

struct ModelTable {
    ModelKind kind = ModelKind::rf;
    std::vector<TrialRow> trials;
    MetricReport mean;
};

struct ExperimentReport {
    std::vector<ModelTable> tables;  // canonical model order
    std::string dataset_fingerprint;
    std::string artifact_version = kArtifactVersion;
    ExperimentConfig config;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

inline std::string fingerprint(const RawTable& table) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(write_csv(table))));
    return std::string("fnv1a64:") + buf;
}

[[noreturn]] inline void rethrow_with_stage(const char* stage) {
    try {
        throw;
    } catch (const Error& e) {
        throw Error(std::string(stage) + ": " + e.what());
    }
}

struct TrialData {
    Matrix x_train, x_test;
    std::vector<int> y_train, y_test;
    std::vector<FeatureKind> kinds;
};

inline TrialData materialize_split(const EncodedDataset& ds, const TrainTestSplit& split) {
    TrialData data;
    data.x_train = ds.features.select_rows(split.train_indices);
    data.x_test = ds.features.select_rows(split.test_indices);
    data.y_train = select_labels(ds.target, split.train_indices);
    data.y_test = select_labels(ds.target, split.test_indices);
    data.kinds = ds.codec.feature_kinds;
    return data;
}

inline void apply_pca(TrialData& data, const PcaSetting& pca) {
    if (!pca.enabled()) return;
    try {
        const PcaModel model =
            pca.mode == PcaSetting::Mode::fixed_k
                ? fit_pca(data.x_train, pca.k, pca.standardize)
                : fit_pca_variance(data.x_train, pca.variance_target, pca.standardize);
        data.x_train = pca_transform(model, data.x_train);
        data.x_test = pca_transform(model, data.x_test);
        data.kinds.assign(data.x_train.cols(), FeatureKind::numeric);
    } catch (const Error&) {
        rethrow_with_stage("pca");
    }
}

inline MetricReport fit_and_score(const TrialData& data, ModelKind kind,
                                  std::uint64_t seed, const ExperimentConfig& cfg) {
    std::vector<int> predicted;
    try {
        switch (kind) {
            case ModelKind::rf: {
                RfHyperparams hp = cfg.hp.rf;
                hp.seed = seed;  // fresh bootstrap/feature draws every trial
                const RfModel model = train_rf(data.x_train, data.y_train, hp, data.kinds);
                predicted = predict_rf(model, data.x_test);
                break;
            }
            case ModelKind::dt: {
                const DtModel model =
                    train_dt(data.x_train, data.y_train, cfg.hp.dt, data.kinds);
                predicted = predict_dt(model, data.x_test);
                break;
            }
            case ModelKind::gnb: {
                const GnbModel model = train_gnb(data.x_train, data.y_train);
                predicted = predict_gnb(model, data.x_test);
                break;
            }
            case ModelKind::lr: {
                const LrModel model = train_lr(data.x_train, data.y_train, cfg.hp.lr);
                predicted = predict_lr(model, data.x_test);
                break;
            }
        }
    } catch (const Error&) {
        rethrow_with_stage(std::string("fit ").append(to_string(kind)).c_str());
    }
    try {
        return evaluate(data.y_test, predicted);
    } catch (const Error&) {
        rethrow_with_stage("evaluate");
    }
}

}  // namespace detail

/// One trial: split -> optional PCA (fitted on the train side only) ->
/// fit -> evaluate on the held-out side. Deterministic in (ds, seed, cfg).
inline MetricReport run_trial(const EncodedDataset& ds, ModelKind kind,
                              std::uint64_t seed, const ExperimentConfig& cfg) {
    cfg.validate();
    TrainTestSplit split;
    try {
        split = split_dataset(ds, cfg.train_ratio, seed);
    } catch (const Error&) {
        detail::rethrow_with_stage("split");
    }
    detail::TrialData data = detail::materialize_split(ds, split);
    detail::apply_pca(data, cfg.pca);
    return detail::fit_and_score(data, kind, seed, cfg);
}

namespace detail {

inline RawTable subtable(const RawTable& table, std::span<const std::size_t> indices) {
    RawTable out;
    out.header = table.header;
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) out.rows.push_back(table.rows[i]);
    return out;
}

inline std::vector<ModelKind> canonical_models(const std::vector<ModelKind>& selected) {
    std::vector<ModelKind> out;
    for (ModelKind kind : kAllModels)
        for (ModelKind chosen : selected)
            if (chosen == kind) {
                out.push_back(kind);
                break;
            }
    return out;
}

inline MetricReport mean_report(const std::vector<TrialRow>& rows) {
    MetricReport mean;
    mean.n = rows.front().metrics.n;
    double r2_sum = 0.0;
    bool r2_defined = true;
    for (const TrialRow& row : rows) {
        mean.accuracy += row.metrics.accuracy;
        mean.mse += row.metrics.mse;
        mean.rmse += row.metrics.rmse;
        mean.mae += row.metrics.mae;
        if (row.metrics.r_square)
            r2_sum += *row.metrics.r_square;
        else
            r2_defined = false;
    }
    const auto t = static_cast<double>(rows.size());
    mean.accuracy /= t;
    mean.mse /= t;
    mean.rmse /= t;
    mean.mae /= t;
    if (r2_defined) mean.r_square = r2_sum / t;
    return mean;
}

}  // namespace detail

/// The full protocol: T trials with seeds base_seed + i, every selected model
/// scored on the identical per-trial split, a mean row per model appended.
/// Any stage failure aborts the whole run; partial reports are never built.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    RawTable table;
    try {
        if (std::holds_alternative<std::string>(cfg.source))
            table = load_table(std::get<std::string>(cfg.source));
        else
            table = generate_synthetic(std::get<SynthConfig>(cfg.source));
    } catch (const Error&) {
        detail::rethrow_with_stage("ingest");
    }

    ExperimentReport report;
    report.config = cfg;
    report.dataset_fingerprint = detail::fingerprint(table);

    EncodedDataset full;
    if (!cfg.fit_encoders_on_train) {
        try {
            full = encode_dataset(table, cfg.schema);
        } catch (const Error&) {
            detail::rethrow_with_stage("encode");
        }
    }

    const std::vector<ModelKind> models = detail::canonical_models(cfg.models);
    std::vector<ModelTable> tables;
    for (ModelKind kind : models) tables.push_back({kind, {}, {}});

    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
        detail::TrialData data;
        if (cfg.fit_encoders_on_train) {
            // Encoders fitted on the training rows only; the test side is
            // encoded through them and may raise UnseenCategory.
            TrainTestSplit split;
            try {
                split = split_indices(table.n_rows(), cfg.train_ratio, seed);
            } catch (const Error&) {
                detail::rethrow_with_stage("split");
            }
            try {
                const RawTable train = detail::subtable(table, split.train_indices);
                const RawTable test = detail::subtable(table, split.test_indices);
                EncodedDataset ds = encode_dataset(train, cfg.schema);
                data.x_train = std::move(ds.features);
                data.y_train = std::move(ds.target);
                data.x_test = ds.codec.encode_features(test);
                data.y_test = ds.codec.encode_target(test);
                data.kinds = ds.codec.feature_kinds;
            } catch (const Error&) {
                detail::rethrow_with_stage("encode");
            }
        } else {
            TrainTestSplit split;
            try {
                split = split_dataset(full, cfg.train_ratio, seed);
            } catch (const Error&) {
                detail::rethrow_with_stage("split");
            }
            data = detail::materialize_split(full, split);
        }
        detail::apply_pca(data, cfg.pca);
        for (std::size_t m = 0; m < models.size(); ++m)
            tables[m].trials.push_back(
                {seed, detail::fit_and_score(data, models[m], seed, cfg)});
    }

    for (ModelTable& table_entry : tables)
        table_entry.mean = detail::mean_report(table_entry.trials);
    report.tables = std::move(tables);
    return report;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string model_display_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::rf: return "RF";
        case ModelKind::dt: return "DT";
        case ModelKind::gnb: return "GNB";
        case ModelKind::lr: return "LR";
    }
    return "?";
}

inline ordered_json metric_report_to_json(const MetricReport& r) {
    return {{"accuracy", r.accuracy},
            {"r_square", r.r_square ? ordered_json(*r.r_square) : ordered_json(nullptr)},
            {"mse", r.mse},
            {"rmse", r.rmse},
            {"mae", r.mae},
            {"n", r.n}};
}

inline ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json source;
    if (std::holds_alternative<std::string>(cfg.source)) {
        source = {{"type", "file"}, {"path", std::get<std::string>(cfg.source)}};
    } else {
        const SynthConfig& synth = std::get<SynthConfig>(cfg.source);
        source = {{"type", "synthetic"},
                  {"rows", synth.n_rows},
                  {"products", synth.n_products},
                  {"noise", synth.noise},
                  {"seed", synth.seed}};
    }
    ordered_json models = ordered_json::array();
    for (ModelKind kind : canonical_models(cfg.models))
        models.push_back(std::string(to_string(kind)));
    ordered_json pca;
    switch (cfg.pca.mode) {
        case PcaSetting::Mode::off: pca = {{"mode", "off"}}; break;
        case PcaSetting::Mode::fixed_k:
            pca = {{"mode", "k"}, {"k", cfg.pca.k}, {"standardize", cfg.pca.standardize}};
            break;
        case PcaSetting::Mode::variance:
            pca = {{"mode", "variance"},
                   {"target", cfg.pca.variance_target},
                   {"standardize", cfg.pca.standardize}};
            break;
    }
    return {{"source", source},
            {"target_column", cfg.schema.target_column},
            {"models", models},
            {"trials", cfg.trials},
            {"base_seed", cfg.base_seed},
            {"train_ratio", cfg.train_ratio},
            {"pca", pca},
            {"fit_encoders_on_train", cfg.fit_encoders_on_train},
            {"hyperparams",
             {{"dt",
               {{"max_depth", cfg.hp.dt.max_depth},
                {"min_samples", cfg.hp.dt.min_samples}}},
              {"rf",
               {{"n_trees", cfg.hp.rf.n_trees},
                {"features_per_split", cfg.hp.rf.features_per_split},
                {"bootstrap", cfg.hp.rf.bootstrap},
                {"max_depth", cfg.hp.rf.tree.max_depth},
                {"min_samples", cfg.hp.rf.tree.min_samples}}},
              {"lr",
               {{"learning_rate", cfg.hp.lr.learning_rate},
                {"max_iterations", cfg.hp.lr.max_iterations},
                {"tolerance", cfg.hp.lr.tolerance}}}}}};
}

}  // namespace detail

/// Full report document; keys render in fixed order and numbers use shortest
/// round-trip form, so identical configs give byte-identical files.
inline std::string report_to_json(const ExperimentReport& report) {
    ordered_json models = ordered_json::object();
    for (const ModelTable& table : report.tables) {
        ordered_json trials = ordered_json::array();
        for (const TrialRow& row : table.trials) {
            ordered_json entry = detail::metric_report_to_json(row.metrics);
            ordered_json with_seed = {{"seed", row.seed}};
            with_seed.update(entry);
            trials.push_back(std::move(with_seed));
        }
        models[std::string(to_string(table.kind))] = {
            {"trials", trials}, {"mean", detail::metric_report_to_json(table.mean)}};
    }
    ordered_json doc = {{"artifact_version", report.artifact_version},
                        {"dataset_fingerprint", report.dataset_fingerprint},
                        {"config", detail::config_to_json(report.config)},
                        {"models", models}};
    return doc.dump(2) + "\n";
}

/// One table per model in the published layout: a row per trial, a final
/// "average" row, columns Accuracy / R Square / MSE / MAE.
inline std::string model_table_csv(const ModelTable& table) {
    std::string out = "Model,Accuracy,R Square,MSE,MAE\n";
    const std::string name = detail::model_display_name(table.kind);
    for (const TrialRow& row : table.trials)
        out += name + "," + row.metrics.table_row() + "\n";
    out += "average," + table.mean.table_row() + "\n";
    return out;
}

/// Figure series: one value per model in canonical order. `metric` is one of
/// accuracy | r_square | mse | mae; accuracy is emitted in percent to match
/// the table rendering.
inline std::string figure_csv(const ExperimentReport& report, const std::string& metric) {
    std::string out = "model," + metric + "\n";
    for (const ModelTable& table : report.tables) {
        out += detail::model_display_name(table.kind);
        out += ',';
        if (metric == "accuracy") {
            out += shortest_repr(table.mean.accuracy * 100.0);
        } else if (metric == "r_square") {
            if (table.mean.r_square) out += shortest_repr(*table.mean.r_square);
        } else if (metric == "mse") {
            out += shortest_repr(table.mean.mse);
        } else if (metric == "mae") {
            out += shortest_repr(table.mean.mae);
        } else {
            throw BadConfig("unknown figure metric: " + metric);
        }
        out += '\n';
    }
    return out;
}

}  // namespace recml
