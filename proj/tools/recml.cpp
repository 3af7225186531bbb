// recml command line: generate synthetic survey data, run the benchmark
// protocol, train a single model, predict with a saved model.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recml/experiment.hpp"
#include "recml/io.hpp"
#include "recml/model_io.hpp"

namespace fs = std::filesystem;
using namespace recml;

namespace {

struct GenerateArgs {
    SynthConfig cfg;
    std::string out_path;
};

struct CommonModelArgs {
    std::string data_path;
    std::string schema_path;
    std::string target;
    std::string pca_spec = "off";
    bool pca_no_scale = false;
    ModelHyperparams hp;
};

struct RunArgs : CommonModelArgs {
    std::string models = "rf,dt,gnb,lr";
    int trials = 10;
    std::uint64_t seed = 0;
    double ratio = 0.75;
    bool fit_encoders_on_train = false;
    std::string out_dir = ".";
};

struct TrainArgs : CommonModelArgs {
    std::string model;
    std::uint64_t seed = 0;
    std::string model_out;
};

struct PredictArgs {
    std::string model_in;
    std::string data_path;
    std::string out_path;
};

PcaSetting parse_pca_spec(const std::string& spec, bool no_scale) {
    PcaSetting pca;
    pca.standardize = !no_scale;
    if (spec == "off") {
        pca.mode = PcaSetting::Mode::off;
    } else if (spec.rfind("k=", 0) == 0) {
        pca.mode = PcaSetting::Mode::fixed_k;
        try {
            pca.k = std::stoul(spec.substr(2));
        } catch (const std::exception&) {
            throw BadConfig("bad --pca value: '" + spec + "'");
        }
    } else if (spec.rfind("var=", 0) == 0) {
        pca.mode = PcaSetting::Mode::variance;
        pca.variance_target = parse_double(spec.substr(4));
    } else {
        throw BadConfig("bad --pca value: '" + spec + "' (expected off, k=<n> or var=<q>)");
    }
    return pca;
}

std::vector<ModelKind> parse_model_list(const std::string& list) {
    std::vector<ModelKind> models;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        const std::string item = list.substr(pos, comma - pos);
        if (!item.empty()) models.push_back(model_kind_from_string(item));
        pos = comma + 1;
        if (comma == list.size()) break;
    }
    if (models.empty()) throw BadConfig("empty --models list");
    return models;
}

Schema resolve_schema(const CommonModelArgs& args) {
    Schema schema = args.schema_path.empty() ? Schema::default_survey()
                                             : parse_schema_config(read_file(args.schema_path));
    if (!args.target.empty()) {
        schema.target_column = args.target;
        schema.validate();
    }
    return schema;
}

void add_hyperparam_flags(CLI::App* cmd, ModelHyperparams& hp, bool* rf_no_bootstrap) {
    cmd->add_option("--dt-max-depth", hp.dt.max_depth, "Decision tree depth cap (-1 = unlimited)");
    cmd->add_option("--dt-min-samples", hp.dt.min_samples, "Minimum rows to split a node");
    cmd->add_option("--rf-trees", hp.rf.n_trees, "Number of forest trees");
    cmd->add_option("--rf-features", hp.rf.features_per_split,
                    "Features tried per split (0 = ceil(sqrt(d)))");
    cmd->add_flag("--rf-no-bootstrap", *rf_no_bootstrap, "Train each tree on the full set");
    cmd->add_option("--rf-max-depth", hp.rf.tree.max_depth,
                    "Forest tree depth cap (-1 = unlimited)");
    cmd->add_option("--rf-min-samples", hp.rf.tree.min_samples,
                    "Minimum rows to split a forest tree node");
    cmd->add_option("--lr-rate", hp.lr.learning_rate, "Gradient descent learning rate");
    cmd->add_option("--lr-iterations", hp.lr.max_iterations, "Gradient descent iteration cap");
    cmd->add_option("--lr-tolerance", hp.lr.tolerance, "Loss-decrease stopping tolerance");
}

void add_common_flags(CLI::App* cmd, CommonModelArgs& args) {
    cmd->add_option("--data", args.data_path, "Input CSV file")->required();
    cmd->add_option("--schema", args.schema_path, "Schema config file (default: survey schema)");
    cmd->add_option("--target", args.target, "Override the target column");
    cmd->add_option("--pca", args.pca_spec, "Feature reduction: off, k=<n> or var=<0..1>");
    cmd->add_flag("--pca-no-scale", args.pca_no_scale, "Skip standardization before PCA");
}

int cmd_generate(const GenerateArgs& args) {
    const RawTable table = generate_synthetic(args.cfg);
    save_table(args.out_path, table);
    std::cout << "wrote " << table.n_rows() << " rows to " << args.out_path << "\n";
    return 0;
}

void print_summary(const ExperimentReport& report) {
    std::printf("%-8s %-10s %-12s %-12s %-12s %-12s\n", "model", "accuracy", "r_square",
                "mse", "rmse", "mae");
    for (const ModelTable& table : report.tables) {
        const MetricReport& m = table.mean;
        std::printf("%-8s %-10s %-12s %-12s %-12s %-12s\n",
                    detail::model_display_name(table.kind).c_str(),
                    format_percent(m.accuracy).c_str(),
                    (m.r_square ? shortest_repr(*m.r_square) : std::string("-")).c_str(),
                    shortest_repr(m.mse).c_str(), shortest_repr(m.rmse).c_str(),
                    shortest_repr(m.mae).c_str());
    }
}

int cmd_run(const RunArgs& args) {
    ExperimentConfig cfg;
    cfg.source = args.data_path;
    cfg.schema = resolve_schema(args);
    cfg.models = parse_model_list(args.models);
    cfg.trials = args.trials;
    cfg.base_seed = args.seed;
    cfg.train_ratio = args.ratio;
    cfg.pca = parse_pca_spec(args.pca_spec, args.pca_no_scale);
    cfg.hp = args.hp;
    cfg.fit_encoders_on_train = args.fit_encoders_on_train;
    cfg.validate();

    const ExperimentReport report = run_experiment(cfg);

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    write_file_atomic(out_dir / "report.json", report_to_json(report));
    for (const ModelTable& table : report.tables)
        write_file_atomic(out_dir / ("table_" + std::string(to_string(table.kind)) + ".csv"),
                          model_table_csv(table));
    for (const char* metric : {"accuracy", "r_square", "mse", "mae"})
        write_file_atomic(out_dir / ("fig_" + std::string(metric) + ".csv"),
                          figure_csv(report, metric));

    print_summary(report);
    return 0;
}

int cmd_train(const TrainArgs& args) {
    const ModelKind kind = model_kind_from_string(args.model);
    const Schema schema = resolve_schema(args);
    const PcaSetting pca_setting = parse_pca_spec(args.pca_spec, args.pca_no_scale);

    const RawTable table = load_table(args.data_path);
    EncodedDataset ds = encode_dataset(table, schema);

    ModelFile file;
    file.codec = ds.codec;
    Matrix x = std::move(ds.features);
    std::vector<FeatureKind> kinds = ds.codec.feature_kinds;
    if (pca_setting.enabled()) {
        const PcaModel pca = pca_setting.mode == PcaSetting::Mode::fixed_k
                                 ? fit_pca(x, pca_setting.k, pca_setting.standardize)
                                 : fit_pca_variance(x, pca_setting.variance_target,
                                                    pca_setting.standardize);
        x = pca_transform(pca, x);
        kinds.assign(x.cols(), FeatureKind::numeric);
        file.pca = pca;
    }

    switch (kind) {
        case ModelKind::rf: {
            RfHyperparams hp = args.hp.rf;
            hp.seed = args.seed;
            file.model = train_rf(x, ds.target, hp, kinds);
            break;
        }
        case ModelKind::dt: file.model = train_dt(x, ds.target, args.hp.dt, kinds); break;
        case ModelKind::gnb: file.model = train_gnb(x, ds.target); break;
        case ModelKind::lr: file.model = train_lr(x, ds.target, args.hp.lr); break;
    }

    write_file_atomic(args.model_out, serialize_model_file(file));
    std::cout << "trained " << to_string(kind) << " on " << table.n_rows()
              << " rows, saved to " << args.model_out << "\n";
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    const ModelFile file = parse_model_file(read_file(args.model_in));
    const RawTable table = load_table(args.data_path);

    Matrix x = file.codec.encode_features(table);
    if (file.pca) x = pca_transform(*file.pca, x);

    std::vector<int> labels;
    std::visit([&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, GnbModel>)
            labels = predict_gnb(model, x);
        else if constexpr (std::is_same_v<T, LrModel>)
            labels = predict_lr(model, x);
        else if constexpr (std::is_same_v<T, DtModel>)
            labels = predict_dt(model, x);
        else
            labels = predict_rf(model, x);
    }, file.model);

    std::string out;
    for (int label : labels) {
        out += file.codec.decode_label(label);
        out += '\n';
    }
    write_file_atomic(args.out_path, out);
    std::cout << "wrote " << labels.size() << " predictions to " << args.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"E-commerce product recommendation pipeline"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic survey CSV");
    generate->add_option("--rows", gen.cfg.n_rows, "Number of data rows")->required();
    generate->add_option("--products", gen.cfg.n_products, "Number of distinct products");
    generate->add_option("--noise", gen.cfg.noise, "Label noise probability in [0,1]");
    generate->add_option("--seed", gen.cfg.seed, "Generator seed");
    generate->add_option("--out", gen.out_path, "Output CSV path")->required();

    RunArgs run;
    bool run_rf_no_bootstrap = false;
    CLI::App* run_cmd = app.add_subcommand("run", "Run the trial protocol and write reports");
    add_common_flags(run_cmd, run);
    run_cmd->add_option("--models", run.models, "Comma list from rf,dt,gnb,lr");
    run_cmd->add_option("--trials", run.trials, "Number of trials");
    run_cmd->add_option("--seed", run.seed, "Base seed; trial i uses seed+i");
    run_cmd->add_option("--ratio", run.ratio, "Train fraction in (0,1)");
    run_cmd->add_flag("--fit-encoders-on-train", run.fit_encoders_on_train,
                      "Fit label encoders on the training split only");
    run_cmd->add_option("--out-dir", run.out_dir, "Directory for report files");
    add_hyperparam_flags(run_cmd, run.hp, &run_rf_no_bootstrap);

    TrainArgs train;
    bool train_rf_no_bootstrap = false;
    CLI::App* train_cmd = app.add_subcommand("train", "Train one model and save it");
    add_common_flags(train_cmd, train);
    train_cmd->add_option("--model", train.model, "One of rf,dt,gnb,lr")->required();
    train_cmd->add_option("--seed", train.seed, "Random forest seed");
    train_cmd->add_option("--model-out", train.model_out, "Output model path")->required();
    add_hyperparam_flags(train_cmd, train.hp, &train_rf_no_bootstrap);

    PredictArgs predict;
    CLI::App* predict_cmd = app.add_subcommand("predict", "Predict product labels");
    predict_cmd->add_option("--model-in", predict.model_in, "Saved model file")->required();
    predict_cmd->add_option("--data", predict.data_path, "Input CSV file")->required();
    predict_cmd->add_option("--out", predict.out_path, "Predictions output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    run.hp.rf.bootstrap = !run_rf_no_bootstrap;
    train.hp.rf.bootstrap = !train_rf_no_bootstrap;

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (run_cmd->parsed()) return cmd_run(run);
        if (train_cmd->parsed()) return cmd_train(train);
        return cmd_predict(predict);
    } catch (const BadConfig& e) {
        std::cerr << "{\"error\":" << ordered_json(e.what()).dump() << ",\"usage\":true}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":" << ordered_json(e.what()).dump() << "}\n";
        return 1;
    }
}
