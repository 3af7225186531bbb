#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "recml/experiment.hpp"

using namespace recml;
using Catch::Matchers::WithinAbs;

namespace {

ExperimentConfig small_config(int trials = 3) {
    ExperimentConfig cfg;
    cfg.source = SynthConfig{120, 4, 0.1, 5};
    cfg.trials = trials;
    cfg.base_seed = 11;
    cfg.hp.rf.n_trees = 10;
    cfg.hp.lr.max_iterations = 60;
    return cfg;
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("single trial mean equals the trial row", "[experiment]") {
    ExperimentConfig cfg = small_config(1);
    const ExperimentReport report = run_experiment(cfg);
    for (const ModelTable& table : report.tables) {
        REQUIRE(table.trials.size() == 1);
        REQUIRE(table.mean.accuracy == table.trials[0].metrics.accuracy);
        REQUIRE(table.mean.mse == table.trials[0].metrics.mse);
        REQUIRE(table.mean.mae == table.trials[0].metrics.mae);
        REQUIRE(table.mean.r_square == table.trials[0].metrics.r_square);
    }
}

TEST_CASE("mean rows match an independent summation", "[experiment]") {
    const ExperimentReport report = run_experiment(small_config(4));
    for (const ModelTable& table : report.tables) {
        double acc = 0, m = 0, a = 0, r = 0;
        for (const TrialRow& row : table.trials) {
            acc += row.metrics.accuracy;
            m += row.metrics.mse;
            a += row.metrics.mae;
            r += row.metrics.r_square.value();
        }
        const double t = static_cast<double>(table.trials.size());
        REQUIRE_THAT(table.mean.accuracy, WithinAbs(acc / t, 1e-12));
        REQUIRE_THAT(table.mean.mse, WithinAbs(m / t, 1e-12));
        REQUIRE_THAT(table.mean.mae, WithinAbs(a / t, 1e-12));
        REQUIRE_THAT(table.mean.r_square.value(), WithinAbs(r / t, 1e-12));
    }
}

TEST_CASE("run_trial reproduces the experiment rows", "[experiment]") {
    ExperimentConfig cfg = small_config(3);
    const ExperimentReport report = run_experiment(cfg);

    const RawTable table = generate_synthetic(std::get<SynthConfig>(cfg.source));
    const EncodedDataset ds = encode_dataset(table, cfg.schema);
    for (const ModelTable& entry : report.tables) {
        for (const TrialRow& row : entry.trials) {
            const MetricReport again = run_trial(ds, entry.kind, row.seed, cfg);
            REQUIRE(again.accuracy == row.metrics.accuracy);
            REQUIRE(again.mse == row.metrics.mse);
            REQUIRE(again.r_square == row.metrics.r_square);
        }
    }
}

TEST_CASE("every model sees the identical per-trial split", "[experiment]") {
    const ExperimentConfig cfg = small_config();
    const RawTable table = generate_synthetic(std::get<SynthConfig>(cfg.source));
    const EncodedDataset ds = encode_dataset(table, cfg.schema);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
        const TrainTestSplit first = split_dataset(ds, cfg.train_ratio, seed);
        const TrainTestSplit second = split_dataset(ds, cfg.train_ratio, seed);
        REQUIRE(first.train_indices == second.train_indices);
        REQUIRE(first.test_indices == second.test_indices);
    }
}

TEST_CASE("reports are byte-identical across runs", "[experiment]") {
    const ExperimentConfig cfg = small_config();
    const std::string a = report_to_json(run_experiment(cfg));
    const std::string b = report_to_json(run_experiment(cfg));
    REQUIRE(a == b);
}

TEST_CASE("model tables have trials+1 rows and a consistent average", "[experiment]") {
    const ExperimentReport report = run_experiment(small_config(5));
    for (const ModelTable& table : report.tables) {
        const auto rows = parse_csv_rows(model_table_csv(table));
        REQUIRE(rows.size() == 1 + 5 + 1);  // header, trials, average
        REQUIRE(rows[0] == std::vector<std::string>{"Model", "Accuracy", "R Square",
                                                    "MSE", "MAE"});
        REQUIRE(rows.back()[0] == "average");
        for (std::size_t col : {1, 2, 3, 4}) {
            double sum = 0.0;
            for (std::size_t r = 1; r <= 5; ++r) sum += parse_double(rows[r][col]);
            REQUIRE_THAT(parse_double(rows.back()[col]), WithinAbs(sum / 5.0, 1e-12));
        }
    }
}

TEST_CASE("figure series mirror the mean rows in canonical order", "[experiment]") {
    ExperimentConfig cfg = small_config();
    cfg.models = {ModelKind::lr, ModelKind::rf};  // declared out of order
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.tables.size() == 2);
    REQUIRE(report.tables[0].kind == ModelKind::rf);
    REQUIRE(report.tables[1].kind == ModelKind::lr);

    const auto fig = parse_csv_rows(figure_csv(report, "accuracy"));
    REQUIRE(fig.size() == 3);
    REQUIRE(fig[1][0] == "RF");
    REQUIRE(fig[2][0] == "LR");
    REQUIRE(parse_double(fig[1][1]) ==
            parse_double(format_percent(report.tables[0].mean.accuracy)));

    const auto mse_fig = parse_csv_rows(figure_csv(report, "mse"));
    REQUIRE(parse_double(mse_fig[1][1]) == report.tables[0].mean.mse);

    REQUIRE_THROWS_AS(figure_csv(report, "f1"), BadConfig);
}

TEST_CASE("single-model report has a single table", "[experiment]") {
    ExperimentConfig cfg = small_config(1);
    cfg.models = {ModelKind::rf};
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.tables.size() == 1);
    const auto fig = parse_csv_rows(figure_csv(report, "mae"));
    REQUIRE(fig.size() == 2);
}

TEST_CASE("failures carry the stage name", "[experiment]") {
    ExperimentConfig missing = small_config();
    missing.source = std::string("/nonexistent/data.csv");
    try {
        run_experiment(missing);
        FAIL("expected Error");
    } catch (const Error& e) {
        REQUIRE(std::string(e.what()).find("ingest:") != std::string::npos);
    }

    ExperimentConfig bad_split = small_config();
    bad_split.source = SynthConfig{20, 4, 0.0, 1};
    bad_split.train_ratio = 0.01;  // floor(0.2) = 0 train rows
    try {
        run_experiment(bad_split);
        FAIL("expected Error");
    } catch (const Error& e) {
        REQUIRE(std::string(e.what()).find("split:") != std::string::npos);
    }
}

TEST_CASE("config validation", "[experiment]") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 0;
    REQUIRE_THROWS_AS(run_experiment(cfg), BadConfig);
    cfg = small_config();
    cfg.models.clear();
    REQUIRE_THROWS_AS(run_experiment(cfg), BadConfig);
    cfg = small_config();
    cfg.train_ratio = 1.0;
    REQUIRE_THROWS_AS(run_experiment(cfg), BadConfig);
}

TEST_CASE("pca toggle runs and is echoed in the report", "[experiment]") {
    ExperimentConfig cfg = small_config();
    cfg.pca.mode = PcaSetting::Mode::fixed_k;
    cfg.pca.k = 2;
    const ExperimentReport report = run_experiment(cfg);
    const std::string json = report_to_json(report);
    REQUIRE(json.find("\"mode\": \"k\"") != std::string::npos);
    for (const ModelTable& table : report.tables)
        REQUIRE(table.trials.size() == static_cast<std::size_t>(cfg.trials));

    ExperimentConfig var_cfg = small_config(1);
    var_cfg.pca.mode = PcaSetting::Mode::variance;
    var_cfg.pca.variance_target = 0.9;
    REQUIRE(run_experiment(var_cfg).tables.size() == 4);
}

TEST_CASE("train-only encoder fitting runs", "[experiment]") {
    ExperimentConfig cfg = small_config();
    cfg.fit_encoders_on_train = true;
    const ExperimentReport report = run_experiment(cfg);
    for (const ModelTable& table : report.tables)
        for (const TrialRow& row : table.trials) REQUIRE(row.metrics.n > 0);
    const std::string json = report_to_json(report);
    REQUIRE(json.find("\"fit_encoders_on_train\": true") != std::string::npos);
}

TEST_CASE("fingerprint identifies the dataset", "[experiment]") {
    const ExperimentReport a = run_experiment(small_config(1));
    ExperimentConfig other = small_config(1);
    other.source = SynthConfig{120, 4, 0.1, 6};  // different seed
    const ExperimentReport b = run_experiment(other);
    REQUIRE(a.dataset_fingerprint.rfind("fnv1a64:", 0) == 0);
    REQUIRE(a.dataset_fingerprint != b.dataset_fingerprint);
}
