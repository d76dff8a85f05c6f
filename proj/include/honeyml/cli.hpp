#ifndef HONEYML_CLI_HPP
#define HONEYML_CLI_HPP

// Command-line driver. Exit codes: 0 success, 1 data/validation/IO failure,
// 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "honeyml/dataset.hpp"
#include "honeyml/eval.hpp"
#include "honeyml/importance.hpp"
#include "honeyml/report.hpp"
#include "honeyml/serialize.hpp"

namespace honeyml::cli {

enum class OutputFormat { Human, Machine };

struct RunConfig {
    std::string subcommand;
    std::string data_path;
    std::string model_kind = "rf";  ///< lr | dt | rf
    std::string model_path;         ///< predict only
    std::size_t k = 10;
    std::uint64_t seed = 42;
    bool fit_on_all = false;
    bool per_origin = false;
    std::size_t threads = 1;
    std::size_t n_trees = 100;
    std::string out_path;
    OutputFormat format = OutputFormat::Human;
    bool timing = false;
    std::string preset;
    std::string planted_feature = "Ba";
    std::string plot_path;
};

/// Failure after successful argument parsing; maps to exit code 1.
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RunError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RunError("cannot write '" + path + "'");
    out << content;
    if (!out) throw RunError("failed writing '" + path + "'");
}

inline ModelSpec make_spec(const RunConfig& rc) {
    if (rc.model_kind == "lr") return LRConfig{};
    if (rc.model_kind == "dt") {
        TreeConfig c;
        c.rng_seed = rc.seed;
        return c;
    }
    ForestConfig c;
    c.n_trees = rc.n_trees;
    c.seed = rc.seed;
    return c;
}

inline nlohmann::json run_json(const RunConfig& rc) {
    nlohmann::json j = {{"command", rc.subcommand}, {"data", rc.data_path}};
    if (rc.subcommand == "evaluate" || rc.subcommand == "train" || rc.subcommand == "importance") {
        j["model"] = rc.subcommand == "importance" ? std::string("rf") : rc.model_kind;
        j["seed"] = rc.seed;
        if (rc.subcommand != "train" || rc.model_kind == "rf") j["trees"] = rc.n_trees;
    }
    if (rc.subcommand == "evaluate") {
        j["folds"] = rc.k;
        j["policy"] = rc.fit_on_all ? "fit-on-all" : "fit-on-train";
        j["per_origin"] = rc.per_origin;
    }
    if (rc.subcommand == "predict") j["model_path"] = rc.model_path;
    if (rc.subcommand == "synth") {
        j.erase("data");
        j["preset"] = rc.preset;
        j["seed"] = rc.seed;
        if (rc.preset == "planted") j["planted_feature"] = rc.planted_feature;
    }
    return j;
}

class Runner {
public:
    Runner(RunConfig rc, std::ostream& out, std::ostream& err) : rc_(std::move(rc)), out_(out), err_(err) {}

    int operator()() {
        const auto& s = rc_.subcommand;
        if (s == "validate") return validate();
        if (s == "evaluate") return evaluate();
        if (s == "train") return train();
        if (s == "predict") return predict_cmd();
        if (s == "importance") return importance();
        if (s == "synth") return synth();
        throw RunError("unknown subcommand '" + s + "'");
    }

private:
    bool machine() const { return rc_.format == OutputFormat::Machine; }

    void emit(const std::string& text) {
        if (rc_.out_path.empty())
            out_ << text;
        else
            write_file(rc_.out_path, text);
    }

    void emit(const nlohmann::json& doc) { emit(doc.dump(2) + "\n"); }

    Dataset load() { return parse_csv(read_file(rc_.data_path)); }

    int validate() {
        const auto report = validate_schema(load());
        if (machine()) {
            auto j = to_json(report);
            j["run"] = run_json(rc_);
            emit(j);
        } else {
            emit(to_text(report));
        }
        return report.valid() ? 0 : 1;
    }

    int evaluate() {
        const auto ds = load();
        CVOptions opt{rc_.k, rc_.seed, rc_.fit_on_all ? PreprocessPolicy::FitOnAll : PreprocessPolicy::FitOnTrain,
                      rc_.threads};
        const auto spec = make_spec(rc_);
        if (rc_.per_origin) {
            const auto report = per_origin_evaluation(ds, spec, opt);
            if (machine()) {
                auto j = to_json(report, rc_.timing);
                j["run"] = run_json(rc_);
                emit(j);
            } else {
                emit(to_text(report));
            }
            return 0;
        }
        const auto report = cross_validate(ds, spec, opt);
        if (machine()) {
            auto j = to_json(report, rc_.timing);
            j["run"] = run_json(rc_);
            emit(j);
        } else {
            auto text = to_text(report);
            if (rc_.timing) text += "Wall clock: " + detail::fixed(report.wall_clock_seconds, 3) + " s\n";
            emit(text);
        }
        return 0;
    }

    int train() {
        const auto ds = load();
        const auto model = train_on_dataset(make_spec(rc_), ds, rc_.threads);
        auto doc = serialize_model(model, general_class_names());
        doc["run"] = run_json(rc_);
        write_file(rc_.out_path, doc.dump(1) + "\n");
        if (machine()) {
            out_ << nlohmann::json{{"report_kind", "train"},
                                   {"format_version", kReportFormatVersion},
                                   {"model_kind", std::string(model_kind(model))},
                                   {"n_samples", ds.size()},
                                   {"out", rc_.out_path},
                                   {"run", run_json(rc_)}}
                        .dump(2)
                 << '\n';
        } else {
            out_ << "trained " << model_kind(model) << " on " << ds.size() << " samples; model written to "
                 << rc_.out_path << '\n';
        }
        return 0;
    }

    int predict_cmd() {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(rc_.model_path));
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(std::string("model document is not valid JSON: ") + e.what());
        }
        const auto model = deserialize_model(doc);
        const auto names = class_names_of(doc);
        const auto ds = load();
        const auto labels = predict_dataset(model, ds);
        const auto name_of = [&](int c) {
            return static_cast<std::size_t>(c) < names.size() ? names[static_cast<std::size_t>(c)] : std::to_string(c);
        };
        if (machine()) {
            nlohmann::json preds = nlohmann::json::array();
            for (std::size_t i = 0; i < ds.size(); ++i)
                preds.push_back({{"id", ds[i].id}, {"label", name_of(labels[i])}, {"code", labels[i]}});
            emit(nlohmann::json{{"report_kind", "predictions"},
                                {"format_version", kReportFormatVersion},
                                {"model_kind", std::string(model_kind(model))},
                                {"run", run_json(rc_)},
                                {"predictions", preds}});
        } else {
            std::string text = "id,predicted\n";
            for (std::size_t i = 0; i < ds.size(); ++i) text += ds[i].id + "," + name_of(labels[i]) + "\n";
            emit(text);
        }
        return 0;
    }

    int importance() {
        const auto ds = load();
        ForestConfig cfg;
        cfg.n_trees = rc_.n_trees;
        cfg.seed = rc_.seed;
        const auto model = std::get<ForestModel>(train_on_dataset(cfg, ds, rc_.threads));
        const auto imp = mdi_importance(model);
        if (!rc_.plot_path.empty()) write_file(rc_.plot_path, to_plot_csv(imp));
        if (machine()) {
            auto j = to_json(imp);
            j["config"] = detail::to_json(cfg);
            j["run"] = run_json(rc_);
            emit(j);
        } else {
            emit(to_text(imp));
        }
        return 0;
    }

    int synth() {
        SynthConfig cfg;
        if (rc_.preset == "separable") {
            cfg = separable_preset();
        } else {
            const auto m = parse_mineral(rc_.planted_feature);
            if (!m) throw RunError("unknown mineral '" + rc_.planted_feature + "'");
            cfg = planted_preset(*m);
        }
        const auto ds = generate_synthetic(cfg, rc_.seed);
        write_file(rc_.out_path, to_csv(ds));
        if (machine()) {
            out_ << nlohmann::json{{"report_kind", "synth"},
                                   {"format_version", kReportFormatVersion},
                                   {"n_samples", ds.size()},
                                   {"out", rc_.out_path},
                                   {"run", run_json(rc_)}}
                        .dump(2)
                 << '\n';
        } else {
            out_ << "wrote " << ds.size() << " samples (" << rc_.preset << ", seed " << rc_.seed << ") to "
                 << rc_.out_path << '\n';
        }
        return 0;
    }

    RunConfig rc_;
    std::ostream& out_;
    std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig rc;
    CLI::App app{"Honey adulteration detection from mineral element profiles", "honeyml"};
    app.require_subcommand(1);

    const std::map<std::string, OutputFormat> formats{{"human", OutputFormat::Human}, {"machine", OutputFormat::Machine}};
    const auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", rc.format, "Output format: human or machine (JSON)")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };
    const auto add_data = [&](CLI::App* sub) {
        sub->add_option("--data", rc.data_path, "Dataset CSV")->required();
    };
    const auto add_model_kind = [&](CLI::App* sub) {
        sub->add_option("--model", rc.model_kind, "Classifier: lr, dt or rf")
            ->required()
            ->check(CLI::IsMember({"lr", "dt", "rf"}, CLI::ignore_case));
    };

    auto* validate = app.add_subcommand("validate", "Check a dataset CSV against the schema");
    add_data(validate);
    add_format(validate);
    validate->add_option("--out", rc.out_path, "Write the report here instead of stdout");

    auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
    add_model_kind(evaluate);
    add_data(evaluate);
    evaluate->add_option("--folds", rc.k, "Number of folds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    evaluate->add_option("--seed", rc.seed, "Random seed");
    evaluate->add_flag("--fit-on-all", rc.fit_on_all, "Fit the scaler on the whole dataset before splitting");
    evaluate->add_flag("--per-origin", rc.per_origin, "One binary authentic/adulterated model per botanical origin");
    evaluate->add_option("--threads", rc.threads, "Worker threads for forest training")->check(CLI::PositiveNumber);
    evaluate->add_option("--trees", rc.n_trees, "Trees per forest")->check(CLI::PositiveNumber);
    evaluate->add_flag("--timing", rc.timing, "Include wall-clock time in the report");
    evaluate->add_option("--out", rc.out_path, "Write the report here instead of stdout");
    add_format(evaluate);

    auto* train = app.add_subcommand("train", "Fit a model on the full dataset and write a model document");
    add_model_kind(train);
    add_data(train);
    train->add_option("--out", rc.out_path, "Model document path")->required();
    train->add_option("--seed", rc.seed, "Random seed");
    train->add_option("--threads", rc.threads, "Worker threads for forest training")->check(CLI::PositiveNumber);
    train->add_option("--trees", rc.n_trees, "Trees per forest")->check(CLI::PositiveNumber);
    add_format(train);

    auto* predict = app.add_subcommand("predict", "Classify a CSV with a saved model");
    predict->add_option("--model", rc.model_path, "Model document")->required();
    add_data(predict);
    predict->add_option("--out", rc.out_path, "Write labels here instead of stdout");
    add_format(predict);

    auto* importance = app.add_subcommand("importance", "Train a forest and rank minerals by mean decrease in impurity");
    add_data(importance);
    importance->add_option("--seed", rc.seed, "Random seed");
    importance->add_option("--trees", rc.n_trees, "Trees per forest")->check(CLI::PositiveNumber);
    importance->add_option("--threads", rc.threads, "Worker threads")->check(CLI::PositiveNumber);
    importance->add_option("--out", rc.out_path, "Write the report here instead of stdout");
    importance->add_option("--plot-data", rc.plot_path, "Also write feature,score CSV here");
    add_format(importance);

    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset CSV");
    synth->add_option("--preset", rc.preset, "separable or planted")
        ->required()
        ->check(CLI::IsMember({"separable", "planted"}));
    synth->add_option("--seed", rc.seed, "Random seed");
    synth->add_option("--out", rc.out_path, "Output CSV")->required();
    synth->add_option("--planted-feature", rc.planted_feature, "Informative mineral for the planted preset");
    add_format(synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    for (auto* sub : app.get_subcommands()) rc.subcommand = sub->get_name();

    try {
        return Runner(rc, out, err)();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace honeyml::cli

#endif  // HONEYML_CLI_HPP
