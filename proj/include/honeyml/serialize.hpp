#ifndef HONEYML_SERIALIZE_HPP
#define HONEYML_SERIALIZE_HPP

// Model documents: JSON with {format_version, model_kind, config,
// scaler_params, parameters}. Field layout is described in docs/formats.md.

#include <string>
#include <variant>

#include <json.hpp>

#include "honeyml/dataset.hpp"
#include "honeyml/forest.hpp"
#include "honeyml/logistic.hpp"
#include "honeyml/tree.hpp"

namespace honeyml {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<LRModel, TreeModel, ForestModel>;

inline std::string_view model_kind(const AnyModel& m) {
    static constexpr std::string_view names[] = {"logistic_regression", "decision_tree", "random_forest"};
    return names[m.index()];
}

namespace detail {

using nlohmann::json;

template <class T>
json optional_to_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

inline json to_json(const LRConfig& c) {
    return {{"learning_rate", c.learning_rate},
            {"max_iters", c.max_iters},
            {"tolerance", c.tolerance},
            {"l2_lambda", c.l2_lambda}};
}

inline json to_json(const TreeConfig& c) {
    return {{"max_depth", optional_to_json(c.max_depth)},
            {"min_samples_split", c.min_samples_split},
            {"mtry", optional_to_json(c.mtry)},
            {"rng_seed", c.rng_seed}};
}

inline json to_json(const ForestConfig& c) {
    return {{"n_trees", c.n_trees},
            {"mtry", optional_to_json(c.mtry)},
            {"bootstrap", c.bootstrap},
            {"max_depth", optional_to_json(c.max_depth)},
            {"min_samples_split", c.min_samples_split},
            {"seed", c.seed}};
}

inline LRConfig lr_config_from_json(const json& j) {
    LRConfig c;
    c.learning_rate = j.at("learning_rate").get<double>();
    c.max_iters = j.at("max_iters").get<std::size_t>();
    c.tolerance = j.at("tolerance").get<double>();
    c.l2_lambda = j.at("l2_lambda").get<double>();
    return c;
}

inline TreeConfig tree_config_from_json(const json& j) {
    TreeConfig c;
    c.max_depth = optional_from_json<std::size_t>(j.at("max_depth"));
    c.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    c.mtry = optional_from_json<std::size_t>(j.at("mtry"));
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return c;
}

inline ForestConfig forest_config_from_json(const json& j) {
    ForestConfig c;
    c.n_trees = j.at("n_trees").get<std::size_t>();
    c.mtry = optional_from_json<std::size_t>(j.at("mtry"));
    c.bootstrap = j.at("bootstrap").get<bool>();
    c.max_depth = optional_from_json<std::size_t>(j.at("max_depth"));
    c.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

inline json to_json(const ScalerParams& p) { return {{"min", p.min}, {"max", p.max}}; }

inline ScalerParams scaler_from_json(const json& j) {
    ScalerParams p{j.at("min").get<std::vector<double>>(), j.at("max").get<std::vector<double>>()};
    if (p.min.size() != p.max.size()) throw DecodeError("scaler_params min/max lengths differ");
    for (std::size_t i = 0; i < p.min.size(); ++i)
        if (!(p.min[i] <= p.max[i])) throw DecodeError("scaler_params min exceeds max at feature " + std::to_string(i));
    return p;
}

inline json tree_nodes_to_json(const TreeModel& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        json o = {{"counts", n.counts}, {"prediction", n.prediction}};
        if (!n.is_leaf()) {
            o["feature"] = n.feature;
            o["threshold"] = n.threshold;
            o["left"] = n.left;
            o["right"] = n.right;
        }
        nodes.push_back(std::move(o));
    }
    return nodes;
}

inline void tree_nodes_from_json(const json& arr, TreeModel& t) {
    if (!arr.is_array() || arr.empty()) throw DecodeError("tree has no nodes");
    const auto n = arr.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = arr[i];
        TreeNode node;
        node.counts = o.at("counts").get<std::vector<std::size_t>>();
        node.prediction = o.at("prediction").get<int>();
        if (node.counts.size() != t.n_classes) throw DecodeError("node " + std::to_string(i) + ": wrong counts length");
        if (node.prediction < 0 || static_cast<std::size_t>(node.prediction) >= t.n_classes)
            throw DecodeError("node " + std::to_string(i) + ": prediction out of range");
        if (o.contains("feature")) {
            node.feature = o.at("feature").get<int>();
            node.threshold = o.at("threshold").get<double>();
            node.left = o.at("left").get<std::int32_t>();
            node.right = o.at("right").get<std::int32_t>();
            const auto ok = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && static_cast<std::size_t>(c) < n; };
            if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= t.n_features)
                throw DecodeError("node " + std::to_string(i) + ": feature out of range");
            if (!ok(node.left) || !ok(node.right))
                throw DecodeError("node " + std::to_string(i) + ": child index out of range");
        }
        t.nodes.push_back(std::move(node));
    }
}

inline json parameters_to_json(const LRModel& m) {
    json w = json::array();
    for (std::size_t c = 0; c < m.weights.rows(); ++c) {
        auto r = m.weights.row(c);
        w.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"weights", w}, {"bias", m.bias}, {"iterations", m.iterations}};
}

inline json parameters_to_json(const TreeModel& m) { return {{"nodes", tree_nodes_to_json(m)}}; }

inline json parameters_to_json(const ForestModel& m) {
    json trees = json::array();
    for (std::size_t t = 0; t < m.trees.size(); ++t)
        trees.push_back({{"seed", m.tree_seeds[t]},
                         {"config", to_json(m.trees[t].config)},
                         {"nodes", tree_nodes_to_json(m.trees[t])}});
    return {{"class_counts", m.class_counts}, {"trees", trees}};
}

inline std::size_t n_features_of(const AnyModel& m) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, LRModel>)
                return v.n_features();
            else
                return v.n_features;
        },
        m);
}

inline std::size_t n_classes_of(const AnyModel& m) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, LRModel>)
                return v.n_classes();
            else
                return v.n_classes;
        },
        m);
}

}  // namespace detail

/// Class names stored alongside a model; the general model uses the three
/// dataset classes, per-origin models use {authentic, adulterated}.
inline nlohmann::json serialize_model(const AnyModel& model, const std::vector<std::string>& class_names = {}) {
    using nlohmann::json;
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["model_kind"] = std::string(model_kind(model));
    std::visit(
        [&](const auto& m) {
            doc["config"] = detail::to_json(m.config);
            doc["scaler_params"] = detail::to_json(m.scaler);
            doc["parameters"] = detail::parameters_to_json(m);
        },
        model);
    doc["n_features"] = detail::n_features_of(model);
    doc["n_classes"] = detail::n_classes_of(model);
    std::vector<std::string> features;
    if (detail::n_features_of(model) == kNumFeatures)
        for (auto f : kMineralNames) features.emplace_back(f);
    doc["feature_names"] = features;
    doc["class_names"] = class_names;
    return doc;
}

inline AnyModel deserialize_model(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw DecodeError("model document is not a JSON object");
        if (!doc.contains("format_version")) throw DecodeError("model document has no format_version");
        const auto version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw DecodeError("unsupported model format_version " + std::to_string(version) + " (expected " +
                              std::to_string(kModelFormatVersion) + ")");
        const auto kind = doc.at("model_kind").get<std::string>();
        const auto n_features = doc.at("n_features").get<std::size_t>();
        const auto n_classes = doc.at("n_classes").get<std::size_t>();
        const auto scaler = detail::scaler_from_json(doc.at("scaler_params"));
        if (!scaler.min.empty() && scaler.n_features() != n_features)
            throw DecodeError("scaler_params length does not match n_features");
        const auto& params = doc.at("parameters");

        if (kind == "logistic_regression") {
            LRModel m;
            m.config = detail::lr_config_from_json(doc.at("config"));
            m.scaler = scaler;
            m.iterations = params.value("iterations", std::size_t{0});
            const auto rows = params.at("weights").get<std::vector<std::vector<double>>>();
            m.bias = params.at("bias").get<std::vector<double>>();
            if (rows.size() != n_classes || m.bias.size() != n_classes)
                throw DecodeError("weights/bias shape does not match n_classes");
            m.weights = Matrix(n_classes, n_features);
            for (std::size_t c = 0; c < n_classes; ++c) {
                if (rows[c].size() != n_features) throw DecodeError("weight row length does not match n_features");
                std::copy(rows[c].begin(), rows[c].end(), m.weights.row(c).begin());
            }
            return m;
        }
        if (kind == "decision_tree") {
            TreeModel m{n_features, n_classes, {}, detail::tree_config_from_json(doc.at("config")), scaler};
            detail::tree_nodes_from_json(params.at("nodes"), m);
            return m;
        }
        if (kind == "random_forest") {
            ForestModel m;
            m.n_features = n_features;
            m.n_classes = n_classes;
            m.config = detail::forest_config_from_json(doc.at("config"));
            m.scaler = scaler;
            m.class_counts = params.at("class_counts").get<std::vector<std::size_t>>();
            if (m.class_counts.size() != n_classes) throw DecodeError("class_counts length does not match n_classes");
            for (const auto& tj : params.at("trees")) {
                TreeModel t{n_features, n_classes, {}, detail::tree_config_from_json(tj.at("config")), {}};
                detail::tree_nodes_from_json(tj.at("nodes"), t);
                m.tree_seeds.push_back(tj.at("seed").get<std::uint64_t>());
                m.trees.push_back(std::move(t));
            }
            if (m.trees.empty()) throw DecodeError("forest has no trees");
            return m;
        }
        throw DecodeError("unknown model_kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("malformed model document: ") + e.what());
    }
}

inline std::string serialize_model_string(const AnyModel& model, const std::vector<std::string>& class_names = {}) {
    return serialize_model(model, class_names).dump(1);
}

inline AnyModel deserialize_model_string(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("model document is not valid JSON: ") + e.what());
    }
    return deserialize_model(doc);
}

inline std::vector<std::string> class_names_of(const nlohmann::json& doc) {
    return doc.value("class_names", std::vector<std::string>{});
}

}  // namespace honeyml

#endif  // HONEYML_SERIALIZE_HPP
