#include <gtest/gtest.h>

#include <random>

#include "honeyml/eval.hpp"
#include "honeyml/serialize.hpp"

using namespace honeyml;

namespace {

Matrix probe(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    Matrix m(64, kNumFeatures);
    for (auto& v : m.data()) v = u(gen);
    return m;
}

}  // namespace

TEST(Serialize, LogisticRoundTripBitIdentical) {
    const auto ds = generate_synthetic(planted_preset(), 1);
    LRConfig cfg;
    cfg.max_iters = 200;
    const auto model = train_on_dataset(cfg, ds);
    const auto back = deserialize_model_string(serialize_model_string(model, general_class_names()));
    EXPECT_EQ(std::get<LRModel>(back), std::get<LRModel>(model));
    const auto X = probe(3);
    const auto a = predict_logistic(std::get<LRModel>(model), X);
    const auto b = predict_logistic(std::get<LRModel>(back), X);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.probabilities, b.probabilities);
}

TEST(Serialize, ForestRoundTrip) {
    const auto ds = generate_synthetic(separable_preset(), 2);
    ForestConfig cfg;
    cfg.seed = 5;
    const auto model = train_on_dataset(cfg, ds);
    const auto doc = serialize_model(model);
    EXPECT_EQ(doc.at("format_version"), kModelFormatVersion);
    EXPECT_EQ(doc.at("model_kind"), "random_forest");
    for (const char* key : {"config", "scaler_params", "parameters"}) EXPECT_TRUE(doc.contains(key)) << key;
    const auto back = deserialize_model(doc);
    EXPECT_EQ(std::get<ForestModel>(back), std::get<ForestModel>(model));
    EXPECT_EQ(std::get<ForestModel>(back).trees.size(), 100u);
    EXPECT_EQ(predict(back, probe(4)), predict(model, probe(4)));
    EXPECT_EQ(predict_dataset(back, ds), predict_dataset(model, ds));
}

TEST(Serialize, TreeRoundTrip) {
    const auto ds = generate_synthetic(planted_preset(), 6);
    TreeConfig cfg;
    cfg.max_depth = 6;
    const auto model = train_on_dataset(cfg, ds);
    const auto back = deserialize_model_string(serialize_model_string(model));
    EXPECT_EQ(std::get<TreeModel>(back), std::get<TreeModel>(model));
}

TEST(Serialize, UnknownVersionNamed) {
    auto doc = serialize_model(train_on_dataset(TreeConfig{}, generate_synthetic(separable_preset(), 1)));
    doc["format_version"] = 999;
    try {
        deserialize_model(doc);
        FAIL();
    } catch (const DecodeError& e) {
        EXPECT_NE(std::string(e.what()).find("999"), std::string::npos);
    }
}

TEST(Serialize, MalformedDocuments) {
    EXPECT_THROW(deserialize_model_string("not json"), DecodeError);
    EXPECT_THROW(deserialize_model_string("[]"), DecodeError);
    EXPECT_THROW(deserialize_model_string(R"({"format_version": 1})"), DecodeError);

    auto doc = serialize_model(train_on_dataset(TreeConfig{}, generate_synthetic(separable_preset(), 1)));
    auto bad = doc;
    bad["model_kind"] = "svm";
    EXPECT_THROW(deserialize_model(bad), DecodeError);
    bad = doc;
    bad["parameters"]["nodes"][0]["left"] = 0;
    EXPECT_THROW(deserialize_model(bad), DecodeError);
    bad = doc;
    bad["parameters"]["nodes"][0]["feature"] = 40;
    EXPECT_THROW(deserialize_model(bad), DecodeError);
    bad = doc;
    bad["scaler_params"]["min"] = std::vector<double>{1.0};
    EXPECT_THROW(deserialize_model(bad), DecodeError);
}
