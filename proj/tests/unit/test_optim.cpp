#include "../support/fixtures.h"
#include "../support/oracles.h"

#include "alphaforge/common/missing.h"
#include "alphaforge/optim/mlp.h"
#include "alphaforge/optim/weights.h"

#include <gtest/gtest.h>

#include <sstream>

using namespace alphaforge;

namespace {

eval::AlphaSeries grid(std::size_t nt, std::size_t nd, std::vector<double> values) {
    std::vector<std::string> tickers;
    for (std::size_t i = 0; i < nt; ++i) tickers.push_back(fixture::ticker(i));
    return {tickers, fixture::weekdays(nd), std::move(values), "test"};
}

eval::AlphaSeries random_grid(std::mt19937_64& rng, std::size_t nt, std::size_t nd) {
    std::normal_distribution<double> z;
    std::vector<double> v(nt * nd);
    for (auto& x : v) x = z(rng);
    return grid(nt, nd, std::move(v));
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = z(rng);
    return m;
}

}  // namespace

TEST(Dataset, RowsWithAnyMissingCellAreDropped) {
    std::mt19937_64 rng(1);
    auto a = random_grid(rng, 3, 10);
    auto b = random_grid(rng, 3, 10);
    auto y = random_grid(rng, 3, 10);
    auto va = random_grid(rng, 3, 10), vb = random_grid(rng, 3, 10), vy = random_grid(rng, 3, 10);
    auto vals = b.values();
    vals[4] = kMissing;
    b = b.with_values(vals, "b");
    auto ds = optim::build_dataset({"a", "b"}, {a, b}, y, {va, vb}, vy);
    EXPECT_EQ(ds.data.x_train.rows(), 29);
    EXPECT_EQ(ds.data.x_train.cols(), 2);
    EXPECT_EQ(ds.data.x_val.rows(), 30);
    for (Eigen::Index j = 0; j < 2; ++j) EXPECT_NEAR(ds.data.x_train.col(j).mean(), 0.0, 1e-12);
}

TEST(Dataset, ValidationUsesTrainingStatistics) {
    std::mt19937_64 rng(2);
    auto a = random_grid(rng, 4, 20);
    auto y = random_grid(rng, 4, 20);
    auto shifted = a.values();
    for (auto& v : shifted) v += 100.0;
    auto va = a.with_values(shifted, "val");
    auto ds = optim::build_dataset({"a"}, {a}, y, {va}, y);
    EXPECT_NEAR(ds.data.x_val.col(0).mean(), 100.0 / ds.scaler.stddev[0], 1e-9);
}

TEST(Dataset, ConstantFeatureIsRejected) {
    std::mt19937_64 rng(3);
    auto flat = grid(3, 10, std::vector<double>(30, 1.5));
    auto y = random_grid(rng, 3, 10);
    try {
        optim::build_dataset({"flat"}, {flat}, y, {flat}, y);
        FAIL();
    } catch (const optim::DatasetError& e) {
        EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
    }
}

TEST(Dataset, MisalignedSeriesAreRejected) {
    std::mt19937_64 rng(4);
    auto a = random_grid(rng, 3, 10);
    auto y = random_grid(rng, 3, 11);
    EXPECT_THROW(optim::build_dataset({"a"}, {a}, y, {a}, y), optim::DatasetError);
}

TEST(Mlp, ShapesAndParameterCount) {
    optim::MlpModel m(4, 10, 1);
    EXPECT_EQ(m.n_parameters(), 4u * 10u + 10u + 10u + 1u);
    EXPECT_EQ(m.parameters().size(), m.n_parameters());
    EXPECT_THROW(optim::MlpModel(0, 10), std::invalid_argument);
}

TEST(Mlp, ZeroInputsGiveZeroFirstLayerWeightGradients) {
    optim::MlpModel m(3, 6, 5);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 3);
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(8, -1.0, 1.0);
    auto g = optim::gradient(m, x, y, 0.0);
    for (std::size_t k = 0; k < 18; ++k) EXPECT_EQ(g[k], 0.0) << k;
    for (int h = 0; h < 6; ++h) {
        if (m.b1()(h) <= 0.0) {
            EXPECT_EQ(g[18 + static_cast<std::size_t>(h)], 0.0);
            EXPECT_EQ(g[24 + static_cast<std::size_t>(h)], 0.0);
        }
    }
}

TEST(Train, ZeroLearningRateLeavesParametersUnchanged) {
    std::mt19937_64 rng(6);
    optim::Dataset d{random_matrix(rng, 64, 3), random_matrix(rng, 64, 1).col(0), random_matrix(rng, 16, 3),
                     random_matrix(rng, 16, 1).col(0)};
    optim::MlpModel init(3, 10, 7);
    optim::TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.l2_lambda = 0.0;
    cfg.max_epochs = 3;
    cfg.patience = 3;
    auto r = optim::train(init, d, cfg);
    EXPECT_TRUE(r.model == init);
}

TEST(Train, SameSeedSameModel) {
    std::mt19937_64 rng(8);
    optim::Dataset d{random_matrix(rng, 100, 3), random_matrix(rng, 100, 1).col(0), random_matrix(rng, 20, 3),
                     random_matrix(rng, 20, 1).col(0)};
    optim::TrainConfig cfg;
    cfg.max_epochs = 20;
    auto a = optim::train(optim::MlpModel(3, 10, 1), d, cfg);
    auto b = optim::train(optim::MlpModel(3, 10, 1), d, cfg);
    EXPECT_TRUE(a.model == b.model);
    EXPECT_EQ(a.train_mse, b.train_mse);
    EXPECT_EQ(a.val_mse, b.val_mse);
    EXPECT_LE(a.best_epoch, static_cast<int>(a.val_mse.size()));
}

TEST(Train, ConfigValidation) {
    optim::TrainConfig cfg;
    cfg.patience = cfg.max_epochs + 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Checkpoint, SaveLoadRoundTrip) {
    optim::MlpModel m(5, 10, 3);
    std::stringstream buf;
    optim::save_model(m, buf);
    auto back = optim::load_model(buf);
    EXPECT_TRUE(back == m);
    std::istringstream junk("not a model");
    EXPECT_THROW(optim::load_model(junk), std::runtime_error);
}

TEST(Weights, ExactLinearModelIsRecovered) {
    // relu(z) - relu(-z) == z, so this network is linear: 0.7 a - 1.3 b + 0.25
    Eigen::MatrixXd w1(2, 2);
    w1 << 0.7, -1.3, -0.7, 1.3;
    Eigen::RowVectorXd w2(2);
    w2 << 1.0, -1.0;
    optim::MlpModel m(w1, Eigen::VectorXd::Zero(2), w2, 0.25);
    std::mt19937_64 rng(10);
    auto x = random_matrix(rng, 200, 2);
    auto w = optim::extract_weights(m, x, {"a", "b"});
    EXPECT_NEAR(w.weights[0], 0.7, 1e-12);
    EXPECT_NEAR(w.weights[1], -1.3, 1e-12);
    EXPECT_NEAR(w.intercept, 0.25, 1e-12);
}

TEST(Weights, PermutingFeaturesPermutesWeights) {
    std::mt19937_64 rng(11);
    optim::MlpModel m(3, 10, 4);
    auto x = random_matrix(rng, 300, 3);
    auto w = optim::extract_weights(m, x, {"a", "b", "c"});
    const int perm[3] = {2, 0, 1};
    Eigen::MatrixXd px(x.rows(), 3), pw1(10, 3);
    for (int j = 0; j < 3; ++j) {
        px.col(j) = x.col(perm[j]);
        pw1.col(j) = m.w1().col(perm[j]);
    }
    optim::MlpModel pm(pw1, m.b1(), m.w2(), m.b2());
    auto pw = optim::extract_weights(pm, px, {"c", "a", "b"});
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(pw.weights[static_cast<std::size_t>(j)], w.weights[static_cast<std::size_t>(perm[j])], 1e-10);
    EXPECT_NEAR(pw.intercept, w.intercept, 1e-10);
}

TEST(Weights, TwelveFeaturesMatchNormalEquations) {
    std::mt19937_64 rng(12);
    optim::MlpModel m(12, 10, 9);
    auto x = random_matrix(rng, 400, 12);
    auto w = optim::extract_weights(m, x, std::vector<std::string>(12, "f"));
    Eigen::VectorXd pred = m.predict(x);
    std::vector<std::vector<double>> rows(400, std::vector<double>(12));
    std::vector<double> y(400);
    for (int r = 0; r < 400; ++r) {
        for (int c = 0; c < 12; ++c) rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = x(r, c);
        y[static_cast<std::size_t>(r)] = pred(r);
    }
    auto want = oracle::normal_equations(rows, y);
    EXPECT_NEAR(w.intercept, want[0], 1e-9);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(w.weights[j], want[j + 1], 1e-9);
}

TEST(Weights, SingularDesignIsRejected) {
    std::mt19937_64 rng(13);
    auto x = random_matrix(rng, 50, 2);
    x.col(1) = x.col(0);
    EXPECT_THROW(optim::extract_weights(optim::MlpModel(2, 4, 1), x, {"a", "b"}), std::runtime_error);
}

TEST(Combine, UnitWeightIsIdentityAndOppositesCancel) {
    std::mt19937_64 rng(14);
    auto a = random_grid(rng, 3, 5);
    auto one = optim::combine({1.0}, {a});
    EXPECT_EQ(one.values(), a.values());
    auto zero = optim::combine({1.0, -1.0}, {a, a});
    for (double v : zero.values()) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(optim::combine({1.0}, {a, a}), std::invalid_argument);
}

TEST(Combine, MissingPropagates) {
    auto a = grid(1, 3, {1.0, kMissing, 3.0});
    auto b = grid(1, 3, {2.0, 2.0, 2.0});
    auto c = optim::combine({0.5, 0.5}, {a, b});
    EXPECT_EQ(c.at(0, 0), 1.5);
    EXPECT_TRUE(is_missing(c.at(0, 1)));
}

TEST(Weights, CsvHeader) {
    optim::CombinedAlphaWeights w{{"Momentum::A"}, {0.5}, 0.0};
    std::ostringstream out;
    optim::write_weights_csv(w, out);
    EXPECT_EQ(out.str(), "alpha,weight\nMomentum::A,0.5\n");
}
