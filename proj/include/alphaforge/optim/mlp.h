#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace alphaforge::optim {

/// inputs -> hidden (ReLU) -> 1 (identity).
class MlpModel {
public:
    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization from `seed`.
    MlpModel(int n_inputs, int hidden = 10, std::uint64_t seed = 0);
    MlpModel(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::RowVectorXd w2, double b2);

    int n_inputs() const { return static_cast<int>(w1_.cols()); }
    int hidden() const { return static_cast<int>(w1_.rows()); }

    const Eigen::MatrixXd& w1() const { return w1_; }  // hidden x inputs
    const Eigen::VectorXd& b1() const { return b1_; }
    const Eigen::RowVectorXd& w2() const { return w2_; }  // 1 x hidden
    double b2() const { return b2_; }

    /// One prediction per row of `x` (samples x inputs).
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

    /// All parameters flattened as W1 (row-major), b1, W2, b2.
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& p);
    std::size_t n_parameters() const;

    friend bool operator==(const MlpModel& a, const MlpModel& b) { return a.parameters() == b.parameters(); }

private:
    Eigen::MatrixXd w1_;
    Eigen::VectorXd b1_;
    Eigen::RowVectorXd w2_;
    double b2_ = 0.0;
};

/// MSE + l2 * (|W1|^2 + |W2|^2); biases are not penalized.
double loss(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2);
double mse(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Analytic gradient of `loss`, flattened in `parameters()` order.
std::vector<double> gradient(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2);

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped_kinks = 0;
};

/// Compares the analytic gradient with central differences of step `h`. Parameters
/// whose perturbation flips any hidden unit's ReLU state are skipped. The relative
/// error is |a - n| / max(|a|, |n|, floor).
GradientCheck gradient_check(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                             double h = 1e-5, double floor = 1e-6);

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 32;
    double l2_lambda = 0.001;
    int max_epochs = 200;
    int patience = 20;
    std::uint64_t seed = 42;

    void validate() const;
};

struct Dataset {
    Eigen::MatrixXd x_train;
    Eigen::VectorXd y_train;
    Eigen::MatrixXd x_val;
    Eigen::VectorXd y_val;
};

struct TrainResult {
    MlpModel model;
    std::vector<double> train_mse;  // per epoch
    std::vector<double> val_mse;    // per epoch; empty without a validation set
    int best_epoch = 0;             // 1-based epoch of the returned snapshot (0 = initial)
    bool stopped_early = false;
};

class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(int epoch)
        : std::runtime_error("training diverged at epoch " + std::to_string(epoch)), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

/// Mini-batch SGD with seeded shuffling. Early stopping watches validation MSE
/// (training MSE without a validation set); the best snapshot is returned.
TrainResult train(const MlpModel& init, const Dataset& data, const TrainConfig& cfg);

void save_model(const MlpModel& m, std::ostream& out);
void save_model(const MlpModel& m, const std::filesystem::path& path);
MlpModel load_model(std::istream& in);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace alphaforge::optim
