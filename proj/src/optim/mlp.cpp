#include "alphaforge/optim/mlp.h"

#include "alphaforge/common/csv.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace alphaforge::optim {

namespace {

double uniform_pm(std::mt19937_64& rng, double bound) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * bound;
}

struct Forward {
    Eigen::MatrixXd z;  // samples x hidden pre-activations
    Eigen::MatrixXd a;  // ReLU(z)
    Eigen::VectorXd p;  // predictions
};

Forward forward(const MlpModel& m, const Eigen::MatrixXd& x) {
    Forward f;
    f.z = (x * m.w1().transpose()).rowwise() + m.b1().transpose();
    f.a = f.z.cwiseMax(0.0);
    f.p = (f.a * m.w2().transpose()).array() + m.b2();
    return f;
}

void check_shapes(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.cols() != m.n_inputs()) throw std::invalid_argument("feature count does not match the model");
    if (x.rows() != y.size()) throw std::invalid_argument("feature and target row counts differ");
    if (x.rows() == 0) throw std::invalid_argument("empty batch");
}

}  // namespace

MlpModel::MlpModel(int n_inputs, int hidden, std::uint64_t seed) {
    if (n_inputs < 1 || hidden < 1) throw std::invalid_argument("MLP needs at least one input and one hidden unit");
    std::mt19937_64 rng(seed);
    const double b_in = 1.0 / std::sqrt(static_cast<double>(n_inputs));
    const double b_hid = 1.0 / std::sqrt(static_cast<double>(hidden));
    w1_.resize(hidden, n_inputs);
    for (int r = 0; r < hidden; ++r) {
        for (int c = 0; c < n_inputs; ++c) w1_(r, c) = uniform_pm(rng, b_in);
    }
    b1_.resize(hidden);
    for (int r = 0; r < hidden; ++r) b1_(r) = uniform_pm(rng, b_in);
    w2_.resize(hidden);
    for (int c = 0; c < hidden; ++c) w2_(c) = uniform_pm(rng, b_hid);
    b2_ = uniform_pm(rng, b_hid);
}

MlpModel::MlpModel(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::RowVectorXd w2, double b2)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2) {
    if (w1_.rows() < 1 || w1_.cols() < 1 || b1_.size() != w1_.rows() || w2_.size() != w1_.rows()) {
        throw std::invalid_argument("inconsistent MLP parameter shapes");
    }
    if (!w1_.allFinite() || !b1_.allFinite() || !w2_.allFinite() || !std::isfinite(b2_)) {
        throw std::invalid_argument("MLP parameters must be finite");
    }
}

Eigen::VectorXd MlpModel::predict(const Eigen::MatrixXd& x) const {
    if (x.cols() != n_inputs()) throw std::invalid_argument("feature count does not match the model");
    return forward(*this, x).p;
}

std::size_t MlpModel::n_parameters() const {
    return static_cast<std::size_t>(w1_.size() + b1_.size() + w2_.size() + 1);
}

std::vector<double> MlpModel::parameters() const {
    std::vector<double> p;
    p.reserve(n_parameters());
    for (int r = 0; r < w1_.rows(); ++r) {
        for (int c = 0; c < w1_.cols(); ++c) p.push_back(w1_(r, c));
    }
    for (int r = 0; r < b1_.size(); ++r) p.push_back(b1_(r));
    for (int c = 0; c < w2_.size(); ++c) p.push_back(w2_(c));
    p.push_back(b2_);
    return p;
}

void MlpModel::set_parameters(const std::vector<double>& p) {
    if (p.size() != n_parameters()) throw std::invalid_argument("parameter vector has the wrong length");
    std::size_t k = 0;
    for (int r = 0; r < w1_.rows(); ++r) {
        for (int c = 0; c < w1_.cols(); ++c) w1_(r, c) = p[k++];
    }
    for (int r = 0; r < b1_.size(); ++r) b1_(r) = p[k++];
    for (int c = 0; c < w2_.size(); ++c) w2_(c) = p[k++];
    b2_ = p[k];
}

double mse(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    check_shapes(m, x, y);
    return (m.predict(x) - y).squaredNorm() / static_cast<double>(y.size());
}

double loss(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2) {
    return mse(m, x, y) + l2 * (m.w1().squaredNorm() + m.w2().squaredNorm());
}

std::vector<double> gradient(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2) {
    check_shapes(m, x, y);
    Forward f = forward(m, x);
    const Eigen::VectorXd dp = 2.0 * (f.p - y) / static_cast<double>(y.size());
    const Eigen::RowVectorXd dw2 = dp.transpose() * f.a + 2.0 * l2 * m.w2();
    const double db2 = dp.sum();
    const Eigen::MatrixXd dz = ((dp * m.w2()).array() * (f.z.array() > 0.0).cast<double>()).matrix();
    const Eigen::MatrixXd dw1 = dz.transpose() * x + 2.0 * l2 * m.w1();
    const Eigen::VectorXd db1 = dz.colwise().sum().transpose();

    std::vector<double> g;
    g.reserve(m.n_parameters());
    for (int r = 0; r < dw1.rows(); ++r) {
        for (int c = 0; c < dw1.cols(); ++c) g.push_back(dw1(r, c));
    }
    for (int r = 0; r < db1.size(); ++r) g.push_back(db1(r));
    for (int c = 0; c < dw2.size(); ++c) g.push_back(dw2(c));
    g.push_back(db2);
    return g;
}

GradientCheck gradient_check(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                             double h, double floor) {
    const auto analytic = gradient(m, x, y, l2);
    const auto base = m.parameters();
    auto mask_of = [&](const MlpModel& probe) { return (forward(probe, x).z.array() > 0.0).eval(); };
    const auto base_mask = mask_of(m);

    GradientCheck out;
    MlpModel probe = m;
    for (std::size_t k = 0; k < base.size(); ++k) {
        auto p = base;
        p[k] = base[k] + h;
        probe.set_parameters(p);
        const double up = loss(probe, x, y, l2);
        const bool kink_up = (mask_of(probe) != base_mask).any();
        p[k] = base[k] - h;
        probe.set_parameters(p);
        const double down = loss(probe, x, y, l2);
        const bool kink_down = (mask_of(probe) != base_mask).any();
        if (kink_up || kink_down) {
            ++out.skipped_kinks;
            continue;
        }
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), floor});
        out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic[k] - numeric) / denom);
        ++out.checked;
    }
    return out;
}

void TrainConfig::validate() const {
    if (learning_rate < 0.0 || !std::isfinite(learning_rate)) throw std::invalid_argument("learning_rate must be >= 0");
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    if (l2_lambda < 0.0) throw std::invalid_argument("l2_lambda must be >= 0");
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be positive");
    if (patience < 1 || patience > max_epochs) throw std::invalid_argument("patience must lie in [1, max_epochs]");
}

TrainResult train(const MlpModel& init, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    check_shapes(init, data.x_train, data.y_train);
    const bool has_val = data.x_val.rows() > 0;
    if (has_val) check_shapes(init, data.x_val, data.y_val);

    TrainResult result{init, {}, {}, 0, false};
    MlpModel model = init;
    auto monitored = [&](const MlpModel& m) {
        return has_val ? mse(m, data.x_val, data.y_val) : mse(m, data.x_train, data.y_train);
    };
    double best = monitored(model);
    int since_best = 0;

    std::mt19937_64 rng(cfg.seed);
    const auto n = static_cast<std::size_t>(data.x_train.rows());
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, n - start);
            Eigen::MatrixXd xb(static_cast<Eigen::Index>(len), data.x_train.cols());
            Eigen::VectorXd yb(static_cast<Eigen::Index>(len));
            for (std::size_t r = 0; r < len; ++r) {
                xb.row(static_cast<Eigen::Index>(r)) = data.x_train.row(order[start + r]);
                yb(static_cast<Eigen::Index>(r)) = data.y_train(order[start + r]);
            }
            auto g = gradient(model, xb, yb, cfg.l2_lambda);
            auto p = model.parameters();
            for (std::size_t k = 0; k < p.size(); ++k) p[k] -= cfg.learning_rate * g[k];
            if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) {
                throw TrainingDiverged(epoch);
            }
            model.set_parameters(p);
        }
        const double tr = mse(model, data.x_train, data.y_train);
        if (!std::isfinite(tr)) throw TrainingDiverged(epoch);
        result.train_mse.push_back(tr);
        double watched = tr;
        if (has_val) {
            watched = mse(model, data.x_val, data.y_val);
            if (!std::isfinite(watched)) throw TrainingDiverged(epoch);
            result.val_mse.push_back(watched);
        }
        if (watched < best) {
            best = watched;
            result.model = model;
            result.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            result.stopped_early = epoch < cfg.max_epochs;
            break;
        }
    }
    return result;
}

void save_model(const MlpModel& m, std::ostream& out) {
    out << "alphaforge-mlp 1\n";
    out << "inputs " << m.n_inputs() << "\nhidden " << m.hidden() << "\nparameters";
    for (double v : m.parameters()) out << ' ' << csv::format_double(v);
    out << '\n';
}

void save_model(const MlpModel& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    save_model(m, out);
}

MlpModel load_model(std::istream& in) {
    std::string magic, key;
    int version = 0, inputs = 0, hidden = 0;
    if (!(in >> magic >> version) || magic != "alphaforge-mlp" || version != 1) {
        throw std::runtime_error("not an alphaforge-mlp version 1 checkpoint");
    }
    if (!(in >> key >> inputs) || key != "inputs" || !(in >> key >> hidden) || key != "hidden" || !(in >> key) ||
        key != "parameters") {
        throw std::runtime_error("malformed checkpoint header");
    }
    MlpModel m(inputs, hidden, 0);
    std::vector<double> p;
    std::string tok;
    while (p.size() < m.n_parameters() && in >> tok) p.push_back(csv::parse_double(tok));
    if (p.size() != m.n_parameters()) throw std::runtime_error("checkpoint has too few parameters");
    if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) {
        throw std::runtime_error("checkpoint holds non-finite parameters");
    }
    m.set_parameters(p);
    return m;
}

MlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_model(in);
}

}  // namespace alphaforge::optim
