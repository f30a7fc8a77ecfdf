#include "alphaforge/optim/weights.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"

#include <cmath>
#include <ostream>

namespace alphaforge::optim {

eval::AlphaSeries Standardizer::apply(const eval::AlphaSeries& series, std::size_t j) const {
    std::vector<double> v = series.values();
    for (double& x : v) {
        if (!is_missing(x)) x = (x - mean[j]) / stddev[j];
    }
    return series.with_values(std::move(v), series.source());
}

namespace {

struct Rows {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
};

Rows collect(const std::vector<eval::AlphaSeries>& alphas, const eval::AlphaSeries& target) {
    for (const auto& a : alphas) {
        if (!a.same_shape(target)) throw DatasetError("alpha series and target are not aligned");
    }
    Rows rows;
    for (std::size_t d = 0; d < target.n_dates(); ++d) {
        for (std::size_t t = 0; t < target.n_tickers(); ++t) {
            double y = target.at(t, d);
            if (is_missing(y)) continue;
            std::vector<double> feat(alphas.size());
            bool ok = true;
            for (std::size_t j = 0; j < alphas.size() && ok; ++j) {
                feat[j] = alphas[j].at(t, d);
                ok = !is_missing(feat[j]);
            }
            if (!ok) continue;
            rows.x.push_back(std::move(feat));
            rows.y.push_back(y);
        }
    }
    return rows;
}

void to_matrix(const Rows& rows, const Standardizer& s, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
    const auto n = static_cast<Eigen::Index>(rows.y.size());
    const auto k = static_cast<Eigen::Index>(s.mean.size());
    x.resize(n, k);
    y.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index j = 0; j < k; ++j) {
            auto uj = static_cast<std::size_t>(j);
            x(r, j) = (rows.x[static_cast<std::size_t>(r)][uj] - s.mean[uj]) / s.stddev[uj];
        }
        y(r) = rows.y[static_cast<std::size_t>(r)];
    }
}

}  // namespace

AlphaDataset build_dataset(const std::vector<std::string>& names, const std::vector<eval::AlphaSeries>& train_alphas,
                           const eval::AlphaSeries& train_target, const std::vector<eval::AlphaSeries>& val_alphas,
                           const eval::AlphaSeries& val_target) {
    if (names.size() != train_alphas.size() || names.size() != val_alphas.size()) {
        throw DatasetError("feature names and alpha lists differ in length");
    }
    if (names.empty()) throw DatasetError("no features");
    Rows train = collect(train_alphas, train_target);
    Rows val = collect(val_alphas, val_target);
    if (train.y.empty()) throw DatasetError("zero usable training rows");
    if (val.y.empty()) throw DatasetError("zero usable validation rows");

    AlphaDataset out;
    out.scaler.names = names;
    const std::size_t k = names.size();
    const auto n = static_cast<double>(train.y.size());
    out.scaler.mean.assign(k, 0.0);
    out.scaler.stddev.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double m = 0.0;
        for (const auto& row : train.x) m += row[j];
        m /= n;
        double ss = 0.0;
        for (const auto& row : train.x) ss += (row[j] - m) * (row[j] - m);
        double sd = train.y.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        if (!(sd > 0.0) || !std::isfinite(sd)) {
            throw DatasetError("feature '" + names[j] + "' has zero variance on the training rows");
        }
        out.scaler.mean[j] = m;
        out.scaler.stddev[j] = sd;
    }
    to_matrix(train, out.scaler, out.data.x_train, out.data.y_train);
    to_matrix(val, out.scaler, out.data.x_val, out.data.y_val);
    return out;
}

CombinedAlphaWeights extract_weights(const MlpModel& model, const Eigen::MatrixXd& x,
                                     const std::vector<std::string>& ids) {
    if (static_cast<Eigen::Index>(ids.size()) != x.cols()) throw std::invalid_argument("one id per feature expected");
    const Eigen::VectorXd target = model.predict(x);
    Eigen::MatrixXd design(x.rows(), x.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(x.cols()) = x;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) throw std::runtime_error("singular feature covariance; weights are not identifiable");
    const Eigen::VectorXd beta = qr.solve(target);

    CombinedAlphaWeights w;
    w.ids = ids;
    w.intercept = beta(0);
    for (Eigen::Index j = 0; j < x.cols(); ++j) w.weights.push_back(beta(j + 1));
    return w;
}

eval::AlphaSeries combine(const std::vector<double>& weights, const std::vector<eval::AlphaSeries>& alphas,
                          std::string source) {
    if (alphas.empty() || weights.size() != alphas.size()) {
        throw std::invalid_argument("combine needs one weight per alpha and at least one alpha");
    }
    for (const auto& a : alphas) {
        if (!a.same_shape(alphas.front())) throw std::invalid_argument("combined alphas are not aligned");
    }
    std::vector<double> out(alphas.front().values().size(), 0.0);
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        const auto& v = alphas[j].values();
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights[j] * v[k];
    }
    return alphas.front().with_values(std::move(out), std::move(source));
}

void write_weights_csv(const CombinedAlphaWeights& w, std::ostream& out) {
    out << "alpha,weight\n";
    for (std::size_t j = 0; j < w.ids.size(); ++j) out << w.ids[j] << ',' << csv::format_double(w.weights[j]) << '\n';
}

}  // namespace alphaforge::optim
