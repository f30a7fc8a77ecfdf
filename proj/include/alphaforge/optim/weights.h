#pragma once

#include "alphaforge/eval/alpha_series.h"
#include "alphaforge/optim/mlp.h"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaforge::optim {

/// Per-feature statistics taken from the training slice.
struct Standardizer {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> stddev;  // sample std

    /// (x - mean_j) / stddev_j for feature j; missing stays missing.
    eval::AlphaSeries apply(const eval::AlphaSeries& series, std::size_t j) const;
};

struct AlphaDataset {
    Dataset data;
    Standardizer scaler;
};

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pools (date, ticker) rows where every feature and the target are present.
/// Features are standardized with training statistics; the same transform is
/// applied to validation rows. Throws DatasetError when a set has no usable rows
/// or a feature has zero training variance.
AlphaDataset build_dataset(const std::vector<std::string>& names, const std::vector<eval::AlphaSeries>& train_alphas,
                           const eval::AlphaSeries& train_target, const std::vector<eval::AlphaSeries>& val_alphas,
                           const eval::AlphaSeries& val_target);

struct CombinedAlphaWeights {
    std::vector<std::string> ids;
    std::vector<double> weights;
    double intercept = 0.0;
};

/// Least-squares fit (with intercept) of the model's predictions on `x`; the slopes
/// are the per-alpha weights. Throws when the design matrix is rank deficient.
CombinedAlphaWeights extract_weights(const MlpModel& model, const Eigen::MatrixXd& x,
                                     const std::vector<std::string>& ids);

/// Pointwise sum of w_j * alpha_j; missing when any component is missing.
eval::AlphaSeries combine(const std::vector<double>& weights, const std::vector<eval::AlphaSeries>& alphas,
                          std::string source = "combined");

/// CSV `alpha,weight`.
void write_weights_csv(const CombinedAlphaWeights& w, std::ostream& out);

}  // namespace alphaforge::optim
