#pragma once

// Linear readouts: feature construction, least-squares training and scoring.

#include "qrc/phase.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qrc {

/// TypeI reads every <Z_i>; TypeII reads their site average. Both add an intercept.
enum class ReadoutType { TypeI = 1, TypeII = 2 };

ReadoutType parse_readout(int code);

/// Relative eigenvalue cutoff of the normal matrix below which the fit falls
/// back to the minimum-norm pseudo-inverse.
inline constexpr double kPinvCutoff = 1e-10;

struct ReadoutWeights {
    Eigen::VectorXd w; // intercept first
    double residual_rms = 0.0;
    double condition = 1.0; // lambda_max / lambda_min of the normal matrix
    bool rank_deficient = false;
};

/// Prepends the constant column (TypeI) or reduces to (1, row mean) (TypeII).
Eigen::MatrixXd make_features(const Eigen::MatrixXd& z_rows, ReadoutType type);

/// argmin ||F w - y||^2 + ridge ||w||^2 via the normal equations.
ReadoutWeights train_weights(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                             double ridge = 0.0);

Eigen::VectorXd predict(const ReadoutWeights& weights, const Eigen::MatrixXd& features);

/// sum (target - predicted)^2 / sum target^2.
double nmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target);

struct StmCapacity {
    double value = 0.0;     // squared Pearson correlation
    bool undefined = false; // set when either series is constant; value is then 0
};

StmCapacity stm_capacity(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target);

/// One time step as seen by the readout.
struct FeatureRecord {
    int step = 0;
    Phase phase = Phase::Prep;
    Eigen::VectorXd features;
    double input = 0.0;
    double target = 0.0;
};

std::vector<FeatureRecord> feature_records(const Eigen::MatrixXd& features,
                                           const Eigen::VectorXd& inputs,
                                           const Eigen::VectorXd& targets, const PhaseSplit& split);

struct ReadoutFit {
    ReadoutWeights weights;
    Eigen::VectorXd predicted; // every row, prep included
    Eigen::VectorXd test_predicted;
    Eigen::VectorXd test_target;
};

/// Trains on the train window only and predicts every row.
ReadoutFit fit_on_train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                        const PhaseSplit& split, double ridge = 0.0);

} // namespace qrc
