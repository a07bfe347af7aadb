#include "qrc/readout.hpp"

#include "qrc/error.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <string>

namespace qrc {

ReadoutType parse_readout(int code)
{
    if (code == 1) return ReadoutType::TypeI;
    if (code == 2) return ReadoutType::TypeII;
    throw ConfigError("readout type must be 1 or 2, got " + std::to_string(code));
}

Eigen::MatrixXd make_features(const Eigen::MatrixXd& z_rows, ReadoutType type)
{
    if (z_rows.rows() == 0 || z_rows.cols() == 0)
        throw ConfigError("make_features: empty measurement matrix");
    const Eigen::Index rows = z_rows.rows();
    if (type == ReadoutType::TypeI) {
        Eigen::MatrixXd f(rows, z_rows.cols() + 1);
        f.col(0).setOnes();
        f.rightCols(z_rows.cols()) = z_rows;
        return f;
    }
    Eigen::MatrixXd f(rows, 2);
    f.col(0).setOnes();
    f.col(1) = z_rows.rowwise().mean();
    return f;
}

ReadoutWeights train_weights(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                             double ridge)
{
    if (features.rows() != targets.size())
        throw DimensionError("train_weights: " + std::to_string(features.rows())
                             + " feature rows vs " + std::to_string(targets.size()) + " targets");
    if (features.rows() < features.cols() || features.cols() == 0)
        throw DimensionError("train_weights: need at least as many rows as features");
    if (!(ridge >= 0.0)) throw ConfigError("train_weights: ridge must be non-negative");
    if (!features.allFinite() || !targets.allFinite())
        throw NumericalError("train_weights: non-finite features or targets");

    const Eigen::Index p = features.cols();
    Eigen::MatrixXd normal = features.transpose() * features;
    normal.diagonal().array() += ridge;
    const Eigen::VectorXd rhs = features.transpose() * targets;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
    const double lmax = eig.eigenvalues()(p - 1);
    const double lmin = eig.eigenvalues()(0);

    ReadoutWeights out;
    out.condition = lmin > 0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (lmax <= 0.0 || lmin <= kPinvCutoff * lmax) {
        // Minimum-norm solution: drop directions below the cutoff.
        out.rank_deficient = true;
        const double cut = kPinvCutoff * lmax;
        const Eigen::MatrixXd& v = eig.eigenvectors();
        Eigen::VectorXd proj = v.transpose() * rhs;
        for (Eigen::Index k = 0; k < p; ++k) {
            const double lambda = eig.eigenvalues()(k);
            proj(k) = lambda > cut && lambda > 0 ? proj(k) / lambda : 0.0;
        }
        out.w = v * proj;
    } else {
        out.w = normal.llt().solve(rhs);
    }
    out.residual_rms = std::sqrt((features * out.w - targets).squaredNorm()
                                 / static_cast<double>(targets.size()));
    return out;
}

Eigen::VectorXd predict(const ReadoutWeights& weights, const Eigen::MatrixXd& features)
{
    if (features.cols() != weights.w.size())
        throw DimensionError("predict: " + std::to_string(features.cols())
                             + " feature columns vs " + std::to_string(weights.w.size())
                             + " weights");
    return features * weights.w;
}

double nmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target)
{
    if (predicted.size() != target.size() || target.size() == 0)
        throw DimensionError("nmse: lengths must match and be nonzero");
    const double denom = target.squaredNorm();
    if (denom == 0.0) throw ConfigError("nmse: target is identically zero");
    return (target - predicted).squaredNorm() / denom;
}

StmCapacity stm_capacity(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target)
{
    if (predicted.size() != target.size() || target.size() < 2)
        throw DimensionError("stm_capacity: need two equal-length series of length >= 2");
    const Eigen::VectorXd a = predicted.array() - predicted.mean();
    const Eigen::VectorXd b = target.array() - target.mean();
    const double saa = a.squaredNorm();
    const double sbb = b.squaredNorm();
    // Constant up to rounding of the mean subtraction.
    constexpr double rel = 1e-28;
    if (saa <= rel * predicted.squaredNorm() || sbb <= rel * target.squaredNorm()
        || saa == 0.0 || sbb == 0.0)
        return {0.0, true};
    const double sab = a.dot(b);
    return {std::min(1.0, sab * sab / (saa * sbb)), false};
}

std::vector<FeatureRecord> feature_records(const Eigen::MatrixXd& features,
                                           const Eigen::VectorXd& inputs,
                                           const Eigen::VectorXd& targets, const PhaseSplit& split)
{
    if (features.rows() != inputs.size() || inputs.size() != targets.size()
        || features.rows() != split.total())
        throw DimensionError("feature_records: row counts disagree with the phase split");
    std::vector<FeatureRecord> records;
    records.reserve(static_cast<std::size_t>(features.rows()));
    for (int k = 0; k < features.rows(); ++k)
        records.push_back({k, split.phase_of(k), features.row(k).transpose(), inputs(k), targets(k)});
    return records;
}

ReadoutFit fit_on_train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                        const PhaseSplit& split, double ridge)
{
    if (features.rows() != split.total() || targets.size() != split.total())
        throw DimensionError("fit_on_train: expected " + std::to_string(split.total()) + " rows");
    ReadoutFit fit;
    fit.weights = train_weights(features.middleRows(split.train_begin(), split.n_fb),
                                targets.segment(split.train_begin(), split.n_fb), ridge);
    fit.predicted = predict(fit.weights, features);
    fit.test_predicted = fit.predicted.segment(split.test_begin(), split.n_test);
    fit.test_target = targets.segment(split.test_begin(), split.n_test);
    return fit;
}

} // namespace qrc
