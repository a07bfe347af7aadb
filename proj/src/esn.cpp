#include "qrc/esn.hpp"

#include "qrc/error.hpp"
#include "qrc/random.hpp"

namespace qrc {

std::string to_string(EsnVariant v)
{
    return "esn" + std::to_string(static_cast<int>(v));
}

EsnVariant parse_esn_variant(int lag)
{
    switch (lag) {
    case 1: return EsnVariant::Esn1;
    case 3: return EsnVariant::Esn3;
    case 5: return EsnVariant::Esn5;
    default: throw ConfigError("ESN variant must be 1, 3 or 5, got " + std::to_string(lag));
    }
}

void EsnConfig::validate() const
{
    if (n_nodes < 1) throw ConfigError("ESN needs at least one node");
    if (!(w_scale > 0.0) || !(w_in_scale > 0.0)) throw ConfigError("ESN scales must be positive");
}

EsnWeights sample_esn_weights(const EsnConfig& config)
{
    config.validate();
    auto engine = make_engine(config.weight_seed, Stream::EsnWeights);
    EsnWeights weights{Eigen::MatrixXd(config.n_nodes, config.n_nodes),
                       Eigen::VectorXd(config.n_nodes)};
    for (int i = 0; i < config.n_nodes; ++i)
        for (int j = 0; j < config.n_nodes; ++j)
            weights.w(i, j) = config.w_scale * uniform01(engine);
    for (int i = 0; i < config.n_nodes; ++i) weights.w_in(i) = config.w_in_scale * uniform01(engine);
    return weights;
}

EsnState EsnState::zeros(int n_nodes)
{
    EsnState s;
    for (auto& h : s.history) h = Eigen::VectorXd::Zero(n_nodes);
    return s;
}

std::pair<EsnState, Eigen::VectorXd> esn_step(const EsnState& state, double s_k,
                                              EsnVariant variant, const EsnWeights& weights)
{
    Eigen::VectorXd mixed = state.history[0];
    if (variant != EsnVariant::Esn1) mixed += state.history[2];
    if (variant == EsnVariant::Esn5) mixed += state.history[4];
    Eigen::VectorXd x = (weights.w * mixed + weights.w_in * s_k).array().tanh().matrix();

    EsnState next;
    next.history[0] = x;
    for (int h = 1; h < kEsnHistory; ++h) next.history[h] = state.history[h - 1];
    return {std::move(next), std::move(x)};
}

Eigen::MatrixXd run_esn(const EsnConfig& config, const Eigen::VectorXd& inputs)
{
    return run_esn(config, sample_esn_weights(config), EsnState::zeros(config.n_nodes), inputs);
}

Eigen::MatrixXd run_esn(const EsnConfig& config, const EsnWeights& weights, EsnState state,
                        const Eigen::VectorXd& inputs)
{
    config.validate();
    if (inputs.size() == 0) throw ConfigError("run_esn: empty input sequence");
    Eigen::MatrixXd features(inputs.size(), config.n_nodes + 1);
    features.col(0).setOnes();
    for (Eigen::Index k = 0; k < inputs.size(); ++k) {
        auto [next, x] = esn_step(state, inputs(k), config.variant, weights);
        features.row(k).tail(config.n_nodes) = x.transpose();
        state = std::move(next);
    }
    return features;
}

} // namespace qrc
