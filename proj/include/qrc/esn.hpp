#pragma once

// Echo-state network baseline whose update can mix states from 1, {1,3} or
// {1,3,5} steps back:
//   x_k = tanh(W (x_{k-1} [+ x_{k-3}] [+ x_{k-5}]) + w_in s_k)

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <utility>

namespace qrc {

enum class EsnVariant { Esn1 = 1, Esn3 = 3, Esn5 = 5 };

std::string to_string(EsnVariant v);
EsnVariant parse_esn_variant(int lag);

struct EsnConfig {
    int n_nodes = 6;
    EsnVariant variant = EsnVariant::Esn1;
    double w_scale = 0.4;    // W_ij ~ U[0, w_scale]
    double w_in_scale = 0.4; // w_in,i ~ U[0, w_in_scale]
    std::uint64_t weight_seed = 1;

    void validate() const;
};

struct EsnWeights {
    Eigen::MatrixXd w;
    Eigen::VectorXd w_in;
};

/// Depends on n_nodes, scales and weight_seed only, so every variant shares the draw.
EsnWeights sample_esn_weights(const EsnConfig& config);

inline constexpr int kEsnHistory = 5;

/// history[0] = x_{k-1}, ..., history[4] = x_{k-5}.
struct EsnState {
    std::array<Eigen::VectorXd, kEsnHistory> history;

    static EsnState zeros(int n_nodes);
};

std::pair<EsnState, Eigen::VectorXd> esn_step(const EsnState& state, double s_k,
                                              EsnVariant variant, const EsnWeights& weights);

/// Node states per step with a leading constant-1 column, from a zero history.
Eigen::MatrixXd run_esn(const EsnConfig& config, const Eigen::VectorXd& inputs);

/// Same, from an explicit starting history and weights.
Eigen::MatrixXd run_esn(const EsnConfig& config, const EsnWeights& weights, EsnState state,
                        const Eigen::VectorXd& inputs);

} // namespace qrc
