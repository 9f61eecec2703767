#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "icdsel/dense.hpp"
#include "icdsel/rng.hpp"

namespace icdsel::nn {

enum class Activation { LeakyRelu, Sigmoid, Linear };

constexpr double kDefaultLeakySlope = 0.1;
constexpr double kProbEps = 1e-7;  // probability clamp before logs

struct Layer {
    Matrix w;               // (in x out)
    std::vector<double> b;  // (out)
    Activation act = Activation::Linear;
    double dropout = 0.0;   // inverted dropout on this layer's output (train mode)
    double leaky_slope = kDefaultLeakySlope;
};

struct MlpModel {
    std::vector<Layer> layers;

    int input_dim() const { return layers.empty() ? 0 : layers.front().w.rows; }
    int output_dim() const { return layers.empty() ? 0 : layers.back().w.cols; }
    void validate() const;  // adjacent dims chain, weights finite
};

// Glorot-uniform weights, zero biases. hidden_dropout applies to every hidden
// layer, never the output.
MlpModel make_mlp(int input_dim, const std::vector<int>& hidden, int output_dim,
                  Activation hidden_act, Activation output_act, double hidden_dropout,
                  std::uint64_t seed);

enum class Mode { Train, Eval };

struct ForwardCache {
    std::vector<Matrix> acts;   // acts[0] = input, acts[i] = output of layer i-1
    std::vector<Matrix> masks;  // dropout masks (scale folded in); empty if unused
};

// Eval mode applies no dropout and no scaling (masks are inverted at train
// time). rng is only touched in train mode by layers with dropout > 0.
Matrix forward(const MlpModel& model, const Matrix& batch, Mode mode, Rng* rng = nullptr,
               ForwardCache* cache = nullptr);

enum class LossKind { Bce, WeightedBce, SquaredError };

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 64;
    int epochs = 100;
    AdamParams adam;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::Bce;
    std::vector<double> per_output_weights;  // WeightedBce / SquaredError; empty = 1s
};

struct Grads {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

Grads zero_grads(const MlpModel& model);

// Per-sample loss summed over outputs, averaged over the batch. Probabilities
// are clamped to [eps, 1-eps] before logs; gradients are exact for the
// computed (clamped) loss and the sampled dropout mask.
double loss_value(const Matrix& probs, const Matrix& targets, const TrainConfig& cfg);
double loss_and_grad(const MlpModel& model, const Matrix& batch, const Matrix& targets,
                     const TrainConfig& cfg, Rng* dropout_rng, Grads& grads,
                     Matrix* input_grad = nullptr);

// Adam over a whole model; keeps moment estimates aligned with layer storage.
class AdamOptimizer {
public:
    explicit AdamOptimizer(const MlpModel& model, AdamParams params);
    void apply(MlpModel& model, const Grads& grads, double lr);

private:
    AdamParams params_;
    std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
    long t_ = 0;
};

// Fills X (and T) for the requested rows; dims of X/T are preset by train().
using BatchFill = std::function<void(const std::vector<int>&, Matrix&, Matrix&)>;

struct TrainResult {
    std::vector<double> loss_history;  // one mean loss per epoch
};

// Deterministic given cfg.seed: fixed shuffle and dropout substreams.
TrainResult train(MlpModel& model, int n_rows, int target_dim, const BatchFill& fill,
                  const TrainConfig& cfg);

// Central finite differences (step 1e-4) on n_probes random parameters,
// dropout disabled. Returns the max relative error.
double gradient_check(const MlpModel& model, const TrainConfig& cfg, int n_probes,
                      std::uint64_t seed);

// JSON checkpoint round-trip; load validates the layer shape chain.
std::string save_model(const MlpModel& model);
MlpModel load_model(const std::string& text);

}  // namespace icdsel::nn
