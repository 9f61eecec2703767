#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/nn.hpp"
#include "icdsel/selection.hpp"

namespace icdsel::neural {

// One concrete selector draw: softmax((logits + g) / temperature) with g
// i.i.d. Gumbel(0,1). Entries are positive and sum to 1.
std::vector<double> gumbel_softmax_sample(std::span<const double> logits, double temperature,
                                          Rng& rng);

// Exponential annealing from t_start to t_end with exact endpoints.
double temperature_at(int epoch, int epochs, double t_start, double t_end);

struct CaeConfig {
    int n_best = 100;
    double learning_rate = 0.001;
    int batch_size = 64;
    int epochs = 500;
    std::vector<int> decoder_hidden = {64, 64};
    std::vector<double> feature_weights;  // empty = unweighted BCE
    double t_start = 20.0;
    double t_end = 0.01;
    double logit_init = 0.01;  // uniform(-logit_init, logit_init)
    std::uint64_t seed = 0;
};

struct CaeDiagnostics {
    std::vector<double> loss;           // per epoch
    std::vector<double> temperature;    // per epoch
    std::vector<double> mean_max_prob;  // per epoch, noise-free softmax(logits/T)
    int duplicates_merged = 0;
};

// Concrete autoencoder: n_best selector neurons feed an MLP decoder trained
// to reconstruct all features under (optionally depth-weighted) BCE. After
// training each neuron selects argmax of its logits; duplicate argmax columns
// merge, so fewer than n_best features may come back.
SelectionResult cae_train(const BinaryMatrix& x_train, const CaeConfig& cfg,
                          CaeDiagnostics* diagnostics = nullptr);

struct AefsConfig {
    double alpha = 0.001;  // reconstruction / row-sparsity trade-off
    double beta = 0.1;     // weight decay
    int hidden = 0;        // 0 = n_best
    int n_best = 100;
    int epochs = 200;
    int batch_size = 256;
    double learning_rate = 0.001;
    std::uint64_t seed = 0;
};

// Single-hidden-layer autoencoder with a row-wise group-sparsity penalty on
// the first layer; feature i scores ||W1 row i||_2.
SelectionResult aefs_train(const BinaryMatrix& x_train, const AefsConfig& cfg);

// Full AEFS objective (reconstruction + row sparsity + weight decay) and its
// gradient, for a 2-layer model. Exposed so the gradient can be checked
// against finite differences.
double aefs_loss_and_grad(const nn::MlpModel& model, const Matrix& x, double alpha, double beta,
                          nn::Grads& grads);

}  // namespace icdsel::neural
