#include "icdsel/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icdsel/errors.hpp"
#include "icdsel/kernels.hpp"

namespace icdsel::neural {

namespace {

// softmax with max subtraction, in place
void softmax_row(double* v, int n) {
    double mx = v[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, v[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - mx);
        sum += v[i];
    }
    for (int i = 0; i < n; ++i) v[i] /= sum;
}

}  // namespace

std::vector<double> gumbel_softmax_sample(std::span<const double> logits, double temperature,
                                          Rng& rng) {
    std::vector<double> m(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i)
        m[i] = (logits[i] + rng.gumbel()) / temperature;
    softmax_row(m.data(), static_cast<int>(m.size()));
    return m;
}

double temperature_at(int epoch, int epochs, double t_start, double t_end) {
    if (epochs <= 1 || epoch >= epochs - 1) return t_end;
    if (epoch <= 0) return t_start;
    const double frac = static_cast<double>(epoch) / (epochs - 1);
    return t_start * std::pow(t_end / t_start, frac);
}

SelectionResult cae_train(const BinaryMatrix& x_train, const CaeConfig& cfg,
                          CaeDiagnostics* diagnostics) {
    const int n_features = x_train.n_cols;
    const int n_rows = x_train.n_rows;
    const int nb = cfg.n_best;
    if (!cfg.feature_weights.empty() &&
        static_cast<int>(cfg.feature_weights.size()) != n_features)
        throw DimensionMismatch("feature_weights length vs n_features");

    Matrix logits(nb, n_features);
    {
        Rng rng(derive_seed(cfg.seed, "cae.logits"));
        for (auto& v : logits.data) v = rng.uniform(-cfg.logit_init, cfg.logit_init);
    }
    nn::MlpModel decoder =
        nn::make_mlp(nb, cfg.decoder_hidden, n_features, nn::Activation::LeakyRelu,
                     nn::Activation::Sigmoid, 0.0, derive_seed(cfg.seed, "cae.decoder"));

    nn::TrainConfig loss_cfg;
    loss_cfg.loss = cfg.feature_weights.empty() ? nn::LossKind::Bce : nn::LossKind::WeightedBce;
    loss_cfg.per_output_weights = cfg.feature_weights;

    nn::AdamParams adam;
    nn::AdamOptimizer decoder_opt(decoder, adam);
    Matrix logit_m(nb, n_features), logit_v(nb, n_features);
    long adam_t = 0;

    Rng shuffle_rng(derive_seed(cfg.seed, "cae.shuffle"));
    Rng gumbel_rng(derive_seed(cfg.seed, "cae.gumbel"));
    std::vector<int> order(static_cast<std::size_t>(n_rows));
    std::iota(order.begin(), order.end(), 0);

    CaeDiagnostics diag;
    nn::Grads dec_grads = nn::zero_grads(decoder);
    Matrix mix(nb, n_features);       // sampled selector rows
    Matrix dmix(nb, n_features);      // gradient wrt mix
    Matrix dlogits(nb, n_features);

    const auto mean_max_prob = [&](double temperature) {
        double total = 0.0;
        std::vector<double> row(static_cast<std::size_t>(n_features));
        for (int j = 0; j < nb; ++j) {
            const double* lr = logits.row_ptr(j);
            for (int f = 0; f < n_features; ++f) row[static_cast<std::size_t>(f)] = lr[f] / temperature;
            softmax_row(row.data(), n_features);
            total += *std::max_element(row.begin(), row.end());
        }
        return total / nb;
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double temperature = temperature_at(epoch, cfg.epochs, cfg.t_start, cfg.t_end);
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (int start = 0; start < n_rows; start += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, n_rows - start);
            std::vector<int> rows(order.begin() + start, order.begin() + start + bs);
            const Matrix xb = x_train.dense_block(rows, {});

            // one concrete sample per neuron per batch
            for (int j = 0; j < nb; ++j) {
                const double* lr = logits.row_ptr(j);
                double* mr = mix.row_ptr(j);
                for (int f = 0; f < n_features; ++f)
                    mr[f] = (lr[f] + gumbel_rng.gumbel()) / temperature;
                softmax_row(mr, n_features);
            }

            // encoder: u = x . m_j per neuron
            Matrix u(bs, nb);
            kernels::gemm_nt(xb.data.data(), mix.data.data(), u.data.data(), bs, n_features, nb);

            Matrix du;
            const double loss = nn::loss_and_grad(decoder, u, xb, loss_cfg, nullptr, dec_grads, &du);
            if (!std::isfinite(loss))
                throw NonFiniteLoss("cae epoch " + std::to_string(epoch));
            epoch_loss += loss * bs;

            // through the selector: dmix = du^T x, then softmax backward
            kernels::gemm_tn(du.data.data(), xb.data.data(), dmix.data.data(), nb, bs, n_features);
            for (int j = 0; j < nb; ++j) {
                const double* mr = mix.row_ptr(j);
                const double* gr = dmix.row_ptr(j);
                double* dl = dlogits.row_ptr(j);
                double dot = 0.0;
                for (int f = 0; f < n_features; ++f) dot += mr[f] * gr[f];
                const double inv_t = 1.0 / temperature;
                for (int f = 0; f < n_features; ++f) dl[f] = inv_t * mr[f] * (gr[f] - dot);
            }

            decoder_opt.apply(decoder, dec_grads, cfg.learning_rate);
            ++adam_t;
            const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam_t));
            for (std::size_t i = 0; i < logits.data.size(); ++i) {
                const double g = dlogits.data[i];
                logit_m.data[i] = adam.beta1 * logit_m.data[i] + (1.0 - adam.beta1) * g;
                logit_v.data[i] = adam.beta2 * logit_v.data[i] + (1.0 - adam.beta2) * g * g;
                logits.data[i] -= cfg.learning_rate * (logit_m.data[i] / bc1) /
                                  (std::sqrt(logit_v.data[i] / bc2) + adam.eps);
            }
        }
        diag.loss.push_back(epoch_loss / n_rows);
        diag.temperature.push_back(temperature);
        diag.mean_max_prob.push_back(mean_max_prob(temperature));
    }

    // noise-free selection: argmax of each neuron's logits (ties to the lower
    // index); merge duplicates
    std::vector<int> argmax(static_cast<std::size_t>(nb));
    std::vector<double> final_prob(static_cast<std::size_t>(nb));
    std::vector<double> scores(static_cast<std::size_t>(n_features), 0.0);
    {
        std::vector<double> row(static_cast<std::size_t>(n_features));
        const double temperature = cfg.epochs > 0 ? cfg.t_end : cfg.t_start;
        for (int j = 0; j < nb; ++j) {
            const double* lr = logits.row_ptr(j);
            int best = 0;
            for (int f = 1; f < n_features; ++f)
                if (lr[f] > lr[best]) best = f;
            argmax[static_cast<std::size_t>(j)] = best;
            for (int f = 0; f < n_features; ++f) row[static_cast<std::size_t>(f)] = lr[f] / temperature;
            softmax_row(row.data(), n_features);
            final_prob[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(best)];
            for (int f = 0; f < n_features; ++f)
                scores[static_cast<std::size_t>(f)] =
                    std::max(scores[static_cast<std::size_t>(f)], row[static_cast<std::size_t>(f)]);
        }
    }
    std::vector<int> neuron_order(static_cast<std::size_t>(nb));
    std::iota(neuron_order.begin(), neuron_order.end(), 0);
    std::stable_sort(neuron_order.begin(), neuron_order.end(), [&](int a, int b) {
        if (final_prob[static_cast<std::size_t>(a)] != final_prob[static_cast<std::size_t>(b)])
            return final_prob[static_cast<std::size_t>(a)] > final_prob[static_cast<std::size_t>(b)];
        return a < b;
    });
    SelectionResult r;
    r.method = cfg.feature_weights.empty() ? "cae" : "cae-weighted";
    r.seed = cfg.seed;
    std::vector<char> seen(static_cast<std::size_t>(n_features), 0);
    for (const int j : neuron_order) {
        const int f = argmax[static_cast<std::size_t>(j)];
        if (seen[static_cast<std::size_t>(f)]) {
            ++diag.duplicates_merged;
            continue;
        }
        seen[static_cast<std::size_t>(f)] = 1;
        r.selected.push_back(f);
    }
    r.scores = std::move(scores);
    r.parameters["n_best"] = nb;
    r.parameters["learning_rate"] = cfg.learning_rate;
    r.parameters["batch_size"] = cfg.batch_size;
    r.parameters["epochs"] = cfg.epochs;
    r.parameters["decoder_hidden"] = cfg.decoder_hidden;
    r.parameters["t_start"] = cfg.t_start;
    r.parameters["t_end"] = cfg.t_end;
    r.parameters["weighted"] = !cfg.feature_weights.empty();
    r.diagnostics["duplicates_merged"] = diag.duplicates_merged;
    r.diagnostics["final_loss"] = diag.loss.empty() ? 0.0 : diag.loss.back();
    r.diagnostics["mean_max_prob_first"] = diag.mean_max_prob.empty() ? 0.0 : diag.mean_max_prob.front();
    r.diagnostics["mean_max_prob_final"] = diag.mean_max_prob.empty() ? 0.0 : diag.mean_max_prob.back();
    if (diagnostics) *diagnostics = std::move(diag);
    return r;
}

double aefs_loss_and_grad(const nn::MlpModel& model, const Matrix& x, double alpha, double beta,
                          nn::Grads& grads) {
    nn::TrainConfig cfg;
    cfg.loss = nn::LossKind::SquaredError;
    double loss = nn::loss_and_grad(model, x, x, cfg, nullptr, grads);
    const Matrix& w1 = model.layers[0].w;
    const Matrix& w2 = model.layers[1].w;
    for (int i = 0; i < w1.rows; ++i) {
        const double* row = w1.row_ptr(i);
        double norm = 0.0;
        for (int j = 0; j < w1.cols; ++j) norm += row[j] * row[j];
        norm = std::sqrt(norm);
        loss += alpha * norm;
        double* g = grads.dw[0].row_ptr(i);
        if (norm > 0.0) {
            // subgradient at zero rows is 0
            for (int j = 0; j < w1.cols; ++j) g[j] += alpha * row[j] / norm;
        }
    }
    for (std::size_t i = 0; i < w1.data.size(); ++i) {
        loss += 0.5 * beta * w1.data[i] * w1.data[i];
        grads.dw[0].data[i] += beta * w1.data[i];
    }
    for (std::size_t i = 0; i < w2.data.size(); ++i) {
        loss += 0.5 * beta * w2.data[i] * w2.data[i];
        grads.dw[1].data[i] += beta * w2.data[i];
    }
    return loss;
}

SelectionResult aefs_train(const BinaryMatrix& x_train, const AefsConfig& cfg) {
    const int n_features = x_train.n_cols;
    const int hidden = cfg.hidden > 0 ? cfg.hidden : cfg.n_best;
    nn::MlpModel model = nn::make_mlp(n_features, {hidden}, n_features, nn::Activation::Sigmoid,
                                      nn::Activation::Linear, 0.0, derive_seed(cfg.seed, "aefs"));
    nn::AdamParams adam;
    nn::AdamOptimizer opt(model, adam);
    nn::Grads grads = nn::zero_grads(model);

    Rng shuffle_rng(derive_seed(cfg.seed, "aefs.shuffle"));
    std::vector<int> order(static_cast<std::size_t>(x_train.n_rows));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> history;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (int start = 0; start < x_train.n_rows; start += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, x_train.n_rows - start);
            std::vector<int> rows(order.begin() + start, order.begin() + start + bs);
            const Matrix xb = x_train.dense_block(rows, {});
            const double loss = aefs_loss_and_grad(model, xb, cfg.alpha, cfg.beta, grads);
            if (!std::isfinite(loss)) throw NonFiniteLoss("aefs epoch " + std::to_string(epoch));
            opt.apply(model, grads, cfg.learning_rate);
            epoch_loss += loss * bs;
        }
        history.push_back(epoch_loss / x_train.n_rows);
    }

    std::vector<double> scores(static_cast<std::size_t>(n_features), 0.0);
    const Matrix& w1 = model.layers[0].w;
    for (int i = 0; i < n_features; ++i) {
        const double* row = w1.row_ptr(i);
        double norm = 0.0;
        for (int j = 0; j < w1.cols; ++j) norm += row[j] * row[j];
        scores[static_cast<std::size_t>(i)] = std::sqrt(norm);
    }
    SelectionResult r;
    r.method = "aefs";
    r.seed = cfg.seed;
    r.scores = scores;
    r.selected = rank_descending(scores);
    if (static_cast<int>(r.selected.size()) > cfg.n_best)
        r.selected.resize(static_cast<std::size_t>(cfg.n_best));
    r.parameters["alpha"] = cfg.alpha;
    r.parameters["beta"] = cfg.beta;
    r.parameters["hidden"] = hidden;
    r.parameters["n_best"] = cfg.n_best;
    r.parameters["epochs"] = cfg.epochs;
    r.parameters["batch_size"] = cfg.batch_size;
    r.parameters["learning_rate"] = cfg.learning_rate;
    r.diagnostics["final_loss"] = history.empty() ? 0.0 : history.back();
    return r;
}

}  // namespace icdsel::neural
