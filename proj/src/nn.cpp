#include "icdsel/nn.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "icdsel/errors.hpp"
#include "icdsel/kernels.hpp"

namespace icdsel::nn {

namespace {

double activate(double z, Activation act, double slope) {
    switch (act) {
        case Activation::LeakyRelu: return z >= 0.0 ? z : slope * z;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Linear: return z;
    }
    return z;
}

// derivative expressed through the activation value (enough for this menu)
double activate_grad(double a, Activation act, double slope) {
    switch (act) {
        case Activation::LeakyRelu: return a >= 0.0 ? 1.0 : slope;
        case Activation::Sigmoid: return a * (1.0 - a);
        case Activation::Linear: return 1.0;
    }
    return 1.0;
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Linear: return "linear";
    }
    return "?";
}

Activation activation_from(const std::string& s) {
    if (s == "leaky_relu") return Activation::LeakyRelu;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "linear") return Activation::Linear;
    throw MalformedRow("unknown activation '" + s + "'");
}

}  // namespace

void MlpModel::validate() const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Layer& l = layers[i];
        if (l.w.cols != static_cast<int>(l.b.size()))
            throw DimensionMismatch("layer " + std::to_string(i) + " bias length");
        if (i > 0 && layers[i - 1].w.cols != l.w.rows)
            throw DimensionMismatch("layer " + std::to_string(i) + " input width");
        for (const double v : l.w.data)
            if (!std::isfinite(v)) throw NonFiniteLoss("non-finite weight in layer " + std::to_string(i));
    }
}

MlpModel make_mlp(int input_dim, const std::vector<int>& hidden, int output_dim,
                  Activation hidden_act, Activation output_act, double hidden_dropout,
                  std::uint64_t seed) {
    MlpModel model;
    Rng rng(derive_seed(seed, "init"));
    int in = input_dim;
    std::vector<int> dims = hidden;
    dims.push_back(output_dim);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const int out = dims[i];
        Layer l;
        l.w = Matrix(in, out);
        const double a = std::sqrt(6.0 / (in + out));
        for (auto& v : l.w.data) v = rng.uniform(-a, a);
        l.b.assign(static_cast<std::size_t>(out), 0.0);
        const bool is_output = (i + 1 == dims.size());
        l.act = is_output ? output_act : hidden_act;
        l.dropout = is_output ? 0.0 : hidden_dropout;
        model.layers.push_back(std::move(l));
        in = out;
    }
    return model;
}

Matrix forward(const MlpModel& model, const Matrix& batch, Mode mode, Rng* rng,
               ForwardCache* cache) {
    if (batch.cols != model.input_dim())
        throw DimensionMismatch("batch width " + std::to_string(batch.cols) + " vs input dim " +
                                std::to_string(model.input_dim()));
    if (cache) {
        cache->acts.clear();
        cache->masks.clear();
        cache->acts.push_back(batch);
        cache->masks.resize(model.layers.size());
    }
    Matrix a = batch;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const Layer& l = model.layers[li];
        Matrix z(a.rows, l.w.cols);
        kernels::gemm_nn(a.data.data(), l.w.data.data(), z.data.data(), a.rows, a.cols, l.w.cols);
        for (int r = 0; r < z.rows; ++r) {
            double* zr = z.row_ptr(r);
            for (int c = 0; c < z.cols; ++c) zr[c] = activate(zr[c] + l.b[static_cast<std::size_t>(c)], l.act, l.leaky_slope);
        }
        if (l.dropout > 0.0 && mode == Mode::Train) {
            Matrix mask(z.rows, z.cols);
            if (l.dropout >= 1.0) {
                // degenerate rate: zero everything, no 1/(1-p) blowup
            } else {
                const double keep = 1.0 - l.dropout;
                const double scale = 1.0 / keep;
                for (auto& mv : mask.data) mv = (rng && rng->uniform() < keep) ? scale : 0.0;
            }
            for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] *= mask.data[i];
            if (cache) cache->masks[li] = std::move(mask);
        }
        if (cache) cache->acts.push_back(z);
        a = std::move(z);
    }
    return a;
}

Grads zero_grads(const MlpModel& model) {
    Grads g;
    for (const Layer& l : model.layers) {
        g.dw.emplace_back(l.w.rows, l.w.cols);
        g.db.emplace_back(l.b.size(), 0.0);
    }
    return g;
}

namespace {

const std::vector<double>& output_weights(const TrainConfig& cfg, int out_dim,
                                          std::vector<double>& fallback) {
    if (cfg.loss == LossKind::WeightedBce || !cfg.per_output_weights.empty()) {
        if (static_cast<int>(cfg.per_output_weights.size()) != out_dim)
            throw DimensionMismatch("per_output_weights length " +
                                    std::to_string(cfg.per_output_weights.size()) + " vs output dim " +
                                    std::to_string(out_dim));
        return cfg.per_output_weights;
    }
    fallback.assign(static_cast<std::size_t>(out_dim), 1.0);
    return fallback;
}

}  // namespace

double loss_value(const Matrix& probs, const Matrix& targets, const TrainConfig& cfg) {
    probs.require(targets.rows, targets.cols, "loss probs/targets");
    std::vector<double> ones;
    const auto& w = output_weights(cfg, probs.cols, ones);
    double total = 0.0;
    for (int r = 0; r < probs.rows; ++r) {
        const double* p = probs.row_ptr(r);
        const double* t = targets.row_ptr(r);
        for (int c = 0; c < probs.cols; ++c) {
            if (cfg.loss == LossKind::SquaredError) {
                const double d = p[c] - t[c];
                total += 0.5 * w[static_cast<std::size_t>(c)] * d * d;
            } else {
                const double pc = std::clamp(p[c], kProbEps, 1.0 - kProbEps);
                total += w[static_cast<std::size_t>(c)] *
                         (-t[c] * std::log(pc) - (1.0 - t[c]) * std::log(1.0 - pc));
            }
        }
    }
    return total / probs.rows;
}

double loss_and_grad(const MlpModel& model, const Matrix& batch, const Matrix& targets,
                     const TrainConfig& cfg, Rng* dropout_rng, Grads& grads,
                     Matrix* input_grad) {
    ForwardCache cache;
    const Mode mode = dropout_rng ? Mode::Train : Mode::Eval;
    Matrix probs = forward(model, batch, mode, dropout_rng, &cache);
    const double loss = loss_value(probs, targets, cfg);

    std::vector<double> ones;
    const auto& w = output_weights(cfg, probs.cols, ones);
    const double inv_m = 1.0 / batch.rows;

    // dL/d(output activation), clamp-aware for the BCE variants
    Matrix delta(probs.rows, probs.cols);
    for (int r = 0; r < probs.rows; ++r) {
        const double* p = probs.row_ptr(r);
        const double* t = targets.row_ptr(r);
        double* d = delta.row_ptr(r);
        for (int c = 0; c < probs.cols; ++c) {
            const double wc = w[static_cast<std::size_t>(c)];
            if (cfg.loss == LossKind::SquaredError) {
                d[c] = wc * (p[c] - t[c]) * inv_m;
            } else if (p[c] <= kProbEps || p[c] >= 1.0 - kProbEps) {
                d[c] = 0.0;  // clamped: the computed loss is flat in p here
            } else {
                d[c] = wc * (p[c] - t[c]) / (p[c] * (1.0 - p[c])) * inv_m;
            }
        }
    }

    for (int li = static_cast<int>(model.layers.size()) - 1; li >= 0; --li) {
        const Layer& l = model.layers[static_cast<std::size_t>(li)];
        const Matrix& a_out = cache.acts[static_cast<std::size_t>(li) + 1];
        const Matrix& a_in = cache.acts[static_cast<std::size_t>(li)];
        const Matrix& mask = cache.masks[static_cast<std::size_t>(li)];

        // through dropout, then the activation
        if (mask.rows > 0)
            for (std::size_t i = 0; i < delta.data.size(); ++i) delta.data[i] *= mask.data[i];
        if (mask.rows > 0 && l.act != Activation::Linear) {
            // a_out has the mask folded in; recover pre-dropout activation for
            // the derivative where needed
            for (int r = 0; r < delta.rows; ++r) {
                double* d = delta.row_ptr(r);
                const double* ao = a_out.row_ptr(r);
                const double* mk = mask.row_ptr(r);
                for (int c = 0; c < delta.cols; ++c) {
                    const double a_pre = mk[c] != 0.0 ? ao[c] / mk[c] : 0.0;
                    d[c] *= activate_grad(a_pre, l.act, l.leaky_slope);
                }
            }
        } else if (l.act != Activation::Linear) {
            for (int r = 0; r < delta.rows; ++r) {
                double* d = delta.row_ptr(r);
                const double* ao = a_out.row_ptr(r);
                for (int c = 0; c < delta.cols; ++c) d[c] *= activate_grad(ao[c], l.act, l.leaky_slope);
            }
        }

        Matrix& dw = grads.dw[static_cast<std::size_t>(li)];
        kernels::gemm_tn(a_in.data.data(), delta.data.data(), dw.data.data(), a_in.cols,
                         a_in.rows, delta.cols);
        auto& db = grads.db[static_cast<std::size_t>(li)];
        std::fill(db.begin(), db.end(), 0.0);
        for (int r = 0; r < delta.rows; ++r) {
            const double* d = delta.row_ptr(r);
            for (int c = 0; c < delta.cols; ++c) db[static_cast<std::size_t>(c)] += d[c];
        }

        if (li > 0 || input_grad) {
            Matrix prev(delta.rows, l.w.rows);
            kernels::gemm_nt(delta.data.data(), l.w.data.data(), prev.data.data(), delta.rows,
                             delta.cols, l.w.rows);
            if (li == 0) {
                *input_grad = std::move(prev);
            } else {
                delta = std::move(prev);
            }
        }
    }
    return loss;
}

AdamOptimizer::AdamOptimizer(const MlpModel& model, AdamParams params) : params_(params) {
    for (const Layer& l : model.layers) {
        mw_.emplace_back(l.w.data.size(), 0.0);
        vw_.emplace_back(l.w.data.size(), 0.0);
        mb_.emplace_back(l.b.size(), 0.0);
        vb_.emplace_back(l.b.size(), 0.0);
    }
}

void AdamOptimizer::apply(MlpModel& model, const Grads& grads, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(params_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(params_.beta2, static_cast<double>(t_));
    auto update = [&](double* prm, const double* grd, std::vector<double>& m,
                      std::vector<double>& v) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] = params_.beta1 * m[i] + (1.0 - params_.beta1) * grd[i];
            v[i] = params_.beta2 * v[i] + (1.0 - params_.beta2) * grd[i] * grd[i];
            prm[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + params_.eps);
        }
    };
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        update(model.layers[li].w.data.data(), grads.dw[li].data.data(), mw_[li], vw_[li]);
        update(model.layers[li].b.data(), grads.db[li].data(), mb_[li], vb_[li]);
    }
}

TrainResult train(MlpModel& model, int n_rows, int target_dim, const BatchFill& fill,
                  const TrainConfig& cfg) {
    model.validate();
    TrainResult result;
    if (cfg.epochs <= 0) return result;
    Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
    Rng dropout_rng(derive_seed(cfg.seed, "dropout"));
    AdamOptimizer opt(model, cfg.adam);
    Grads grads = zero_grads(model);

    std::vector<int> order(static_cast<std::size_t>(n_rows));
    for (int i = 0; i < n_rows; ++i) order[static_cast<std::size_t>(i)] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (int start = 0; start < n_rows; start += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, n_rows - start);
            std::vector<int> rows(order.begin() + start, order.begin() + start + bs);
            Matrix x(bs, model.input_dim());
            Matrix t(bs, target_dim);
            fill(rows, x, t);
            const double loss = loss_and_grad(model, x, t, cfg, &dropout_rng, grads);
            if (!std::isfinite(loss))
                throw NonFiniteLoss("epoch " + std::to_string(epoch) + ", batch at row " +
                                    std::to_string(start));
            opt.apply(model, grads, cfg.learning_rate);
            epoch_loss += loss * bs;
        }
        result.loss_history.push_back(epoch_loss / n_rows);
    }
    return result;
}

double gradient_check(const MlpModel& model, const TrainConfig& cfg, int n_probes,
                      std::uint64_t seed) {
    Rng rng(derive_seed(seed, "gradcheck"));
    const int m = 8;
    Matrix x(m, model.input_dim());
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    Matrix t(m, model.output_dim());
    for (auto& v : t.data)
        v = (cfg.loss == LossKind::SquaredError) ? rng.uniform(-1.0, 1.0)
                                                 : static_cast<double>(rng.u64() & 1);

    MlpModel probe = model;
    for (auto& l : probe.layers) l.dropout = 0.0;  // check runs dropout-free

    Grads grads = zero_grads(probe);
    loss_and_grad(probe, x, t, cfg, nullptr, grads);

    const double h = 1e-4;
    double max_err = 0.0;
    for (int p = 0; p < n_probes; ++p) {
        const std::size_t li = static_cast<std::size_t>(rng.below(probe.layers.size()));
        Layer& layer = probe.layers[li];
        const bool pick_bias = (rng.u64() & 7) == 0;  // biases are a small slice of params
        double* slot;
        double analytic;
        if (pick_bias) {
            const std::size_t i = static_cast<std::size_t>(rng.below(layer.b.size()));
            slot = &layer.b[i];
            analytic = grads.db[li][i];
        } else {
            const std::size_t i = static_cast<std::size_t>(rng.below(layer.w.data.size()));
            slot = &layer.w.data[i];
            analytic = grads.dw[li].data[i];
        }
        const double saved = *slot;
        Grads scratch = zero_grads(probe);
        *slot = saved + h;
        const double lp = loss_and_grad(probe, x, t, cfg, nullptr, scratch);
        *slot = saved - h;
        const double lm = loss_and_grad(probe, x, t, cfg, nullptr, scratch);
        *slot = saved;
        const double fd = (lp - lm) / (2.0 * h);
        const double err = std::abs(analytic - fd) / std::max({1.0, std::abs(analytic), std::abs(fd)});
        max_err = std::max(max_err, err);
    }
    return max_err;
}

std::string save_model(const MlpModel& model) {
    nlohmann::json j;
    j["format"] = "icdsel-mlp";
    j["version"] = 1;
    auto& layers = j["layers"];
    layers = nlohmann::json::array();
    for (const Layer& l : model.layers) {
        nlohmann::json lj;
        lj["in"] = l.w.rows;
        lj["out"] = l.w.cols;
        lj["activation"] = activation_name(l.act);
        lj["dropout"] = l.dropout;
        lj["leaky_slope"] = l.leaky_slope;
        lj["w"] = l.w.data;
        lj["b"] = l.b;
        layers.push_back(std::move(lj));
    }
    return j.dump();
}

MlpModel load_model(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "icdsel-mlp")
        throw MalformedRow("not a model checkpoint");
    MlpModel model;
    for (const auto& lj : j.at("layers")) {
        Layer l;
        const int in = lj.at("in").get<int>();
        const int out = lj.at("out").get<int>();
        l.w = Matrix(in, out);
        const auto& wv = lj.at("w");
        if (static_cast<int>(wv.size()) != in * out)
            throw DimensionMismatch("checkpoint weight count");
        for (std::size_t i = 0; i < l.w.data.size(); ++i) l.w.data[i] = wv[i].get<double>();
        l.b = lj.at("b").get<std::vector<double>>();
        l.act = activation_from(lj.at("activation").get<std::string>());
        l.dropout = lj.at("dropout").get<double>();
        l.leaky_slope = lj.at("leaky_slope").get<double>();
        model.layers.push_back(std::move(l));
    }
    model.validate();
    return model;
}

}  // namespace icdsel::nn
