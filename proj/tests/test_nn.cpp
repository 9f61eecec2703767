#include <doctest.h>

#include <cmath>

#include "icdsel/errors.hpp"
#include "icdsel/nn.hpp"

using namespace icdsel;
using namespace icdsel::nn;

namespace {

Matrix constant(int r, int c, double v) { return Matrix(r, c, v); }

}  // namespace

TEST_CASE("forward: zero weights + sigmoid output gives 0.5 everywhere") {
    MlpModel m = make_mlp(4, {}, 3, Activation::Sigmoid, Activation::Sigmoid, 0.0, 1);
    for (auto& v : m.layers[0].w.data) v = 0.0;
    const Matrix out = forward(m, constant(5, 4, 0.7), Mode::Eval);
    for (const double v : out.data) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("forward: identity linear layer reproduces the input") {
    MlpModel m = make_mlp(3, {}, 3, Activation::Linear, Activation::Linear, 0.0, 1);
    for (auto& v : m.layers[0].w.data) v = 0.0;
    for (int i = 0; i < 3; ++i) m.layers[0].w(i, i) = 1.0;
    Matrix x(2, 3);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] = 0.1 * static_cast<double>(i) - 0.2;
    const Matrix out = forward(m, x, Mode::Eval);
    for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(out.data[i] == doctest::Approx(x.data[i]));
}

TEST_CASE("forward: dropout rate 1.0 zeroes hidden activations in train mode") {
    MlpModel m = make_mlp(4, {6}, 2, Activation::LeakyRelu, Activation::Linear, 1.0, 1);
    Rng rng(3);
    ForwardCache cache;
    forward(m, constant(3, 4, 1.0), Mode::Train, &rng, &cache);
    for (const double v : cache.acts[1].data) CHECK(v == 0.0);
}

TEST_CASE("bce loss: p=0.5 everywhere is log 2 per output") {
    TrainConfig cfg;
    cfg.loss = LossKind::Bce;
    Matrix p = constant(4, 3, 0.5);
    Matrix t(4, 3);
    t(0, 0) = 1.0;
    t(2, 1) = 1.0;
    CHECK(loss_value(p, t, cfg) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("bce loss: perfect predictions cost (almost) nothing") {
    TrainConfig cfg;
    cfg.loss = LossKind::Bce;
    Matrix t(3, 2);
    t(0, 0) = 1.0;
    t(1, 1) = 1.0;
    CHECK(loss_value(t, t, cfg) <= 2 * kProbEps * std::abs(std::log(kProbEps)) + 1e-12);
}

TEST_CASE("weighted bce with unit weights equals bce to 1e-12") {
    Rng rng(5);
    Matrix p(6, 4), t(6, 4);
    for (auto& v : p.data) v = rng.uniform(0.01, 0.99);
    for (auto& v : t.data) v = static_cast<double>(rng.u64() & 1);
    TrainConfig plain;
    plain.loss = LossKind::Bce;
    TrainConfig weighted;
    weighted.loss = LossKind::WeightedBce;
    weighted.per_output_weights.assign(4, 1.0);
    CHECK(std::abs(loss_value(p, t, plain) - loss_value(p, t, weighted)) < 1e-12);
}

TEST_CASE("gradient check: linear + squared error is exact") {
    const MlpModel m = make_mlp(5, {}, 3, Activation::Linear, Activation::Linear, 0.0, 7);
    TrainConfig cfg;
    cfg.loss = LossKind::SquaredError;
    CHECK(gradient_check(m, cfg, 40, 13) < 1e-8);
}

TEST_CASE("gradient check: two hidden leaky-relu layers with BCE") {
    const MlpModel m = make_mlp(6, {8, 8}, 4, Activation::LeakyRelu, Activation::Sigmoid, 0.0, 7);
    TrainConfig cfg;
    cfg.loss = LossKind::Bce;
    CHECK(gradient_check(m, cfg, 60, 17) < 1e-4);
}

TEST_CASE("gradient check: saturated sigmoid stays sane after clamping") {
    MlpModel m = make_mlp(3, {}, 2, Activation::Sigmoid, Activation::Sigmoid, 0.0, 7);
    for (auto& v : m.layers[0].w.data) v = 30.0;  // |logit| > 20 on unit-scale inputs
    TrainConfig cfg;
    cfg.loss = LossKind::Bce;
    CHECK(gradient_check(m, cfg, 30, 19) < 1e-3);
}

TEST_CASE("gradient check covers every activation/loss pairing in use") {
    TrainConfig sq;
    sq.loss = LossKind::SquaredError;
    TrainConfig bce;
    bce.loss = LossKind::Bce;
    TrainConfig wbce;
    wbce.loss = LossKind::WeightedBce;

    // sigmoid hidden + linear output with squared error (the AEFS shape)
    CHECK(gradient_check(make_mlp(5, {4}, 5, Activation::Sigmoid, Activation::Linear, 0.0, 3), sq,
                         40, 23) < 1e-4);
    // leaky hidden + sigmoid output with weighted BCE (the decoder shape)
    wbce.per_output_weights = {0.2, 1.0, 0.5};
    CHECK(gradient_check(make_mlp(4, {6, 6}, 3, Activation::LeakyRelu, Activation::Sigmoid, 0.0, 5),
                         wbce, 40, 29) < 1e-4);
    // single sigmoid unit with BCE (the logistic shape)
    CHECK(gradient_check(make_mlp(7, {}, 1, Activation::Sigmoid, Activation::Sigmoid, 0.0, 9), bce,
                         20, 31) < 1e-4);
}

TEST_CASE("train: separable toy data reaches 99% accuracy") {
    // plane x0 + x1 - 1 >= 0.2 vs <= -0.2, verified separable by construction
    Rng rng(41);
    const int n = 200;
    Matrix x(n, 2), t(n, 1);
    for (int i = 0; i < n; ++i) {
        while (true) {
            const double a = rng.uniform(0.0, 1.0), b = rng.uniform(0.0, 1.0);
            const double margin = a + b - 1.0;
            if (std::abs(margin) < 0.2) continue;
            x(i, 0) = a;
            x(i, 1) = b;
            t(i, 0) = margin > 0 ? 1.0 : 0.0;
            break;
        }
    }
    MlpModel m = make_mlp(2, {}, 1, Activation::Sigmoid, Activation::Sigmoid, 0.0, 2);
    TrainConfig cfg;
    cfg.loss = LossKind::Bce;
    cfg.epochs = 200;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.05;
    cfg.seed = 2;
    const TrainResult res = train(
        m, n, 1,
        [&](const std::vector<int>& rows, Matrix& xb, Matrix& tb) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                xb(static_cast<int>(r), 0) = x(rows[r], 0);
                xb(static_cast<int>(r), 1) = x(rows[r], 1);
                tb(static_cast<int>(r), 0) = t(rows[r], 0);
            }
        },
        cfg);
    REQUIRE(res.loss_history.size() == 200);
    for (const double l : res.loss_history) CHECK(std::isfinite(l));
    const Matrix p = forward(m, x, Mode::Eval);
    int correct = 0;
    for (int i = 0; i < n; ++i)
        if ((p(i, 0) > 0.5 ? 1.0 : 0.0) == t(i, 0)) ++correct;
    CHECK(static_cast<double>(correct) / n >= 0.99);
}

TEST_CASE("train: zero epochs leaves the model unchanged; same seed reproduces weights") {
    const MlpModel init = make_mlp(3, {4}, 2, Activation::LeakyRelu, Activation::Sigmoid, 0.0, 11);
    TrainConfig cfg;
    cfg.loss = LossKind::SquaredError;
    cfg.epochs = 0;
    MlpModel a = init;
    const auto fill = [](const std::vector<int>& rows, Matrix& xb, Matrix& tb) {
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (int c = 0; c < xb.cols; ++c) {
                xb(static_cast<int>(r), c) = 0.1 * rows[r] + c;
                if (c < tb.cols) tb(static_cast<int>(r), c) = 0.5;
            }
    };
    train(a, 16, 2, fill, cfg);
    CHECK(a.layers[0].w.data == init.layers[0].w.data);

    cfg.epochs = 5;
    cfg.seed = 77;
    MlpModel b1 = init, b2 = init;
    train(b1, 16, 2, fill, cfg);
    train(b2, 16, 2, fill, cfg);
    CHECK(b1.layers[0].w.data == b2.layers[0].w.data);
    CHECK(b1.layers[1].w.data == b2.layers[1].w.data);
}

TEST_CASE("inverted dropout: train-mode expectation matches eval activations within 2%") {
    MlpModel m = make_mlp(3, {5}, 2, Activation::LeakyRelu, Activation::Linear, 0.1, 13);
    const Matrix x = constant(1, 3, 1.0);
    ForwardCache cache;
    const Matrix eval_out = forward(m, x, Mode::Eval, nullptr, &cache);
    const Matrix eval_hidden = cache.acts[1];

    Rng rng(99);
    std::vector<double> mean_hidden(static_cast<std::size_t>(eval_hidden.cols), 0.0);
    const int reps = 20000;
    for (int rep = 0; rep < reps; ++rep) {
        forward(m, x, Mode::Train, &rng, &cache);
        for (int c = 0; c < eval_hidden.cols; ++c)
            mean_hidden[static_cast<std::size_t>(c)] += cache.acts[1](0, c);
    }
    for (int c = 0; c < eval_hidden.cols; ++c) {
        const double avg = mean_hidden[static_cast<std::size_t>(c)] / reps;
        CHECK(avg == doctest::Approx(eval_hidden(0, c)).epsilon(0.02));
    }
    (void)eval_out;
}

TEST_CASE("checkpoint round-trip preserves the model; corrupt shapes rejected") {
    const MlpModel m = make_mlp(4, {6}, 3, Activation::LeakyRelu, Activation::Sigmoid, 0.1, 21);
    const MlpModel re = load_model(save_model(m));
    REQUIRE(re.layers.size() == m.layers.size());
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        CHECK(re.layers[i].w.data == m.layers[i].w.data);
        CHECK(re.layers[i].b == m.layers[i].b);
        CHECK(re.layers[i].act == m.layers[i].act);
        CHECK(re.layers[i].dropout == m.layers[i].dropout);
    }
    // break the shape chain
    std::string text = save_model(m);
    const auto pos = text.find("\"in\":6");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "\"in\":7");
    CHECK_THROWS_AS(load_model(text), Error);
}

TEST_CASE("dimension mismatch is rejected") {
    const MlpModel m = make_mlp(4, {}, 2, Activation::Linear, Activation::Linear, 0.0, 1);
    CHECK_THROWS_AS(forward(m, constant(2, 5, 0.0), Mode::Eval), DimensionMismatch);
}
