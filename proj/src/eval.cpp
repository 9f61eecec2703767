#include "icdsel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icdsel/errors.hpp"
#include "icdsel/nn.hpp"
#include "icdsel/rng.hpp"

namespace icdsel::eval {

namespace {

constexpr double kEps = 1e-7;

double clamped_ce(double p, double t) {
    const double pc = std::clamp(p, kEps, 1.0 - kEps);
    return -t * std::log(pc) - (1.0 - t) * std::log(1.0 - pc);
}

}  // namespace

std::vector<int> mode_values(const BinaryMatrix& train) {
    if (train.n_rows == 0) throw DimensionMismatch("mode baseline needs a nonempty train split");
    std::vector<int> ones(static_cast<std::size_t>(train.n_cols), 0);
    for (const auto& row : train.rows)
        for (const std::uint32_t c : row) ++ones[c];
    std::vector<int> mode(static_cast<std::size_t>(train.n_cols));
    for (int j = 0; j < train.n_cols; ++j)
        mode[static_cast<std::size_t>(j)] = 2 * ones[static_cast<std::size_t>(j)] > train.n_rows ? 1 : 0;
    return mode;
}

std::vector<double> mode_baseline(const BinaryMatrix& train, const BinaryMatrix& test) {
    const std::vector<int> mode = mode_values(train);
    std::vector<long> correct(static_cast<std::size_t>(test.n_cols), 0);
    for (const auto& row : test.rows) {
        std::size_t pos = 0;
        for (int j = 0; j < test.n_cols; ++j) {
            const bool set = pos < row.size() && row[pos] == static_cast<std::uint32_t>(j);
            if (set) ++pos;
            if (static_cast<int>(set) == mode[static_cast<std::size_t>(j)]) ++correct[static_cast<std::size_t>(j)];
        }
    }
    std::vector<double> acc(static_cast<std::size_t>(test.n_cols));
    for (int j = 0; j < test.n_cols; ++j)
        acc[static_cast<std::size_t>(j)] =
            test.n_rows > 0 ? static_cast<double>(correct[static_cast<std::size_t>(j)]) / test.n_rows : 0.0;
    return acc;
}

ReconReport reconstruct_eval(const SelectionResult& selection, const BinaryMatrix& train,
                             const BinaryMatrix& test, const EvalConfig& cfg) {
    const int n_features = train.n_cols;
    for (const int j : selection.selected)
        if (j < 0 || j >= n_features)
            throw DimensionMismatch("selected index " + std::to_string(j) + " out of range");
    const std::vector<int> sel = selection.selected;

    nn::MlpModel model =
        nn::make_mlp(static_cast<int>(sel.size()), cfg.hidden, n_features, nn::Activation::LeakyRelu,
                     nn::Activation::Sigmoid, cfg.dropout, derive_seed(cfg.seed, "recon.init"));
    nn::TrainConfig tc;
    tc.learning_rate = cfg.learning_rate;
    tc.batch_size = cfg.batch_size;
    tc.epochs = cfg.epochs;
    tc.seed = derive_seed(cfg.seed, "recon.train");
    tc.loss = nn::LossKind::Bce;
    nn::train(
        model, train.n_rows, n_features,
        [&](const std::vector<int>& rows, Matrix& x, Matrix& t) {
            x = train.dense_block(rows, sel);
            t = train.dense_block(rows, {});
        },
        tc);

    ReconReport rep;
    rep.per_feature_accuracy.assign(static_cast<std::size_t>(n_features), 0.0);
    std::vector<long> correct(static_cast<std::size_t>(n_features), 0);
    double ce_total = 0.0;
    const int chunk = 256;
    for (int start = 0; start < test.n_rows; start += chunk) {
        const int bs = std::min(chunk, test.n_rows - start);
        std::vector<int> rows(static_cast<std::size_t>(bs));
        std::iota(rows.begin(), rows.end(), start);
        const Matrix x = test.dense_block(rows, sel);
        const Matrix t = test.dense_block(rows, {});
        const Matrix p = nn::forward(model, x, nn::Mode::Eval);
        for (int r = 0; r < bs; ++r) {
            const double* pr = p.row_ptr(r);
            const double* tr = t.row_ptr(r);
            for (int j = 0; j < n_features; ++j) {
                ce_total += clamped_ce(pr[j], tr[j]);
                const int pred = pr[j] > 0.5 ? 1 : 0;
                if (pred == static_cast<int>(tr[j])) ++correct[static_cast<std::size_t>(j)];
            }
        }
    }
    for (int j = 0; j < n_features; ++j)
        rep.per_feature_accuracy[static_cast<std::size_t>(j)] =
            test.n_rows > 0 ? static_cast<double>(correct[static_cast<std::size_t>(j)]) / test.n_rows : 0.0;
    rep.mean_accuracy =
        std::accumulate(rep.per_feature_accuracy.begin(), rep.per_feature_accuracy.end(), 0.0) /
        n_features;
    rep.bce = test.n_rows > 0 ? ce_total / (static_cast<double>(test.n_rows) * n_features) : 0.0;

    rep.baseline_per_feature_accuracy = mode_baseline(train, test);
    rep.baseline_mean_accuracy = std::accumulate(rep.baseline_per_feature_accuracy.begin(),
                                                 rep.baseline_per_feature_accuracy.end(), 0.0) /
                                 n_features;
    // BCE-equivalent of the mode baseline: per-feature train prevalence as a
    // constant probability
    const std::vector<double> prev = train.column_means();
    double base_ce = 0.0;
    for (const auto& row : test.rows) {
        std::size_t pos = 0;
        for (int j = 0; j < test.n_cols; ++j) {
            const bool set = pos < row.size() && row[pos] == static_cast<std::uint32_t>(j);
            if (set) ++pos;
            base_ce += clamped_ce(prev[static_cast<std::size_t>(j)], set ? 1.0 : 0.0);
        }
    }
    rep.baseline_bce =
        test.n_rows > 0 ? base_ce / (static_cast<double>(test.n_rows) * n_features) : 0.0;

    const stats::TTest tt =
        stats::paired_t_test(rep.per_feature_accuracy, rep.baseline_per_feature_accuracy);
    rep.t_statistic = tt.t;
    rep.p_value = tt.p;
    rep.t_zero_variance = tt.zero_variance;
    return rep;
}

std::pair<BinaryMatrix, std::vector<int>> upsample_minority(const BinaryMatrix& train,
                                                            const std::vector<int>& labels,
                                                            std::uint64_t seed) {
    if (static_cast<int>(labels.size()) != train.n_rows)
        throw DimensionMismatch("labels length vs rows");
    std::vector<int> pos, neg;
    for (int i = 0; i < train.n_rows; ++i)
        (labels[static_cast<std::size_t>(i)] ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw SingleClassTrain("train split holds a single label class");
    BinaryMatrix out = train;
    std::vector<int> out_labels = labels;
    const auto& minority = pos.size() < neg.size() ? pos : neg;
    const long deficit = static_cast<long>(std::max(pos.size(), neg.size())) -
                         static_cast<long>(minority.size());
    Rng rng(derive_seed(seed, "upsample"));
    for (long i = 0; i < deficit; ++i) {
        const int row = minority[static_cast<std::size_t>(rng.below(minority.size()))];
        out.rows.push_back(train.rows[static_cast<std::size_t>(row)]);
        out_labels.push_back(labels[static_cast<std::size_t>(row)]);
    }
    out.n_rows = static_cast<int>(out.rows.size());
    return {std::move(out), std::move(out_labels)};
}

OutcomeReport outcome_eval(const SelectionResult& selection, const BinaryMatrix& train,
                           const BinaryMatrix& test, const std::vector<int>& train_labels,
                           const std::vector<int>& test_labels, const EvalConfig& cfg) {
    const auto [up, up_labels] = upsample_minority(train, train_labels, cfg.seed);
    const std::vector<int>& sel = selection.selected;

    nn::MlpModel model = nn::make_mlp(static_cast<int>(sel.size()), {}, 1, nn::Activation::Sigmoid,
                                      nn::Activation::Sigmoid, 0.0, derive_seed(cfg.seed, "logit.init"));
    nn::TrainConfig tc;
    tc.learning_rate = cfg.learning_rate;
    tc.batch_size = cfg.batch_size;
    tc.seed = derive_seed(cfg.seed, "logit.train");
    tc.loss = nn::LossKind::Bce;

    nn::AdamOptimizer opt(model, tc.adam);
    nn::Grads grads = nn::zero_grads(model);
    Rng shuffle_rng(derive_seed(tc.seed, "shuffle"));
    std::vector<int> order(static_cast<std::size_t>(up.n_rows));
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < cfg.logistic_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (int start = 0; start < up.n_rows; start += tc.batch_size) {
            const int bs = std::min(tc.batch_size, up.n_rows - start);
            std::vector<int> rows(order.begin() + start, order.begin() + start + bs);
            const Matrix x = up.dense_block(rows, sel);
            Matrix t(bs, 1);
            for (int r = 0; r < bs; ++r) t(r, 0) = up_labels[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
            const double loss = nn::loss_and_grad(model, x, t, tc, nullptr, grads);
            if (!std::isfinite(loss)) throw NonFiniteLoss("logistic epoch " + std::to_string(epoch));
            // ridge on the weights (bias stays unpenalized)
            for (std::size_t i = 0; i < grads.dw[0].data.size(); ++i)
                grads.dw[0].data[i] += cfg.l2 * model.layers[0].w.data[i];
            opt.apply(model, grads, tc.learning_rate);
        }
    }

    OutcomeReport rep;
    const int chunk = 1024;
    for (int start = 0; start < test.n_rows; start += chunk) {
        const int bs = std::min(chunk, test.n_rows - start);
        std::vector<int> rows(static_cast<std::size_t>(bs));
        std::iota(rows.begin(), rows.end(), start);
        const Matrix x = test.dense_block(rows, sel);
        const Matrix p = nn::forward(model, x, nn::Mode::Eval);
        for (int r = 0; r < bs; ++r) {
            const int pred = p(r, 0) > 0.5 ? 1 : 0;
            const int truth = test_labels[static_cast<std::size_t>(start + r)];
            if (pred && truth) ++rep.tp;
            else if (pred && !truth) ++rep.fp;
            else if (!pred && truth) ++rep.fn;
            else ++rep.tn;
        }
    }
    const long total = rep.tp + rep.fp + rep.tn + rep.fn;
    rep.accuracy = total > 0 ? static_cast<double>(rep.tp + rep.tn) / total : 0.0;
    rep.precision = (rep.tp + rep.fp) > 0 ? static_cast<double>(rep.tp) / (rep.tp + rep.fp) : 0.0;
    rep.recall = (rep.tp + rep.fn) > 0 ? static_cast<double>(rep.tp) / (rep.tp + rep.fn) : 0.0;
    rep.f1 = (rep.precision + rep.recall) > 0.0
                 ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
                 : 0.0;
    return rep;
}

Histogram accuracy_histogram(const std::vector<double>& per_feature_accuracy, int n_bins) {
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int b = 0; b <= n_bins; ++b)
        h.edges[static_cast<std::size_t>(b)] = static_cast<double>(b) / n_bins;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (const double a : per_feature_accuracy) {
        int b = static_cast<int>(a * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

std::vector<std::pair<std::string, double>> prevalence_report(const BinaryMatrix& x, int top_k) {
    if (x.n_rows == 0) throw DimensionMismatch("prevalence needs a nonempty matrix");
    const std::vector<double> means = x.column_means();
    std::vector<int> order(static_cast<std::size_t>(x.n_cols));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (means[static_cast<std::size_t>(a)] != means[static_cast<std::size_t>(b)])
            return means[static_cast<std::size_t>(a)] > means[static_cast<std::size_t>(b)];
        return x.feature_index[static_cast<std::size_t>(a)] < x.feature_index[static_cast<std::size_t>(b)];
    });
    std::vector<std::pair<std::string, double>> out;
    for (int i = 0; i < std::min(top_k, x.n_cols); ++i) {
        const int j = order[static_cast<std::size_t>(i)];
        out.emplace_back(x.feature_index[static_cast<std::size_t>(j)],
                         100.0 * means[static_cast<std::size_t>(j)]);
    }
    return out;
}

long depth_sum(const SelectionResult& selection, const std::vector<std::string>& feature_index,
               const IcdTree& tree) {
    long sum = 0;
    for (const int j : selection.selected)
        sum += tree.depth(feature_index.at(static_cast<std::size_t>(j)));
    return sum;
}

}  // namespace icdsel::eval
