#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/icd_tree.hpp"
#include "icdsel/selection.hpp"
#include "icdsel/stats.hpp"

namespace icdsel::eval {

struct EvalConfig {
    double learning_rate = 0.001;
    int batch_size = 64;
    int epochs = 100;          // reconstruction network
    double dropout = 0.1;
    std::vector<int> hidden = {64, 64};
    int logistic_epochs = 100;
    double l2 = 1e-4;          // logistic ridge penalty
    std::uint64_t seed = 0;
};

struct ReconReport {
    std::vector<double> per_feature_accuracy;
    double mean_accuracy = 0.0;
    double bce = 0.0;  // mean per element on the test split
    std::vector<double> baseline_per_feature_accuracy;
    double baseline_mean_accuracy = 0.0;
    double baseline_bce = 0.0;  // test cross-entropy under train prevalences
    double t_statistic = 0.0;
    double p_value = 1.0;
    bool t_zero_variance = false;
};

// Trains an MLP from the selected columns to the full feature space on the
// train split and scores it on the untouched test split, next to the mode
// baseline and the paired t-test between the two accuracy vectors.
ReconReport reconstruct_eval(const SelectionResult& selection, const BinaryMatrix& train,
                             const BinaryMatrix& test, const EvalConfig& cfg);

// Per-column train-split majority value ("mode"), measured on test.
std::vector<int> mode_values(const BinaryMatrix& train);
std::vector<double> mode_baseline(const BinaryMatrix& train, const BinaryMatrix& test);

// Minority rows resampled with replacement until the label counts match.
std::pair<BinaryMatrix, std::vector<int>> upsample_minority(const BinaryMatrix& train,
                                                            const std::vector<int>& labels,
                                                            std::uint64_t seed);

struct OutcomeReport {
    double accuracy = 0.0, f1 = 0.0, recall = 0.0, precision = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

// Logistic regression (single sigmoid unit, BCE + L2) on the selected
// columns, trained on the upsampled train split, thresholded at 0.5 on test.
OutcomeReport outcome_eval(const SelectionResult& selection, const BinaryMatrix& train,
                           const BinaryMatrix& test, const std::vector<int>& train_labels,
                           const std::vector<int>& test_labels, const EvalConfig& cfg);

struct Histogram {
    std::vector<double> edges;  // n_bins + 1
    std::vector<long> counts;   // n_bins
};

Histogram accuracy_histogram(const std::vector<double>& per_feature_accuracy, int n_bins = 20);

// Column prevalences (percent), descending; ties by code.
std::vector<std::pair<std::string, double>> prevalence_report(const BinaryMatrix& x, int top_k = 20);

long depth_sum(const SelectionResult& selection, const std::vector<std::string>& feature_index,
               const IcdTree& tree);

}  // namespace icdsel::eval
