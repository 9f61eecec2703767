#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "icdsel/cohort.hpp"
#include "icdsel/errors.hpp"
#include "icdsel/synth.hpp"

using namespace icdsel;

namespace {

const std::string kSampleTree = std::string(ICDSEL_DATA_DIR) + "/icd10ca_sample.csv";

const IcdTree& tree() {
    static const IcdTree t = IcdTree::parse_file(kSampleTree);
    return t;
}

struct Labeled {
    BinaryMatrix matrix;
    std::vector<int> labels;
};

Labeled encode_with_labels(const synth::SynthOutput& out) {
    auto agg = cohort::aggregate_windows(out.admissions);
    cohort::attach_labels(agg, out.deaths);
    Labeled l;
    l.matrix = cohort::one_hot_encode(agg, tree());
    for (const auto& a : agg) l.labels.push_back(a.label.value_or(0));
    return l;
}

double point_biserial(const std::vector<char>& x, const std::vector<int>& y) {
    const std::size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x, dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double mutual_information(const std::vector<char>& x, const std::vector<int>& y) {
    const double n = static_cast<double>(x.size());
    double c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < x.size(); ++i) c[static_cast<int>(x[i])][y[i]] += 1.0;
    double mi = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            if (c[a][b] == 0.0) continue;
            const double pxy = c[a][b] / n;
            const double px = (c[a][0] + c[a][1]) / n;
            const double py = (c[0][b] + c[1][b]) / n;
            mi += pxy * std::log(pxy / (px * py));
        }
    return mi;
}

std::vector<char> column_dense(const BinaryMatrix& m, int col) {
    std::vector<char> x(static_cast<std::size_t>(m.n_rows), 0);
    for (int r = 0; r < m.n_rows; ++r)
        if (m.get(r, col)) x[static_cast<std::size_t>(r)] = 1;
    return x;
}

synth::SynthConfig desk_config(std::uint64_t seed) {
    synth::SynthConfig cfg;
    cfg.n_patients = 5600;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("clipped count distribution hits the target mean") {
    const auto pmf = synth::clipped_count_distribution(24.90, 16.55);
    double mean = 0.0, total = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        mean += std::min(std::max<int>(static_cast<int>(k), 1), 25) * pmf[k];
        total += pmf[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean == doctest::Approx(24.90).epsilon(1e-6));

    const auto small = synth::clipped_count_distribution(5.0, 3.0);
    double smean = 0.0;
    for (std::size_t k = 0; k < small.size(); ++k)
        smean += std::min(std::max<int>(static_cast<int>(k), 1), 25) * small[k];
    CHECK(smean == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("default config: >=10k records, code-count mean near target, rate within 1%") {
    const synth::SynthConfig cfg = desk_config(7);
    const synth::SynthOutput out = synth::generate_cohort(tree(), cfg);
    CHECK(out.n_aggregated_records >= 10000);

    double codes = 0.0;
    for (const auto& rec : out.admissions) {
        codes += static_cast<double>(rec.codes.size());
        CHECK(rec.codes.size() >= 1);
        CHECK(rec.codes.size() <= 25);
    }
    const double mean_codes = codes / static_cast<double>(out.admissions.size());
    CHECK(mean_codes == doctest::Approx(24.90).epsilon(1.0 / 24.90));

    CHECK(std::abs(out.realized_mortality_rate - cfg.target_record_mortality_rate) <= 0.01);

    // the pipeline label rate agrees with the generator's own accounting
    const Labeled l = encode_with_labels(out);
    CHECK(static_cast<int>(l.labels.size()) == out.n_aggregated_records);
    double rate = 0.0;
    for (const int y : l.labels) rate += y;
    rate /= static_cast<double>(l.labels.size());
    CHECK(rate == doctest::Approx(out.realized_mortality_rate).epsilon(1e-12));
    CHECK(std::abs(rate - cfg.target_record_mortality_rate) <= 0.01);
}

TEST_CASE("null model: no informative codes means no column predicts the label") {
    synth::SynthConfig cfg = desk_config(11);
    cfg.n_informative_codes = 0;
    const synth::SynthOutput out = synth::generate_cohort(tree(), cfg);
    CHECK(out.ground_truth.empty());
    const Labeled l = encode_with_labels(out);
    REQUIRE(l.matrix.n_rows >= 10000);
    double worst = 0.0;
    for (int j = 0; j < l.matrix.n_cols; ++j)
        worst = std::max(worst, std::abs(point_biserial(column_dense(l.matrix, j), l.labels)));
    CHECK(worst < 0.05);
}

TEST_CASE("fixed seed twice: byte-identical output files") {
    const synth::SynthConfig cfg = desk_config(3);
    const synth::SynthOutput a = synth::generate_cohort(tree(), cfg);
    const synth::SynthOutput b = synth::generate_cohort(tree(), cfg);
    CHECK(synth::admissions_csv(a) == synth::admissions_csv(b));
    CHECK(synth::deaths_csv(a) == synth::deaths_csv(b));
    CHECK(synth::ground_truth_txt(a) == synth::ground_truth_txt(b));
}

TEST_CASE("ground-truth codes carry more label information than typical columns") {
    const synth::SynthConfig cfg = desk_config(19);
    const synth::SynthOutput out = synth::generate_cohort(tree(), cfg);
    REQUIRE(out.ground_truth.size() == 20);
    const Labeled l = encode_with_labels(out);

    std::set<std::string> truth(out.ground_truth.begin(), out.ground_truth.end());
    std::vector<double> informative_mi, other_mi;
    for (int j = 0; j < l.matrix.n_cols; ++j) {
        const double mi = mutual_information(column_dense(l.matrix, j), l.labels);
        if (truth.count(l.matrix.feature_index[static_cast<std::size_t>(j)]))
            informative_mi.push_back(mi);
        else
            other_mi.push_back(mi);
    }
    REQUIRE(informative_mi.size() == truth.size());
    std::nth_element(other_mi.begin(), other_mi.begin() + static_cast<long>(other_mi.size() / 2),
                     other_mi.end());
    const double median_other = other_mi[other_mi.size() / 2];
    for (const double mi : informative_mi) CHECK(mi > median_other);
}

TEST_CASE("config validation") {
    synth::SynthConfig cfg;
    cfg.n_patients = 0;
    CHECK_THROWS_AS(synth::generate_cohort(tree(), cfg), CalibrationFailure);
    cfg = synth::SynthConfig{};
    cfg.n_informative_codes = 100000;
    CHECK_THROWS_AS(synth::generate_cohort(tree(), cfg), CalibrationFailure);
    cfg = synth::SynthConfig{};
    cfg.target_record_mortality_rate = 1.5;
    CHECK_THROWS_AS(synth::generate_cohort(tree(), cfg), CalibrationFailure);
}
