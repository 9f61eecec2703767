#include "icdsel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "icdsel/errors.hpp"
#include "icdsel/io.hpp"
#include "icdsel/rng.hpp"

namespace icdsel::synth {

namespace {

constexpr int kBaseDay = 16436;  // 2015-01-01

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// pmf of NB(dispersion r, mean mu) for k = 0..cap-1 plus the lumped tail
std::vector<double> nb_pmf(double r, double mu, int cap) {
    const double q = mu / (mu + r);
    std::vector<double> pmf(static_cast<std::size_t>(cap) + 1, 0.0);
    double pk = std::exp(r * std::log(1.0 - q));
    double cum = 0.0;
    for (int k = 0; k < cap; ++k) {
        pmf[static_cast<std::size_t>(k)] = pk;
        cum += pk;
        pk *= (k + r) / (k + 1.0) * q;
    }
    pmf[static_cast<std::size_t>(cap)] = std::max(0.0, 1.0 - cum);
    return pmf;
}

double clipped_mean(const std::vector<double>& pmf, int cap) {
    double m = 0.0;
    for (int k = 0; k <= cap; ++k) {
        const int v = std::min(std::max(k, 1), cap);
        m += v * pmf[static_cast<std::size_t>(k)];
    }
    return m;
}

int draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin()));
}

int poisson(double lambda, Rng& rng) {
    if (lambda <= 0.0) return 0;
    // sequential inversion; fine for the small means used here
    const double l = std::exp(-lambda);
    double p = 1.0;
    int k = 0;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > l && k < 1000);
    return k - 1;
}

}  // namespace

std::vector<double> clipped_count_distribution(double mean, double sd, int cap) {
    if (mean <= 1.0 || mean >= cap)
        throw CalibrationFailure("codes-per-record mean must lie in (1, " + std::to_string(cap) + ")");
    const double var = sd * sd;
    const double r = var > mean ? mean * mean / (var - mean) : 1e6;
    // the clip pulls the mean down, so search the underlying mean upward
    double lo = 1e-3, hi = 1e7;
    if (clipped_mean(nb_pmf(r, lo, cap), cap) > mean || clipped_mean(nb_pmf(r, hi, cap), cap) < mean)
        throw CalibrationFailure("cannot bracket the clipped code-count mean");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (clipped_mean(nb_pmf(r, mid, cap), cap) < mean)
            lo = mid;
        else
            hi = mid;
    }
    return nb_pmf(r, std::sqrt(lo * hi), cap);
}

void SynthConfig::validate(const IcdTree& tree) const {
    if (n_patients < 1) throw CalibrationFailure("n_patients must be positive");
    if (target_record_mortality_rate <= 0.0 || target_record_mortality_rate >= 1.0)
        throw CalibrationFailure("target rate must lie in (0,1)");
    if (codes_per_record_mean <= 0.0 || codes_per_record_sd <= 0.0)
        throw CalibrationFailure("code count mean/sd must be positive");
    const int n_leaves = static_cast<int>(tree.leaves().size());
    if (n_informative_codes < 0 || n_informative_codes > n_leaves)
        throw CalibrationFailure("n_informative_codes exceeds the leaf count " +
                                 std::to_string(n_leaves));
    if (n_phenotypes < 1) throw CalibrationFailure("n_phenotypes must be positive");
}

SynthOutput generate_cohort(const IcdTree& tree, const SynthConfig& cfg) {
    cfg.validate(tree);
    const std::vector<std::string> leaves = tree.leaves();
    const int n_leaves = static_cast<int>(leaves.size());

    // Phenotype signatures: disjoint slices of a shuffled leaf list. The
    // informative leaves are drawn round-robin from the signatures so each
    // phenotype carries label signal.
    Rng global(derive_seed(cfg.seed, "synth.global"));
    std::vector<int> shuffled(static_cast<std::size_t>(n_leaves));
    std::iota(shuffled.begin(), shuffled.end(), 0);
    global.shuffle(shuffled);
    const int sig = std::min(cfg.signature_size, n_leaves / std::max(1, cfg.n_phenotypes));
    std::vector<std::vector<int>> signature(static_cast<std::size_t>(cfg.n_phenotypes));
    for (int k = 0; k < cfg.n_phenotypes; ++k)
        signature[static_cast<std::size_t>(k)].assign(shuffled.begin() + static_cast<long>(k) * sig,
                                                      shuffled.begin() + static_cast<long>(k + 1) * sig);

    std::vector<int> informative;
    for (int i = 0; informative.size() < static_cast<std::size_t>(cfg.n_informative_codes); ++i) {
        const int pheno = i % cfg.n_phenotypes;
        const int pos = i / cfg.n_phenotypes;
        if (pos < sig) {
            informative.push_back(signature[static_cast<std::size_t>(pheno)][static_cast<std::size_t>(pos)]);
        } else {
            // signatures exhausted; fall back to unassigned leaves
            informative.push_back(shuffled[static_cast<std::size_t>(cfg.n_phenotypes) * sig +
                                           (informative.size() - static_cast<std::size_t>(cfg.n_phenotypes) * sig)]);
        }
    }
    std::vector<double> effect(static_cast<std::size_t>(n_leaves), 0.0);
    for (std::size_t i = 0; i < informative.size(); ++i)
        effect[static_cast<std::size_t>(informative[i])] =
            cfg.effect_sizes.empty() ? 2.0 : cfg.effect_sizes[i % cfg.effect_sizes.size()];

    // per-phenotype cumulative sampling weights over leaves
    std::vector<std::vector<double>> cumw(static_cast<std::size_t>(cfg.n_phenotypes));
    for (int k = 0; k < cfg.n_phenotypes; ++k) {
        std::vector<double> w(static_cast<std::size_t>(n_leaves), 1.0);
        for (const int j : signature[static_cast<std::size_t>(k)]) w[static_cast<std::size_t>(j)] += cfg.signature_boost;
        auto& c = cumw[static_cast<std::size_t>(k)];
        c.resize(w.size());
        std::partial_sum(w.begin(), w.end(), c.begin());
    }

    // code-count distribution (clipped NB), as a cdf over 0..25
    const std::vector<double> count_pmf =
        clipped_count_distribution(cfg.codes_per_record_mean, cfg.codes_per_record_sd);
    std::vector<double> count_cdf(count_pmf.size());
    std::partial_sum(count_pmf.begin(), count_pmf.end(), count_cdf.begin());

    // admissions, one independent substream per patient
    std::vector<std::vector<cohort::AdmissionRecord>> per_patient(static_cast<std::size_t>(cfg.n_patients));
#pragma omp parallel for schedule(dynamic, 64)
    for (int pi = 0; pi < cfg.n_patients; ++pi) {
        Rng rng(derive_seed(cfg.seed, "synth.patient", static_cast<std::uint64_t>(pi)));
        char pid[16];
        std::snprintf(pid, sizeof(pid), "P%06d", pi);
        const int pheno = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_phenotypes)));
        const auto& cw = cumw[static_cast<std::size_t>(pheno)];
        const double wtotal = cw.back();

        const int n_adm = 1 + poisson(std::max(0.0, cfg.admissions_per_patient_mean - 1.0), rng);
        int admit = kBaseDay + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.first_admit_span_days)));
        auto& recs = per_patient[static_cast<std::size_t>(pi)];
        for (int a = 0; a < n_adm; ++a) {
            cohort::AdmissionRecord rec;
            rec.patient_id = pid;
            rec.admit_date = admit;
            rec.discharge_date =
                admit + cfg.stay_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.stay_max - cfg.stay_min + 1)));

            int want = std::min(draw_from_cdf(count_cdf, rng), 25);
            if (want < 1) want = 1;
            std::vector<int> drawn;
            drawn.reserve(static_cast<std::size_t>(want));
            for (int c = 0; c < want; ++c) {
                int leaf = -1;
                for (int attempt = 0; attempt < 200; ++attempt) {
                    const double u = rng.uniform() * wtotal;
                    const auto it = std::lower_bound(cw.begin(), cw.end(), u);
                    const int cand = static_cast<int>(it - cw.begin());
                    if (std::find(drawn.begin(), drawn.end(), cand) == drawn.end()) {
                        leaf = cand;
                        break;
                    }
                }
                if (leaf < 0) break;  // could not find a new distinct leaf
                drawn.push_back(leaf);
            }
            for (const int leaf : drawn) rec.codes.push_back(leaves[static_cast<std::size_t>(leaf)]);
            recs.push_back(std::move(rec));

            const bool short_gap = rng.uniform() < cfg.p_short_gap;
            const int gap = short_gap
                                ? cfg.short_gap_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                                          cfg.short_gap_max - cfg.short_gap_min + 1)))
                                : cfg.long_gap_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                                         cfg.long_gap_max - cfg.long_gap_min + 1)));
            admit = rec.discharge_date + gap;
        }
    }

    // windows per patient (same aggregation the ingestion pipeline applies)
    struct PatientWindows {
        std::vector<cohort::AggregatedRecord> windows;
        std::vector<double> uniform;     // death trigger draw per window
        std::vector<int> death_delay;    // days after last discharge
        std::vector<double> effect_sum;
    };
    std::vector<PatientWindows> pws(static_cast<std::size_t>(cfg.n_patients));
    std::map<std::string, double> code_effect;
    for (std::size_t i = 0; i < informative.size(); ++i)
        code_effect[leaves[static_cast<std::size_t>(informative[i])]] =
            effect[static_cast<std::size_t>(informative[i])];
#pragma omp parallel for schedule(dynamic, 64)
    for (int pi = 0; pi < cfg.n_patients; ++pi) {
        auto& pw = pws[static_cast<std::size_t>(pi)];
        pw.windows = cohort::aggregate_windows(per_patient[static_cast<std::size_t>(pi)], cfg.window_days);
        Rng rng(derive_seed(cfg.seed, "synth.death", static_cast<std::uint64_t>(pi)));
        pw.uniform.resize(pw.windows.size());
        pw.death_delay.resize(pw.windows.size());
        pw.effect_sum.resize(pw.windows.size());
        for (std::size_t w = 0; w < pw.windows.size(); ++w) {
            pw.uniform[w] = rng.uniform();
            pw.death_delay[w] = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.horizon_days + 1)));
            double s = 0.0;
            for (const auto& code : pw.windows[w].code_set) {
                const auto it = code_effect.find(code);
                if (it != code_effect.end()) s += it->second;
            }
            pw.effect_sum[w] = s;
        }
    }

    // realized record-level label rate for a candidate intercept, evaluated
    // on the first `limit` windows (the pilot sample)
    const auto realized_rate = [&](double b0, long limit) {
        long records = 0, positives = 0;
        for (const auto& pw : pws) {
            if (records >= limit) break;  // pilot = first patients up to `limit` records
            std::size_t death_w = pw.windows.size();
            for (std::size_t w = 0; w < pw.windows.size(); ++w) {
                if (pw.uniform[w] < sigmoid(b0 + pw.effect_sum[w])) {
                    death_w = w;
                    break;
                }
            }
            const std::size_t kept = death_w == pw.windows.size() ? pw.windows.size() : death_w + 1;
            int death_date = -1;
            if (death_w < pw.windows.size())
                death_date = pw.windows[death_w].last_discharge + pw.death_delay[death_w];
            records += static_cast<long>(kept);
            if (death_date >= 0)
                for (std::size_t w = 0; w < kept; ++w) {
                    const int gap = death_date - pw.windows[w].last_discharge;
                    if (gap >= 0 && gap <= cfg.horizon_days) ++positives;
                }
        }
        return records > 0 ? static_cast<double>(positives) / static_cast<double>(records) : 0.0;
    };

    double b0;
    {
        const long pilot = 50000;
        double lo = -30.0, hi = 30.0;
        const double rate_lo = realized_rate(lo, pilot);
        const double rate_hi = realized_rate(hi, pilot);
        if (rate_lo > cfg.target_record_mortality_rate || rate_hi < cfg.target_record_mortality_rate)
            throw CalibrationFailure("target rate " + std::to_string(cfg.target_record_mortality_rate) +
                                     " outside attainable range [" + std::to_string(rate_lo) + ", " +
                                     std::to_string(rate_hi) + "]");
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (realized_rate(mid, pilot) < cfg.target_record_mortality_rate)
                lo = mid;
            else
                hi = mid;
        }
        b0 = 0.5 * (lo + hi);
        const double achieved = realized_rate(b0, pilot);
        if (std::abs(achieved - cfg.target_record_mortality_rate) > 0.01)
            throw CalibrationFailure("bisection stalled at rate " + std::to_string(achieved));
    }

    // apply the calibrated intercept to the full cohort
    SynthOutput out;
    long records = 0, positives = 0;
    for (int pi = 0; pi < cfg.n_patients; ++pi) {
        const auto& pw = pws[static_cast<std::size_t>(pi)];
        std::size_t death_w = pw.windows.size();
        for (std::size_t w = 0; w < pw.windows.size(); ++w)
            if (pw.uniform[w] < sigmoid(b0 + pw.effect_sum[w])) {
                death_w = w;
                break;
            }
        const std::size_t kept = death_w == pw.windows.size() ? pw.windows.size() : death_w + 1;
        int death_date = -1;
        if (death_w < pw.windows.size()) {
            death_date = pw.windows[death_w].last_discharge + pw.death_delay[death_w];
            out.deaths[pw.windows[death_w].patient_id] = death_date;
        }
        const int cutoff_end = pw.windows[kept - 1].window_end;
        for (const auto& rec : per_patient[static_cast<std::size_t>(pi)])
            if (rec.admit_date < cutoff_end) out.admissions.push_back(rec);
        records += static_cast<long>(kept);
        if (death_date >= 0)
            for (std::size_t w = 0; w < kept; ++w) {
                const int gap = death_date - pw.windows[w].last_discharge;
                if (gap >= 0 && gap <= cfg.horizon_days) ++positives;
            }
    }
    out.realized_mortality_rate = records > 0 ? static_cast<double>(positives) / records : 0.0;
    out.calibrated_intercept = b0;
    out.n_aggregated_records = static_cast<int>(records);
    for (const int j : informative) out.ground_truth.push_back(leaves[static_cast<std::size_t>(j)]);
    std::sort(out.ground_truth.begin(), out.ground_truth.end());
    return out;
}

std::string admissions_csv(const SynthOutput& out) {
    std::ostringstream ss;
    ss << "patient_id,admit_date,discharge_date,codes\n";
    for (const auto& rec : out.admissions) {
        ss << rec.patient_id << ',' << io::format_date(rec.admit_date) << ','
           << io::format_date(rec.discharge_date) << ',';
        for (std::size_t i = 0; i < rec.codes.size(); ++i) {
            if (i) ss << ';';
            ss << rec.codes[i];
        }
        ss << '\n';
    }
    return ss.str();
}

std::string deaths_csv(const SynthOutput& out) {
    std::ostringstream ss;
    ss << "patient_id,death_date\n";
    for (const auto& [pid, day] : out.deaths) ss << pid << ',' << io::format_date(day) << '\n';
    return ss.str();
}

std::string ground_truth_txt(const SynthOutput& out) {
    std::ostringstream ss;
    for (const auto& code : out.ground_truth) ss << code << '\n';
    return ss.str();
}

}  // namespace icdsel::synth
