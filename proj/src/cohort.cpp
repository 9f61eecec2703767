#include "icdsel/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "icdsel/errors.hpp"
#include "icdsel/io.hpp"
#include "icdsel/rng.hpp"

namespace icdsel::cohort {

std::vector<AdmissionRecord> load_admissions(const std::string& path, const IcdTree& tree,
                                             bool strict, LoadStats* stats) {
    const auto lines = io::read_lines(path);
    if (lines.empty() || io::split_csv(lines[0], 4)[0] != "patient_id")
        throw MalformedRow(path + ": expected header 'patient_id,admit_date,discharge_date,codes'");
    LoadStats st;
    std::vector<AdmissionRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io::split_csv(lines[i], 4);
        if (f.size() < 4 || f[0].empty())
            throw MalformedRow(path + ":" + std::to_string(i + 1) + ": expected 4 fields");
        AdmissionRecord rec;
        rec.patient_id = f[0];
        rec.admit_date = io::parse_date(f[1]);
        rec.discharge_date = io::parse_date(f[2]);
        if (rec.discharge_date < rec.admit_date)
            throw MalformedRow(path + ":" + std::to_string(i + 1) + ": discharge before admission");
        const auto codes = io::split(f[3], ';');
        if (static_cast<int>(codes.size()) > kMaxCodesPerRecord)
            throw MalformedRow(path + ":" + std::to_string(i + 1) + ": " +
                               std::to_string(codes.size()) + " codes exceeds the record limit of " +
                               std::to_string(kMaxCodesPerRecord));
        for (const auto& c : codes) {
            if (c.empty()) continue;
            if (!tree.contains(c)) {
                if (strict)
                    throw UnknownCode(path + ":" + std::to_string(i + 1) + ": '" + c + "'");
                ++st.codes_dropped;
                continue;
            }
            rec.codes.push_back(c);
        }
        if (rec.codes.empty()) {
            ++st.rows_dropped;
            continue;
        }
        out.push_back(std::move(rec));
        ++st.rows_loaded;
    }
    std::stable_sort(out.begin(), out.end(), [](const AdmissionRecord& a, const AdmissionRecord& b) {
        if (a.patient_id != b.patient_id) return a.patient_id < b.patient_id;
        return a.admit_date < b.admit_date;
    });
    if (stats) *stats = st;
    return out;
}

std::vector<AggregatedRecord> aggregate_windows(const std::vector<AdmissionRecord>& records,
                                                int window_days) {
    std::vector<AggregatedRecord> out;
    std::size_t i = 0;
    while (i < records.size()) {
        const std::string& pid = records[i].patient_id;
        AggregatedRecord agg;
        agg.patient_id = pid;
        agg.window_start = records[i].admit_date;
        agg.window_end = agg.window_start + window_days;
        std::set<std::string> codes;
        agg.last_discharge = records[i].discharge_date;
        while (i < records.size() && records[i].patient_id == pid &&
               records[i].admit_date < agg.window_end) {
            if (records[i].admit_date < agg.window_start)
                throw MalformedRow("admissions for patient '" + pid + "' are not sorted");
            codes.insert(records[i].codes.begin(), records[i].codes.end());
            agg.last_discharge = std::max(agg.last_discharge, records[i].discharge_date);
            ++i;
        }
        agg.code_set.assign(codes.begin(), codes.end());
        out.push_back(std::move(agg));
    }
    return out;
}

std::map<std::string, int> load_deaths(const std::string& path) {
    const auto lines = io::read_lines(path);
    if (lines.empty() || io::split_csv(lines[0], 2)[0] != "patient_id")
        throw MalformedRow(path + ": expected header 'patient_id,death_date'");
    std::map<std::string, int> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io::split_csv(lines[i], 2);
        if (f.size() != 2 || f[0].empty())
            throw MalformedRow(path + ":" + std::to_string(i + 1) + ": expected 2 fields");
        out[f[0]] = io::parse_date(f[1]);
    }
    return out;
}

void attach_labels(std::vector<AggregatedRecord>& aggregated,
                   const std::map<std::string, int>& deaths, int horizon_days) {
    for (auto& rec : aggregated) {
        const auto it = deaths.find(rec.patient_id);
        if (it == deaths.end()) {
            rec.label = 0;
            continue;
        }
        const int death = it->second;
        if (death < rec.window_start)
            throw InconsistentDates("patient '" + rec.patient_id + "' died " +
                                    io::format_date(death) + ", before window start " +
                                    io::format_date(rec.window_start));
        const int gap = death - rec.last_discharge;
        rec.label = (gap >= 0 && gap <= horizon_days) ? 1 : 0;
    }
}

BinaryMatrix one_hot_encode(const std::vector<AggregatedRecord>& aggregated, const IcdTree& tree) {
    std::set<std::string> touched;
    for (const auto& rec : aggregated) {
        for (const auto& code : rec.code_set) {
            touched.insert(code);
            for (const auto& anc : tree.ancestors(code)) touched.insert(anc);
        }
    }
    BinaryMatrix m;
    m.feature_index.assign(touched.begin(), touched.end());  // lexicographic
    m.n_cols = static_cast<int>(m.feature_index.size());
    std::map<std::string, std::uint32_t> col_of;
    for (std::size_t j = 0; j < m.feature_index.size(); ++j)
        col_of[m.feature_index[j]] = static_cast<std::uint32_t>(j);

    m.n_rows = static_cast<int>(aggregated.size());
    m.rows.resize(aggregated.size());
    for (std::size_t r = 0; r < aggregated.size(); ++r) {
        std::set<std::uint32_t> cols;
        for (const auto& code : aggregated[r].code_set) {
            cols.insert(col_of.at(code));
            for (const auto& anc : tree.ancestors(code)) cols.insert(col_of.at(anc));
        }
        m.rows[r].assign(cols.begin(), cols.end());
    }
    return m;
}

Split split(int n_rows, const std::vector<std::string>& row_patients, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
        throw DegenerateSplit("train_fraction must lie in (0,1)");
    const int target = static_cast<int>(std::llround(n_rows * spec.train_fraction));
    Rng rng(derive_seed(spec.seed, "split"));
    std::vector<char> in_train(static_cast<std::size_t>(n_rows), 0);

    if (spec.unit == SplitUnit::Record) {
        std::vector<int> order(static_cast<std::size_t>(n_rows));
        for (int i = 0; i < n_rows; ++i) order[static_cast<std::size_t>(i)] = i;
        rng.shuffle(order);
        for (int i = 0; i < target && i < n_rows; ++i) in_train[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    } else {
        if (static_cast<int>(row_patients.size()) != n_rows)
            throw DimensionMismatch("patient-unit split needs one patient id per row");
        std::vector<std::string> patients;
        std::map<std::string, std::vector<int>> rows_of;
        for (int i = 0; i < n_rows; ++i) {
            auto& v = rows_of[row_patients[static_cast<std::size_t>(i)]];
            if (v.empty()) patients.push_back(row_patients[static_cast<std::size_t>(i)]);
            v.push_back(i);
        }
        rng.shuffle(patients);
        int assigned = 0;
        for (const auto& p : patients) {
            if (assigned >= target) break;
            for (const int r : rows_of[p]) in_train[static_cast<std::size_t>(r)] = 1;
            assigned += static_cast<int>(rows_of[p].size());
        }
    }

    Split s;
    for (int i = 0; i < n_rows; ++i)
        (in_train[static_cast<std::size_t>(i)] ? s.train_rows : s.test_rows).push_back(i);
    if (s.train_rows.empty() || s.test_rows.empty())
        throw DegenerateSplit("split left one side empty (n=" + std::to_string(n_rows) +
                              ", fraction=" + std::to_string(spec.train_fraction) + ")");
    return s;
}

}  // namespace icdsel::cohort
