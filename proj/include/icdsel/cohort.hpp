#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/icd_tree.hpp"

namespace icdsel::cohort {

constexpr int kMaxCodesPerRecord = 25;

struct AdmissionRecord {
    std::string patient_id;
    int admit_date = 0;      // days since 1970-01-01
    int discharge_date = 0;
    std::vector<std::string> codes;
};

struct AggregatedRecord {
    std::string patient_id;
    int window_start = 0;
    int window_end = 0;      // window_start + window_days (half-open bound)
    std::vector<std::string> code_set;  // sorted, deduplicated
    int last_discharge = 0;
    std::optional<int> label;
};

struct LoadStats {
    int rows_loaded = 0;
    int rows_dropped = 0;    // rows left with zero valid codes
    int codes_dropped = 0;   // unknown codes removed in lenient mode
};

// Admissions CSV: patient_id,admit_date,discharge_date,codes (';'-separated).
// strict=true turns unknown codes into an error instead of a counted drop.
std::vector<AdmissionRecord> load_admissions(const std::string& path, const IcdTree& tree,
                                             bool strict, LoadStats* stats = nullptr);

// Greedy sequential 90-day windows per patient: the earliest unassigned
// admission anchors [t, t+window_days); everything admitted inside merges.
std::vector<AggregatedRecord> aggregate_windows(const std::vector<AdmissionRecord>& records,
                                                int window_days = 90);

// Deaths CSV: patient_id,death_date. label = 1 iff
// 0 <= death - last_discharge <= horizon_days.
std::map<std::string, int> load_deaths(const std::string& path);
void attach_labels(std::vector<AggregatedRecord>& aggregated,
                   const std::map<std::string, int>& deaths, int horizon_days = 90);

// Ancestor-closed one-hot encoding; columns are the union of codes and their
// ancestors over all records, ordered lexicographically.
BinaryMatrix one_hot_encode(const std::vector<AggregatedRecord>& aggregated, const IcdTree& tree);

enum class SplitUnit { Record, Patient };

struct SplitSpec {
    double train_fraction = 0.67;
    std::uint64_t seed = 0;
    SplitUnit unit = SplitUnit::Record;
};

struct Split {
    std::vector<int> train_rows;  // ascending
    std::vector<int> test_rows;
};

Split split(int n_rows, const std::vector<std::string>& row_patients, const SplitSpec& spec);

}  // namespace icdsel::cohort
