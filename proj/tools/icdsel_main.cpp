// Batch front end: synth -> encode -> select -> evaluate -> report.
// Every stage reads and writes plain files, so a pipeline can resume from any
// point, and every artifact embeds the manifest hash of the run that made it.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/cohort.hpp"
#include "icdsel/errors.hpp"
#include "icdsel/eval.hpp"
#include "icdsel/icd_tree.hpp"
#include "icdsel/io.hpp"
#include "icdsel/manifest.hpp"
#include "icdsel/neural.hpp"
#include "icdsel/selection.hpp"
#include "icdsel/spectral.hpp"
#include "icdsel/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace icdsel;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

struct SynthOpts {
    std::string tree_file;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    synth::SynthConfig cfg;
};

int run_synth(const SynthOpts& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const IcdTree tree = IcdTree::parse_file(opt.tree_file);
    synth::SynthConfig cfg = opt.cfg;
    cfg.seed = opt.seed;
    const synth::SynthOutput out = synth::generate_cohort(tree, cfg);

    RunManifest man;
    man.core["command"] = "synth";
    man.core["tool_version"] = kToolVersion;
    man.core["seed"] = opt.seed;
    man.core["inputs"]["tree"] = io::fingerprint_file(opt.tree_file);
    man.core["config"] = {{"n_patients", cfg.n_patients},
                          {"n_phenotypes", cfg.n_phenotypes},
                          {"codes_per_record_mean", cfg.codes_per_record_mean},
                          {"codes_per_record_sd", cfg.codes_per_record_sd},
                          {"target_record_mortality_rate", cfg.target_record_mortality_rate},
                          {"n_informative_codes", cfg.n_informative_codes},
                          {"effect_sizes", cfg.effect_sizes},
                          {"admissions_per_patient_mean", cfg.admissions_per_patient_mean},
                          {"signature_size", cfg.signature_size},
                          {"signature_boost", cfg.signature_boost},
                          {"window_days", cfg.window_days},
                          {"horizon_days", cfg.horizon_days}};
    io::atomic_write(out_path(opt.out_dir, "admissions.csv"), synth::admissions_csv(out));
    io::atomic_write(out_path(opt.out_dir, "deaths.csv"), synth::deaths_csv(out));
    io::atomic_write(out_path(opt.out_dir, "ground_truth.txt"), synth::ground_truth_txt(out));
    man.timings["total_s"] = seconds_since(t0);
    man.core["result"] = {{"n_admissions", out.admissions.size()},
                          {"n_aggregated_records", out.n_aggregated_records},
                          {"realized_mortality_rate", out.realized_mortality_rate},
                          {"calibrated_intercept", out.calibrated_intercept}};
    man.write(out_path(opt.out_dir, "synth_manifest.json"));
    std::cout << "synth: " << out.admissions.size() << " admissions, "
              << out.n_aggregated_records << " aggregated records, record mortality "
              << out.realized_mortality_rate << "\n";
    return 0;
}

struct EncodeOpts {
    std::string admissions, deaths, tree_file;
    std::string out_dir = ".";
    double train_fraction = 0.67;
    std::uint64_t seed = 0;
    std::string split_unit = "record";
    int window_days = 90;
    int horizon_days = 90;
    bool strict_codes = false;
};

int run_encode(const EncodeOpts& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const IcdTree tree = IcdTree::parse_file(opt.tree_file);
    cohort::LoadStats stats;
    const auto admissions = cohort::load_admissions(opt.admissions, tree, opt.strict_codes, &stats);
    auto aggregated = cohort::aggregate_windows(admissions, opt.window_days);
    const auto deaths = cohort::load_deaths(opt.deaths);
    cohort::attach_labels(aggregated, deaths, opt.horizon_days);
    const BinaryMatrix matrix = cohort::one_hot_encode(aggregated, tree);

    cohort::SplitSpec spec;
    spec.train_fraction = opt.train_fraction;
    spec.seed = opt.seed;
    spec.unit = opt.split_unit == "patient" ? cohort::SplitUnit::Patient : cohort::SplitUnit::Record;
    std::vector<std::string> row_patients;
    for (const auto& rec : aggregated) row_patients.push_back(rec.patient_id);
    const cohort::Split split = cohort::split(matrix.n_rows, row_patients, spec);

    RunManifest man;
    man.core["command"] = "encode";
    man.core["tool_version"] = kToolVersion;
    man.core["seed"] = opt.seed;
    man.core["inputs"] = {{"admissions", io::fingerprint_file(opt.admissions)},
                          {"deaths", io::fingerprint_file(opt.deaths)},
                          {"tree", io::fingerprint_file(opt.tree_file)}};
    man.core["config"] = {{"train_fraction", opt.train_fraction},
                          {"split_unit", opt.split_unit},
                          {"window_days", opt.window_days},
                          {"horizon_days", opt.horizon_days},
                          {"strict_codes", opt.strict_codes}};
    man.core["load_warnings"] = {{"rows_dropped", stats.rows_dropped},
                                 {"codes_dropped", stats.codes_dropped}};

    const std::string matrix_text = matrix.serialize();
    io::atomic_write(out_path(opt.out_dir, "matrix.txt"), matrix_text);

    json meta;
    meta["format_version"] = 1;
    meta["n_rows"] = matrix.n_rows;
    meta["n_cols"] = matrix.n_cols;
    meta["matrix_fingerprint"] = io::fingerprint_bytes(matrix_text.data(), matrix_text.size());
    meta["manifest_hash"] = man.hash();
    meta["split"] = {{"train_fraction", opt.train_fraction},
                     {"seed", opt.seed},
                     {"unit", opt.split_unit},
                     {"train_rows", split.train_rows},
                     {"test_rows", split.test_rows}};
    auto& rows = meta["rows"];
    rows = json::array();
    for (const auto& rec : aggregated)
        rows.push_back({{"patient_id", rec.patient_id},
                        {"window_start", io::format_date(rec.window_start)},
                        {"window_end", io::format_date(rec.window_end)},
                        {"last_discharge", io::format_date(rec.last_discharge)},
                        {"label", rec.label.value_or(0)}});
    io::atomic_write(out_path(opt.out_dir, "matrix_meta.json"), meta.dump(2) + "\n");
    man.timings["total_s"] = seconds_since(t0);
    man.write(out_path(opt.out_dir, "encode_manifest.json"));
    std::cout << "encode: " << matrix.n_rows << " records x " << matrix.n_cols << " features ("
              << split.train_rows.size() << " train / " << split.test_rows.size() << " test)\n";
    return 0;
}

struct SelectOpts {
    std::string matrix_file, meta_file, tree_file;
    std::string out_dir = ".";
    std::vector<std::string> methods{"cae"};
    std::vector<std::uint64_t> seeds{0};
    int n_best = 100;
    int jobs = 1;
    int knn_k = 5;
    int n_eigenvectors = 5;
    int subsample = 0;
    int epochs = -1;      // -1 = method default
    int batch_size = -1;
    double learning_rate = -1.0;
    double alpha = 0.001;
    double beta = 0.1;
    int pca_components = 0;
    int pca_batch_rows = 0;
    bool curve_csv = false;
};

const std::vector<std::string> kMethods{"ls", "mcfs", "pfa", "aefs", "cae", "cae-weighted"};

SelectionResult select_one(const std::string& method, std::uint64_t seed, const SelectOpts& opt,
                           const BinaryMatrix& train, const IcdTree* tree,
                           neural::CaeDiagnostics* cae_diag) {
    if (method == "ls") {
        spectral::LsParams p;
        p.k = opt.knn_k;
        p.n_best = opt.n_best;
        p.seed = seed;
        if (opt.subsample > 0) p.subsample = opt.subsample;
        return spectral::laplacian_score_select(train, p);
    }
    if (method == "mcfs") {
        spectral::McfsParams p;
        p.k = opt.knn_k;
        p.n_eigenvectors = opt.n_eigenvectors;
        p.n_best = opt.n_best;
        p.seed = seed;
        if (opt.subsample > 0) p.subsample = opt.subsample;
        return spectral::mcfs(train, p);
    }
    if (method == "pfa") {
        spectral::PfaParams p;
        p.n_components = opt.pca_components;
        p.n_best = opt.n_best;
        p.batch_rows = opt.pca_batch_rows;
        p.seed = seed;
        return spectral::pfa(train, p);
    }
    if (method == "aefs") {
        neural::AefsConfig c;
        c.alpha = opt.alpha;
        c.beta = opt.beta;
        c.n_best = opt.n_best;
        c.seed = seed;
        if (opt.epochs > 0) c.epochs = opt.epochs;
        if (opt.batch_size > 0) c.batch_size = opt.batch_size;
        if (opt.learning_rate > 0) c.learning_rate = opt.learning_rate;
        return neural::aefs_train(train, c);
    }
    neural::CaeConfig c;
    c.n_best = opt.n_best;
    c.seed = seed;
    if (opt.epochs > 0) c.epochs = opt.epochs;
    if (opt.batch_size > 0) c.batch_size = opt.batch_size;
    if (opt.learning_rate > 0) c.learning_rate = opt.learning_rate;
    if (method == "cae-weighted") {
        c.feature_weights.reserve(train.feature_index.size());
        for (const auto& code : train.feature_index)
            c.feature_weights.push_back(tree->feature_weight(code));
    }
    return neural::cae_train(train, c, cae_diag);
}

int run_select(const SelectOpts& opt) {
    for (const auto& m : opt.methods)
        if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
            std::ostringstream ss;
            ss << "unknown method '" << m << "'; valid:";
            for (const auto& k : kMethods) ss << ' ' << k;
            throw Error(ErrorKind::Usage, "UnknownMethod", ss.str());
        }
    const bool needs_tree =
        std::find(opt.methods.begin(), opt.methods.end(), "cae-weighted") != opt.methods.end();
    if (needs_tree && opt.tree_file.empty())
        throw Error(ErrorKind::Usage, "MissingTree",
                    "--method cae-weighted needs --tree (weights come from code depths)");

    const std::string matrix_text = io::read_file(opt.matrix_file);
    const BinaryMatrix matrix = BinaryMatrix::deserialize(matrix_text);
    const json meta = json::parse(io::read_file(opt.meta_file));
    const std::vector<int> train_rows = meta.at("split").at("train_rows").get<std::vector<int>>();
    const BinaryMatrix train = matrix.take_rows(train_rows);
    const std::string fingerprint =
        io::fingerprint_bytes(matrix_text.data(), matrix_text.size());

    std::optional<IcdTree> tree;
    if (!opt.tree_file.empty()) tree = IcdTree::parse_file(opt.tree_file);

    RunManifest man;
    man.core["command"] = "select";
    man.core["tool_version"] = kToolVersion;
    man.core["inputs"] = {{"matrix", fingerprint}};
    man.core["seeds"] = opt.seeds;
    man.core["config"] = {{"methods", opt.methods},
                          {"n_best", opt.n_best},
                          {"knn_k", opt.knn_k},
                          {"n_eigenvectors", opt.n_eigenvectors},
                          {"subsample", opt.subsample},
                          {"epochs", opt.epochs},
                          {"batch_size", opt.batch_size},
                          {"learning_rate", opt.learning_rate},
                          {"alpha", opt.alpha},
                          {"beta", opt.beta}};
    // resolved readings of the underdetermined knobs, for the record
    man.core["flags"] = {{"graph_axis", "samples"},
                         {"split_unit", meta.at("split").at("unit")},
                         {"weight_normalization", "raw"}};
    const std::string man_hash = man.hash();

    struct Task {
        std::string method;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& m : opt.methods)
        for (const auto s : opt.seeds) tasks.push_back({m, s});

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, opt.jobs);
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            try {
                neural::CaeDiagnostics diag;
                SelectionResult r = select_one(task.method, task.seed, opt, train,
                                               tree ? &*tree : nullptr, &diag);
                r.input_fingerprint = fingerprint;
                r.manifest_hash = man_hash;
                const std::string stem = task.method + "_seed" + std::to_string(task.seed);
                io::atomic_write(out_path(opt.out_dir, "selection_" + stem + ".json"),
                                 r.to_json(matrix.feature_index));
                if (opt.curve_csv && (task.method == "cae" || task.method == "cae-weighted")) {
                    std::ostringstream ss;
                    ss << "epoch,loss,temperature,mean_max_prob\n";
                    for (std::size_t e = 0; e < diag.loss.size(); ++e)
                        ss << e << ',' << io::format_double(diag.loss[e]) << ','
                           << io::format_double(diag.temperature[e]) << ','
                           << io::format_double(diag.mean_max_prob[e]) << '\n';
                    io::atomic_write(out_path(opt.out_dir, "curve_" + stem + ".csv"), ss.str());
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!errors[i].empty())
            throw Error(ErrorKind::Numeric, "SelectionFailed",
                        tasks[i].method + " seed " + std::to_string(tasks[i].seed) + ": " + errors[i]);
    man.timings["total_s"] = seconds_since(t0);
    man.write(out_path(opt.out_dir, "select_manifest.json"));
    std::cout << "select: wrote " << tasks.size() << " selection file(s) to " << opt.out_dir << "\n";
    return 0;
}

struct EvaluateOpts {
    std::string selection_file, matrix_file, meta_file, tree_file;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool skip_outcome = false;
    int epochs = 100;
    int logistic_epochs = 100;
    int batch_size = 64;
};

int run_evaluate(const EvaluateOpts& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const SelectionResult sel = SelectionResult::from_json(io::read_file(opt.selection_file));
    const std::string matrix_text = io::read_file(opt.matrix_file);
    const BinaryMatrix matrix = BinaryMatrix::deserialize(matrix_text);
    const json meta = json::parse(io::read_file(opt.meta_file));
    const IcdTree tree = IcdTree::parse_file(opt.tree_file);
    const std::string fingerprint = io::fingerprint_bytes(matrix_text.data(), matrix_text.size());
    if (!sel.input_fingerprint.empty() && sel.input_fingerprint != fingerprint)
        throw Error(ErrorKind::Data, "FingerprintMismatch",
                    "selection was computed on a different matrix (" + sel.input_fingerprint +
                        " vs " + fingerprint + ")");

    const std::vector<int> train_rows = meta.at("split").at("train_rows").get<std::vector<int>>();
    const std::vector<int> test_rows = meta.at("split").at("test_rows").get<std::vector<int>>();
    const BinaryMatrix train = matrix.take_rows(train_rows);
    const BinaryMatrix test = matrix.take_rows(test_rows);
    std::vector<int> all_labels;
    for (const auto& row : meta.at("rows")) all_labels.push_back(row.at("label").get<int>());
    std::vector<int> train_labels, test_labels;
    for (const int r : train_rows) train_labels.push_back(all_labels.at(static_cast<std::size_t>(r)));
    for (const int r : test_rows) test_labels.push_back(all_labels.at(static_cast<std::size_t>(r)));

    eval::EvalConfig cfg;
    cfg.seed = opt.seed;
    cfg.epochs = opt.epochs;
    cfg.logistic_epochs = opt.logistic_epochs;
    cfg.batch_size = opt.batch_size;

    RunManifest man;
    man.core["command"] = "evaluate";
    man.core["tool_version"] = kToolVersion;
    man.core["seed"] = opt.seed;
    man.core["inputs"] = {{"matrix", fingerprint},
                          {"selection", io::fingerprint_file(opt.selection_file)},
                          {"tree", io::fingerprint_file(opt.tree_file)}};
    man.core["config"] = {{"epochs", opt.epochs},
                          {"logistic_epochs", opt.logistic_epochs},
                          {"batch_size", opt.batch_size},
                          {"skip_outcome", opt.skip_outcome}};
    const std::string man_hash = man.hash();

    const eval::ReconReport recon = eval::reconstruct_eval(sel, train, test, cfg);
    const long dsum = eval::depth_sum(sel, matrix.feature_index, tree);

    json report;
    report["method"] = sel.method;
    report["seed"] = sel.seed;
    report["eval_seed"] = opt.seed;
    report["manifest_hash"] = man_hash;
    report["input_fingerprint"] = fingerprint;
    report["n_selected"] = sel.selected.size();
    report["depth_sum"] = dsum;
    report["reconstruction"] = {{"mean_accuracy", recon.mean_accuracy},
                                {"bce", recon.bce},
                                {"baseline_mean_accuracy", recon.baseline_mean_accuracy},
                                {"baseline_bce", recon.baseline_bce},
                                {"t_statistic", recon.t_statistic},
                                {"p_value", recon.p_value},
                                {"significant", recon.p_value < 0.05},
                                {"t_zero_variance", recon.t_zero_variance}};

    const std::string stem = sel.method + "_seed" + std::to_string(sel.seed);
    {
        std::ostringstream ss;
        ss << "method,seed,mean_accuracy,bce,t_statistic,p_value,significant,depth_sum\n";
        ss << sel.method << ',' << sel.seed << ',' << io::format_double(recon.mean_accuracy) << ','
           << io::format_double(recon.bce) << ',' << io::format_double(recon.t_statistic) << ','
           << io::format_double(recon.p_value) << ',' << (recon.p_value < 0.05 ? 1 : 0) << ','
           << dsum << '\n';
        io::atomic_write(out_path(opt.out_dir, "table1_" + stem + ".csv"), ss.str());
    }
    {
        const eval::Histogram h = eval::accuracy_histogram(recon.per_feature_accuracy);
        std::ostringstream ss;
        ss << "bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            ss << io::format_double(h.edges[b]) << ',' << io::format_double(h.edges[b + 1]) << ','
               << h.counts[b] << '\n';
        io::atomic_write(out_path(opt.out_dir, "hist_" + stem + ".csv"), ss.str());
    }
    {
        std::ostringstream ss;
        ss << "code,percent\n";
        for (const auto& [code, pct] : eval::prevalence_report(matrix))
            ss << code << ',' << io::format_double(pct) << '\n';
        io::atomic_write(out_path(opt.out_dir, "prevalence.csv"), ss.str());
    }
    if (!opt.skip_outcome) {
        const eval::OutcomeReport oc =
            eval::outcome_eval(sel, train, test, train_labels, test_labels, cfg);
        report["outcome"] = {{"accuracy", oc.accuracy}, {"f1", oc.f1},       {"recall", oc.recall},
                             {"precision", oc.precision}, {"tp", oc.tp},     {"fp", oc.fp},
                             {"tn", oc.tn},               {"fn", oc.fn}};
        std::ostringstream ss;
        ss << "method,seed,accuracy,f1,recall,precision,tp,fp,tn,fn\n";
        ss << sel.method << ',' << sel.seed << ',' << io::format_double(oc.accuracy) << ','
           << io::format_double(oc.f1) << ',' << io::format_double(oc.recall) << ','
           << io::format_double(oc.precision) << ',' << oc.tp << ',' << oc.fp << ',' << oc.tn
           << ',' << oc.fn << '\n';
        io::atomic_write(out_path(opt.out_dir, "table2_" + stem + ".csv"), ss.str());
    }
    io::atomic_write(out_path(opt.out_dir, "eval_" + stem + ".json"), report.dump(2) + "\n");
    man.timings["total_s"] = seconds_since(t0);
    man.write(out_path(opt.out_dir, "evaluate_manifest_" + stem + ".json"));
    std::cout << "evaluate: " << stem << " mean_accuracy=" << recon.mean_accuracy
              << " bce=" << recon.bce << "\n";
    return 0;
}

struct ReportOpts {
    std::string in_dir = ".";
    std::string out_dir = ".";
};

int run_report(const ReportOpts& opt) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.in_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("eval_", 0) == 0 && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error(ErrorKind::Data, "NoReports", "no eval_*.json files in " + opt.in_dir);
    std::ostringstream t1, t2;
    t1 << "method,seed,mean_accuracy,bce,t_statistic,p_value,significant,depth_sum\n";
    t2 << "method,seed,accuracy,f1,recall,precision,tp,fp,tn,fn\n";
    bool any_outcome = false;
    for (const auto& f : files) {
        const json r = json::parse(io::read_file(f.string()));
        const auto& rec = r.at("reconstruction");
        t1 << r.at("method").get<std::string>() << ',' << r.at("seed").get<std::uint64_t>() << ','
           << io::format_double(rec.at("mean_accuracy").get<double>()) << ','
           << io::format_double(rec.at("bce").get<double>()) << ','
           << io::format_double(rec.at("t_statistic").get<double>()) << ','
           << io::format_double(rec.at("p_value").get<double>()) << ','
           << (rec.at("significant").get<bool>() ? 1 : 0) << ',' << r.at("depth_sum").get<long>()
           << '\n';
        if (r.contains("outcome")) {
            any_outcome = true;
            const auto& oc = r.at("outcome");
            t2 << r.at("method").get<std::string>() << ',' << r.at("seed").get<std::uint64_t>()
               << ',' << io::format_double(oc.at("accuracy").get<double>()) << ','
               << io::format_double(oc.at("f1").get<double>()) << ','
               << io::format_double(oc.at("recall").get<double>()) << ','
               << io::format_double(oc.at("precision").get<double>()) << ','
               << oc.at("tp").get<long>() << ',' << oc.at("fp").get<long>() << ','
               << oc.at("tn").get<long>() << ',' << oc.at("fn").get<long>() << '\n';
        }
    }
    io::atomic_write(out_path(opt.out_dir, "table1.csv"), t1.str());
    if (any_outcome) io::atomic_write(out_path(opt.out_dir, "table2.csv"), t2.str());
    std::cout << "report: merged " << files.size() << " evaluation(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsupervised selection of informative hierarchical diagnosis codes"};
    app.set_version_flag("--version", std::string("icdsel ") + kToolVersion);
    app.require_subcommand(1);

    SynthOpts synth_opt;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic cohort");
    cmd_synth->set_config("--config");
    cmd_synth->add_option("--tree", synth_opt.tree_file, "hierarchy CSV")->required();
    cmd_synth->add_option("--out-dir", synth_opt.out_dir);
    cmd_synth->add_option("--seed", synth_opt.seed);
    cmd_synth->add_option("--n-patients", synth_opt.cfg.n_patients);
    cmd_synth->add_option("--n-phenotypes", synth_opt.cfg.n_phenotypes);
    cmd_synth->add_option("--codes-mean", synth_opt.cfg.codes_per_record_mean);
    cmd_synth->add_option("--codes-sd", synth_opt.cfg.codes_per_record_sd);
    cmd_synth->add_option("--mortality-rate", synth_opt.cfg.target_record_mortality_rate);
    cmd_synth->add_option("--n-informative", synth_opt.cfg.n_informative_codes);
    cmd_synth->add_option("--effect-sizes", synth_opt.cfg.effect_sizes);
    cmd_synth->add_option("--admissions-mean", synth_opt.cfg.admissions_per_patient_mean);
    cmd_synth->add_option("--signature-size", synth_opt.cfg.signature_size);
    cmd_synth->add_option("--signature-boost", synth_opt.cfg.signature_boost);

    EncodeOpts encode_opt;
    auto* cmd_encode = app.add_subcommand("encode", "aggregate, label, one-hot encode, split");
    cmd_encode->set_config("--config");
    cmd_encode->add_option("--admissions", encode_opt.admissions)->required();
    cmd_encode->add_option("--deaths", encode_opt.deaths)->required();
    cmd_encode->add_option("--tree", encode_opt.tree_file)->required();
    cmd_encode->add_option("--out-dir", encode_opt.out_dir);
    cmd_encode->add_option("--split", encode_opt.train_fraction);
    cmd_encode->add_option("--seed", encode_opt.seed);
    cmd_encode->add_option("--split-unit", encode_opt.split_unit)
        ->check(CLI::IsMember({"record", "patient"}));
    cmd_encode->add_option("--window-days", encode_opt.window_days);
    cmd_encode->add_option("--horizon-days", encode_opt.horizon_days);
    cmd_encode->add_flag("--strict-codes", encode_opt.strict_codes);

    SelectOpts select_opt;
    auto* cmd_select = app.add_subcommand("select", "run feature selectors on the train split");
    cmd_select->set_config("--config");
    cmd_select->add_option("--matrix", select_opt.matrix_file)->required();
    cmd_select->add_option("--meta", select_opt.meta_file)->required();
    cmd_select->add_option("--tree", select_opt.tree_file);
    cmd_select->add_option("--out-dir", select_opt.out_dir);
    cmd_select->add_option("--method", select_opt.methods)->delimiter(',');
    cmd_select->add_option("--seed", select_opt.seeds)->delimiter(',');
    cmd_select->add_option("--n-best", select_opt.n_best);
    cmd_select->add_option("--jobs", select_opt.jobs);
    cmd_select->add_option("--knn-k", select_opt.knn_k);
    cmd_select->add_option("--n-eigenvectors", select_opt.n_eigenvectors);
    cmd_select->add_option("--subsample", select_opt.subsample);
    cmd_select->add_option("--epochs", select_opt.epochs);
    cmd_select->add_option("--batch-size", select_opt.batch_size);
    cmd_select->add_option("--learning-rate", select_opt.learning_rate);
    cmd_select->add_option("--alpha", select_opt.alpha);
    cmd_select->add_option("--beta", select_opt.beta);
    cmd_select->add_option("--pca-components", select_opt.pca_components);
    cmd_select->add_option("--pca-batch-rows", select_opt.pca_batch_rows);
    cmd_select->add_flag("--curve-csv", select_opt.curve_csv);

    EvaluateOpts eval_opt;
    auto* cmd_eval = app.add_subcommand("evaluate", "reconstruction + outcome evaluation");
    cmd_eval->set_config("--config");
    cmd_eval->add_option("--selection", eval_opt.selection_file)->required();
    cmd_eval->add_option("--matrix", eval_opt.matrix_file)->required();
    cmd_eval->add_option("--meta", eval_opt.meta_file)->required();
    cmd_eval->add_option("--tree", eval_opt.tree_file)->required();
    cmd_eval->add_option("--out-dir", eval_opt.out_dir);
    cmd_eval->add_option("--seed", eval_opt.seed);
    cmd_eval->add_flag("--skip-outcome", eval_opt.skip_outcome);
    cmd_eval->add_option("--epochs", eval_opt.epochs);
    cmd_eval->add_option("--logistic-epochs", eval_opt.logistic_epochs);
    cmd_eval->add_option("--batch-size", eval_opt.batch_size);

    ReportOpts report_opt;
    auto* cmd_report = app.add_subcommand("report", "merge evaluation JSONs into summary tables");
    cmd_report->add_option("--in-dir", report_opt.in_dir);
    cmd_report->add_option("--out-dir", report_opt.out_dir);

    try {
        app.parse(argc, argv);
        if (cmd_synth->parsed()) return run_synth(synth_opt);
        if (cmd_encode->parsed()) return run_encode(encode_opt);
        if (cmd_select->parsed()) return run_select(select_opt);
        if (cmd_eval->parsed()) return run_evaluate(eval_opt);
        if (cmd_report->parsed()) return run_report(report_opt);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        const char* kind = e.kind() == ErrorKind::Usage    ? "usage"
                           : e.kind() == ErrorKind::Data   ? "data"
                                                           : "numeric";
        std::cerr << "error: {\"kind\":\"" << kind << "\",\"message\":\"" << e.what() << "\"}\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: {\"kind\":\"numeric\",\"message\":\"" << e.what() << "\"}\n";
        return 4;
    }
}
