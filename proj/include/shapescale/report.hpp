#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shapescale/ari.hpp"
#include "shapescale/csv.hpp"
#include "shapescale/dataset.hpp"
#include "shapescale/kmeans.hpp"
#include "shapescale/problem_p.hpp"

namespace shapescale {

/// Equal-width histogram of the pairwise distances of a scaled matrix.
struct Histogram {
    std::vector<double> edges;        // bins + 1 monotone edges, [0, max r]
    std::vector<std::int64_t> counts;  // one per bin; sums to the pair count
};

/// Histogram over [0, max r_ij] with `bins` equal-width bins; the maximum
/// distance lands in the last bin. Throws UsageError when bins < 1.
Histogram distance_histogram(const std::vector<double>& matrix, std::size_t n, std::size_t d,
                             std::size_t bins);

struct PipelineConfig {
    std::string input_path;
    CsvOptions csv;
    std::string dataset_name;  // defaults to the input file stem

    bool impute = true;
    std::optional<std::size_t> pca_m;

    std::size_t trial_count = 1000;
    TrialConfig trial;
    ObjectiveVariant variant = ObjectiveVariant::pair_one_two;

    KMeansConfig kmeans;
    std::optional<std::size_t> cluster_count;  // defaults to the reference partition's count

    std::size_t hist_bins = 50;
    int threads = 0;  // 0 = all hardware threads
    std::string output_dir;

    bool lazy_pairs = false;  // on-the-fly pair mode for memory-constrained data
    std::size_t pair_budget_bytes = std::size_t{1} << 31;

    void validate() const;
};

/// One scaling scheme's clustering outcome on the full matrix.
struct SchemeOutcome {
    std::string name;
    Partition partition;
    AriReport ari;
    Histogram hist;
    double min_pair_distance = 0.0;
    double distance_variance = 0.0;  // variance of the pairwise-distance set
};

/// Per-trial scatter record (the per-trial view of the batch).
struct TrialPoint {
    std::size_t index = 0;
    double alpha1 = 0.0;
    double sc = 0.0;
    double ari_fnc = 0.0;
    bool converged = false;
};

struct ReportBundle {
    std::string dataset_name;
    std::size_t n_orig = 0;
    std::size_t d = 0;
    std::size_t n_unique = 0;
    std::size_t cluster_count = 0;
    std::vector<double> sigmas;
    std::optional<double> variance_retained;
    std::string notes;  // documented deviations (imputation method, solver family)

    Partition reference;
    SchemeOutcome no_scaling;
    SchemeOutcome inv_sigma;

    TrialSet trials;
    std::vector<TrialPoint> scatter;

    bool interval_available = false;
    double ari_low = 0.0;
    double ari_high = 0.0;
    std::optional<std::size_t> best_trial_index;       // highest ARI_fnc, lowest index on ties
    std::optional<SchemeOutcome> best_alpha;           // clustering with the best trial's factors
    std::vector<double> best_alpha_over_sigma;         // alpha_k / sigma_k of the best trial
};

/// Load, preprocess and validate the input named by the config: parse the
/// CSV, impute when enabled, optionally PCA-reduce. Returns the dataset and
/// the retained-variance fraction when PCA ran.
std::pair<Dataset, std::optional<double>> load_input(const PipelineConfig& config);

/// Full pipeline: ingest, sigma, dedup, trial batch, per-trial clustering
/// and scoring, scheme comparison. Requires reference labels (ARI needs
/// them); throws DataError directing the caller to plain clustering
/// otherwise.
ReportBundle run_pipeline(const PipelineConfig& config);

/// Write every bundle artifact (summary, trial stream, labels, histograms,
/// scatter) under config.output_dir. Output is byte-stable for a fixed
/// configuration and seed set.
void write_bundle(const ReportBundle& bundle, const std::string& output_dir);

/// One comparison-table row: ARI_fnc per scheme plus the trial interval.
struct CompareRow {
    std::string dataset;
    double no_scaling = 0.0;
    double inv_sigma = 0.0;
    bool interval_available = false;
    double alpha_low = 0.0;
    double alpha_high = 0.0;
};

CompareRow compare_row(const ReportBundle& bundle);
std::string render_compare_csv(const std::vector<CompareRow>& rows);
std::string render_compare_table(const std::vector<CompareRow>& rows);

}  // namespace shapescale
