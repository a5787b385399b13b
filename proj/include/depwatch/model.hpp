#pragma once

/**
 * @file model.hpp
 * @brief Fast/slow responder labelling and a bagged decision-tree classifier.
 *
 * The forest predicts the probability of the fast class. Trees are grown on
 * bootstrap resamples with Gini splits over a random feature subset of size
 * ceil(sqrt(p)); each tree draws from its own generator seeded from the
 * master seed and the tree index, so training order does not matter.
 */

#include "depwatch/error.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::model {

class ModelError : public Error {
public:
    using Error::Error;
};

enum class Label { slow = 0, fast = 1 };

std::string_view to_string(Label l) noexcept;
std::optional<Label> parse_label(std::string_view text);

struct LabelConfig {
    double fast_below_days = 2.0;
    double slow_above_days = 14.0;

    /// Throws ModelError unless 0 <= fast_below_days < slow_above_days.
    void validate() const;
};

/// fast if delay < fast_below_days, slow if delay > slow_above_days, absent otherwise.
std::optional<Label> label(double delay_days, const LabelConfig& cfg = {});

/// A censored delay is a lower bound, so it can only ever be labelled slow.
std::optional<Label> label_censored(double delay_days, const LabelConfig& cfg = {});

struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    std::vector<std::string> ids;  // optional row identifiers

    std::size_t size() const { return rows.size(); }
    std::size_t dims() const { return feature_names.size(); }
    Dataset subset(std::span<const std::size_t> indices) const;
    void validate() const;
};

struct ForestParams {
    std::size_t n_trees = 1000;
    std::size_t min_samples_split = 8;
    std::size_t max_features = 0;  // 0 = ceil(sqrt(p))
    std::size_t max_depth = 0;     // 0 = unlimited
    bool bootstrap = true;
    std::size_t threads = 1;       // results do not depend on this
};

struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double p_fast = 0;  // leaf only; p_slow = 1 - p_fast
};

struct Tree {
    std::vector<Node> nodes;  // nodes[0] is the root
    double predict(std::span<const double> x) const;
    std::size_t depth() const;
};

class Forest {
public:
    ForestParams params;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    std::vector<std::pair<double, double>> feature_ranges;  // training min/max per feature
    std::vector<Tree> trees;
    // Provenance of the train/test split the forest was fitted on.
    std::uint64_t split_seed = 0;
    double test_fraction = 0;

    std::size_t dims() const { return feature_names.size(); }

    /// Mean of per-tree leaf probabilities. Throws on dimension mismatch.
    double predict_proba(std::span<const double> x) const;
    std::vector<double> predict_proba(const std::vector<std::vector<double>>& rows) const;

    void save(std::ostream& out) const;
    static Forest load(std::istream& in);
};

/// Requires both classes and at least two samples.
Forest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed);

/// Seed of tree `index` for a forest trained with `master`.
std::uint64_t tree_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// P(score of a random fast instance > score of a random slow instance), ties 1/2.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

struct Metrics {
    double roc_auc = 0;
    double f1 = 0;
    double precision = 0;
    double recall = 0;
    double accuracy = 0;
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
};

/// Fast is the positive class; predicted fast when score >= threshold.
Metrics evaluate(std::span<const double> scores, std::span<const Label> labels, double threshold = 0.5);

/// Draws each prediction from the empirical class frequencies: 1.0 = fast, 0.0 = slow.
std::vector<double> stratified_baseline(std::span<const Label> labels, std::uint64_t seed, std::size_t count = 0);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per-class shuffled split; each class contributes round(n_c * test_fraction) test rows.
Split stratified_split(std::span<const Label> labels, double test_fraction, std::uint64_t seed);

/// k folds; fold i holds every k-th row of each shuffled class starting at offset i.
std::vector<Split> stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

struct Importance {
    std::size_t feature = 0;
    std::string name;
    double baseline_auc = 0;
    double mean_drop = 0;
    double std_drop = 0;
    std::vector<double> permuted_auc;
};

/// In feature order. Column permutations are seeded per (seed, feature, repeat).
std::vector<Importance> permutation_importance(const Forest& f, const Dataset& test, std::size_t repeats,
                                               std::uint64_t seed);

struct PdpCurve {
    std::size_t feature = 0;
    std::string name;
    std::vector<double> grid;
    std::vector<double> mean_probability;
    std::vector<std::size_t> ice_rows;               // row indices traced
    std::vector<std::vector<double>> ice_traces;     // one per traced row, aligned with grid
};

/// Deciles 0.1..0.9 (deduplicated); the distinct values when there are at most ten.
std::vector<double> default_grid(std::span<const double> column);

struct PdpOptions {
    std::optional<std::vector<double>> grid;
    bool with_ice = false;
    std::size_t ice_samples = 20;
    std::uint64_t seed = 0;
};

PdpCurve partial_dependence(const Forest& f, const std::vector<std::vector<double>>& rows, std::size_t feature,
                            const PdpOptions& options = {});

// --- dataset files ---------------------------------------------------------

/// Line-delimited records {"id", "label", "features": {name: value}, ...}; rows without a label are skipped.
Dataset read_dataset_jsonl(std::istream& in);
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& d);

// --- deterministic randomness ----------------------------------------------

/// splitmix64 finaliser
std::uint64_t mix64(std::uint64_t x) noexcept;

/// std::mt19937_64 with portable bounded and unit draws (the std
/// distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [0, 1).
    double unit();
    double normal();

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            std::swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// --- synthetic data ----------------------------------------------------------

struct SyntheticOptions {
    std::size_t n = 2000;
    double label_noise = 0.0;                    // probability of flipping a label
    std::optional<std::string> constant_feature;  // column held at a single value
};

/// Nine feature columns in the standard order; the restrictive-strategy bit
/// decides the label (restrictive -> slow), every other column is noise.
Dataset synthetic_dataset(const SyntheticOptions& options, std::uint64_t seed);

}  // namespace depwatch::model
