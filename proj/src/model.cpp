#include "depwatch/model.hpp"

#include "depwatch/stats.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace depwatch::model {

std::string_view to_string(Label l) noexcept { return l == Label::fast ? "fast" : "slow"; }

std::optional<Label> parse_label(std::string_view text) {
    if (text == "fast" || text == "1") return Label::fast;
    if (text == "slow" || text == "0") return Label::slow;
    return std::nullopt;
}

void LabelConfig::validate() const {
    if (!(fast_below_days >= 0 && fast_below_days < slow_above_days)) {
        throw ModelError(fmt::format("label thresholds must satisfy 0 <= fast ({}) < slow ({})", fast_below_days,
                                     slow_above_days));
    }
}

std::optional<Label> label(double delay_days, const LabelConfig& cfg) {
    if (delay_days < cfg.fast_below_days) return Label::fast;
    if (delay_days > cfg.slow_above_days) return Label::slow;
    return std::nullopt;
}

std::optional<Label> label_censored(double delay_days, const LabelConfig& cfg) {
    if (delay_days > cfg.slow_above_days) return Label::slow;
    return std::nullopt;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.feature_names = feature_names;
    for (auto i : indices) {
        out.rows.push_back(rows.at(i));
        out.labels.push_back(labels.at(i));
        if (!ids.empty()) out.ids.push_back(ids.at(i));
    }
    return out;
}

void Dataset::validate() const {
    if (labels.size() != rows.size()) throw ModelError("label count differs from row count");
    if (!ids.empty() && ids.size() != rows.size()) throw ModelError("id count differs from row count");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != feature_names.size()) {
            throw ModelError(fmt::format("row {} has {} values, expected {}", i, rows[i].size(), feature_names.size()));
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) throw ModelError(fmt::format("row {} holds a non-finite value", i));
        }
    }
}

// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

std::uint64_t Rng::next() { return engine_(); }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    const double u1 = 1.0 - unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

std::uint64_t tree_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ (index + 1) * 0xD1B54A32D192ED03ULL);
}

// ---------------------------------------------------------------------------

double Tree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].p_fast;
}

std::size_t Tree::depth() const {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t best = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (nodes[i].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
        }
    }
    return best;
}

double Forest::predict_proba(std::span<const double> x) const {
    if (x.size() != dims()) {
        throw ModelError(fmt::format("input has {} features, the model expects {}", x.size(), dims()));
    }
    if (trees.empty()) throw ModelError("forest has no trees");
    double sum = 0;
    for (const auto& t : trees) sum += t.predict(x);
    return sum / static_cast<double>(trees.size());
}

std::vector<double> Forest::predict_proba(const std::vector<std::vector<double>>& rows) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(predict_proba(r));
    return out;
}

namespace {

class TreeGrower {
public:
    TreeGrower(const Dataset& d, const ForestParams& p, std::size_t mtry, std::uint64_t seed)
        : d_(d), p_(p), mtry_(mtry), rng_(seed) {}

    Tree grow() {
        const std::size_t n = d_.size();
        samples_.resize(n);
        if (p_.bootstrap) {
            for (auto& s : samples_) s = static_cast<std::size_t>(rng_.below(n));
        } else {
            std::iota(samples_.begin(), samples_.end(), std::size_t{0});
        }
        features_.resize(d_.dims());
        std::iota(features_.begin(), features_.end(), std::size_t{0});

        Tree tree;
        struct Work {
            std::size_t node, begin, end, depth;
        };
        tree.nodes.emplace_back();
        std::vector<Work> stack{{0, 0, n, 0}};
        while (!stack.empty()) {
            const Work w = stack.back();
            stack.pop_back();
            const std::size_t m = w.end - w.begin;
            std::size_t fast = 0;
            for (std::size_t i = w.begin; i < w.end; ++i) fast += d_.labels[samples_[i]] == Label::fast;

            const bool stop = m < p_.min_samples_split || fast == 0 || fast == m ||
                              (p_.max_depth != 0 && w.depth >= p_.max_depth);
            std::optional<std::pair<std::size_t, double>> split;
            if (!stop) split = best_split(w.begin, w.end);
            if (!split) {
                tree.nodes[w.node].p_fast = static_cast<double>(fast) / static_cast<double>(m);
                continue;
            }
            const auto [feature, threshold] = *split;
            auto mid = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                      samples_.begin() + static_cast<std::ptrdiff_t>(w.end),
                                      [&](std::size_t s) { return d_.rows[s][feature] <= threshold; });
            const auto split_at = static_cast<std::size_t>(mid - samples_.begin());
            const auto left = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[w.node];
            node.feature = static_cast<int>(feature);
            node.threshold = threshold;
            node.left = left;
            node.right = left + 1;
            stack.push_back({static_cast<std::size_t>(left + 1), split_at, w.end, w.depth + 1});
            stack.push_back({static_cast<std::size_t>(left), w.begin, split_at, w.depth + 1});
        }
        return tree;
    }

private:
    const Dataset& d_;
    const ForestParams& p_;
    std::size_t mtry_;
    Rng rng_;
    std::vector<std::size_t> samples_;
    std::vector<std::size_t> features_;
    std::vector<std::pair<double, Label>> column_;

    // Features are visited in random order until mtry_ of them have been
    // non-constant in the node; the lowest weighted Gini impurity wins.
    std::optional<std::pair<std::size_t, double>> best_split(std::size_t begin, std::size_t end) {
        rng_.shuffle(features_.begin(), features_.end());
        const double m = static_cast<double>(end - begin);
        std::optional<std::pair<std::size_t, double>> best;
        double best_impurity = std::numeric_limits<double>::infinity();
        std::size_t visited = 0;
        for (std::size_t f : features_) {
            if (visited >= mtry_) break;
            column_.clear();
            for (std::size_t i = begin; i < end; ++i) column_.emplace_back(d_.rows[samples_[i]][f], d_.labels[samples_[i]]);
            std::sort(column_.begin(), column_.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (column_.front().first == column_.back().first) continue;
            ++visited;

            double total_fast = 0;
            for (const auto& [v, l] : column_) total_fast += l == Label::fast;
            double left_fast = 0;
            for (std::size_t i = 0; i + 1 < column_.size(); ++i) {
                left_fast += column_[i].second == Label::fast;
                if (column_[i].first == column_[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = m - nl;
                const double pl = left_fast / nl;
                const double pr = (total_fast - left_fast) / nr;
                const double impurity = (nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr)) / m;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    const double a = column_[i].first, b = column_[i + 1].first;
                    double t = a + (b - a) / 2.0;
                    if (!(t >= a && t < b)) t = a;
                    best = std::make_pair(f, t);
                }
            }
        }
        return best;
    }
};

}  // namespace

Forest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed) {
    data.validate();
    if (data.size() < 2) throw ModelError("training needs at least two samples");
    const auto fast = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), Label::fast));
    if (fast == 0 || fast == data.size()) throw ModelError("training data holds a single class");
    if (params.n_trees == 0) throw ModelError("n_trees must be positive");
    if (data.dims() == 0) throw ModelError("training data has no features");

    Forest forest;
    forest.params = params;
    forest.seed = seed;
    forest.feature_names = data.feature_names;
    for (std::size_t f = 0; f < data.dims(); ++f) {
        double lo = data.rows[0][f], hi = data.rows[0][f];
        for (const auto& r : data.rows) {
            lo = std::min(lo, r[f]);
            hi = std::max(hi, r[f]);
        }
        forest.feature_ranges.emplace_back(lo, hi);
    }
    const std::size_t mtry = params.max_features
                                 ? std::min(params.max_features, data.dims())
                                 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.dims()))));

    forest.trees.resize(params.n_trees);
    auto grow_range = [&](std::size_t worker, std::size_t workers) {
        for (std::size_t t = worker; t < params.n_trees; t += workers) {
            forest.trees[t] = TreeGrower(data, params, mtry, tree_seed(seed, t)).grow();
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(params.threads, params.n_trees));
    if (workers == 1) {
        grow_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(grow_range, w, workers);
        for (auto& th : pool) th.join();
    }
    return forest;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "depwatch-forest";
constexpr int kFormatVersion = 1;

std::string next_token(std::istream& in, std::string_view what) {
    std::string tok;
    if (!(in >> tok)) throw ModelError(fmt::format("model file truncated while reading {}", what));
    return tok;
}

template <typename T>
T parse_number(std::istream& in, std::string_view what) {
    const auto tok = next_token(in, what);
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ModelError(fmt::format("model file: bad {} '{}'", what, tok));
    }
    return value;
}

void expect_word(std::istream& in, std::string_view word) {
    const auto tok = next_token(in, word);
    if (tok != word) throw ModelError(fmt::format("model file: expected '{}', found '{}'", word, tok));
}

}  // namespace

void Forest::save(std::ostream& out) const {
    out << fmt::format("{} {}\n", kMagic, kFormatVersion);
    out << fmt::format("seed {}\n", seed);
    out << fmt::format("split_seed {}\ntest_fraction {}\n", split_seed, test_fraction);
    out << fmt::format("params {} {} {} {} {}\n", params.n_trees, params.min_samples_split, params.max_features,
                       params.max_depth, params.bootstrap ? 1 : 0);
    out << fmt::format("features {}\n", feature_names.size());
    for (std::size_t f = 0; f < feature_names.size(); ++f) {
        out << fmt::format("{} {} {}\n", feature_names[f], feature_ranges[f].first, feature_ranges[f].second);
    }
    out << fmt::format("trees {}\n", trees.size());
    for (const auto& t : trees) {
        out << fmt::format("tree {}\n", t.nodes.size());
        for (const auto& n : t.nodes) {
            if (n.feature < 0) {
                out << fmt::format("L {}\n", n.p_fast);
            } else {
                out << fmt::format("S {} {} {} {}\n", n.feature, n.threshold, n.left, n.right);
            }
        }
    }
    out << "end\n";
}

Forest Forest::load(std::istream& in) {
    Forest f;
    expect_word(in, kMagic);
    const int version = parse_number<int>(in, "format version");
    if (version != kFormatVersion) throw ModelError(fmt::format("unsupported model format version {}", version));
    expect_word(in, "seed");
    f.seed = parse_number<std::uint64_t>(in, "seed");
    expect_word(in, "split_seed");
    f.split_seed = parse_number<std::uint64_t>(in, "split seed");
    expect_word(in, "test_fraction");
    f.test_fraction = parse_number<double>(in, "test fraction");
    expect_word(in, "params");
    f.params.n_trees = parse_number<std::size_t>(in, "n_trees");
    f.params.min_samples_split = parse_number<std::size_t>(in, "min_samples_split");
    f.params.max_features = parse_number<std::size_t>(in, "max_features");
    f.params.max_depth = parse_number<std::size_t>(in, "max_depth");
    f.params.bootstrap = parse_number<int>(in, "bootstrap") != 0;
    expect_word(in, "features");
    const auto dims = parse_number<std::size_t>(in, "feature count");
    for (std::size_t i = 0; i < dims; ++i) {
        f.feature_names.push_back(next_token(in, "feature name"));
        const double lo = parse_number<double>(in, "feature minimum");
        const double hi = parse_number<double>(in, "feature maximum");
        f.feature_ranges.emplace_back(lo, hi);
    }
    expect_word(in, "trees");
    const auto count = parse_number<std::size_t>(in, "tree count");
    for (std::size_t t = 0; t < count; ++t) {
        expect_word(in, "tree");
        const auto nodes = parse_number<std::size_t>(in, "node count");
        Tree tree;
        tree.nodes.resize(nodes);
        for (auto& n : tree.nodes) {
            const auto kind = next_token(in, "node kind");
            if (kind == "L") {
                n.p_fast = parse_number<double>(in, "leaf probability");
            } else if (kind == "S") {
                n.feature = parse_number<int>(in, "split feature");
                n.threshold = parse_number<double>(in, "split threshold");
                n.left = parse_number<std::int32_t>(in, "left child");
                n.right = parse_number<std::int32_t>(in, "right child");
                auto bad = [&](std::int32_t c) { return c <= 0 || static_cast<std::size_t>(c) >= nodes; };
                if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= dims || bad(n.left) || bad(n.right)) {
                    throw ModelError("model file: split node out of range");
                }
            } else {
                throw ModelError(fmt::format("model file: unknown node kind '{}'", kind));
            }
        }
        if (tree.nodes.empty()) throw ModelError("model file: empty tree");
        f.trees.push_back(std::move(tree));
    }
    expect_word(in, "end");
    return f;
}

// ---------------------------------------------------------------------------

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw ModelError("scores and labels differ in length");
    const auto n_fast = static_cast<double>(std::count(labels.begin(), labels.end(), Label::fast));
    const auto n_slow = static_cast<double>(labels.size()) - n_fast;
    if (n_fast == 0 || n_slow == 0) throw ModelError("roc_auc needs both classes");
    const auto ranks = stats::average_ranks(scores);
    double rank_sum = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::fast) rank_sum += ranks[i];
    }
    return (rank_sum - n_fast * (n_fast + 1) / 2.0) / (n_fast * n_slow);
}

Metrics evaluate(std::span<const double> scores, std::span<const Label> labels, double threshold) {
    Metrics m;
    m.roc_auc = roc_auc(scores, labels);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted_fast = scores[i] >= threshold;
        const bool fast = labels[i] == Label::fast;
        if (predicted_fast && fast) ++m.true_positive;
        else if (predicted_fast) ++m.false_positive;
        else if (fast) ++m.false_negative;
        else ++m.true_negative;
    }
    const auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
    m.precision = ratio(m.true_positive, m.true_positive + m.false_positive);
    m.recall = ratio(m.true_positive, m.true_positive + m.false_negative);
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.accuracy = ratio(m.true_positive + m.true_negative, scores.size());
    return m;
}

std::vector<double> stratified_baseline(std::span<const Label> labels, std::uint64_t seed, std::size_t count) {
    if (count == 0) count = labels.size();
    const double p_fast = labels.empty() ? 0.0
                                         : static_cast<double>(std::count(labels.begin(), labels.end(), Label::fast)) /
                                               static_cast<double>(labels.size());
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = rng.unit() < p_fast ? 1.0 : 0.0;
    return out;
}

namespace {

std::array<std::vector<std::size_t>, 2> shuffled_classes(std::span<const Label> labels, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 2> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) classes[static_cast<std::size_t>(labels[i])].push_back(i);
    Rng rng(seed);
    for (auto& c : classes) rng.shuffle(c.begin(), c.end());
    return classes;
}

}  // namespace

Split stratified_split(std::span<const Label> labels, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0 && test_fraction < 1)) throw ModelError("test fraction must lie in (0, 1)");
    Split s;
    for (const auto& c : shuffled_classes(labels, seed)) {
        const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(c.size()) * test_fraction));
        s.test.insert(s.test.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n_test));
        s.train.insert(s.train.end(), c.begin() + static_cast<std::ptrdiff_t>(n_test), c.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

std::vector<Split> stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ModelError("k-fold needs k >= 2");
    std::vector<std::size_t> fold(labels.size());
    for (const auto& c : shuffled_classes(labels, seed)) {
        for (std::size_t j = 0; j < c.size(); ++j) fold[c[j]] = j % k;
    }
    std::vector<Split> out(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f) (fold[i] == f ? out[f].test : out[f].train).push_back(i);
    }
    return out;
}

std::vector<Importance> permutation_importance(const Forest& f, const Dataset& test, std::size_t repeats,
                                               std::uint64_t seed) {
    test.validate();
    if (test.size() == 0) throw ModelError("permutation importance needs test rows");
    if (repeats == 0) throw ModelError("repeats must be positive");
    const double base = roc_auc(f.predict_proba(test.rows), test.labels);

    std::vector<Importance> out;
    auto rows = test.rows;
    for (std::size_t j = 0; j < test.dims(); ++j) {
        Importance imp;
        imp.feature = j;
        imp.name = test.feature_names[j];
        imp.baseline_auc = base;
        std::vector<double> column(test.size());
        std::vector<double> drops;
        for (std::size_t r = 0; r < repeats; ++r) {
            for (std::size_t i = 0; i < test.size(); ++i) column[i] = test.rows[i][j];
            Rng rng(mix64(mix64(seed ^ (j + 1) * 0x9E3779B97F4A7C15ULL) + r));
            rng.shuffle(column.begin(), column.end());
            for (std::size_t i = 0; i < test.size(); ++i) rows[i][j] = column[i];
            const double auc = roc_auc(f.predict_proba(rows), test.labels);
            imp.permuted_auc.push_back(auc);
            drops.push_back(base - auc);
        }
        for (std::size_t i = 0; i < test.size(); ++i) rows[i][j] = test.rows[i][j];
        imp.mean_drop = stats::mean(drops);
        imp.std_drop = stats::stddev(drops);
        out.push_back(std::move(imp));
    }
    return out;
}

std::vector<double> default_grid(std::span<const double> column) {
    if (column.empty()) throw ModelError("grid of an empty column");
    std::set<double> distinct(column.begin(), column.end());
    if (distinct.size() <= 10) return {distinct.begin(), distinct.end()};
    std::vector<double> grid;
    for (int d = 1; d <= 9; ++d) {
        const double q = stats::quantile(column, d / 10.0);
        if (grid.empty() || q > grid.back()) grid.push_back(q);
    }
    return grid;
}

PdpCurve partial_dependence(const Forest& f, const std::vector<std::vector<double>>& rows, std::size_t feature,
                            const PdpOptions& options) {
    if (rows.empty()) throw ModelError("partial dependence needs data");
    if (feature >= f.dims()) throw ModelError(fmt::format("feature index {} out of range", feature));
    PdpCurve c;
    c.feature = feature;
    c.name = f.feature_names[feature];
    if (options.grid) {
        c.grid = *options.grid;
        if (!std::is_sorted(c.grid.begin(), c.grid.end()) ||
            std::adjacent_find(c.grid.begin(), c.grid.end()) != c.grid.end()) {
            throw ModelError("PDP grid must be strictly increasing");
        }
    } else {
        std::vector<double> column;
        for (const auto& r : rows) column.push_back(r.at(feature));
        c.grid = default_grid(column);
    }

    if (options.with_ice) {
        c.ice_rows.resize(rows.size());
        std::iota(c.ice_rows.begin(), c.ice_rows.end(), std::size_t{0});
        if (rows.size() > options.ice_samples) {
            Rng rng(options.seed);
            rng.shuffle(c.ice_rows.begin(), c.ice_rows.end());
            c.ice_rows.resize(options.ice_samples);
            std::sort(c.ice_rows.begin(), c.ice_rows.end());
        }
        c.ice_traces.assign(c.ice_rows.size(), {});
    }

    auto probe = rows;
    for (double value : c.grid) {
        for (auto& r : probe) r[feature] = value;
        const auto p = f.predict_proba(probe);
        c.mean_probability.push_back(stats::mean(p));
        for (std::size_t k = 0; k < c.ice_rows.size(); ++k) c.ice_traces[k].push_back(p[c.ice_rows[k]]);
    }
    return c;
}

// ---------------------------------------------------------------------------

Dataset read_dataset_jsonl(std::istream& in) {
    using ojson = nlohmann::ordered_json;
    Dataset d;
    std::string text;
    std::size_t line = 0;
    bool have_names = false;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson rec;
        try {
            rec = ojson::parse(text);
        } catch (const ojson::parse_error& e) {
            throw ModelError(fmt::format("dataset line {}: {}", line, e.what()));
        }
        auto features = rec.find("features");
        if (!rec.is_object() || features == rec.end() || !features->is_object()) {
            throw ModelError(fmt::format("dataset line {}: missing 'features' object", line));
        }
        if (!have_names) {
            for (const auto& [k, v] : features->items()) d.feature_names.push_back(k);
            have_names = true;
        }
        auto lab = rec.find("label");
        if (lab == rec.end() || lab->is_null()) continue;
        if (!lab->is_string() || !parse_label(lab->get<std::string>())) {
            throw ModelError(fmt::format("dataset line {}: label must be \"fast\", \"slow\" or null", line));
        }
        std::vector<double> row;
        for (const auto& name : d.feature_names) {
            auto v = features->find(name);
            if (v == features->end() || !v->is_number()) {
                throw ModelError(fmt::format("dataset line {}: feature '{}' missing or not numeric", line, name));
            }
            row.push_back(v->get<double>());
        }
        if (features->size() != d.feature_names.size()) {
            throw ModelError(fmt::format("dataset line {}: feature set differs from the first record", line));
        }
        d.rows.push_back(std::move(row));
        d.labels.push_back(*parse_label(lab->get<std::string>()));
        auto id = rec.find("id");
        d.ids.push_back(id != rec.end() && id->is_string() ? id->get<std::string>() : fmt::format("row{}", line));
    }
    return d;
}

Dataset read_dataset_csv(std::istream& in) {
    Dataset d;
    std::string text;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    if (!std::getline(in, text)) throw ModelError("empty dataset file");
    if (!text.empty() && text.back() == '\r') text.pop_back();
    auto header = split(text);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw ModelError("dataset header must start with 'id,label'");
    }
    d.feature_names.assign(header.begin() + 2, header.end());
    std::size_t line = 1;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        auto cells = split(text);
        if (cells.size() != header.size()) throw ModelError(fmt::format("dataset line {}: wrong cell count", line));
        if (cells[1].empty()) continue;
        auto lab = parse_label(cells[1]);
        if (!lab) throw ModelError(fmt::format("dataset line {}: bad label '{}'", line, cells[1]));
        std::vector<double> row;
        for (std::size_t c = 2; c < cells.size(); ++c) {
            double v = 0;
            auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
            if (ec != std::errc{} || ptr != cells[c].data() + cells[c].size()) {
                throw ModelError(fmt::format("dataset line {}: bad number '{}'", line, cells[c]));
            }
            row.push_back(v);
        }
        d.ids.push_back(cells[0]);
        d.labels.push_back(*lab);
        d.rows.push_back(std::move(row));
    }
    return d;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
    out << "id,label";
    for (const auto& n : d.feature_names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << (d.ids.empty() ? fmt::format("row{}", i) : d.ids[i]) << ',' << to_string(d.labels[i]);
        for (double v : d.rows[i]) out << ',' << fmt::format("{}", v);
        out << '\n';
    }
}

}  // namespace depwatch::model
