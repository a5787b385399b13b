#include "commands.hpp"

#include "depwatch/cli.hpp"
#include "depwatch/ecosystem.hpp"
#include "depwatch/model.hpp"
#include "depwatch/registry.hpp"
#include "depwatch/smells.hpp"
#include "depwatch/stats.hpp"
#include "depwatch/vuln.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace depwatch::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path));
    return in;
}

ojson stats_block(std::span<const double> xs) {
    ojson j;
    j["count"] = xs.size();
    j["mean"] = xs.empty() ? 0.0 : stats::mean(xs);
    j["median"] = xs.empty() ? 0.0 : stats::median(xs);
    return j;
}

std::set<ecosystem::Severity> parse_severities(const std::vector<std::string>& names) {
    std::set<ecosystem::Severity> out;
    for (const auto& n : names) {
        auto s = ecosystem::parse_severity(n);
        if (!s) throw UsageError(fmt::format("unknown severity '{}'", n));
        out.insert(*s);
    }
    return out;
}

ecosystem::Snapshot load(const SnapshotArgs& a, bool need_advisories) {
    if (need_advisories && a.advisories.empty()) throw UsageError("--advisories is required");
    std::optional<Timestamp> horizon;
    if (!a.horizon.empty()) horizon = parse_timestamp(a.horizon);
    return ecosystem::load_snapshot({a.releases, a.deps, a.advisories}, horizon);
}

ojson findings_summary(const std::vector<smells::SmellFinding>& findings) {
    ojson by_smell = ojson::object();
    for (auto s : smells::kAllSmells) by_smell[std::string(smells::id(s))] = 0;
    ojson by_severity = {{"info", 0}, {"warning", 0}, {"error", 0}};
    for (const auto& f : findings) {
        by_smell[std::string(smells::id(f.smell))] = by_smell[std::string(smells::id(f.smell))].get<int>() + 1;
        auto sev = std::string(smells::to_string(smells::default_severity(f.smell)));
        by_severity[sev] = by_severity[sev].get<int>() + 1;
    }
    return {{"total", findings.size()}, {"by_smell", by_smell}, {"by_severity", by_severity}};
}

model::Dataset read_dataset(const std::string& path) {
    auto in = open_input(path);
    auto d = fs::path(path).extension() == ".csv" ? model::read_dataset_csv(in) : model::read_dataset_jsonl(in);
    d.validate();
    return d;
}

model::Forest read_model(const std::string& path) {
    auto in = open_input(path);
    return model::Forest::load(in);
}

/// Reorders the dataset columns to the model's feature order.
model::Dataset align(const model::Dataset& d, const model::Forest& f) {
    if (d.feature_names == f.feature_names) return d;
    std::vector<std::size_t> index;
    for (const auto& name : f.feature_names) {
        auto it = std::find(d.feature_names.begin(), d.feature_names.end(), name);
        if (it == d.feature_names.end()) throw model::ModelError(fmt::format("dataset lacks feature '{}'", name));
        index.push_back(static_cast<std::size_t>(it - d.feature_names.begin()));
    }
    if (d.feature_names.size() != f.feature_names.size()) {
        throw model::ModelError("dataset has features the model was not trained on");
    }
    model::Dataset out = d;
    out.feature_names = f.feature_names;
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (std::size_t c = 0; c < index.size(); ++c) out.rows[r][c] = d.rows[r][index[c]];
    }
    return out;
}

/// Rows the model was evaluated on: the held-out part of its own split, or everything.
model::Split held_out(const model::Dataset& d, const model::Forest& f) {
    if (f.test_fraction > 0) return model::stratified_split(d.labels, f.test_fraction, f.split_seed);
    model::Split s;
    s.test.resize(d.size());
    std::iota(s.test.begin(), s.test.end(), std::size_t{0});
    return s;
}

ojson metrics_json(const model::Metrics& m) {
    return {{"roc_auc", number(m.roc_auc)},
            {"f1", number(m.f1)},
            {"precision", number(m.precision)},
            {"recall", number(m.recall)},
            {"accuracy", number(m.accuracy)},
            {"confusion",
             {{"tp", m.true_positive}, {"fp", m.false_positive}, {"tn", m.true_negative}, {"fn", m.false_negative}}}};
}

std::size_t count_label(std::span<const model::Label> labels, model::Label l) {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

void write_lines(const std::string& path, const std::vector<ojson>& records) {
    write_atomically(path, [&](std::ostream& o) {
        for (const auto& r : records) o << r.dump() << '\n';
    });
}

ojson dataset_record(const model::Dataset& d, std::size_t i) {
    ojson features = ojson::object();
    for (std::size_t c = 0; c < d.dims(); ++c) features[d.feature_names[c]] = number(d.rows[i][c]);
    return {{"id", d.ids.empty() ? fmt::format("row{}", i) : d.ids[i]},
            {"label", model::to_string(d.labels[i])},
            {"features", features}};
}

}  // namespace

// --- lint --------------------------------------------------------------------

int cmd_lint(const LintArgs& a, std::ostream& out) {
    auto fail_on = smells::parse_severity(a.fail_on);
    if (!fail_on) throw UsageError(fmt::format("unknown severity '{}'", a.fail_on));

    smells::LintOptions opt;
    opt.constraints.include_dev = a.include_dev;
    opt.constraints.include_optional = a.include_optional;
    opt.check_lockfile = !a.skip_lockfile_check;
    for (const auto& d : a.disable) {
        auto s = smells::parse_smell(d);
        if (!s) throw UsageError(fmt::format("unknown smell '{}'", d));
        opt.disabled.insert(*s);
    }
    opt.ignored_dependencies.insert(a.ignore.begin(), a.ignore.end());
    if (!a.extensions.empty()) opt.scan.extensions = a.extensions;

    const auto result = smells::lint_project(a.path, opt);

    Report r;
    r.command = "lint";
    r.warnings = result.warnings;
    ojson findings = ojson::array();
    bool failing = false;
    for (const auto& f : result.findings) {
        const auto sev = smells::default_severity(f.smell);
        failing = failing || sev >= *fail_on;
        findings.push_back({{"smell", smells::id(f.smell)},
                            {"name", smells::name(f.smell)},
                            {"severity", smells::to_string(sev)},
                            {"dependency", f.dependency ? ojson(*f.dependency) : ojson(nullptr)},
                            {"evidence", f.evidence},
                            {"message", f.message}});
    }
    r.payload["path"] = a.path;
    r.payload["findings"] = findings;
    r.payload["notices"] = result.notices;
    r.summary = findings_summary(result.findings);

    emit(r, a.common.format, out, [&](std::ostream& o) {
        for (const auto& f : result.findings) {
            o << fmt::format("{} {:<11} {:<7} {}: {}\n", smells::id(f.smell), smells::name(f.smell),
                             smells::to_string(smells::default_severity(f.smell)), f.dependency.value_or("-"),
                             f.message);
        }
        for (const auto& n : result.notices) o << "notice: " << n << '\n';
        o << fmt::format("{} finding(s)\n", result.findings.size());
    });
    return failing ? kExitFindings : kExitOk;
}

// --- timeline ----------------------------------------------------------------

int cmd_timeline(const TimelineArgs& a, std::ostream& out) {
    if (a.all == !a.advisory.empty()) throw UsageError("give exactly one of --advisory or --all");
    const auto snap = load(a.snapshot, true);
    vuln::TimelineFilter filter;
    if (!a.advisory.empty()) filter.advisory_id = a.advisory;
    filter.severities = parse_severities(a.severities);
    const auto timelines = vuln::compute_timelines(snap, filter);

    Report r;
    r.command = "timeline";
    ojson advisories = ojson::array();
    std::vector<ojson> record_lines;
    std::vector<double> fix_delays;
    std::vector<double> adoption_delays;
    std::size_t n_records = 0;
    std::size_t n_censored = 0;
    std::map<ecosystem::Severity, std::pair<std::vector<double>, std::vector<double>>> per_severity;
    std::map<std::string, std::size_t> fix_types;
    for (auto t : {"none", "prerelease", "patch", "minor", "major", "unknown"}) fix_types[t] = 0;

    for (const auto& t : timelines) {
        const auto& adv = t.advisory;
        fix_delays.push_back(t.fix_delay_days);
        per_severity[adv.severity].first.push_back(t.fix_delay_days);
        ++fix_types[t.fix_type ? std::string(semver::to_string(*t.fix_type)) : "unknown"];
        ojson records = ojson::array();
        for (const auto& e : t.records) {
            ojson rec{{"dependent", e.dependent},
                      {"advisory", e.advisory_id},
                      {"severity", ecosystem::to_string(e.severity)},
                      {"vulnerable_check_date", format_timestamp(e.vulnerable_check_date)},
                      {"installed_before_fix", e.installed_before_fix.to_string()},
                      {"constraint_before_fix", e.constraint_before_fix},
                      {"strategy", vuln::to_string(e.strategy)},
                      {"adoption_date", e.adoption_date ? ojson(format_timestamp(*e.adoption_date)) : ojson(nullptr)},
                      {"adopted_version", e.adopted_version ? ojson(e.adopted_version->to_string()) : ojson(nullptr)},
                      {"adoption_delay_days", number(e.adoption_delay_days)},
                      {"censored", e.censored}};
            ++n_records;
            if (e.censored) {
                ++n_censored;
            } else {
                adoption_delays.push_back(e.adoption_delay_days);
                per_severity[adv.severity].second.push_back(e.adoption_delay_days);
            }
            record_lines.push_back(rec);
            records.push_back(std::move(rec));
        }
        advisories.push_back({{"id", adv.id},
                              {"package", adv.package},
                              {"severity", ecosystem::to_string(adv.severity)},
                              {"affected", adv.affected.raw},
                              {"first_fixed", adv.first_fixed.to_string()},
                              {"disclosed_at", format_timestamp(adv.disclosed_at)},
                              {"fix_released_at", format_timestamp(adv.fix_released_at)},
                              {"fix_delay_days", number(t.fix_delay_days)},
                              {"fix_type", t.fix_type ? ojson(semver::to_string(*t.fix_type)) : ojson(nullptr)},
                              {"records", records}});
    }
    r.payload["advisories"] = advisories;

    ojson by_severity = ojson::object();
    for (auto sev : {ecosystem::Severity::critical, ecosystem::Severity::high, ecosystem::Severity::medium,
                     ecosystem::Severity::low}) {
        const auto& [fix, adopt] = per_severity[sev];
        by_severity[std::string(ecosystem::to_string(sev))] = {{"fix_delay", stats_block(fix)},
                                                               {"adoption_delay", stats_block(adopt)}};
    }
    const std::size_t known = std::accumulate(fix_types.begin(), fix_types.end(), std::size_t{0},
                                              [](std::size_t acc, const auto& kv) { return acc + kv.second; }) -
                              fix_types["unknown"];
    ojson mw = {{"u_fix", 0.0}, {"u_adoption", 0.0}, {"z", 0.0}, {"p_two_sided", 1.0}, {"p_exact", nullptr}};
    if (!fix_delays.empty() && !adoption_delays.empty()) {
        const auto m = stats::mann_whitney_u(fix_delays, adoption_delays);
        mw = {{"u_fix", number(m.u_a)},
              {"u_adoption", number(m.u_b)},
              {"z", number(m.z)},
              {"p_two_sided", number(m.p_two_sided)},
              {"p_exact", m.p_exact ? number(*m.p_exact) : ojson(nullptr)}};
    }
    r.summary = {{"advisories", timelines.size()},
                 {"records", n_records},
                 {"censored", n_censored},
                 {"fix_delay", stats_block(fix_delays)},
                 {"adoption_delay", stats_block(adoption_delays)},
                 {"by_severity", by_severity},
                 {"fix_release_types", fix_types},
                 {"minor_major_share",
                  known ? static_cast<double>(fix_types["minor"] + fix_types["major"]) / static_cast<double>(known)
                        : 0.0},
                 {"mann_whitney", mw}};

    if (!a.records_out.empty()) write_lines(a.records_out, record_lines);

    emit(r, a.common.format, out, [&](std::ostream& o) {
        for (const auto& t : timelines) {
            o << fmt::format("{} {} ({}) fix delay {:.2f} d, {} exposed dependent(s)\n", t.advisory.id,
                             t.advisory.package, ecosystem::to_string(t.advisory.severity), t.fix_delay_days,
                             t.records.size());
            for (const auto& e : t.records) {
                o << fmt::format("  {:<24} {:<12} {:>10.2f} d{}\n", e.dependent, vuln::to_string(e.strategy),
                                 e.adoption_delay_days, e.censored ? " (censored)" : "");
            }
        }
        o << fmt::format("mean fix delay {:.2f} d, mean adoption delay {:.2f} d over {} adopted record(s)\n",
                         fix_delays.empty() ? 0.0 : stats::mean(fix_delays),
                         adoption_delays.empty() ? 0.0 : stats::mean(adoption_delays), adoption_delays.size());
    });
    return kExitOk;
}

// --- features ----------------------------------------------------------------

int cmd_features(const FeaturesArgs& a, std::ostream& out) {
    model::LabelConfig labels{a.fast_below, a.slow_above};
    labels.validate();
    const auto snap = load(a.snapshot, true);
    vuln::TimelineFilter filter;
    filter.severities = parse_severities(a.severities);
    const auto rows = vuln::build_feature_rows(snap, vuln::compute_timelines(snap, filter), a.with_dropped);

    Report r;
    r.command = "features";
    std::vector<ojson> records;
    model::Dataset labelled;
    for (auto n : vuln::kFeatureNames) labelled.feature_names.emplace_back(n);
    std::vector<std::vector<double>> columns(vuln::kFeatureCount);
    std::size_t fast = 0;
    std::size_t slow = 0;
    for (const auto& row : rows) {
        const auto values = row.features.values();
        const auto l = row.censored ? model::label_censored(row.delay_days, labels)
                                    : model::label(row.delay_days, labels);
        ojson features = ojson::object();
        for (std::size_t c = 0; c < vuln::kFeatureCount; ++c) {
            features[std::string(vuln::kFeatureNames[c])] = number(values[c]);
            columns[c].push_back(values[c]);
        }
        ojson rec{{"id", row.dependent},
                  {"dependent", row.dependent},
                  {"advisory", row.advisory_id},
                  {"severity", ecosystem::to_string(row.severity)},
                  {"label", l ? ojson(model::to_string(*l)) : ojson(nullptr)},
                  {"delay_days", number(row.delay_days)},
                  {"censored", row.censored},
                  {"features", features}};
        if (row.dropped) {
            rec["dropped"] = {{"package_version_count", row.dropped->package_version_count},
                              {"days_since_last_release", number(row.dropped->days_since_last_release)}};
        }
        records.push_back(std::move(rec));
        if (l) {
            (*l == model::Label::fast ? fast : slow) += 1;
            labelled.rows.emplace_back(values.begin(), values.end());
            labelled.labels.push_back(*l);
            labelled.ids.push_back(row.dependent);
        }
    }

    ojson pairs = ojson::array();
    if (rows.size() >= 2) {
        for (const auto& p : stats::correlated_pairs(columns)) {
            pairs.push_back({{"first", vuln::kFeatureNames[p.first]},
                             {"second", vuln::kFeatureNames[p.second]},
                             {"rho", number(p.rho)}});
        }
    }

    if (!a.out.empty()) write_lines(a.out, records);
    if (!a.csv_out.empty()) {
        write_atomically(a.csv_out, [&](std::ostream& o) { model::write_dataset_csv(o, labelled); });
    }
    if (a.out.empty()) r.payload["records"] = records;
    r.payload["correlated_pairs"] = pairs;
    r.summary = {{"rows", rows.size()},
                 {"fast", fast},
                 {"slow", slow},
                 {"unlabelled", rows.size() - fast - slow},
                 {"thresholds", {{"fast_below_days", a.fast_below}, {"slow_above_days", a.slow_above}}}};

    emit(r, a.common.format, out, [&](std::ostream& o) {
        for (const auto& rec : records) {
            o << fmt::format("{:<24} {:<10} {:>10.2f} d  {}\n", rec["dependent"].get<std::string>(),
                             rec["label"].is_null() ? "-" : rec["label"].get<std::string>(),
                             rec["delay_days"].is_null() ? 0.0 : rec["delay_days"].get<double>(),
                             rec["features"].dump());
        }
        for (const auto& p : pairs) {
            o << fmt::format("correlated: {} ~ {} (rho {:.3f})\n", p["first"].get<std::string>(),
                             p["second"].get<std::string>(), p["rho"].get<double>());
        }
        o << fmt::format("{} row(s): {} fast, {} slow\n", rows.size(), fast, slow);
    });
    return kExitOk;
}

// --- train / eval / explain ----------------------------------------------------

int cmd_train(const TrainArgs& a, std::ostream& out) {
    if (a.out.empty()) throw UsageError("--out is required");
    const auto data = read_dataset(a.data);
    model::ForestParams params;
    params.n_trees = a.trees;
    params.min_samples_split = a.min_split;
    params.max_features = a.max_features;
    params.max_depth = a.max_depth;
    params.threads = a.threads;

    model::Split split;
    if (a.no_split) {
        split.train.resize(data.size());
        std::iota(split.train.begin(), split.train.end(), std::size_t{0});
    } else {
        split = model::stratified_split(data.labels, a.test_fraction, a.seed);
    }
    const auto train = data.subset(split.train);
    auto forest = model::train_forest(train, params, a.seed);
    forest.split_seed = a.seed;
    forest.test_fraction = a.no_split ? 0.0 : a.test_fraction;
    write_atomically(a.out, [&](std::ostream& o) { forest.save(o); });

    Report r;
    r.command = "train";
    r.payload = {{"model", a.out},
                 {"data", a.data},
                 {"seed", a.seed},
                 {"params",
                  {{"n_trees", params.n_trees},
                   {"min_samples_split", params.min_samples_split},
                   {"max_features", params.max_features},
                   {"max_depth", params.max_depth}}},
                 {"features", data.feature_names}};
    r.summary = {{"rows", data.size()},
                 {"train", split.train.size()},
                 {"test", split.test.size()},
                 {"train_fast", count_label(train.labels, model::Label::fast)},
                 {"train_slow", count_label(train.labels, model::Label::slow)}};
    if (!split.test.empty()) {
        const auto test = data.subset(split.test);
        r.summary["test_metrics"] = metrics_json(model::evaluate(forest.predict_proba(test.rows), test.labels));
    }

    emit(r, a.common.format, out, [&](std::ostream& o) {
        o << fmt::format("trained {} tree(s) on {} row(s); model written to {}\n", forest.trees.size(),
                         split.train.size(), a.out);
        if (r.summary.contains("test_metrics")) {
            o << fmt::format("held-out ROC-AUC {:.4f}\n", r.summary["test_metrics"]["roc_auc"].get<double>());
        }
    });
    return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto forest = read_model(a.model);
    const auto data = align(read_dataset(a.data), forest);
    const auto split = held_out(data, forest);
    const auto test = data.subset(split.test);
    const auto train_labels = split.train.empty() ? test.labels : data.subset(split.train).labels;

    const auto metrics = model::evaluate(forest.predict_proba(test.rows), test.labels);
    const auto baseline_scores = model::stratified_baseline(train_labels, a.seed, test.size());
    const auto baseline = model::evaluate(baseline_scores, test.labels);

    Report r;
    r.command = "eval";
    r.payload = {{"model", a.model},
                 {"data", a.data},
                 {"metrics", metrics_json(metrics)},
                 {"baseline", metrics_json(baseline)}};
    if (a.cv > 0) {
        ojson folds = ojson::array();
        std::vector<double> aucs;
        std::vector<double> f1s;
        auto params = forest.params;
        params.threads = a.threads;
        const auto parts = model::stratified_kfold(data.labels, a.cv, a.seed);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const auto tr = data.subset(parts[k].train);
            const auto te = data.subset(parts[k].test);
            const auto f = model::train_forest(tr, params, model::mix64(a.seed) + k);
            const auto m = model::evaluate(f.predict_proba(te.rows), te.labels);
            aucs.push_back(m.roc_auc);
            f1s.push_back(m.f1);
            folds.push_back({{"fold", k}, {"test", te.size()}, {"roc_auc", number(m.roc_auc)}, {"f1", number(m.f1)}});
        }
        r.payload["cross_validation"] = {{"k", a.cv},
                                         {"folds", folds},
                                         {"mean_roc_auc", number(stats::mean(aucs))},
                                         {"mean_f1", number(stats::mean(f1s))}};
    }
    r.summary = {{"test", test.size()},
                 {"fast", count_label(test.labels, model::Label::fast)},
                 {"slow", count_label(test.labels, model::Label::slow)},
                 {"roc_auc", number(metrics.roc_auc)},
                 {"baseline_roc_auc", number(baseline.roc_auc)}};

    emit(r, a.common.format, out, [&](std::ostream& o) {
        o << fmt::format("{:<10} {:>8} {:>8} {:>9} {:>8}\n", "", "ROC-AUC", "F1", "precision", "recall");
        for (const auto& [name, m] : {std::pair{"model", metrics}, std::pair{"baseline", baseline}}) {
            o << fmt::format("{:<10} {:>8.4f} {:>8.4f} {:>9.4f} {:>8.4f}\n", name, m.roc_auc, m.f1, m.precision,
                             m.recall);
        }
        if (r.payload.contains("cross_validation")) {
            o << fmt::format("{}-fold mean ROC-AUC {:.4f}\n", a.cv,
                             r.payload["cross_validation"]["mean_roc_auc"].get<double>());
        }
    });
    return kExitOk;
}

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
    const auto forest = read_model(a.model);
    const auto data = align(read_dataset(a.data), forest);
    const auto test = data.subset(held_out(data, forest).test);

    auto importance = model::permutation_importance(forest, test, a.repeats, a.seed);
    std::stable_sort(importance.begin(), importance.end(),
                     [](const auto& x, const auto& y) { return x.mean_drop > y.mean_drop; });

    std::vector<std::size_t> selected;
    if (a.features.empty()) {
        selected.resize(forest.dims());
        std::iota(selected.begin(), selected.end(), std::size_t{0});
    }
    for (const auto& name : a.features) {
        auto it = std::find(forest.feature_names.begin(), forest.feature_names.end(), name);
        if (it == forest.feature_names.end()) throw UsageError(fmt::format("unknown feature '{}'", name));
        selected.push_back(static_cast<std::size_t>(it - forest.feature_names.begin()));
    }

    Report r;
    r.command = "explain";
    std::vector<ojson> importance_lines;
    ojson imp = ojson::array();
    for (std::size_t rank = 0; rank < importance.size(); ++rank) {
        const auto& i = importance[rank];
        ojson rec{{"kind", "importance"},
                  {"rank", rank + 1},
                  {"feature", i.name},
                  {"baseline_auc", number(i.baseline_auc)},
                  {"mean_drop", number(i.mean_drop)},
                  {"std_drop", number(i.std_drop)},
                  {"permuted_auc", i.permuted_auc}};
        importance_lines.push_back(rec);
        imp.push_back(std::move(rec));
    }

    std::vector<ojson> pdp_lines;
    ojson curves = ojson::array();
    model::PdpOptions popt;
    popt.with_ice = a.ice;
    popt.ice_samples = a.ice_samples;
    popt.seed = a.seed;
    for (auto feature : selected) {
        const auto c = model::partial_dependence(forest, data.rows, feature, popt);
        ojson curve{{"feature", c.name}, {"grid", c.grid}, {"mean_probability", c.mean_probability}};
        for (std::size_t g = 0; g < c.grid.size(); ++g) {
            pdp_lines.push_back({{"kind", "pdp"}, {"feature", c.name}, {"value", c.grid[g]},
                                 {"p_fast", c.mean_probability[g]}});
        }
        if (a.ice) {
            ojson traces = ojson::array();
            for (std::size_t k = 0; k < c.ice_rows.size(); ++k) {
                const auto& id = data.ids.empty() ? fmt::format("row{}", c.ice_rows[k]) : data.ids[c.ice_rows[k]];
                traces.push_back({{"row", id}, {"p_fast", c.ice_traces[k]}});
                for (std::size_t g = 0; g < c.grid.size(); ++g) {
                    pdp_lines.push_back({{"kind", "ice"}, {"feature", c.name}, {"row", id}, {"value", c.grid[g]},
                                         {"p_fast", c.ice_traces[k][g]}});
                }
            }
            curve["ice"] = traces;
        }
        curves.push_back(std::move(curve));
    }

    if (!a.importance_out.empty()) write_lines(a.importance_out, importance_lines);
    if (!a.pdp_out.empty()) write_lines(a.pdp_out, pdp_lines);
    r.payload = {{"model", a.model}, {"data", a.data}, {"importance", imp}, {"pdp", curves}};
    r.summary = {{"test", test.size()},
                 {"repeats", a.repeats},
                 {"top_feature", importance.empty() ? ojson(nullptr) : ojson(importance.front().name)}};

    emit(r, a.common.format, out, [&](std::ostream& o) {
        for (std::size_t rank = 0; rank < importance.size(); ++rank) {
            const auto& i = importance[rank];
            o << fmt::format("{:>2}. {:<26} {:+.4f} (sd {:.4f})\n", rank + 1, i.name, i.mean_drop, i.std_drop);
        }
        for (const auto& c : curves) {
            o << "pdp " << c["feature"].get<std::string>() << ':';
            for (std::size_t g = 0; g < c["grid"].size(); ++g) {
                o << fmt::format(" {}={:.3f}", c["grid"][g].get<double>(), c["mean_probability"][g].get<double>());
            }
            o << '\n';
        }
    });
    return kExitOk;
}

// --- fetch / synth -------------------------------------------------------------

int cmd_fetch(const FetchArgs& a, std::ostream& out) {
    Report r;
    r.command = "fetch";
    r.payload = {{"out", a.out}, {"packages", ojson::array()}};
    if (a.names.empty()) {
        r.summary = {{"packages", 0}, {"releases", 0}, {"dependencies", 0}};
        emit(r, a.common.format, out, [](std::ostream& o) { o << "nothing to fetch\n"; });
        return kExitOk;
    }
    if (a.offline) {
        throw registry::RegistryError(registry::RegistryErrorKind::offline,
                                      "registry access is disabled by --offline; drop the flag or load an existing "
                                      "snapshot with --releases/--deps");
    }
    registry::ClientOptions opt;
    if (!a.registry.empty()) opt.base_url = a.registry;
    opt.timeout = std::chrono::seconds{a.timeout};

    std::vector<registry::Packument> docs;
    for (const auto& name : a.names) docs.push_back(registry::fetch_packument(name, opt));

    ecosystem::SnapshotBuilder builder;
    std::size_t n_releases = 0;
    std::size_t n_edges = 0;
    for (const auto& p : docs) {
        registry::merge_into(p, builder);
        n_releases += p.releases.size();
        n_edges += p.edges.size();
        r.warnings.insert(r.warnings.end(), p.warnings.begin(), p.warnings.end());
        r.payload["packages"].push_back(
            {{"name", p.name}, {"releases", p.releases.size()}, {"dependencies", p.edges.size()}});
    }
    const auto snap = std::move(builder).build();
    const fs::path dir = a.out;
    write_atomically(dir / "releases.jsonl", [&](std::ostream& o) { ecosystem::write_releases(o, snap); });
    write_atomically(dir / "deps.jsonl", [&](std::ostream& o) { ecosystem::write_deps(o, snap); });
    r.summary = {{"packages", docs.size()}, {"releases", n_releases}, {"dependencies", n_edges}};
    emit(r, a.common.format, out, [&](std::ostream& o) {
        for (const auto& p : docs) {
            o << fmt::format("{}: {} release(s), {} dependency edge(s)\n", p.name, p.releases.size(), p.edges.size());
        }
        o << "written to " << a.out << '\n';
    });
    return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    if (a.out.empty()) throw UsageError("--out is required");
    model::SyntheticOptions opt;
    opt.n = a.n;
    opt.label_noise = a.noise;
    if (!a.constant_feature.empty()) opt.constant_feature = a.constant_feature;
    const auto d = model::synthetic_dataset(opt, a.seed);
    write_atomically(a.out, [&](std::ostream& o) {
        if (a.csv) {
            model::write_dataset_csv(o, d);
        } else {
            for (std::size_t i = 0; i < d.size(); ++i) o << dataset_record(d, i).dump() << '\n';
        }
    });
    Report r;
    r.command = "synth";
    r.payload = {{"out", a.out}, {"seed", a.seed}, {"features", d.feature_names}};
    r.summary = {{"rows", d.size()},
                 {"fast", count_label(d.labels, model::Label::fast)},
                 {"slow", count_label(d.labels, model::Label::slow)}};
    emit(r, a.common.format, out,
         [&](std::ostream& o) { o << fmt::format("{} synthetic row(s) written to {}\n", d.size(), a.out); });
    return kExitOk;
}

}  // namespace depwatch::cli
