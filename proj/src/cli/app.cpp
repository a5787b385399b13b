#include "commands.hpp"

#include "depwatch/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <iostream>
#include <map>

#ifndef DEPWATCH_VERSION
#define DEPWATCH_VERSION "0.0.0"
#endif

namespace depwatch::cli {

namespace {

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"text", Format::text}};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format (json|text)")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

void add_snapshot(CLI::App* sub, SnapshotArgs& s) {
    sub->add_option("--releases", s.releases, "Release records (JSONL)")->required()->check(CLI::ExistingFile);
    sub->add_option("--deps", s.deps, "Dependency edge records (JSONL)")->required()->check(CLI::ExistingFile);
    sub->add_option("--advisories", s.advisories, "Advisory records (JSONL)")->check(CLI::ExistingFile);
    sub->add_option("--horizon", s.horizon, "Censoring date (default: newest release)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dependency smell linter and vulnerability-adoption analyser"};
    app.name("depwatch");
    app.set_version_flag("--version", DEPWATCH_VERSION);
    app.set_config("--config", "", "Read flags from a TOML/INI file (explicit flags win)");
    app.require_subcommand(1);

    LintArgs lint;
    auto* c_lint = app.add_subcommand("lint", "Report dependency smells S1-S7 for a project");
    add_common(c_lint, lint.common);
    c_lint->add_option("path", lint.path, "Project directory (holds package.json)");
    c_lint->add_flag("--include-dev", lint.include_dev, "Check devDependencies constraints too");
    c_lint->add_flag("--include-optional", lint.include_optional, "Check optionalDependencies constraints too");
    c_lint->add_flag("--skip-lockfile-check", lint.skip_lockfile_check, "Do not report S5");
    c_lint->add_option("--disable", lint.disable, "Smell to suppress (S1..S7 or name); repeatable");
    c_lint->add_option("--ignore", lint.ignore, "Dependency name to skip; repeatable");
    c_lint->add_option("--fail-on", lint.fail_on, "Lowest severity that makes the exit code 1")
        ->check(CLI::IsMember({"info", "warning", "error"}));
    c_lint->add_option("--ext", lint.extensions, "Source file extension to scan; repeatable");

    TimelineArgs tl;
    auto* c_tl = app.add_subcommand("timeline", "Fix and adoption delays per advisory");
    add_common(c_tl, tl.common);
    add_snapshot(c_tl, tl.snapshot);
    c_tl->add_option("--advisory", tl.advisory, "Advisory id");
    c_tl->add_flag("--all", tl.all, "Process every advisory");
    c_tl->add_option("--severity", tl.severities, "Keep only these severities; repeatable");
    c_tl->add_option("--records-out", tl.records_out, "Write exposure records as JSONL");

    FeaturesArgs ft;
    auto* c_ft = app.add_subcommand("features", "Labelled feature rows for the responder model");
    add_common(c_ft, ft.common);
    add_snapshot(c_ft, ft.snapshot);
    c_ft->add_option("--severity", ft.severities, "Keep only these severities; repeatable");
    c_ft->add_option("--fast-below", ft.fast_below, "Fast class: delay below this many days");
    c_ft->add_option("--slow-above", ft.slow_above, "Slow class: delay above this many days");
    c_ft->add_option("--out", ft.out, "Write feature records as JSONL");
    c_ft->add_option("--csv", ft.csv_out, "Write labelled rows as CSV");
    c_ft->add_flag("--with-dropped", ft.with_dropped, "Include the correlated features left out of the model");

    TrainArgs tr;
    tr.seed = kDefaultSeed;
    auto* c_tr = app.add_subcommand("train", "Fit the random forest");
    add_common(c_tr, tr.common);
    c_tr->add_option("--data", tr.data, "Dataset (.jsonl or .csv)")->required()->check(CLI::ExistingFile);
    c_tr->add_option("--out", tr.out, "Model file to write")->required();
    c_tr->add_option("--trees", tr.trees, "Number of trees")->check(CLI::PositiveNumber);
    c_tr->add_option("--min-split", tr.min_split, "Minimum samples to split a node")->check(CLI::Range(2, 1 << 30));
    c_tr->add_option("--max-features", tr.max_features, "Features tried per split (0 = ceil(sqrt(p)))");
    c_tr->add_option("--max-depth", tr.max_depth, "Depth limit (0 = none)");
    c_tr->add_option("--test-fraction", tr.test_fraction, "Held-out share")->check(CLI::Range(0.0, 1.0));
    c_tr->add_flag("--no-split", tr.no_split, "Train on every row");
    c_tr->add_option("--seed", tr.seed, "Random seed");
    c_tr->add_option("--threads", tr.threads, "Worker threads")->check(CLI::PositiveNumber);

    EvalArgs ev;
    ev.seed = kDefaultSeed;
    auto* c_ev = app.add_subcommand("eval", "Score a model against the stratified baseline");
    add_common(c_ev, ev.common);
    c_ev->add_option("--model", ev.model, "Model file")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--data", ev.data, "Dataset (.jsonl or .csv)")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--seed", ev.seed, "Seed for the baseline and the folds");
    c_ev->add_option("--cv", ev.cv, "Also run k-fold cross-validation")->check(CLI::Range(2, 1000));
    c_ev->add_option("--threads", ev.threads, "Worker threads for cross-validation")->check(CLI::PositiveNumber);

    ExplainArgs ex;
    ex.seed = kDefaultSeed;
    auto* c_ex = app.add_subcommand("explain", "Permutation importance and partial dependence");
    add_common(c_ex, ex.common);
    c_ex->add_option("--model", ex.model, "Model file")->required()->check(CLI::ExistingFile);
    c_ex->add_option("--data", ex.data, "Dataset (.jsonl or .csv)")->required()->check(CLI::ExistingFile);
    c_ex->add_option("--repeats", ex.repeats, "Shuffles per feature")->check(CLI::PositiveNumber);
    c_ex->add_option("--seed", ex.seed, "Random seed");
    c_ex->add_flag("--ice", ex.ice, "Add per-row ICE traces");
    c_ex->add_option("--ice-samples", ex.ice_samples, "Rows traced per feature")->check(CLI::PositiveNumber);
    c_ex->add_option("--feature", ex.features, "Restrict PDP to this feature; repeatable");
    c_ex->add_option("--importance-out", ex.importance_out, "Write importance records as JSONL");
    c_ex->add_option("--pdp-out", ex.pdp_out, "Write PDP/ICE points as JSONL");

    FetchArgs fe;
    auto* c_fe = app.add_subcommand("fetch", "Download packuments into snapshot files");
    add_common(c_fe, fe.common);
    c_fe->add_option("names", fe.names, "Package names");
    c_fe->add_option("--out", fe.out, "Output directory");
    c_fe->add_option("--registry", fe.registry, "Registry base URL (default: $DEPWATCH_REGISTRY or the public one)");
    c_fe->add_flag("--offline", fe.offline, "Refuse network access");
    c_fe->add_option("--timeout", fe.timeout, "Per-request timeout in seconds")->check(CLI::PositiveNumber);

    SynthArgs sy;
    sy.seed = kDefaultSeed;
    auto* c_sy = app.add_subcommand("synth", "Generate a synthetic labelled dataset");
    add_common(c_sy, sy.common);
    c_sy->add_option("--n", sy.n, "Rows")->check(CLI::PositiveNumber);
    c_sy->add_option("--seed", sy.seed, "Random seed");
    c_sy->add_option("--noise", sy.noise, "Label flip probability")->check(CLI::Range(0.0, 1.0));
    c_sy->add_option("--constant-feature", sy.constant_feature, "Hold this column at zero");
    c_sy->add_option("--out", sy.out, "Dataset file to write")->required();
    c_sy->add_flag("--csv", sy.csv, "Write CSV instead of JSONL");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (c_lint->parsed()) return cmd_lint(lint, out);
        if (c_tl->parsed()) return cmd_timeline(tl, out);
        if (c_ft->parsed()) return cmd_features(ft, out);
        if (c_tr->parsed()) return cmd_train(tr, out);
        if (c_ev->parsed()) return cmd_eval(ev, out);
        if (c_ex->parsed()) return cmd_explain(ex, out);
        if (c_fe->parsed()) return cmd_fetch(fe, out);
        if (c_sy->parsed()) return cmd_synth(sy, out);
    } catch (const std::exception& e) {
        err << "depwatch: error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace depwatch::cli
