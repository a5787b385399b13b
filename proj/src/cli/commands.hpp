#pragma once

#include "report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace depwatch::cli {

struct Common {
    Format format = Format::json;
};

struct LintArgs {
    Common common;
    std::string path = ".";
    bool include_dev = false;
    bool include_optional = false;
    bool skip_lockfile_check = false;
    std::vector<std::string> disable;
    std::vector<std::string> ignore;
    std::string fail_on = "info";
    std::vector<std::string> extensions;
};

struct SnapshotArgs {
    std::string releases;
    std::string deps;
    std::string advisories;
    std::string horizon;
};

struct TimelineArgs {
    Common common;
    SnapshotArgs snapshot;
    std::string advisory;
    bool all = false;
    std::vector<std::string> severities;
    std::string records_out;
};

struct FeaturesArgs {
    Common common;
    SnapshotArgs snapshot;
    std::vector<std::string> severities;
    double fast_below = 2.0;
    double slow_above = 14.0;
    std::string out;
    std::string csv_out;
    bool with_dropped = false;
};

struct TrainArgs {
    Common common;
    std::string data;
    std::string out;
    std::size_t trees = 1000;
    std::size_t min_split = 8;
    std::size_t max_features = 0;
    std::size_t max_depth = 0;
    double test_fraction = 0.2;
    bool no_split = false;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct EvalArgs {
    Common common;
    std::string model;
    std::string data;
    std::uint64_t seed = 0;
    std::size_t cv = 0;
    std::size_t threads = 1;
};

struct ExplainArgs {
    Common common;
    std::string model;
    std::string data;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    bool ice = false;
    std::size_t ice_samples = 20;
    std::vector<std::string> features;
    std::string importance_out;
    std::string pdp_out;
};

struct FetchArgs {
    Common common;
    std::vector<std::string> names;
    std::string out = "snapshot";
    std::string registry;
    bool offline = false;
    int timeout = 30;
};

struct SynthArgs {
    Common common;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    double noise = 0.0;
    std::string constant_feature;
    std::string out;
    bool csv = false;
};

int cmd_lint(const LintArgs& a, std::ostream& out);
int cmd_timeline(const TimelineArgs& a, std::ostream& out);
int cmd_features(const FeaturesArgs& a, std::ostream& out);
int cmd_train(const TrainArgs& a, std::ostream& out);
int cmd_eval(const EvalArgs& a, std::ostream& out);
int cmd_explain(const ExplainArgs& a, std::ostream& out);
int cmd_fetch(const FetchArgs& a, std::ostream& out);
int cmd_synth(const SynthArgs& a, std::ostream& out);

}  // namespace depwatch::cli
