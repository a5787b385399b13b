#include "depwatch/model.hpp"
#include "depwatch/vuln.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace depwatch::model {

Dataset synthetic_dataset(const SyntheticOptions& options, std::uint64_t seed) {
    Dataset d;
    for (auto name : vuln::kFeatureNames) d.feature_names.emplace_back(name);
    std::optional<std::size_t> constant;
    if (options.constant_feature) {
        auto it = std::find(d.feature_names.begin(), d.feature_names.end(), *options.constant_feature);
        if (it == d.feature_names.end()) {
            throw ModelError(fmt::format("unknown feature '{}'", *options.constant_feature));
        }
        constant = static_cast<std::size_t>(it - d.feature_names.begin());
    }

    Rng rng(seed);
    for (std::size_t i = 0; i < options.n; ++i) {
        const auto strategy = rng.below(3);  // 0 balanced, 1 restrictive, 2 permissive
        std::vector<double> row{
            std::floor(rng.unit() * 3000.0 * 10.0) / 10.0,
            strategy == 0 ? 1.0 : 0.0,
            strategy == 1 ? 1.0 : 0.0,
            strategy == 2 ? 1.0 : 0.0,
            std::round(std::exp(rng.normal() * 0.8) * 150.0) / 100.0,
            static_cast<double>(rng.below(30)),
            std::floor(std::exp(rng.normal() * 1.5)),
            rng.unit() < 0.7 ? 1.0 : 0.0,
            static_cast<double>(rng.below(20)),
        };
        if (constant) row[*constant] = 0.0;
        Label l = strategy == 1 ? Label::slow : Label::fast;
        if (options.label_noise > 0 && rng.unit() < options.label_noise) {
            l = l == Label::fast ? Label::slow : Label::fast;
        }
        d.rows.push_back(std::move(row));
        d.labels.push_back(l);
        d.ids.push_back(fmt::format("synthetic-{:05}", i));
    }
    return d;
}

}  // namespace depwatch::model
