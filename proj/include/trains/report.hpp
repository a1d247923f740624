#pragma once

#include <string>

#include "json.hpp"
#include "trains/classifier.hpp"
#include "trains/families.hpp"
#include "trains/gamma.hpp"
#include "trains/transforms.hpp"
#include "trains/verify.hpp"

namespace trains {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const KEstimate& est);
ordered_json to_json(const Verdict& verdict);
ordered_json to_json(const NecessaryChecks& checks);
ordered_json to_json(const TransformRecord& rec);
ordered_json to_json(const InequalityReport& rep);
ordered_json spec_to_json(const TrainSpec& spec);

/// Report envelope. Identical invocations produce byte-identical documents
/// apart from the wall_time_ms field.
ordered_json make_report(const std::string& command, const std::string& digest,
                         ordered_json results, double wall_time_ms);

/// CSV with header `h,min_gamma,argmin_m`, one row per evaluated h,
/// ascending.
std::string profile_to_csv(const SupResult& sup);

/// CSV with header `region,l0,c_lower,c_upper,argmin,argmax`.
std::string fit_to_csv(const InequalityReport& rep);

}  // namespace trains
