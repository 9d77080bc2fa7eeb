#pragma once

#include <cstdint>
#include <string>

#include "cli.hpp"
#include "ptffool/common.hpp"
#include "ptffool/fooling.hpp"

namespace ptffool::cli {

using ptffool::to_string;

Verdict combine(Verdict a, Verdict b);
json rational_json(const Rational& q);
json subset_json(std::uint64_t s);
json deviation_json(const DeviationReport& r);
Verdict lp_verdict(const DeviationReport& r);

Verdict suite_cmd(const Params& p, const Context& ctx, json& result);

}  // namespace ptffool::cli
