#pragma once

#include "majsyn/flow.hpp"
#include "majsyn/msm.hpp"
#include "majsyn/network.hpp"
#include "majsyn/synth.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace majsyn
{

/// "columns", "literals", "padded" or "externals".
std::string_view tier_name( candidate_tier tier );
/// Inverse of `tier_name`; throws config_error on an unknown name.
candidate_tier parse_tier( std::string_view name );

struct report_context
{
  synth_config config;
  std::string format{ "expr" };
  unsigned jobs{ 1 };
  bool verified{ false };
  std::optional<double> wall_ms;
};

/*! \brief Versioned JSON report (`"schema": 1`) of a synthesized network.

  Per-output entries hold the printed expression and its cone metrics;
  totals are measured on the whole network.  Keys are emitted in a fixed
  order and timing only appears when `wall_ms` is set, so equal inputs give
  byte-identical reports.
*/
std::string make_json_report( network const& net, std::vector<std::string> const& input_names,
                              report_context const& ctx );

} // namespace majsyn
