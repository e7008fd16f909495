#include "majsyn/report.hpp"

#include "majsyn/errors.hpp"

#include <json.hpp>

namespace majsyn
{

namespace
{

constexpr std::string_view tier_names[] = { "columns", "literals", "padded", "externals" };

} // namespace

std::string_view tier_name( candidate_tier tier )
{
  return tier_names[static_cast<std::size_t>( tier )];
}

candidate_tier parse_tier( std::string_view name )
{
  for ( std::size_t i = 0; i < std::size( tier_names ); ++i )
  {
    if ( tier_names[i] == name )
      return static_cast<candidate_tier>( i );
  }
  throw config_error( "unknown tier '" + std::string( name ) + "' (expected columns, literals, padded or externals)" );
}

std::string make_json_report( network const& net, std::vector<std::string> const& input_names,
                              report_context const& ctx )
{
  using json = nlohmann::ordered_json;

  json config;
  config["tier"] = tier_name( ctx.config.tier );
  config["top_k"] = ctx.config.top_k_bases;
  config["max_depth"] = ctx.config.max_depth ? json( *ctx.config.max_depth ) : json( nullptr );
  config["budget"] = ctx.config.postprocess_budget;
  config["recursion_threshold"] = ctx.config.recursion_threshold;
  config["format"] = ctx.format;
  config["jobs"] = ctx.jobs;

  json outputs = json::array();
  for ( auto const& r : net.roots() )
  {
    auto const m = compute_metrics( net, r.sig );
    json o;
    o["name"] = r.name;
    o["expression"] = to_expr_string( net, r.sig, input_names );
    o["nom"] = m.nom;
    o["levels"] = m.levels;
    o["noi"] = m.noi;
    outputs.push_back( std::move( o ) );
  }

  auto const t = compute_metrics( net );
  json totals;
  totals["nom"] = t.nom;
  totals["levels"] = t.levels;
  totals["noi"] = t.noi;
  totals["ntg"] = t.ntg();
  totals["shared"] = t.shared;

  json report;
  report["schema"] = 1;
  report["gate"] = net.kind() == gate_kind::minority ? "minority" : "majority";
  report["inputs"] = input_names;
  report["config"] = std::move( config );
  report["outputs"] = std::move( outputs );
  report["totals"] = std::move( totals );
  report["verified"] = ctx.verified;
  if ( ctx.wall_ms )
    report["timing"] = { { "wall_ms", *ctx.wall_ms } };
  return report.dump( 2 ) + "\n";
}

} // namespace majsyn
