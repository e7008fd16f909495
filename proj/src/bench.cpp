#include "majsyn/bench.hpp"

#include "majsyn/errors.hpp"
#include "majsyn/flow.hpp"
#include "majsyn/io.hpp"
#include "majsyn/oracle.hpp"

#include <toml.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace majsyn
{

std::uint32_t bench_entry::gate_limit() const
{
  // the small epsilon keeps 28 * 1.25 at 35 despite rounding
  return static_cast<std::uint32_t>( std::ceil( reference.gates * gate_tolerance - 1e-9 ) );
}

namespace
{

std::size_t line_of( toml::node const& n )
{
  return n.source().begin.line;
}

template<class T>
T required( toml::table const& t, std::string_view key, std::size_t line )
{
  auto const v = t[key].value<T>();
  if ( !v )
    throw parse_error( "missing or mistyped key '" + std::string( key ) + "'", line );
  return *v;
}

std::uint32_t non_negative( toml::table const& t, std::string_view key, std::size_t line )
{
  auto const v = required<std::int64_t>( t, key, line );
  if ( v < 0 )
    throw parse_error( "'" + std::string( key ) + "' must not be negative", line );
  return static_cast<std::uint32_t>( v );
}

void read_tolerances( toml::table const& t, bench_entry& e, std::size_t line )
{
  if ( t.contains( "gate_tolerance" ) )
  {
    e.gate_tolerance = required<double>( t, "gate_tolerance", line );
    if ( !( e.gate_tolerance >= 1.0 ) )
      throw parse_error( "gate_tolerance must be at least 1", line );
  }
  if ( t.contains( "level_slack" ) )
    e.level_slack = non_negative( t, "level_slack", line );
  if ( t.contains( "inverter_slack" ) )
    e.inverter_slack = non_negative( t, "inverter_slack", line );
}

} // namespace

std::vector<bench_entry> load_suite( std::filesystem::path const& path )
{
  toml::table doc;
  try
  {
    doc = toml::parse( read_text_file( path ), path.string() );
  }
  catch ( toml::parse_error const& e )
  {
    throw parse_error( std::string( e.description() ), e.source().begin.line, e.source().begin.column );
  }

  bench_entry defaults;
  if ( auto const* d = doc["defaults"].as_table() )
    read_tolerances( *d, defaults, line_of( *d ) );

  auto const* list = doc["benchmark"].as_array();
  if ( !list || list->empty() )
    throw parse_error( "suite has no [[benchmark]] entries", 0 );

  std::vector<bench_entry> entries;
  for ( auto const& node : *list )
  {
    auto const* t = node.as_table();
    auto const line = line_of( node );
    if ( !t )
      throw parse_error( "benchmark entries must be tables", line );
    auto e = defaults;
    e.name = required<std::string>( *t, "name", line );
    e.file = path.parent_path() / required<std::string>( *t, "file", line );
    e.source = ( *t )["source"].value_or( std::string{} );
    auto const* ref = ( *t )["reference"].as_table();
    if ( !ref )
      throw parse_error( "benchmark '" + e.name + "' has no reference table", line );
    e.reference = { non_negative( *ref, "levels", line ), non_negative( *ref, "gates", line ),
                     non_negative( *ref, "inverters", line ) };
    read_tolerances( *t, e, line );
    auto const status = ( *t )["status"].value_or( std::string( "gating" ) );
    if ( status != "gating" && status != "informational" )
      throw parse_error( "status must be \"gating\" or \"informational\"", line );
    e.informational = status == "informational";
    entries.push_back( std::move( e ) );
  }
  return entries;
}

bench_outcome run_bench_entry( bench_entry const& entry, synth_config const& cfg )
{
  bench_outcome out;
  out.entry = entry;
  auto const start = std::chrono::steady_clock::now();
  try
  {
    auto const spec = read_spec_file( entry.file );
    out.inputs = spec.num_vars();
    out.outputs = spec.num_outputs();
    auto const result = synthesize_multi( spec, cfg );
    out.got = result.totals;
    out.verified = check_equivalence( result.net, spec ).equivalent;
    out.within_gates = out.got.nom <= entry.gate_limit();
    out.within_levels = out.got.levels <= entry.reference.levels + entry.level_slack;
    out.within_inverters = out.got.noi <= entry.reference.inverters + entry.inverter_slack;
  }
  catch ( std::exception const& e )
  {
    out.failure = e.what();
  }
  out.wall_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
  return out;
}

std::vector<bench_outcome> run_suite( std::vector<bench_entry> const& entries, synth_config const& cfg, unsigned jobs )
{
  std::vector<bench_outcome> outcomes( entries.size() );
  if ( jobs == 0u )
    jobs = std::max( 1u, std::thread::hardware_concurrency() );
  std::atomic<std::size_t> next{ 0 };
  auto worker = [&] {
    for ( auto i = next++; i < entries.size(); i = next++ )
      outcomes[i] = run_bench_entry( entries[i], cfg );
  };
  std::vector<std::thread> threads;
  for ( unsigned t = 1; t < std::min<std::size_t>( jobs, entries.size() ); ++t )
    threads.emplace_back( worker );
  worker();
  for ( auto& t : threads )
    t.join();
  return outcomes;
}

std::string format_bench_table( std::vector<bench_outcome> const& outcomes, bool timing )
{
  std::ostringstream os;
  char buf[256];
  std::snprintf( buf, sizeof buf, "%-12s %3s %3s | %5s %5s %5s | %5s %5s %5s | %5s %5s %5s | %-8s %s", "benchmark", "in",
                 "out", "refL", "refG", "refI", "L", "G", "I", "maxL", "maxG", "maxI", "verified", "result" );
  os << buf << ( timing ? "  ms" : "" ) << '\n';
  std::size_t failed = 0;
  for ( auto const& o : outcomes )
  {
    auto const& e = o.entry;
    auto const& r = e.reference;
    if ( !o.failure.empty() )
    {
      std::snprintf( buf, sizeof buf, "%-12s error: %s", e.name.c_str(), o.failure.c_str() );
      os << buf << '\n';
      failed += e.informational ? 0u : 1u;
      continue;
    }
    std::string result = o.passed() ? "PASS" : "FAIL";
    if ( e.informational )
      result += " (info)";
    else if ( !o.passed() )
      ++failed;
    std::snprintf( buf, sizeof buf, "%-12s %3u %3zu | %5u %5u %5u | %5u %5u %5u | %5u %5u %5u | %-8s %s", e.name.c_str(),
                   o.inputs, o.outputs, r.levels, r.gates, r.inverters, o.got.levels, o.got.nom, o.got.noi,
                   r.levels + e.level_slack, e.gate_limit(), r.inverters + e.inverter_slack,
                   o.verified ? "yes" : "no", result.c_str() );
    os << buf;
    if ( timing )
    {
      std::snprintf( buf, sizeof buf, "  %.1f", o.wall_ms );
      os << buf;
    }
    os << '\n';
  }
  os << outcomes.size() - failed << '/' << outcomes.size() << " benchmarks within tolerance\n";
  return os.str();
}

} // namespace majsyn
