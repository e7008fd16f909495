// Command-line driver: synth, verify, oracle and bench.

#include <majsyn/bench.hpp>
#include <majsyn/errors.hpp>
#include <majsyn/flow.hpp>
#include <majsyn/io.hpp>
#include <majsyn/oracle.hpp>
#include <majsyn/report.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace majsyn;

namespace
{

enum exit_code : int
{
  ok = 0,
  verification_failed = 1,
  input_error = 2,
  configuration_error = 3
};

struct synth_flags
{
  std::string tier{ "padded" };
  std::size_t top_k{ 4 };
  std::optional<unsigned> max_depth;
  std::size_t budget{ 20000 };
  std::string format{ "expr" };
  bool verify{ true };
  bool timing{ false };
  unsigned jobs{ 1 };
};

synth_config make_config( synth_flags const& f )
{
  synth_config cfg;
  cfg.tier = parse_tier( f.tier );
  cfg.top_k_bases = f.top_k;
  cfg.max_depth = f.max_depth;
  cfg.postprocess_budget = f.budget;
  cfg.validate();
  return cfg;
}

void require_file( std::string const& path )
{
  if ( !std::filesystem::is_regular_file( path ) )
    throw parse_error( "cannot read " + path, 0 );
}

std::string describe_assignment( std::uint64_t m, std::vector<std::string> const& names )
{
  std::string s;
  auto const n = names.size();
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( i )
      s += ' ';
    s += names[i] + '=' + ( ( ( m >> ( n - 1 - i ) ) & 1u ) ? '1' : '0' );
  }
  return s;
}

void print_mismatch( equivalence_report const& r, multi_output_spec const& spec, network const& net )
{
  std::cerr << "verification failed: output " << net.roots()[*r.failing_output].name << " differs at minterm "
            << *r.first_counterexample << " (" << describe_assignment( *r.first_counterexample, spec.input_names() )
            << ")\n";
}

int run_synth( std::string const& file, synth_flags const& flags )
{
  require_file( file );
  auto const cfg = make_config( flags );
  if ( flags.format != "expr" && flags.format != "json" && flags.format != "minority" )
    throw config_error( "unknown format '" + flags.format + "'" );
  auto const spec = read_spec_file( file );

  auto const start = std::chrono::steady_clock::now();
  flow_options options;
  options.jobs = flags.jobs;
  auto net = synthesize_multi( spec, cfg, options ).net;
  if ( flags.format == "minority" )
    net = to_minority( net );
  auto const wall_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();

  bool verified = false;
  if ( flags.verify )
  {
    auto const r = check_equivalence( net, spec );
    if ( !r.equivalent )
    {
      print_mismatch( r, spec, net );
      return verification_failed;
    }
    verified = true;
  }

  auto const& names = spec.input_names();
  if ( flags.format == "json" )
  {
    report_context ctx{ cfg, flags.format, flags.jobs, verified, std::nullopt };
    if ( flags.timing )
      ctx.wall_ms = wall_ms;
    std::cout << make_json_report( net, names, ctx );
    return ok;
  }

  auto const t = compute_metrics( net );
  std::cout << emit_netlist( net, names );
  std::cout << "# nom " << t.nom << " levels " << t.levels << " noi " << t.noi << " ntg " << t.ntg() << " shared "
            << t.shared << '\n';
  std::cout << "# verified " << ( verified ? "yes" : "skipped" ) << '\n';
  if ( flags.timing )
    std::cout << "# wall_ms " << wall_ms << '\n';
  return ok;
}

/// Orders the spec outputs like the netlist roots when the names agree.
multi_output_spec align_outputs( multi_output_spec const& spec, network const& net )
{
  if ( net.roots().size() != spec.num_outputs() )
    throw arity_error( "netlist has " + std::to_string( net.roots().size() ) + " outputs, spec has " +
                       std::to_string( spec.num_outputs() ) );
  multi_output_spec aligned( spec.num_vars(), spec.input_names() );
  for ( auto const& r : net.roots() )
  {
    auto const it = std::find_if( spec.outputs().begin(), spec.outputs().end(),
                                  [&]( auto const& o ) { return o.name == r.name; } );
    if ( it == spec.outputs().end() )
      return spec;
    aligned.add_output( it->name, it->table );
  }
  return aligned;
}

int run_verify( std::string const& netlist_file, std::string const& spec_file, std::uint64_t samples )
{
  require_file( netlist_file );
  require_file( spec_file );
  std::vector<std::string> names;
  auto const net = parse_netlist( read_text_file( netlist_file ), &names );
  auto const spec = align_outputs( read_spec_file( spec_file ), net );
  if ( net.num_vars() != spec.num_vars() )
    throw arity_error( "netlist has " + std::to_string( net.num_vars() ) + " inputs, spec has " +
                       std::to_string( spec.num_vars() ) );
  auto const r = check_equivalence( net, spec, samples ? check_mode::sampled( samples ) : check_mode::all() );
  if ( !r.equivalent )
  {
    print_mismatch( r, spec, net );
    return verification_failed;
  }
  std::cout << "equivalent (" << r.checked << ( samples ? " sampled" : "" ) << " assignments checked)\n";
  return ok;
}

int run_oracle( std::string const& file, unsigned max_gates )
{
  require_file( file );
  if ( max_gates > 7u )
    throw config_error( "--max-gates must be at most 7" );
  auto const spec = read_spec_file( file );
  if ( spec.num_vars() > 6u )
    throw config_error( "the oracle supports at most 6 inputs" );
  int code = ok;
  for ( auto const& o : spec.outputs() )
  {
    auto const r = optimal_synth( o.table, max_gates );
    if ( !r )
    {
      std::cout << o.name << ": no network with at most " << max_gates << " gates\n";
      code = verification_failed;
      continue;
    }
    auto const m = compute_metrics( r->witness );
    std::cout << o.name << ": min_nom " << r->min_nom << ", levels " << m.levels << ", noi " << m.noi << ", "
              << to_expr_string( r->witness, expr_root( r->witness ), spec.input_names() ) << " (explored "
              << r->explored << ")\n";
  }
  return code;
}

int run_bench( std::string const& suite, synth_flags const& flags )
{
  require_file( suite );
  auto const cfg = make_config( flags );
  auto const entries = load_suite( suite );
  auto const outcomes = run_suite( entries, cfg, flags.jobs );
  std::cout << format_bench_table( outcomes, flags.timing );
  for ( auto const& o : outcomes )
  {
    if ( !o.entry.informational && !o.passed() )
      return verification_failed;
  }
  return ok;
}

void add_synth_options( CLI::App* cmd, synth_flags& f )
{
  cmd->add_option( "--tier", f.tier, "Candidate pool: columns, literals, padded or externals" )
      ->check( CLI::IsMember( { "columns", "literals", "padded", "externals" } ) );
  cmd->add_option( "--top-k", f.top_k, "Bases tried per function" )->check( CLI::PositiveNumber );
  cmd->add_option( "--max-depth", f.max_depth, "Recursion depth of the tree method" );
  cmd->add_option( "--budget", f.budget, "f2 completions explored by post-processing" )->check( CLI::PositiveNumber );
  cmd->add_flag( "--timing", f.timing, "Report wall-clock time" );
  cmd->add_option( "--jobs,-j", f.jobs, "Worker threads (0 = all cores)" );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Majority-gate logic synthesis" };
  app.require_subcommand( 1 );

  synth_flags sf;
  std::string synth_file;
  auto* synth = app.add_subcommand( "synth", "Synthesize a PLA or minterm-list spec" );
  synth->add_option( "file", synth_file, "Spec file" )->required();
  add_synth_options( synth, sf );
  synth->add_option( "--format", sf.format, "Output: expr, json or minority" )
      ->check( CLI::IsMember( { "expr", "json", "minority" } ) );
  synth->add_flag( "--verify,!--no-verify", sf.verify, "Check the result exhaustively (default on)" );

  std::string netlist_file, spec_file;
  std::uint64_t samples = 0;
  auto* verify = app.add_subcommand( "verify", "Check a netlist against a spec" );
  verify->add_option( "netlist", netlist_file, "Netlist file" )->required();
  verify->add_option( "spec", spec_file, "Spec file" )->required();
  verify->add_option( "--samples", samples, "Check this many random assignments instead of all" );

  std::string oracle_file;
  unsigned max_gates = 7;
  auto* oracle = app.add_subcommand( "oracle", "Exact minimum gate count of each output" );
  oracle->add_option( "file", oracle_file, "Spec file" )->required();
  oracle->add_option( "--max-gates", max_gates, "Largest chain searched (at most 7)" );

  synth_flags bf;
  std::string suite_file;
  auto* bench = app.add_subcommand( "bench", "Run a benchmark suite" );
  bench->add_option( "suite", suite_file, "Suite file (TOML)" )->required();
  add_synth_options( bench, bf );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? ok : configuration_error;
  }

  try
  {
    if ( *synth )
      return run_synth( synth_file, sf );
    if ( *verify )
      return run_verify( netlist_file, spec_file, samples );
    if ( *oracle )
      return run_oracle( oracle_file, max_gates );
    return run_bench( suite_file, bf );
  }
  catch ( parse_error const& e )
  {
    std::cerr << "parse error: " << e.what() << '\n';
    return input_error;
  }
  catch ( spec_conflict_error const& e )
  {
    std::cerr << "parse error: " << e.what() << '\n';
    return input_error;
  }
  catch ( config_error const& e )
  {
    std::cerr << "configuration error: " << e.what() << '\n';
    return configuration_error;
  }
  catch ( arity_error const& e )
  {
    std::cerr << "configuration error: " << e.what() << '\n';
    return configuration_error;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return verification_failed;
  }
}
