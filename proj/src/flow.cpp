#include "majsyn/flow.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <tuple>
#include <unordered_set>

namespace majsyn
{

namespace
{

/// Output restricted to the variables it depends on; `support[j]` is the global index of local variable j.
struct projection
{
  std::vector<unsigned> support;
  truth_table local;
  std::optional<bool> constant;
};

projection project( truth_table const& t )
{
  projection p;
  if ( t.admits_constant( false ) || t.admits_constant( true ) )
  {
    p.constant = !t.admits_constant( false );
    return p;
  }
  // drop from the highest index down so lower indices stay valid
  auto local = t;
  for ( auto v = static_cast<int>( t.num_vars() ) - 1; v >= 0; --v )
  {
    auto const var = static_cast<unsigned>( v );
    if ( local.num_vars() > 1u && !local.depends_on( var ) )
      local = local.drop_var( var );
    else
      p.support.push_back( var );
  }
  std::reverse( p.support.begin(), p.support.end() );
  p.local = std::move( local );
  return p;
}

struct flow_candidate
{
  network expr;
  metrics cost;
  output_provenance prov;
};

network to_global( network const& local, std::vector<unsigned> const& support, unsigned num_vars, bool complement )
{
  network net( num_vars );
  std::vector<signal> map;
  for ( auto v : support )
    map.push_back( net.var( v ) );
  auto s = net.import( local, expr_root( local ), map );
  if ( complement )
    s = !s;
  return make_expr( std::move( net ), s );
}

network to_local( network const& global, std::vector<unsigned> const& support )
{
  network net( static_cast<unsigned>( support.size() ) );
  std::vector<signal> map( global.num_vars(), net.constant( false ) );
  for ( std::size_t j = 0; j < support.size(); ++j )
    map[support[j]] = net.var( static_cast<unsigned>( j ) );
  auto const s = net.import( global, expr_root( global ), map );
  return make_expr( std::move( net ), s );
}

/// Sorts by cost (stable), removes structural duplicates, keeps the first `keep`.
void rank_and_trim( std::vector<flow_candidate>& list, unsigned num_vars, std::size_t keep )
{
  std::stable_sort( list.begin(), list.end(),
                    []( auto const& x, auto const& y ) { return x.cost.better_than( y.cost ); } );
  auto const names = default_var_names( num_vars );
  std::unordered_set<std::string> seen;
  std::vector<flow_candidate> out;
  for ( auto& c : list )
  {
    if ( out.size() == keep )
      break;
    if ( seen.insert( to_expr_string( c.expr, expr_root( c.expr ), names ) ).second )
      out.push_back( std::move( c ) );
  }
  list = std::move( out );
}

std::vector<flow_candidate> generate( projection const& p, unsigned num_vars, synth_config const& cfg,
                                      std::vector<candidate_base> const& externals, bool reuse )
{
  std::vector<flow_candidate> out;
  if ( p.constant )
  {
    network net( num_vars );
    auto const root = net.constant( *p.constant );
    auto expr = make_expr( std::move( net ), root );
    out.push_back( { std::move( expr ), {}, { "constant", "", false, reuse } } );
    return out;
  }

  auto add = [&]( std::vector<synth_candidate> const& list, bool complement ) {
    for ( auto const& c : list )
    {
      auto expr = to_global( c.expr, p.support, num_vars, complement );
      auto const cost = compute_metrics( expr );
      out.push_back( { std::move( expr ), cost, { c.method, c.base, complement, reuse } } );
    }
  };
  if ( externals.empty() )
  {
    add( synth_single( p.local, cfg ), false );
    add( synth_single( p.local.complement(), cfg ), true );
  }
  else
  {
    auto local_cfg = cfg;
    local_cfg.tier = candidate_tier::plus_externals;
    synthesizer s( p.local.num_vars(), local_cfg, externals );
    add( s.run( p.local ), false );
    add( s.run( p.local.complement() ), true );
  }
  return out;
}

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads; exceptions are rethrown in index order.
template<class Task>
void parallel_for( std::size_t count, unsigned jobs, Task&& task )
{
  if ( jobs == 0u )
    jobs = std::max( 1u, std::thread::hardware_concurrency() );
  jobs = static_cast<unsigned>( std::min<std::size_t>( jobs, count ) );
  std::vector<std::exception_ptr> errors( count );
  if ( jobs <= 1u )
  {
    for ( std::size_t i = 0; i < count; ++i )
    {
      try
      {
        task( i );
      }
      catch ( ... )
      {
        errors[i] = std::current_exception();
      }
    }
  }
  else
  {
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::thread> workers;
    for ( unsigned w = 0; w < jobs; ++w )
    {
      workers.emplace_back( [&] {
        for ( auto i = next++; i < count; i = next++ )
        {
          try
          {
            task( i );
          }
          catch ( ... )
          {
            errors[i] = std::current_exception();
          }
        }
      } );
    }
    for ( auto& t : workers )
      t.join();
  }
  for ( auto const& e : errors )
  {
    if ( e )
      std::rethrow_exception( e );
  }
}

struct selection_key
{
  std::uint32_t nom;
  std::uint32_t levels;
  std::uint32_t noi;
  std::int64_t neg_shared;

  friend auto operator<=>( selection_key const&, selection_key const& ) = default;
};

selection_key key_of( metrics const& m )
{
  return { m.nom, m.levels, m.noi, -static_cast<std::int64_t>( m.shared ) };
}

metrics merged_cost( std::vector<std::vector<network>> const& candidates, std::vector<std::size_t> const& chosen )
{
  network net( candidates.front().front().num_vars() );
  for ( std::size_t i = 0; i < candidates.size(); ++i )
  {
    auto const& c = candidates[i][chosen[i]];
    net.add_root( "", net.import( c, expr_root( c ) ) );
  }
  return compute_metrics( net );
}

} // namespace

network merge_selection( std::vector<std::vector<network>> const& candidates, std::vector<std::size_t> const& chosen,
                         std::vector<std::string> const& names )
{
  if ( candidates.empty() || candidates.size() != chosen.size() || names.size() != chosen.size() )
    throw contract_error( "selection does not match the candidate lists" );
  network net( candidates.front().front().num_vars() );
  for ( std::size_t i = 0; i < candidates.size(); ++i )
  {
    auto const& c = candidates[i].at( chosen[i] );
    net.add_root( names[i], net.import( c, expr_root( c ) ) );
  }
  return net;
}

selection choose_variant( std::vector<std::vector<network>> const& candidates, std::size_t exhaustive_limit )
{
  if ( candidates.empty() )
    throw contract_error( "no outputs to select for" );
  std::size_t product = 1;
  for ( auto const& list : candidates )
  {
    if ( list.empty() )
      throw contract_error( "an output has no candidates" );
    product = list.size() > exhaustive_limit / product ? exhaustive_limit + 1u : product * list.size();
  }

  selection best{ std::vector<std::size_t>( candidates.size(), 0u ), {} };
  best.merged = merged_cost( candidates, best.chosen );
  auto consider = [&]( std::vector<std::size_t> const& chosen ) {
    auto const cost = merged_cost( candidates, chosen );
    auto const k = key_of( cost );
    auto const bk = key_of( best.merged );
    if ( k < bk || ( k == bk && chosen < best.chosen ) )
      best = { chosen, cost };
  };

  if ( product <= exhaustive_limit )
  {
    std::vector<std::size_t> chosen( candidates.size(), 0u );
    for ( ;; )
    {
      consider( chosen );
      std::size_t i = 0;
      while ( i < chosen.size() && ++chosen[i] == candidates[i].size() )
        chosen[i++] = 0u;
      if ( i == chosen.size() )
        break;
    }
    return best;
  }

  for ( int pass = 0; pass < 2; ++pass )
  {
    for ( std::size_t i = 0; i < candidates.size(); ++i )
    {
      auto trial = best.chosen;
      for ( std::size_t c = 0; c < candidates[i].size(); ++c )
      {
        trial[i] = c;
        consider( trial );
      }
    }
  }
  return best;
}

flow_result synthesize_multi( multi_output_spec const& spec, synth_config const& cfg, flow_options const& options )
{
  cfg.validate();
  if ( spec.num_outputs() == 0u )
    throw contract_error( "multi-output synthesis needs at least one output" );
  if ( options.keep_per_output < 1u )
    throw config_error( "keep_per_output must be at least 1" );

  auto const n = spec.num_vars();
  auto const& outputs = spec.outputs();
  auto const count = outputs.size();

  std::vector<projection> proj( count );
  for ( std::size_t i = 0; i < count; ++i )
  {
    proj[i] = project( outputs[i].table );
    if ( proj[i].support.size() > 16u )
      throw arity_error( "output " + outputs[i].name + " depends on more than 16 variables" );
  }

  // phase 1: each output and its complement on their own
  std::vector<std::vector<flow_candidate>> cands( count );
  parallel_for( count, options.jobs, [&]( std::size_t i ) {
    cands[i] = generate( proj[i], n, cfg, {}, false );
    rank_and_trim( cands[i], n, options.keep_per_output );
  } );

  // phase 2: reuse the best expressions of the other outputs as bases
  if ( count > 1u && options.reuse_top > 0u )
  {
    std::vector<std::vector<flow_candidate>> extra( count );
    parallel_for( count, options.jobs, [&]( std::size_t i ) {
      if ( proj[i].constant )
        return;
      std::vector<candidate_base> externals;
      for ( std::size_t j = 0; j < count; ++j )
      {
        if ( j == i || proj[j].constant ||
             !std::includes( proj[i].support.begin(), proj[i].support.end(), proj[j].support.begin(),
                             proj[j].support.end() ) )
          continue;
        for ( std::size_t k = 0; k < std::min( options.reuse_top, cands[j].size() ); ++k )
        {
          auto const& expr = cands[j][k].expr;
          externals.push_back(
              candidate_base::from_external( to_local( expr, proj[i].support ), outputs[j].name ) );
          // inner gates are offered too, so partial structures can be shared
          for ( std::uint32_t g = 0; g < expr.size(); ++g )
          {
            if ( expr.is_gate( g ) && g != expr_root( expr ).index )
              externals.push_back( candidate_base::from_external(
                  to_local( make_expr( expr, { g, false } ), proj[i].support ), outputs[j].name + "/part" ) );
          }
        }
      }
      if ( !externals.empty() )
        extra[i] = generate( proj[i], n, cfg, externals, true );
    } );
    for ( std::size_t i = 0; i < count; ++i )
    {
      for ( auto& c : extra[i] )
        cands[i].push_back( std::move( c ) );
      rank_and_trim( cands[i], n, options.keep_per_output );
    }
  }

  // phase 3: sharing-aware selection
  std::vector<std::vector<network>> exprs( count );
  std::vector<std::string> names;
  for ( std::size_t i = 0; i < count; ++i )
  {
    for ( auto const& c : cands[i] )
      exprs[i].push_back( c.expr );
    names.push_back( outputs[i].name );
  }
  auto const sel = choose_variant( exprs, options.exhaustive_limit );

  // phase 4: inverter reduction on the merged network, then verification
  flow_result result;
  result.net = push_inverters( merge_selection( exprs, sel.chosen, names ) );
  auto const functions = result.net.root_functions();
  for ( std::size_t i = 0; i < count; ++i )
  {
    if ( !is_compatible( outputs[i].table, functions[i] ) )
      throw soundness_error( "output " + outputs[i].name + " does not match its spec after synthesis" );
    result.per_output.push_back( compute_metrics( result.net, result.net.roots()[i].sig ) );
    result.provenance.push_back( cands[i][sel.chosen[i]].prov );
  }
  result.totals = compute_metrics( result.net );
  return result;
}

} // namespace majsyn
