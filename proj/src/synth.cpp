#include "majsyn/synth.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <unordered_map>
#include <unordered_set>

namespace majsyn
{

void synth_config::validate() const
{
  if ( top_k_bases < 1u )
    throw config_error( "top_k_bases must be at least 1" );
  if ( max_depth && *max_depth < 1u )
    throw config_error( "max_depth must be at least 1" );
  if ( postprocess_budget < 1u )
    throw config_error( "postprocess_budget must be at least 1" );
}

unsigned synth_config::depth_limit( unsigned num_vars ) const
{
  if ( max_depth )
    return *max_depth;
  return num_vars > 3u ? num_vars - 2u : 1u;
}

namespace
{

/// `spec` with its care set narrowed to the minterms where `keep` is one.
template<class Keep>
truth_table restrict_care( truth_table const& spec, Keep&& keep )
{
  auto const care = spec.care_words();
  auto const value = spec.value_words();
  std::vector<std::uint64_t> c( care.size() );
  std::vector<std::uint64_t> v( care.size() );
  for ( std::size_t w = 0; w < care.size(); ++w )
  {
    c[w] = care[w] & keep( w );
    v[w] = value[w] & c[w];
  }
  return truth_table::from_words( spec.num_vars(), std::move( c ), std::move( v ) );
}

/// Corrector spec of an AND stage on `g`: F where g = 1.
truth_table and_stage_spec( truth_table const& spec, truth_table const& g )
{
  auto const gv = g.value_words();
  return restrict_care( spec, [&]( std::size_t w ) { return gv[w]; } );
}

/// Corrector spec of an OR stage on `g`: F where g = 0.
truth_table or_stage_spec( truth_table const& spec, truth_table const& g )
{
  auto const gv = g.value_words();
  return restrict_care( spec, [&]( std::size_t w ) { return ~gv[w]; } );
}

/// F where `x` differs from F (used for f2), or where `x` differs from `y` (f3).
truth_table mismatch_spec( truth_table const& spec, truth_table const& x, truth_table const& y )
{
  auto const xv = x.value_words();
  auto const yv = y.value_words();
  return restrict_care( spec, [&]( std::size_t w ) { return xv[w] ^ yv[w]; } );
}

truth_table f2_spec_of( truth_table const& spec, truth_table const& f1 )
{
  auto const sv = spec.value_words();
  auto const fv = f1.value_words();
  return restrict_care( spec, [&]( std::size_t w ) { return sv[w] ^ fv[w]; } );
}

void check_same_arity( truth_table const& spec, candidate_base const& base )
{
  if ( spec.num_vars() != base.spec.num_vars() )
    throw arity_error( "base and spec have different numbers of variables" );
  if ( !base.spec.is_fully_specified() )
    throw contract_error( "base function must be fully specified" );
}

void verify( truth_table const& spec, network const& expr, char const* what )
{
  if ( !is_compatible( spec, expr.function_of( expr_root( expr ) ) ) )
    throw soundness_error( std::string( what ) + " produced an expression that does not match its spec" );
}

/// An expression for a (sub-)spec together with the concrete function it computes.
struct realization
{
  network expr;
  truth_table function;
  metrics cost;
  std::size_t implicants{ 0 };
};

realization finish( network expr )
{
  expr = push_inverters( expr );
  auto fn = expr.function_of( expr_root( expr ) );
  auto const cost = compute_metrics( expr );
  return { std::move( expr ), std::move( fn ), cost, 0u };
}

/// Single-root network over `num_vars` inputs whose root is `build(net)`.
template<class Build>
network build_expr( unsigned num_vars, Build&& build )
{
  network net( num_vars );
  auto const s = build( net );
  return make_expr( std::move( net ), s );
}

realization constant_realization( unsigned num_vars, bool value )
{
  return finish( build_expr( num_vars, [&]( network& net ) { return net.constant( value ); } ) );
}

realization two_level_realization( truth_table const& spec )
{
  auto tl = two_level( spec );
  auto r = finish( std::move( tl.expr ) );
  r.implicants = tl.chosen.implicants.size();
  return r;
}

/// Builds M(f1, x, y) from single-root networks.
network assemble_gate( candidate_base const& f1, network const& x, network const& y )
{
  return build_expr( f1.spec.num_vars(), [&]( network& net ) {
    auto const a = f1.build( net );
    auto const b = net.import( x, expr_root( x ) );
    auto const c = net.import( y, expr_root( y ) );
    return net.create_gate( a, b, c );
  } );
}

/// Completions of f2 considered by the post-process search, in a fixed order.
class f2_option_generator
{
public:
  f2_option_generator( truth_table const& f2_spec, std::size_t budget ) : spec_( f2_spec ), budget_( budget ) {}

  void add( truth_table const& fn )
  {
    if ( budget_ == 0u || !is_compatible( spec_, fn ) )
      return;
    if ( seen_.insert( fn ).second )
    {
      options_.push_back( fn );
      --budget_;
    }
  }

  /// Unions of up to `max_size` primes (of the complement when `negate`).
  void add_prime_unions( bool negate, std::size_t max_primes, std::size_t max_size )
  {
    auto const target = negate ? spec_.complement() : spec_;
    if ( target.count_onset() == 0u )
      return;
    auto primes = prime_implicants( target );
    if ( primes.size() > max_primes )
      primes.resize( max_primes );
    std::vector<truth_table> cubes;
    for ( auto const& p : primes )
      cubes.push_back( cover{ target.num_vars(), { p } }.function() );

    std::vector<std::size_t> idx;
    std::function<void( std::size_t, truth_table const& )> rec = [&]( std::size_t from, truth_table const& acc ) {
      for ( std::size_t i = from; i < cubes.size() && budget_ > 0u; ++i )
      {
        auto const next = idx.empty() ? cubes[i] : ( acc | cubes[i] );
        idx.push_back( i );
        if ( idx.size() == depth_ )
          add( negate ? ~next : next );
        else
          rec( i + 1u, next );
        idx.pop_back();
      }
    };
    for ( depth_ = 1u; depth_ <= max_size && budget_ > 0u; ++depth_ )
      rec( 0u, truth_table( target.num_vars() ) );
  }

  std::vector<truth_table> const& options() const noexcept { return options_; }

private:
  truth_table spec_;
  std::size_t budget_;
  std::size_t depth_{ 1 };
  std::unordered_set<truth_table> seen_;
  std::vector<truth_table> options_;
};

/// Search effort at one tree depth; nested sub-function synthesis explores less.
struct effort
{
  std::size_t top_k;
  std::size_t keep;
  std::size_t max_primes;
  std::size_t max_union;
  bool pool_options;
};

effort effort_at( unsigned num_vars, std::size_t top_k, unsigned depth )
{
  bool const small = num_vars <= 4u;
  if ( depth == 0u )
    return { top_k, 3u, small ? 12u : 8u, small ? 3u : 2u, true };
  if ( depth == 1u )
    return { std::max<std::size_t>( 1u, top_k / 2u ), 1u, small ? 8u : 6u, 2u, false };
  return { 1u, 1u, small ? 8u : 6u, 2u, false };
}

void generate_f2_options( f2_option_generator& gen, unsigned num_vars, std::vector<candidate_base> const& pool,
                          effort const& e )
{
  gen.add( truth_table::constant( num_vars, false ) );
  gen.add( truth_table::constant( num_vars, true ) );
  if ( e.pool_options )
  {
    for ( auto const& c : pool )
      gen.add( c.spec );
  }
  gen.add_prime_unions( false, e.max_primes, e.max_union );
  gen.add_prime_unions( true, e.max_primes, e.max_union );
}

struct memo_key
{
  truth_table spec;
  unsigned depth;
  friend bool operator==( memo_key const&, memo_key const& ) = default;
};

struct memo_key_hash
{
  std::size_t operator()( memo_key const& k ) const noexcept { return k.spec.hash() * 31u + k.depth; }
};

struct raw_candidate
{
  network expr;
  std::string method;
  std::string base;
};

} // namespace

namespace detail
{

/*! \brief Memoized synthesis engine for one input space.

  `synth(spec, d)` produces the candidate list of a main function at tree
  depth `d`; `realize(spec, d)` returns the single best expression for a
  sub-function, recursing into `synth(spec, d + 1)` when the sub-function's
  cover is large and the depth limit allows.
*/
class engine
{
public:
  engine( unsigned num_vars, synth_config const& cfg, std::vector<candidate_base> const& externals )
      : num_vars_( num_vars ),
        cfg_( cfg ),
        limit_( cfg.depth_limit( num_vars ) ),
        names_( default_var_names( num_vars ) ),
        pool_( candidate_pool( truth_table( num_vars ), externals, cfg.tier ) )
  {
  }

  std::vector<synth_candidate> const& synth( truth_table const& spec, unsigned depth )
  {
    memo_key key{ spec, depth };
    if ( auto it = synth_memo_.find( key ); it != synth_memo_.end() )
      return *it->second;

    std::vector<raw_candidate> raw;
    if ( spec.admits_constant( false ) || spec.admits_constant( true ) )
    {
      bool const value = !spec.admits_constant( false );
      raw.push_back( { build_expr( num_vars_, [&]( network& net ) { return net.constant( value ); } ), "constant", "" } );
    }
    raw.push_back( { two_level( spec ).expr, "two-level", "" } );
    for ( auto const& c : pool_ )
    {
      if ( is_compatible( spec, c.spec ) )
      {
        raw.push_back( { build_expr( num_vars_, [&]( network& net ) { return c.build( net ); } ), "pool",
                         c.describe( names_ ) } );
      }
    }

    auto const bases = pool_.empty() ? std::vector<candidate_base>{} : rank_candidates( spec, pool_, effort_at( num_vars_, cfg_.top_k_bases, depth ).top_k );
    for ( auto const& base : bases )
    {
      auto const label = base.describe( names_ );
      raw.push_back( { method1_stages( spec, base, stage_order::and_then_or, depth ), "method1", label } );
      raw.push_back( { method1_stages( spec, base, stage_order::or_then_and, depth ), "method1", label } );
      for ( auto& [expr, tag] : method2_search( spec, base, depth ) )
        raw.push_back( { std::move( expr ), tag, label } );
      for ( auto& [expr, tag] : combined( spec, base, depth ) )
        raw.push_back( { std::move( expr ), tag, label } );
    }

    auto list = std::make_unique<std::vector<synth_candidate>>( rank( spec, std::move( raw ) ) );
    auto const& ref = *list;
    synth_memo_.emplace( std::move( key ), std::move( list ) );
    return ref;
  }

  realization const& realize( truth_table const& spec, unsigned depth )
  {
    depth = std::min( depth, limit_ );
    memo_key key{ spec, depth };
    if ( auto it = realize_memo_.find( key ); it != realize_memo_.end() )
      return *it->second;

    std::unique_ptr<realization> best;
    auto consider = [&]( realization r ) {
      if ( !best || r.cost.better_than( best->cost ) )
        best = std::make_unique<realization>( std::move( r ) );
    };

    if ( spec.admits_constant( false ) )
      consider( constant_realization( num_vars_, false ) );
    else if ( spec.admits_constant( true ) )
      consider( constant_realization( num_vars_, true ) );
    if ( !best )
    {
      auto tl = two_level_realization( spec );
      auto const implicants = tl.implicants;
      consider( std::move( tl ) );
      for ( auto const& c : pool_ )
      {
        if ( is_compatible( spec, c.spec ) )
        {
          auto r = finish( build_expr( num_vars_, [&]( network& net ) { return c.build( net ); } ) );
          // externals are other outputs' logic; their gates are paid for once the networks merge
          if ( std::holds_alternative<external_source>( c.source ) )
            r.cost.nom = r.cost.noi = 0u;
          consider( std::move( r ) );
        }
      }
      if ( depth < limit_ && implicants > cfg_.recursion_threshold )
      {
        auto const& list = synth( spec, depth + 1u );
        auto const& top = list.front();
        consider( finish( top.expr ) );
      }
    }
    if ( !is_compatible( spec, best->function ) )
      throw soundness_error( "sub-function realization does not match its spec" );

    auto const& ref = *best;
    realize_memo_.emplace( std::move( key ), std::move( best ) );
    return ref;
  }

  static metrics build_cost( candidate_base const& c )
  {
    network net( c.spec.num_vars() );
    auto const s = c.build( net );
    return compute_metrics( net, s );
  }

  /// Realization without recursion, used to estimate costs.
  realization const& cheap( truth_table const& spec ) { return realize( spec, limit_ ); }

  std::vector<candidate_base> const& pool() const noexcept { return pool_; }
  unsigned num_vars() const noexcept { return num_vars_; }

  network method1_stages( truth_table const& spec, candidate_base const& base, stage_order order, unsigned depth )
  {
    network net( num_vars_ );
    auto g = base.build( net );
    auto g_fn = base.spec;
    auto stage = [&]( bool is_and ) {
      auto const sub = is_and ? and_stage_spec( spec, g_fn ) : or_stage_spec( spec, g_fn );
      if ( sub.admits_constant( is_and ) )
        return;
      auto const& r = realize( sub, depth );
      auto const s = net.import( r.expr, expr_root( r.expr ) );
      g = is_and ? net.create_and( g, s ) : net.create_or( g, s );
      g_fn = is_and ? ( g_fn & r.function ) : ( g_fn | r.function );
    };
    bool const and_first = order == stage_order::and_then_or;
    stage( and_first );
    stage( !and_first );
    return make_expr( std::move( net ), g );
  }

  /// Method 2 with the default f2 plus the best post-processed alternatives.
  std::vector<std::pair<network, std::string>> method2_search( truth_table const& spec, candidate_base const& f1,
                                                               unsigned depth, std::string const& tag = "method2" )
  {
    std::vector<std::pair<network, std::string>> out;
    auto const f2_spec = f2_spec_of( spec, f1.spec );

    auto const& r2 = realize( f2_spec, depth );
    auto const f3_default = mismatch_spec( spec, r2.function, f1.spec );
    out.emplace_back( assemble_gate( f1, r2.expr, realize( f3_default, depth ).expr ), tag );

    f2_option_generator gen( f2_spec, cfg_.postprocess_budget );
    gen.add( r2.function );
    auto const e = effort_at( num_vars_, cfg_.top_k_bases, depth );
    generate_f2_options( gen, num_vars_, pool_, e );

    // estimate each option from memoized standalone costs (sharing ignored)
    auto const f1_cost = build_cost( f1 );
    struct scored
    {
      metrics cost;
      std::size_t index;
    };
    std::vector<scored> scores;
    auto const& options = gen.options();
    for ( std::size_t i = 1; i < options.size(); ++i )
    {
      auto const& c2 = cheap( options[i] ).cost;
      auto const& c3 = cheap( mismatch_spec( spec, options[i], f1.spec ) ).cost;
      metrics est;
      est.nom = f1_cost.nom + c2.nom + c3.nom + 1u;
      est.levels = 1u + std::max( { f1_cost.levels, c2.levels, c3.levels } );
      est.noi = f1_cost.noi + c2.noi + c3.noi;
      scores.push_back( { est, i } );
    }
    std::stable_sort( scores.begin(), scores.end(),
                      []( auto const& x, auto const& y ) { return x.cost.better_than( y.cost ); } );
    for ( std::size_t j = 0; j < std::min( e.keep, scores.size() ); ++j )
    {
      auto const& f2 = options[scores[j].index];
      auto const f3_spec = mismatch_spec( spec, f2, f1.spec );
      out.emplace_back( assemble_gate( f1, realize( f2, depth ).expr, realize( f3_spec, depth ).expr ), tag + "-pp" );
    }
    return out;
  }

  /// One AND or OR correction of the base, then method 2 on the corrected function.
  std::vector<std::pair<network, std::string>> combined( truth_table const& spec, candidate_base const& base,
                                                         unsigned depth )
  {
    std::vector<std::pair<network, std::string>> out;
    for ( bool const is_and : { false, true } )
    {
      auto const sub = is_and ? and_stage_spec( spec, base.spec ) : or_stage_spec( spec, base.spec );
      if ( sub.admits_constant( is_and ) )
        continue;
      auto const& r = realize( sub, depth );
      auto corrected = build_expr( num_vars_, [&]( network& net ) {
        auto const b = base.build( net );
        auto const s = net.import( r.expr, expr_root( r.expr ) );
        return is_and ? net.create_and( b, s ) : net.create_or( b, s );
      } );
      auto const f1 = candidate_base::from_external( std::move( corrected ), "corrected" );
      for ( auto& entry : method2_search( spec, f1, depth, "combined" ) )
        out.push_back( std::move( entry ) );
    }
    return out;
  }

private:
  std::vector<synth_candidate> rank( truth_table const& spec, std::vector<raw_candidate> raw )
  {
    std::vector<synth_candidate> list;
    std::unordered_set<std::string> seen;
    for ( auto& r : raw )
    {
      auto expr = push_inverters( r.expr );
      verify( spec, expr, r.method.c_str() );
      if ( !seen.insert( to_expr_string( expr, expr_root( expr ), names_ ) ).second )
        continue;
      auto const cost = compute_metrics( expr );
      list.push_back( { std::move( expr ), cost, std::move( r.method ), std::move( r.base ) } );
    }
    std::stable_sort( list.begin(), list.end(),
                      []( auto const& x, auto const& y ) { return x.cost.better_than( y.cost ); } );
    return list;
  }

  unsigned num_vars_;
  synth_config cfg_;
  unsigned limit_;
  std::vector<std::string> names_;
  std::vector<candidate_base> pool_;
  std::unordered_map<memo_key, std::unique_ptr<realization>, memo_key_hash> realize_memo_;
  std::unordered_map<memo_key, std::unique_ptr<std::vector<synth_candidate>>, memo_key_hash> synth_memo_;

public:
  std::size_t memo_size() const noexcept { return realize_memo_.size() + synth_memo_.size(); }
};

} // namespace detail

network method1( truth_table const& spec, candidate_base const& base, stage_order order )
{
  check_same_arity( spec, base );
  network net( spec.num_vars() );
  auto g = base.build( net );
  auto g_fn = base.spec;
  auto stage = [&]( bool is_and ) {
    auto const sub = is_and ? and_stage_spec( spec, g_fn ) : or_stage_spec( spec, g_fn );
    if ( sub.admits_constant( is_and ) )
      return;
    auto const c = minimize( sub );
    g = is_and ? net.create_and( g, cover_to_majority( net, c ) ) : net.create_or( g, cover_to_majority( net, c ) );
    g_fn = is_and ? ( g_fn & c.function() ) : ( g_fn | c.function() );
  };
  bool const and_first = order == stage_order::and_then_or;
  stage( and_first );
  stage( !and_first );
  auto expr = make_expr( std::move( net ), g );
  verify( spec, expr, "method1" );
  return expr;
}

decomposition method2( truth_table const& spec, candidate_base const& base )
{
  check_same_arity( spec, base );
  auto f2_spec = f2_spec_of( spec, base.spec );
  auto f2 = two_level( f2_spec ).function;
  auto f3_spec = mismatch_spec( spec, f2, base.spec );
  return { base, std::move( f2_spec ), std::move( f2 ), std::move( f3_spec ), decomposition_mode::method2 };
}

network assemble( decomposition const& dec )
{
  auto const f2 = two_level( dec.f2 ).expr;
  auto const f3 = two_level( dec.f3_spec ).expr;
  return assemble_gate( dec.f1, f2, f3 );
}

network method_combined( truth_table const& spec, candidate_base const& base )
{
  check_same_arity( spec, base );
  struct stage_choice
  {
    bool is_and;
    cover corrector;
  };
  std::optional<stage_choice> pick;
  for ( bool const is_and : { false, true } )
  {
    auto const sub = is_and ? and_stage_spec( spec, base.spec ) : or_stage_spec( spec, base.spec );
    if ( sub.admits_constant( is_and ) )
      continue;
    auto c = minimize( sub );
    if ( !pick || c.gate_count() < pick->corrector.gate_count() )
      pick = stage_choice{ is_and, std::move( c ) };
  }

  candidate_base f1 = base;
  if ( pick )
  {
    auto corrected = build_expr( spec.num_vars(), [&]( network& net ) {
      auto const b = base.build( net );
      auto const s = cover_to_majority( net, pick->corrector );
      return pick->is_and ? net.create_and( b, s ) : net.create_or( b, s );
    } );
    f1 = candidate_base::from_external( std::move( corrected ), "corrected" );
  }
  auto dec = method2( spec, f1 );
  dec.mode = decomposition_mode::combined;
  auto expr = assemble( dec );
  verify( spec, expr, "method_combined" );
  return expr;
}

decomposition postprocess( decomposition const& dec, truth_table const& spec, std::size_t budget )
{
  if ( budget < 1u )
    throw config_error( "post-process budget must be at least 1" );
  check_same_arity( spec, dec.f1 );

  auto const n = spec.num_vars();
  f2_option_generator gen( dec.f2_spec, budget );
  gen.add( dec.f2 );
  generate_f2_options( gen, n, candidate_pool( spec, {}, candidate_tier::plus_constant_padded ), effort_at( n, 1u, 0u ) );

  decomposition best = dec;
  auto best_cost = compute_metrics( push_inverters( assemble( dec ) ) );
  for ( auto const& f2 : gen.options() )
  {
    decomposition trial{ dec.f1, dec.f2_spec, f2, mismatch_spec( spec, f2, dec.f1.spec ), dec.mode };
    auto const cost = compute_metrics( push_inverters( assemble( trial ) ) );
    if ( cost.better_than( best_cost ) )
    {
      best_cost = cost;
      best = std::move( trial );
    }
  }
  return best;
}

synthesizer::synthesizer( unsigned num_vars, synth_config const& cfg, std::vector<candidate_base> const& externals )
{
  cfg.validate();
  if ( num_vars < 1u || num_vars > 16u )
    throw arity_error( "single-output synthesis supports 1 to 16 variables" );
  for ( auto const& e : externals )
  {
    if ( e.spec.num_vars() != num_vars )
      throw arity_error( "external candidate has a different number of variables" );
  }
  impl_ = std::make_unique<detail::engine>( num_vars, cfg, externals );
}

synthesizer::~synthesizer() = default;
synthesizer::synthesizer( synthesizer&& ) noexcept = default;
synthesizer& synthesizer::operator=( synthesizer&& ) noexcept = default;

std::vector<synth_candidate> const& synthesizer::run( truth_table const& spec )
{
  if ( spec.num_vars() != impl_->num_vars() )
    throw arity_error( "spec has a different number of variables than the synthesizer" );
  return impl_->synth( spec, 0u );
}

std::size_t synthesizer::memo_size() const noexcept
{
  return impl_->memo_size();
}

namespace
{

struct cache_key
{
  unsigned num_vars;
  std::size_t top_k;
  candidate_tier tier;
  std::optional<unsigned> max_depth;
  std::size_t budget;
  std::size_t threshold;
  friend bool operator==( cache_key const&, cache_key const& ) = default;
};

} // namespace

std::vector<synth_candidate> synth_single( truth_table const& spec, synth_config const& cfg,
                                           std::vector<candidate_base> const& externals )
{
  if ( !externals.empty() )
  {
    synthesizer s( spec.num_vars(), cfg, externals );
    return s.run( spec );
  }

  // without externals the memo depends only on the configuration, so it is
  // kept per thread and reused across calls
  constexpr std::size_t max_entries = 200000u;
  thread_local std::vector<std::pair<cache_key, synthesizer>> cache;
  cache_key const key{ spec.num_vars(), cfg.top_k_bases, cfg.tier, cfg.max_depth, cfg.postprocess_budget,
                       cfg.recursion_threshold };
  auto it = std::find_if( cache.begin(), cache.end(), [&]( auto const& e ) { return e.first == key; } );
  if ( it != cache.end() && it->second.memo_size() > max_entries )
  {
    cache.erase( it );
    it = cache.end();
  }
  if ( it == cache.end() )
  {
    cache.emplace_back( key, synthesizer( spec.num_vars(), cfg ) );
    it = std::prev( cache.end() );
  }
  return it->second.run( spec );
}

} // namespace majsyn
