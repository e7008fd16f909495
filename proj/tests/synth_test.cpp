#include "helpers.hpp"

#include <majsyn/errors.hpp>
#include <majsyn/synth.hpp>

#include <doctest.h>

using namespace majsyn;

namespace
{

candidate_base column( unsigned n, unsigned x, unsigned y, unsigned z, std::uint8_t polarity )
{
  return candidate_base::from_column( n, variable_triple( x, y, z ), polarity );
}

std::string sop( cover const& c )
{
  std::string s;
  auto const names = default_var_names( c.num_vars );
  for ( auto const& imp : c.implicants )
  {
    if ( !s.empty() )
      s += " + ";
    for ( unsigned v = 0; v < c.num_vars; ++v )
      if ( auto const lit = imp.literal( v, c.num_vars ) )
        s += names[v] + ( *lit ? "" : "'" );
  }
  return s.empty() ? "0" : s;
}

/// Per defined minterm: equal f1 and f2 must already give F, otherwise f3 is pinned to F.
void check_feasible( truth_table const& spec, decomposition const& d )
{
  CHECK( is_compatible( d.f2_spec, d.f2 ) );
  for ( std::uint64_t m = 0; m < spec.num_minterms(); ++m )
  {
    auto const want = spec.get( m );
    if ( want == tv::dont_care )
    {
      CHECK( d.f3_spec.get( m ) == tv::dont_care );
      continue;
    }
    auto const f1 = d.f1.spec.get( m ), f2 = d.f2.get( m );
    if ( f1 == f2 )
      CHECK( f1 == want );
    else
      CHECK( d.f3_spec.get( m ) == want );
  }
}

bool costlier( metrics const& a, metrics const& b )
{
  return b.better_than( a );
}

} // namespace

TEST_SUITE( "synth" )
{
  TEST_CASE( "method 1 on the first example" )
  {
    auto const f = truth_table::from_minterms( 3, { 0, 3, 6 } );
    auto const expr = method1( f, column( 3, 0, 1, 2, 0b010 ) );
    CHECK( test::function_of( expr ) == f );
    CHECK( compute_metrics( expr ).nom == 4u );
  }

  TEST_CASE( "method 1 leaves a matching base alone" )
  {
    auto const base = column( 3, 0, 1, 2, 0b111 );
    auto const expr = method1( base.spec, base );
    CHECK( to_expr_string( expr, expr_root( expr ), test::abc ) == "M(a,b,c)" );
    CHECK( compute_metrics( expr ).nom == 1u );
  }

  TEST_CASE( "method 1 with the OR stage first on the third example" )
  {
    auto const f = truth_table::from_minterms( 3, { 3, 4, 6 } );
    auto const expr = method1( f, column( 3, 0, 1, 2, 0b111 ), stage_order::or_then_and );
    CHECK( test::function_of( expr ) == f );
  }

  TEST_CASE( "method 2 on the second example" )
  {
    auto const f = truth_table::from_minterms( 3, { 1, 2, 4, 5, 6, 7 } );
    auto const d = method2( f, column( 3, 0, 1, 2, 0b000 ) );
    CHECK( d.f2 == truth_table::nth_var( 3, 0 ) );
    CHECK( sop( minimize( d.f3_spec ) ) == "b + c" );
    auto const expr = assemble( d );
    CHECK( test::function_of( expr ) == f );
    CHECK( compute_metrics( expr ).nom == 3u );
    check_feasible( f, d );
  }

  TEST_CASE( "method 2 with a matching base has nothing to correct" )
  {
    auto const base = column( 3, 0, 1, 2, 0b101 );
    auto const d = method2( base.spec, base );
    CHECK( d.f2_spec.is_all_dont_care() );
  }

  TEST_CASE( "method 2 on a four-input function" )
  {
    auto const f = truth_table::from_minterms( 4, { 9, 11, 14 } );
    auto const d = method2( f, column( 4, 0, 1, 3, 0b111 ) );
    CHECK( d.f2 == truth_table::constant( 4, false ) );
    CHECK( sop( minimize( d.f3_spec ) ) == "b' + cd'" );
    check_feasible( f, d );
    CHECK( test::function_of( assemble( d ) ) == f );
  }

  TEST_CASE( "combined method on the third example" )
  {
    auto const f = truth_table::from_minterms( 3, { 3, 4, 6 } );
    auto const expr = method_combined( f, column( 3, 0, 1, 2, 0b111 ) );
    CHECK( test::function_of( expr ) == f );
    CHECK( compute_metrics( expr ).nom <= 4u );
  }

  TEST_CASE( "decompositions are feasible and every method is sound" )
  {
    std::mt19937_64 rng( 67 );
    for ( int i = 0; i < 400; ++i )
    {
      auto const n = 3u + static_cast<unsigned>( rng() % 2u );
      auto const f = test::random_spec( n, rng, 20 );
      auto const pool = candidate_pool( f, {}, candidate_tier::plus_constant_padded );
      auto const& base = pool[rng() % pool.size()];
      auto const d = method2( f, base );
      check_feasible( f, d );
      CHECK( is_compatible( f, test::function_of( assemble( d ) ) ) );
      CHECK( is_compatible( f, test::function_of( method1( f, base ) ) ) );
      CHECK( is_compatible( f, test::function_of( method1( f, base, stage_order::or_then_and ) ) ) );
      CHECK( is_compatible( f, test::function_of( method_combined( f, base ) ) ) );

      auto const pp = postprocess( d, f, 2000 );
      check_feasible( f, pp );
      CHECK( is_compatible( f, test::function_of( assemble( pp ) ) ) );
      CHECK_FALSE( costlier( compute_metrics( push_inverters( assemble( pp ) ) ),
                             compute_metrics( push_inverters( assemble( d ) ) ) ) );
    }
  }

  TEST_CASE( "post-processing the four-input decomposition" )
  {
    auto const f = truth_table::from_minterms( 4, { 9, 11, 14 } );
    auto const d = method2( f, column( 4, 0, 1, 3, 0b111 ) );
    auto const pp = postprocess( d, f, 20000 );
    auto const expr = assemble( pp );
    CHECK( test::function_of( expr ) == f );
    CHECK( compute_metrics( expr ).nom <= 4u );
  }

  TEST_CASE( "post-processing without freedom returns the input" )
  {
    // the base disagrees with F everywhere, so f2 and f3 are both pinned to F
    auto const f = truth_table::from_minterms( 3, { 0, 1, 2, 4 } );
    auto const base = column( 3, 0, 1, 2, 0b111 );
    REQUIRE( base.spec == f.complement() );
    auto const d = method2( f, base );
    auto const pp = postprocess( d, f, 100 );
    CHECK( pp.f2 == d.f2 );
    CHECK( pp.f2 == f );
  }

  TEST_CASE( "post-processing budget must be positive" )
  {
    auto const f = truth_table::from_minterms( 3, { 0, 3, 6 } );
    auto const d = method2( f, column( 3, 0, 1, 2, 0b010 ) );
    CHECK_THROWS_AS( postprocess( d, f, 0 ), config_error );
  }

  TEST_CASE( "synth_single on worked examples" )
  {
    synth_config const cfg;
    auto const best = [&]( truth_table const& f ) { return synth_single( f, cfg ).front(); };

    auto const f18 = truth_table::from_minterms( 4, { 3, 4, 7, 15 } );
    CHECK( best( f18 ).cost.nom <= 4u );

    auto const f15 = truth_table::from_minterms( 4, { 9, 11, 14 } );
    CHECK( best( f15 ).cost.nom <= 4u );

    auto const g = best( truth_table::from_minterms( 3, { 2, 4, 6 } ) );
    CHECK( g.cost.nom <= 2u );
    CHECK( g.cost.noi <= 1u );

    auto const zero = best( truth_table( 3 ) );
    CHECK( zero.cost == metrics{} );
    CHECK( expr_root( zero.expr ) == zero.expr.constant( false ) );
    CHECK( best( truth_table( 4, tv::dont_care ) ).cost.nom == 0u );
  }

  TEST_CASE( "synth_single lists are sound, sorted and deterministic" )
  {
    std::mt19937_64 rng( 71 );
    synth_config const cfg;
    for ( int i = 0; i < 100; ++i )
    {
      auto const f = test::random_spec( 4, rng, 15 );
      auto const list = synth_single( f, cfg );
      REQUIRE_FALSE( list.empty() );
      for ( std::size_t k = 0; k < list.size(); ++k )
      {
        CHECK( is_compatible( f, test::function_of( list[k].expr ) ) );
        CHECK( list[k].cost == compute_metrics( list[k].expr ) );
        if ( k > 0 )
          CHECK_FALSE( list[k].cost.better_than( list[k - 1].cost ) );
      }
      auto const again = synth_single( f, cfg );
      REQUIRE( again.size() == list.size() );
      for ( std::size_t k = 0; k < list.size(); ++k )
        CHECK( to_expr_string( again[k].expr, expr_root( again[k].expr ), test::abcd ) ==
               to_expr_string( list[k].expr, expr_root( list[k].expr ), test::abcd ) );
    }
  }

  TEST_CASE( "larger random specs with a reduced configuration" )
  {
    std::mt19937_64 rng( 73 );
    synth_config cfg;
    cfg.top_k_bases = 1;
    cfg.max_depth = 1;
    cfg.postprocess_budget = 200;
    for ( unsigned n = 5; n <= 8; ++n )
    {
      auto const f = test::random_spec( n, rng, 10 );
      auto const list = synth_single( f, cfg );
      REQUIRE_FALSE( list.empty() );
      CHECK( is_compatible( f, test::function_of( list.front().expr ) ) );
    }
  }

  TEST_CASE( "candidate tiers" )
  {
    auto const f = truth_table::from_minterms( 3, { 1, 2, 4, 5, 6, 7 } );
    for ( auto tier : { candidate_tier::columns_only, candidate_tier::plus_literals,
                        candidate_tier::plus_constant_padded, candidate_tier::plus_externals } )
    {
      synth_config cfg;
      cfg.tier = tier;
      auto const best = synth_single( f, cfg ).front();
      CHECK( test::function_of( best.expr ) == f );
      CHECK( best.cost.nom <= 3u );
    }
  }

  TEST_CASE( "externals can be reused as bases" )
  {
    // three-input parity, offered as an external
    auto const ext_expr = parse_expr( "M(M(a,b,c)',M(a,b',c),b)", test::abc );
    auto const ext = candidate_base::from_external( ext_expr, "g" );
    synth_config cfg;
    cfg.tier = candidate_tier::plus_externals;
    auto const target = test::function_of( ext_expr );
    auto const best = synth_single( target, cfg, { ext } ).front();
    CHECK( test::function_of( best.expr ) == target );
    CHECK( best.cost.nom == 3u );
  }

  TEST_CASE( "configuration validation" )
  {
    synth_config cfg;
    cfg.top_k_bases = 0;
    CHECK_THROWS_AS( cfg.validate(), config_error );
    cfg = {};
    cfg.max_depth = 0u;
    CHECK_THROWS_AS( cfg.validate(), config_error );
    cfg = {};
    cfg.postprocess_budget = 0;
    CHECK_THROWS_AS( cfg.validate(), config_error );
    cfg = {};
    CHECK_NOTHROW( cfg.validate() );
    CHECK( cfg.depth_limit( 3 ) == 1u );
    CHECK( cfg.depth_limit( 6 ) == 4u );
    CHECK_THROWS_AS( synth_single( truth_table( 3 ), cfg, { candidate_base::from_literal( 4, 0, true ) } ), arity_error );
  }
}
