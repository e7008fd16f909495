#include "helpers.hpp"

#include <majsyn/errors.hpp>
#include <majsyn/flow.hpp>
#include <majsyn/oracle.hpp>

#include <doctest.h>

#include <set>

using namespace majsyn;

namespace
{

multi_output_spec group( unsigned n, std::vector<std::vector<std::uint64_t>> const& onsets )
{
  multi_output_spec spec( n );
  for ( std::size_t i = 0; i < onsets.size(); ++i )
    spec.add_output( "f" + std::to_string( i + 1 ), truth_table::from_minterms( n, onsets[i] ) );
  return spec;
}

/// Gates reachable from at least two roots, counted directly.
std::uint32_t count_shared( network const& net )
{
  std::vector<std::set<std::size_t>> reach( net.size() );
  for ( std::size_t r = 0; r < net.roots().size(); ++r )
  {
    std::vector<std::uint32_t> stack{ net.roots()[r].sig.index };
    while ( !stack.empty() )
    {
      auto const n = stack.back();
      stack.pop_back();
      if ( !net.is_gate( n ) || !reach[n].insert( r ).second )
        continue;
      for ( auto const& c : net.at( n ).children )
        stack.push_back( c.index );
    }
  }
  std::uint32_t shared = 0;
  for ( auto const& s : reach )
    shared += s.size() >= 2u ? 1u : 0u;
  return shared;
}

std::string dump( network const& net, unsigned n )
{
  std::string s;
  for ( auto const& r : net.roots() )
    s += r.name + "=" + to_expr_string( net, r.sig, default_var_names( n ) ) + "\n";
  return s;
}

} // namespace

TEST_SUITE( "flow" )
{
  TEST_CASE( "first group shares gates" )
  {
    auto const spec = group( 3, { { 2, 4, 6 }, { 0, 1, 3, 6 }, { 0, 3, 6 } } );
    auto const r = synthesize_multi( spec, {} );
    CHECK( check_equivalence( r.net, spec ).equivalent );
    CHECK( r.totals.nom <= 8u );
    CHECK( r.totals.shared >= 2u );
    REQUIRE( r.net.roots().size() == 3u );
    CHECK( r.net.roots()[0].name == "f1" );
    CHECK( r.provenance.size() == 3u );
  }

  TEST_CASE( "literal outputs become wires" )
  {
    multi_output_spec spec( 3 );
    spec.add_output( "f", truth_table::nth_var( 3, 0 ) );
    spec.add_output( "g", truth_table::nth_var( 3, 1 ) );
    auto const r = synthesize_multi( spec, {} );
    CHECK( r.totals.nom == 0u );
    CHECK( r.totals.shared == 0u );
    CHECK( r.net.roots()[0].sig == r.net.var( 0 ) );
    CHECK( r.net.roots()[1].sig == r.net.var( 1 ) );
  }

  TEST_CASE( "constant and don't-care outputs" )
  {
    multi_output_spec spec( 3 );
    spec.add_output( "one", truth_table::constant( 3, true ) );
    spec.add_output( "free", truth_table( 3, tv::dont_care ) );
    auto const r = synthesize_multi( spec, {} );
    CHECK( r.totals.nom == 0u );
    CHECK( check_equivalence( r.net, spec ).equivalent );
  }

  TEST_CASE( "fourth group verifies on every output" )
  {
    auto const spec = group( 4, { { 3, 4, 7, 15 }, { 1, 3, 4, 9, 13, 15 }, { 3, 6, 7, 11, 13, 14, 15 }, { 2, 6, 10, 11, 14 } } );
    auto const r = synthesize_multi( spec, {} );
    auto const eq = check_equivalence( r.net, spec );
    CHECK( eq.equivalent );
    CHECK( eq.checked == 16u );
  }

  TEST_CASE( "selection prefers the candidate that reuses another output's cone" )
  {
    std::vector<std::string> const names{ "a", "b", "c", "d" };
    // output 2 has one candidate: a three-gate cone S
    auto const s = parse_expr( "M(M(a,b,c)',M(a,b',c),b)", names );
    // output 1: two gates on their own, or S plus one gate
    auto const alone = parse_expr( "M(M(a,d,0),c,1)", names );
    auto const reuse = parse_expr( "M(M(M(a,b,c)',M(a,b',c),b),d,0)", names );
    std::vector<std::vector<network>> const cands{ { alone, reuse }, { s } };
    auto const sel = choose_variant( cands );
    CHECK( sel.chosen == std::vector<std::size_t>{ 1, 0 } );
    CHECK( sel.merged.nom == 4u );
    CHECK( sel.merged.shared == 3u );
  }

  TEST_CASE( "single candidates are selected as they are" )
  {
    std::vector<std::string> const names{ "a", "b", "c" };
    std::vector<std::vector<network>> const cands{ { parse_expr( "M(a,b,c)", names ) },
                                                   { parse_expr( "M(a,b,0)", names ) } };
    auto const sel = choose_variant( cands );
    CHECK( sel.chosen == std::vector<std::size_t>{ 0, 0 } );
    CHECK( sel.merged.nom == 2u );
    CHECK_THROWS_AS( choose_variant( {} ), contract_error );
    CHECK_THROWS_AS( choose_variant( { {} } ), contract_error );
  }

  TEST_CASE( "selection is minimal among all combinations and never worse than solo-best" )
  {
    std::mt19937_64 rng( 79 );
    synth_config const cfg;
    for ( int i = 0; i < 25; ++i )
    {
      std::vector<std::vector<network>> cands;
      for ( int o = 0; o < 3; ++o )
      {
        std::vector<network> list;
        for ( auto const& c : synth_single( test::random_spec( 3, rng, 10 ), cfg ) )
        {
          if ( list.size() < 4u )
            list.push_back( c.expr );
        }
        cands.push_back( std::move( list ) );
      }
      auto const sel = choose_variant( cands );
      auto const key = []( metrics const& m ) {
        return std::tuple{ m.nom, m.levels, m.noi, -static_cast<std::int64_t>( m.shared ) };
      };
      std::vector<std::string> const names{ "x", "y", "z" };
      auto const solo = compute_metrics( merge_selection( cands, { 0, 0, 0 }, names ) );
      CHECK( sel.merged.nom <= solo.nom );
      for ( std::size_t x = 0; x < cands[0].size(); ++x )
        for ( std::size_t y = 0; y < cands[1].size(); ++y )
          for ( std::size_t z = 0; z < cands[2].size(); ++z )
          {
            auto const m = compute_metrics( merge_selection( cands, { x, y, z }, names ) );
            CHECK( key( sel.merged ) <= key( m ) );
          }
      // the greedy path must also stay sound and no worse than the start
      auto const greedy = choose_variant( cands, 1 );
      CHECK( key( greedy.merged ) <= key( solo ) );
    }
  }

  TEST_CASE( "random multi-output specs: soundness, ordering and shared count" )
  {
    std::mt19937_64 rng( 83 );
    for ( int i = 0; i < 30; ++i )
    {
      auto const n = 3u + static_cast<unsigned>( rng() % 2u );
      multi_output_spec spec( n );
      auto const outputs = 1u + rng() % 4u;
      for ( unsigned o = 0; o < outputs; ++o )
        spec.add_output( "y" + std::to_string( o ), test::random_spec( n, rng, 10 ) );
      auto const r = synthesize_multi( spec, {} );
      CHECK( check_equivalence( r.net, spec ).equivalent );
      REQUIRE( r.net.roots().size() == outputs );
      for ( unsigned o = 0; o < outputs; ++o )
      {
        CHECK( r.net.roots()[o].name == spec.outputs()[o].name );
        CHECK( r.per_output[o] == compute_metrics( r.net, r.net.roots()[o].sig ) );
      }
      CHECK( r.totals == compute_metrics( r.net ) );
      CHECK( r.totals.shared == count_shared( r.net ) );
      CHECK( compute_metrics( push_inverters( r.net ) ).noi == r.totals.noi );
    }
  }

  TEST_CASE( "outputs on disjoint supports of a wide input space" )
  {
    multi_output_spec spec( 12 );
    auto const v = [] ( unsigned i ) { return truth_table::nth_var( 12, i ); };
    spec.add_output( "p", maj( v( 0 ), v( 5 ), v( 11 ) ) );
    spec.add_output( "q", v( 3 ) & ~v( 7 ) );
    auto const r = synthesize_multi( spec, {} );
    CHECK( check_equivalence( r.net, spec ).equivalent );
    CHECK( r.totals.nom == 2u );
  }

  TEST_CASE( "parallel runs match sequential runs" )
  {
    auto const spec = group( 4, { { 0, 3, 6, 7, 15 }, { 9, 11, 14 }, { 8, 10, 11, 14, 15 } } );
    flow_options seq, par;
    par.jobs = 4;
    auto const a = synthesize_multi( spec, {}, seq );
    auto const b = synthesize_multi( spec, {}, par );
    CHECK( dump( a.net, 4 ) == dump( b.net, 4 ) );
    CHECK( a.totals == b.totals );
  }

  TEST_CASE( "flow errors" )
  {
    CHECK_THROWS_AS( synthesize_multi( multi_output_spec( 3 ), {} ), contract_error );
    flow_options bad;
    bad.keep_per_output = 0;
    CHECK_THROWS_AS( synthesize_multi( group( 3, { { 1 } } ), {}, bad ), config_error );
  }
}
