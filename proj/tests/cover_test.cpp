#include "helpers.hpp"

#include <majsyn/cover.hpp>
#include <majsyn/errors.hpp>

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

using namespace majsyn;

namespace
{

/// Every onset minterm covered, no offset minterm covered, only primes used.
void check_cover( truth_table const& spec, cover const& c )
{
  auto const f = c.function();
  CHECK( is_compatible( spec, f ) );
  auto const primes = prime_implicants( spec );
  for ( auto const& imp : c.implicants )
    CHECK( std::find( primes.begin(), primes.end(), imp ) != primes.end() );
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

unsigned ceil_log2( unsigned x )
{
  return x <= 1u ? 0u : static_cast<unsigned>( std::bit_width( x - 1u ) );
}

} // namespace

TEST_SUITE( "cover" )
{
  TEST_CASE( "AND-stage spec of the first example minimizes to a + b' + c" )
  {
    // on {0,3,6}, off {2}, rest free
    auto const spec = truth_table::from_minterms( 3, { 0, 3, 6 }, { 1, 4, 5, 7 } );
    auto const c = minimize( spec );
    CHECK( c.implicants.size() == 3u );
    CHECK( c.literal_count() == 3u );
    CHECK( c.function() == truth_table::from_minterms( 3, { 0, 1, 3, 4, 5, 6, 7 } ) );
    auto const expr = cover_to_majority( c );
    CHECK( compute_metrics( expr ).nom == 2u );
    check_cover( spec, c );
  }

  TEST_CASE( "f2 of the second example is the literal a" )
  {
    auto const spec = truth_table::from_minterms( 3, { 5, 6, 7 }, { 1, 2, 3, 4 } );
    auto const c = minimize( spec );
    CHECK( sop( c ) == "a" );
    CHECK( compute_metrics( cover_to_majority( c ) ).nom == 0u );
  }

  TEST_CASE( "spec without onset minimizes to constant zero" )
  {
    // off at 5 and 7, free elsewhere
    auto const spec = truth_table::from_minterms( 3, {}, { 0, 1, 2, 3, 4, 6 } );
    CHECK( minimize( spec ).is_zero() );
    CHECK( minimize( truth_table( 3, tv::dont_care ) ).is_zero() );
    auto const expr = cover_to_majority( minimize( spec ) );
    CHECK( expr_root( expr ) == expr.constant( false ) );
  }

  TEST_CASE( "full onset with don't cares is constant one" )
  {
    auto const spec = truth_table::from_minterms( 3, { 0, 1, 2, 3 }, { 4, 5, 6, 7 } );
    auto const c = minimize( spec );
    CHECK( c.is_one() );
    CHECK( c.gate_count() == 0u );
  }

  TEST_CASE( "b + c becomes one OR gate" )
  {
    auto const spec = truth_table::nth_var( 3, 1 ) | truth_table::nth_var( 3, 2 );
    auto const c = minimize( spec );
    CHECK( sop( c ) == "b + c" );
    auto const expr = cover_to_majority( c );
    CHECK( to_expr_string( expr, expr_root( expr ), test::abc ) == "M(1,b,c)" );
  }

  TEST_CASE( "soundness and structure on every three-input function" )
  {
    for ( std::uint64_t x = 0; x < 256; ++x )
    {
      auto const spec = test::from_bits( 3, x );
      auto const c = minimize( spec );
      CHECK( c.function() == spec );
      check_cover( spec, c );
    }
  }

  TEST_CASE( "soundness on random four-input specs with don't cares" )
  {
    std::mt19937_64 rng( 23 );
    for ( int i = 0; i < 2000; ++i )
    {
      auto const spec = test::random_spec( 4, rng, 25 );
      auto const c = minimize( spec );
      check_cover( spec, c );
      CHECK( is_compatible( spec, test::function_of( cover_to_majority( c ) ) ) );
    }
  }

  TEST_CASE( "soundness on random five- to eight-input specs" )
  {
    std::mt19937_64 rng( 29 );
    for ( unsigned n = 5; n <= 8; ++n )
      for ( int i = 0; i < 20; ++i )
      {
        auto const spec = test::random_spec( n, rng, 20 );
        auto const c = minimize( spec );
        CHECK( is_compatible( spec, c.function() ) );
        CHECK( is_compatible( spec, test::function_of( cover_to_majority( c ) ) ) );
      }
  }

  TEST_CASE( "gate count and depth bounds of the balanced construction" )
  {
    std::mt19937_64 rng( 31 );
    for ( int i = 0; i < 1000; ++i )
    {
      auto const spec = test::random_spec( 4, rng, 20 );
      auto const c = minimize( spec );
      if ( c.is_zero() || c.is_one() )
        continue;
      auto const p = static_cast<unsigned>( c.implicants.size() );
      auto const l = c.literal_count();
      CHECK( c.gate_count() == ( l - p ) + ( p - 1u ) );
      auto const m = compute_metrics( cover_to_majority( c ) );
      // structural hashing can only merge gates
      CHECK( m.nom <= c.gate_count() );
      unsigned widest = 0;
      for ( auto const& imp : c.implicants )
        widest = std::max( widest, imp.literal_count() );
      CHECK( m.levels <= ceil_log2( widest ) + ceil_log2( p ) );
    }
  }

  TEST_CASE( "exact covering beats a greedy pick on a cyclic function" )
  {
    // cyclic core: every minterm has two primes, none essential
    auto const spec = truth_table::from_minterms( 3, { 0, 1, 2, 5, 6, 7 } );
    auto const c = minimize( spec );
    CHECK( c.implicants.size() == 3u );
    CHECK( c.literal_count() == 6u );
  }

  TEST_CASE( "minimize is deterministic" )
  {
    std::mt19937_64 rng( 37 );
    for ( int i = 0; i < 100; ++i )
    {
      auto const spec = test::random_spec( 6, rng, 30 );
      CHECK( minimize( spec ).implicants == minimize( spec ).implicants );
    }
  }

  TEST_CASE( "two-level takes the complement side only when strictly cheaper" )
  {
    // a + b + c needs 2 gates; its complement a'b'c' also 2, so stay direct
    auto const f = truth_table::from_minterms( 3, { 1, 2, 3, 4, 5, 6, 7 } );
    auto const r = two_level( f );
    CHECK_FALSE( r.complemented );
    CHECK( r.function == f );

    std::mt19937_64 rng( 41 );
    for ( int i = 0; i < 300; ++i )
    {
      auto const spec = test::random_spec( 4, rng, 20 );
      auto const t = two_level( spec );
      CHECK( is_compatible( spec, t.function ) );
      CHECK( test::function_of( t.expr ) == t.function );
      auto const direct = minimize( spec ).gate_count();
      auto const other = minimize( spec.complement() ).gate_count();
      CHECK( t.complemented == ( other < direct ) );
    }
  }

  TEST_CASE( "arity limit" )
  {
    CHECK_THROWS_AS( minimize( truth_table( 17 ) ), arity_error );
  }
}
