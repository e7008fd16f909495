#include "helpers.hpp"

#include <majsyn/errors.hpp>
#include <majsyn/network.hpp>

#include <doctest.h>

using namespace majsyn;

namespace
{

// Worked-example circuits and the onsets they compute (checked by enumeration).
struct printed
{
  char const* text;
  unsigned num_vars;
  std::vector<std::uint64_t> onset;
};

std::vector<printed> const verified_circuits{
    { "Maj(Maj(a',b,c'),Maj(a,Maj(b',c,1),1),0)", 3, { 0, 3, 6 } },
    { "Maj(Maj(a',b',c'),a,Maj(b,c,1))", 3, { 1, 2, 4, 5, 6, 7 } },
    { "Maj(Maj(Maj(a,b,c),a,1),0,Maj(a',c',1))", 3, { 3, 4, 6 } },
    { "Maj(Maj(a,b,d),Maj(c,d',0),Maj(b',d,0))", 4, { 9, 11, 14 } },
    { "Maj(Maj(0,c,d),b,Maj(M(a',b',c'),b',d'))", 4, { 3, 4, 7, 15 } },
    { "M(M(a',b,c'),M(M(a,b',1),c,1),1')", 3, { 0, 3, 6 } },
    { "M(a,b',c)", 3, { 1, 4, 5, 7 } },
    { "M(M(a,b,c),M(a',c',1),M(a,c',1'))", 3, { 3, 4, 6 } },
    { "M(M(a,c',1'),a,b)", 3, { 4, 6, 7 } },
    { "M(M(M(a,b',1),d,1'),b,c)", 4, { 3, 6, 7, 11, 13, 14, 15 } },
};

// Every circuit of the multi-output groups, including those whose function
// differs from the group's spec; used for function-preservation checks.
std::vector<std::pair<char const*, unsigned>> const group_circuits{
    { "M(M(a,b,c),0,c')", 3 },
    { "M(M(a',b,c'),M(M(a,b',1),c,1),1')", 3 },
    { "M(a,b',c)", 3 },
    { "M(M(a,b,c),M(a',c',1),M(a,c',1'))", 3 },
    { "M(M(a,b',c'),M(a,c',1),M(c,b',1'))", 3 },
    { "M(M(a,c',1'),a,b)", 3 },
    { "M(M(a',b,M(c',d,1)),M(c,M(b,d,1'),1),1')", 4 },
    { "M(M(a,b,d),1',M(a',b,M(c',d,1')))", 4 },
    { "M(M(M(b,d,1'),c,1),a,1')", 4 },
    { "M(M(1',c,d),b,M(M(a,b,c),b,d'))", 4 },
    { "M(M(M(a,b',1),d,1'),b,M(M(a,b,c),b,d'))", 4 },
    { "M(M(M(a,b',1),d,1'),b,c)", 4 },
    { "M(M(M(1',c,d),b,M(M(a,b,c),b,d')),1,c)", 4 },
};

std::vector<std::string> names_for( unsigned n )
{
  return n == 3u ? test::abc : test::abcd;
}

/// Random network with `gates` gates and `roots` roots over n inputs.
network random_network( unsigned n, unsigned gates, unsigned roots, std::mt19937_64& rng )
{
  network net( n );
  std::vector<signal> sigs{ net.constant( false ) };
  for ( unsigned v = 0; v < n; ++v )
    sigs.push_back( net.var( v ) );
  for ( unsigned g = 0; g < gates; ++g )
  {
    auto pick = [&] { return sigs[rng() % sigs.size()] ^ ( ( rng() & 3u ) == 0u ); };
    sigs.push_back( net.create_gate( pick(), pick(), pick() ) );
  }
  for ( unsigned r = 0; r < roots; ++r )
    net.add_root( "o" + std::to_string( r ), sigs[sigs.size() - 1u - ( rng() % std::min<std::size_t>( 4, sigs.size() ) )] ^
                                                  ( rng() & 1u ) );
  return net;
}

} // namespace

TEST_SUITE( "majexpr" )
{
  TEST_CASE( "gate semantics" )
  {
    network net( 1 );
    auto const x = net.var( 0 );
    net.add_root( "maj110", net.create_gate( net.constant( true ), net.constant( true ), net.constant( false ) ) );
    net.add_root( "split", net.create_gate( net.constant( true ), net.constant( false ), x ) );
    for ( std::uint64_t m = 0; m < 2; ++m )
    {
      auto const v = net.eval( m );
      CHECK( v[0] );
      CHECK( v[1] == ( m == 1u ) );
    }
  }

  TEST_CASE( "majority axioms and the AND/OR specializations hold for all assignments" )
  {
    auto const a = truth_table::nth_var( 3, 0 ), b = truth_table::nth_var( 3, 1 ), c = truth_table::nth_var( 3, 2 );
    auto const zero = truth_table::constant( 3, false ), one = truth_table::constant( 3, true );
    CHECK( maj( a, b, c ) == ( ( a & b ) | ( b & c ) | ( c & a ) ) );
    CHECK( maj( a, b, c ) == maj( b, a, c ) );
    CHECK( maj( a, b, c ) == maj( c, b, a ) );
    CHECK( maj( a, b, c ) == maj( b, c, a ) );
    CHECK( maj( a, a, b ) == a );
    CHECK( maj( a, ~a, b ) == b );
    CHECK( maj( a, b, zero ) == ( a & b ) );
    CHECK( maj( a, b, one ) == ( a | b ) );
    // two majorities one polarity apart
    CHECK( ( maj( a, b, c ) | maj( a, b, ~c ) ) == maj( a, b, one ) );
    CHECK( ( maj( a, b, c ) & maj( a, b, ~c ) ) == maj( a, b, zero ) );
    // self-duality
    CHECK( maj( ~a, ~b, ~c ) == ~maj( a, b, c ) );

    // the same identities on networks, evaluated one assignment at a time
    auto const net = parse_expr( "M(M(a,b,c),M(a,b,c'),1)", test::abc );
    auto const ref = parse_expr( "M(a,b,1)", test::abc );
    for ( std::uint64_t m = 0; m < 8; ++m )
      CHECK( net.eval( m ) == ref.eval( m ) );
  }

  TEST_CASE( "construction simplifies trivial gates and hashes structure" )
  {
    network net( 3 );
    auto const a = net.var( 0 ), b = net.var( 1 ), c = net.var( 2 );
    CHECK( net.create_gate( a, a, b ) == a );
    CHECK( net.create_gate( a, !a, b ) == b );
    CHECK( net.create_gate( b, net.constant( true ), net.constant( false ) ) == b );
    auto const g1 = net.create_gate( a, b, c );
    auto const g2 = net.create_gate( c, a, b );
    CHECK( g1 == g2 );
    CHECK( net.create_gate( !b, c, a ) != g1 );
    net.add_root( "f", g1 );
    CHECK( compute_metrics( net ).nom == 1u );
  }

  TEST_CASE( "hash-consed nodes with one id have one function" )
  {
    std::mt19937_64 rng( 43 );
    for ( int i = 0; i < 50; ++i )
    {
      auto const net = random_network( 4, 30, 3, rng );
      auto const tables = net.simulate();
      for ( std::uint32_t x = 0; x < net.size(); ++x )
        for ( std::uint32_t y = x + 1; y < net.size(); ++y )
          if ( net.is_gate( x ) && net.is_gate( y ) )
            CHECK( net.at( x ).children != net.at( y ).children );
      CHECK( tables.size() == net.size() );
    }
  }

  TEST_CASE( "metrics conventions" )
  {
    auto const t16 = parse_expr( "M(M(a,b,c),0,c')", test::abc );
    auto const m = compute_metrics( t16 );
    CHECK( m.nom == 2u );
    CHECK( m.noi == 1u );
    CHECK( m.levels == 2u );
    CHECK( m.ntg() == 3u );

    auto const single = compute_metrics( parse_expr( "M(a,b,c)", test::abc ) );
    CHECK( single == metrics{ 1, 1, 0, 0 } );

    auto const eq6 = compute_metrics( parse_expr( "Maj(Maj(a',b,c'),Maj(a,Maj(b',c,1),1),0)", test::abc ) );
    CHECK( eq6.nom == 4u );
    CHECK( eq6.noi == 3u );
    CHECK( eq6.levels == 3u );

    // a complemented net is counted once however often it is used
    CHECK( compute_metrics( parse_expr( "M(a',b,M(a',b',c))", test::abc ) ).noi == 2u );
    // complemented constants are free
    CHECK( compute_metrics( parse_expr( "M(1',a,b)", test::abc ) ).noi == 0u );
  }

  TEST_CASE( "levels are zero exactly when there are no gates" )
  {
    std::mt19937_64 rng( 47 );
    for ( int i = 0; i < 200; ++i )
    {
      auto const net = random_network( 3, static_cast<unsigned>( rng() % 4u ), 2, rng );
      auto const m = compute_metrics( net );
      CHECK( ( m.levels == 0u ) == ( m.nom == 0u ) );
      CHECK( m.ntg() == m.nom + m.noi );
    }
  }

  TEST_CASE( "shared gates and root order" )
  {
    network net( 3 );
    auto const a = net.var( 0 ), b = net.var( 1 ), c = net.var( 2 );
    auto const g = net.create_gate( a, b, c );
    net.add_root( "f", net.create_and( g, c ) );
    net.add_root( "g", net.create_or( g, a ) );
    net.add_root( "h", g );
    auto const m = compute_metrics( net );
    CHECK( m.nom == 3u );
    CHECK( m.shared == 1u );

    network rev( 3 );
    for ( auto it = net.roots().rbegin(); it != net.roots().rend(); ++it )
      rev.add_root( it->name, rev.import( net, it->sig ) );
    CHECK( compute_metrics( rev ) == m );
  }

  TEST_CASE( "metrics are invariant under root permutation" )
  {
    std::mt19937_64 rng( 53 );
    for ( int i = 0; i < 100; ++i )
    {
      auto const net = random_network( 4, 12, 4, rng );
      auto roots = net.roots();
      std::shuffle( roots.begin(), roots.end(), rng );
      network perm( 4 );
      for ( auto const& r : roots )
        perm.add_root( r.name, perm.import( net, r.sig ) );
      CHECK( compute_metrics( perm ) == compute_metrics( net ) );
    }
  }

  TEST_CASE( "inverter pushing on its trigger pattern" )
  {
    auto const net = parse_expr( "M(a',b',c')", test::abc );
    CHECK( compute_metrics( net ).noi == 3u );
    auto const pushed = push_inverters( net );
    CHECK( compute_metrics( pushed ).noi == 1u );
    CHECK( to_expr_string( pushed, expr_root( pushed ), test::abc ) == "M(a,b,c)'" );
    CHECK( test::function_of( pushed ) == test::function_of( net ) );

    auto const plain = parse_expr( "M(a,b,0)", test::abc );
    CHECK( to_expr_string( push_inverters( plain ), expr_root( push_inverters( plain ) ), test::abc ) == "M(0,a,b)" );

    auto const twice = parse_expr( "a''", test::abc );
    CHECK( expr_root( twice ) == twice.var( 0 ) );
  }

  TEST_CASE( "inverter pushing preserves functions, never adds inverters or gates, and is idempotent" )
  {
    std::mt19937_64 rng( 59 );
    for ( int i = 0; i < 300; ++i )
    {
      auto const net = random_network( 4, 15, 3, rng );
      auto const pushed = push_inverters( net );
      CHECK( pushed.root_functions() == net.root_functions() );
      auto const before = compute_metrics( net ), after = compute_metrics( pushed );
      CHECK( after.noi <= before.noi );
      CHECK( after.nom <= before.nom );
      CHECK( compute_metrics( push_inverters( pushed ) ) == after );
    }
  }

  TEST_CASE( "proposition identity over all sixteen assignments" )
  {
    network net( 4 );
    auto const y = apply_proposition( net, net.var( 0 ), net.var( 1 ), net.var( 2 ), net.var( 3 ) );
    net.add_root( "y", y );
    CHECK( compute_metrics( net ).nom == 3u );
    for ( std::uint64_t m = 0; m < 16; ++m )
    {
      bool const u = ( m >> 3u ) & 1u, f = ( m >> 2u ) & 1u, g = ( m >> 1u ) & 1u, d = m & 1u;
      CHECK( net.eval( m )[0] == ( u && ( ( f && !g ) || ( g && d ) ) ) );
    }
  }

  TEST_CASE( "proposition special cases" )
  {
    network net( 1 );
    auto const one = net.constant( true ), zero = net.constant( false ), x = net.var( 0 );
    net.add_root( "y", apply_proposition( net, one, one, zero, x ) );
    net.add_root( "uf", apply_proposition( net, x, one, zero, zero ) );
    for ( std::uint64_t m = 0; m < 2; ++m )
    {
      CHECK( net.eval( m )[0] );
      CHECK( net.eval( m )[1] == ( m == 1u ) );
    }
  }

  TEST_CASE( "minority conversion" )
  {
    auto const single = to_minority( parse_expr( "M(a,b,c)", test::abc ) );
    CHECK( single.kind() == gate_kind::minority );
    CHECK( to_expr_string( single, expr_root( single ), test::abc ) == "Min(a,b,c)'" );

    auto const nand = to_minority( parse_expr( "M(a,b,0)", test::abc ) );
    CHECK( expr_root( nand ).complemented );
    CHECK( test::function_of( nand ) == ( truth_table::nth_var( 3, 0 ) & truth_table::nth_var( 3, 1 ) ) );
  }

  TEST_CASE( "minority conversion preserves every printed group circuit" )
  {
    for ( auto const& [text, n] : group_circuits )
    {
      auto const net = parse_expr( text, names_for( n ) );
      auto const min = to_minority( net );
      CHECK( min.root_functions() == net.root_functions() );
      auto const a = compute_metrics( net ), b = compute_metrics( min );
      CHECK( a.nom == b.nom );
      CHECK( a.levels == b.levels );
    }
  }

  TEST_CASE( "printed circuits compute their functions" )
  {
    for ( auto const& c : verified_circuits )
    {
      auto const net = parse_expr( c.text, names_for( c.num_vars ) );
      CHECK_MESSAGE( test::function_of( net ).onset() == c.onset, c.text );
    }
  }

  TEST_CASE( "parsing" )
  {
    CHECK( compute_metrics( parse_expr( "M(M(a,b,c),0,c')", test::abc ) ).nom == 2u );
    auto const lit = parse_expr( "a'", test::abc );
    CHECK( expr_root( lit ) == !lit.var( 0 ) );
    CHECK( compute_metrics( parse_expr( "Maj(Maj(a',b',c'), a, Maj(b,c,1))", test::abc ) ).nom == 3u );
    CHECK( test::function_of( parse_expr( " M ( a , b , c ) ' ", test::abc ) ) ==
           ~maj( truth_table::nth_var( 3, 0 ), truth_table::nth_var( 3, 1 ), truth_table::nth_var( 3, 2 ) ) );
    CHECK( test::function_of( parse_expr( "Min(a,b,c)", test::abc ) ) ==
           test::function_of( parse_expr( "M(a,b,c)'", test::abc ) ) );

    CHECK_THROWS_AS( parse_expr( "M(a,b)", test::abc ), parse_error );
    CHECK_THROWS_AS( parse_expr( "M(a,b,z)", test::abc ), parse_error );
    CHECK_THROWS_AS( parse_expr( "M(a,b,c", test::abc ), parse_error );
    CHECK_THROWS_AS( parse_expr( "M(a,b,c) x", test::abc ), parse_error );
    try
    {
      parse_expr( "M(a,b,#)", test::abc );
      FAIL( "expected a parse error" );
    }
    catch ( parse_error const& e )
    {
      CHECK( e.column() == 7u );
    }
  }

  TEST_CASE( "print then parse keeps the function and the metrics" )
  {
    std::mt19937_64 rng( 61 );
    for ( int i = 0; i < 300; ++i )
    {
      auto const net = cleanup( random_network( 4, 10, 1, rng ) );
      auto const& r = net.roots().front();
      auto const text = to_expr_string( net, r.sig, test::abcd );
      auto const back = parse_expr( text, test::abcd );
      CHECK( test::function_of( back ) == net.function_of( r.sig ) );
      CHECK( compute_metrics( back ) == compute_metrics( net, r.sig ) );
    }
  }

  TEST_CASE( "cleanup drops unreachable nodes only" )
  {
    network net( 3 );
    auto const a = net.var( 0 ), b = net.var( 1 ), c = net.var( 2 );
    net.create_gate( a, b, c );
    net.add_root( "f", net.create_and( a, b ) );
    auto const clean = cleanup( net );
    CHECK( clean.size() == 1u + 3u + 1u );
    CHECK( clean.root_functions() == net.root_functions() );
  }
}
