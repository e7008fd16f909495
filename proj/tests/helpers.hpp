#pragma once

#include <majsyn/network.hpp>
#include <majsyn/truth_table.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace test
{

inline std::vector<std::string> const abc{ "a", "b", "c" };
inline std::vector<std::string> const abcd{ "a", "b", "c", "d" };

/// Fully specified table whose bit m is bit m of `bits`.
inline majsyn::truth_table from_bits( unsigned n, std::uint64_t bits )
{
  majsyn::truth_table t( n );
  for ( std::uint64_t m = 0; m < t.num_minterms(); ++m )
    t.set( m, ( ( bits >> m ) & 1u ) ? majsyn::tv::one : majsyn::tv::zero );
  return t;
}

/// Random table with roughly `dc_percent` don't cares.
inline majsyn::truth_table random_spec( unsigned n, std::mt19937_64& rng, unsigned dc_percent = 0 )
{
  majsyn::truth_table t( n );
  std::uniform_int_distribution<unsigned> pct( 0, 99 );
  for ( std::uint64_t m = 0; m < t.num_minterms(); ++m )
  {
    if ( pct( rng ) < dc_percent )
      t.set( m, majsyn::tv::dont_care );
    else
      t.set( m, ( rng() & 1u ) ? majsyn::tv::one : majsyn::tv::zero );
  }
  return t;
}

inline majsyn::truth_table function_of( majsyn::network const& expr )
{
  return expr.function_of( majsyn::expr_root( expr ) );
}

inline majsyn::network parse( std::string const& text, std::vector<std::string> const& names )
{
  return majsyn::parse_expr( text, names );
}

} // namespace test
