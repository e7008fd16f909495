#include "majsyn/msm.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <type_traits>
#include <unordered_set>

namespace majsyn
{

variable_triple::variable_triple( unsigned x, unsigned y, unsigned z ) : vars_{ x, y, z }
{
  std::sort( vars_.begin(), vars_.end() );
  if ( vars_[0] == vars_[1] || vars_[1] == vars_[2] )
  {
    throw arity_error( "variable triple needs three distinct variables" );
  }
}

std::vector<variable_triple> all_triples( unsigned num_vars )
{
  std::vector<variable_triple> triples;
  for ( unsigned x = 0; x < num_vars; ++x )
    for ( unsigned y = x + 1; y < num_vars; ++y )
      for ( unsigned z = y + 1; z < num_vars; ++z )
        triples.emplace_back( x, y, z );
  return triples;
}

namespace
{

truth_table literal_table( unsigned num_vars, unsigned var, bool positive )
{
  auto t = truth_table::nth_var( num_vars, var );
  return positive ? t : ~t;
}

} // namespace

std::vector<msm_column> build_msm( unsigned num_vars, variable_triple const& triple )
{
  if ( triple[2] >= num_vars )
  {
    throw arity_error( "variable triple exceeds the number of variables" );
  }
  std::vector<msm_column> columns;
  columns.reserve( 8 );
  for ( std::uint8_t p = 0; p < 8; ++p )
  {
    columns.push_back( { triple, p, candidate_base::from_column( num_vars, triple, p ).spec } );
  }
  return columns;
}

candidate_base candidate_base::from_column( unsigned num_vars, variable_triple const& triple, std::uint8_t polarity )
{
  if ( triple[2] >= num_vars )
    throw arity_error( "variable triple exceeds the number of variables" );
  if ( polarity > 7u )
    throw range_error( "polarity code must be in [0, 7]" );
  auto spec = maj( literal_table( num_vars, triple[0], ( polarity >> 2u ) & 1u ),
                   literal_table( num_vars, triple[1], ( polarity >> 1u ) & 1u ),
                   literal_table( num_vars, triple[2], polarity & 1u ) );
  return { column_source{ triple, polarity }, std::move( spec ) };
}

candidate_base candidate_base::from_literal( unsigned num_vars, unsigned var, bool positive )
{
  return { literal_source{ var, positive }, literal_table( num_vars, var, positive ) };
}

candidate_base candidate_base::from_padded( unsigned num_vars, bool constant, unsigned var_a, bool positive_a,
                                            unsigned var_b, bool positive_b )
{
  auto const a = literal_table( num_vars, var_a, positive_a );
  auto const b = literal_table( num_vars, var_b, positive_b );
  return { padded_source{ constant, var_a, positive_a, var_b, positive_b }, constant ? ( a | b ) : ( a & b ) };
}

candidate_base candidate_base::from_external( network expr, std::string label )
{
  auto spec = expr.function_of( expr_root( expr ) );
  return { external_source{ std::make_shared<network const>( std::move( expr ) ), std::move( label ) }, std::move( spec ) };
}

unsigned candidate_base::complemented_inputs() const
{
  return std::visit(
      []( auto const& s ) -> unsigned {
        using T = std::decay_t<decltype( s )>;
        if constexpr ( std::is_same_v<T, column_source> )
          return 3u - static_cast<unsigned>( std::popcount( static_cast<unsigned>( s.polarity ) ) );
        else if constexpr ( std::is_same_v<T, literal_source> )
          return s.positive ? 0u : 1u;
        else if constexpr ( std::is_same_v<T, padded_source> )
          return ( s.positive_a ? 0u : 1u ) + ( s.positive_b ? 0u : 1u );
        else
          return 0u;
      },
      source );
}

unsigned candidate_base::polarity_code() const
{
  return std::visit(
      []( auto const& s ) -> unsigned {
        using T = std::decay_t<decltype( s )>;
        if constexpr ( std::is_same_v<T, column_source> )
          return s.polarity;
        else if constexpr ( std::is_same_v<T, literal_source> )
          return s.positive ? 1u : 0u;
        else if constexpr ( std::is_same_v<T, padded_source> )
          return ( s.constant ? 4u : 0u ) | ( s.positive_a ? 2u : 0u ) | ( s.positive_b ? 1u : 0u );
        else
          return 0u;
      },
      source );
}

std::array<unsigned, 3> candidate_base::vars_key() const
{
  constexpr auto none = std::numeric_limits<unsigned>::max();
  return std::visit(
      [&]( auto const& s ) -> std::array<unsigned, 3> {
        using T = std::decay_t<decltype( s )>;
        if constexpr ( std::is_same_v<T, column_source> )
          return s.triple.vars();
        else if constexpr ( std::is_same_v<T, literal_source> )
          return { s.var, none, none };
        else if constexpr ( std::is_same_v<T, padded_source> )
          return { s.var_a, s.var_b, none };
        else
          return { none, none, none };
      },
      source );
}

signal candidate_base::build( network& net ) const
{
  return std::visit(
      [&]( auto const& s ) -> signal {
        using T = std::decay_t<decltype( s )>;
        if constexpr ( std::is_same_v<T, column_source> )
        {
          return net.create_gate( net.var( s.triple[0] ) ^ !( ( s.polarity >> 2u ) & 1u ),
                                  net.var( s.triple[1] ) ^ !( ( s.polarity >> 1u ) & 1u ),
                                  net.var( s.triple[2] ) ^ !( s.polarity & 1u ) );
        }
        else if constexpr ( std::is_same_v<T, literal_source> )
        {
          return net.var( s.var ) ^ !s.positive;
        }
        else if constexpr ( std::is_same_v<T, padded_source> )
        {
          return net.create_gate( net.constant( s.constant ), net.var( s.var_a ) ^ !s.positive_a,
                                  net.var( s.var_b ) ^ !s.positive_b );
        }
        else
        {
          return net.import( *s.expr, expr_root( *s.expr ) );
        }
      },
      source );
}

std::string candidate_base::describe( std::span<std::string const> var_names ) const
{
  network net( spec.num_vars() );
  auto const s = build( net );
  auto text = to_expr_string( net, s, var_names );
  if ( auto const* ext = std::get_if<external_source>( &source ) )
  {
    return ext->label + " = " + text;
  }
  return text;
}

std::vector<candidate_base> candidate_pool( truth_table const& spec, std::vector<candidate_base> const& externals,
                                            candidate_tier tier )
{
  auto const n = spec.num_vars();
  std::vector<candidate_base> pool;
  std::unordered_set<truth_table> seen;
  auto add = [&]( candidate_base&& c ) {
    if ( seen.insert( c.spec ).second )
      pool.push_back( std::move( c ) );
  };

  for ( auto const& triple : all_triples( n ) )
  {
    for ( std::uint8_t p = 0; p < 8; ++p )
      add( candidate_base::from_column( n, triple, p ) );
  }
  if ( tier >= candidate_tier::plus_literals )
  {
    for ( unsigned v = 0; v < n; ++v )
    {
      add( candidate_base::from_literal( n, v, true ) );
      add( candidate_base::from_literal( n, v, false ) );
    }
  }
  if ( tier >= candidate_tier::plus_constant_padded )
  {
    for ( unsigned c = 0; c < 2; ++c )
      for ( unsigned x = 0; x < n; ++x )
        for ( unsigned y = x + 1; y < n; ++y )
          for ( unsigned p = 0; p < 4; ++p )
            add( candidate_base::from_padded( n, c != 0u, x, ( p >> 1u ) & 1u, y, p & 1u ) );
  }
  if ( tier >= candidate_tier::plus_externals )
  {
    for ( auto const& e : externals )
    {
      if ( e.spec.num_vars() != n )
        throw arity_error( "external candidate has a different number of variables" );
      add( candidate_base( e ) );
    }
  }
  return pool;
}

std::vector<candidate_base> rank_candidates( truth_table const& spec, std::vector<candidate_base> const& pool,
                                             std::size_t top_k )
{
  if ( pool.empty() )
    throw config_error( "cannot rank an empty candidate pool" );
  if ( top_k < 1u )
    throw config_error( "top_k must be at least 1" );

  struct entry
  {
    std::uint64_t dist;
    unsigned complemented;
    unsigned code;
    std::array<unsigned, 3> vars;
    std::size_t index;
    auto operator<=>( entry const& ) const = default;
  };
  std::vector<entry> entries;
  entries.reserve( pool.size() );
  for ( std::size_t i = 0; i < pool.size(); ++i )
  {
    auto const& c = pool[i];
    entries.push_back( { distance( spec, c.spec ), c.complemented_inputs(), c.polarity_code(), c.vars_key(), i } );
  }
  auto const k = std::min( top_k, entries.size() );
  std::partial_sort( entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>( k ), entries.end() );
  std::vector<candidate_base> ranked;
  ranked.reserve( k );
  for ( std::size_t i = 0; i < k; ++i )
    ranked.push_back( pool[entries[i].index] );
  return ranked;
}

} // namespace majsyn
