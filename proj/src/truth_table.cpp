#include "majsyn/truth_table.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace majsyn
{

namespace
{

std::size_t words_for( unsigned num_vars )
{
  return num_vars <= 6u ? 1u : ( std::size_t{ 1 } << ( num_vars - 6u ) );
}

void check_num_vars( unsigned num_vars )
{
  if ( num_vars < 1u || num_vars > truth_table::max_vars )
  {
    throw range_error( "number of variables must be in [1, " + std::to_string( truth_table::max_vars ) +
                       "], got " + std::to_string( num_vars ) );
  }
}

constexpr std::uint64_t projections[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

} // namespace

truth_table::truth_table() : truth_table( 1u ) {}

truth_table::truth_table( unsigned num_vars, tv fill ) : num_vars_( num_vars )
{
  check_num_vars( num_vars );
  auto const n = words_for( num_vars );
  auto const mask = last_word_mask();
  care_.assign( n, fill == tv::dont_care ? 0u : mask );
  value_.assign( n, fill == tv::one ? mask : 0u );
}

truth_table truth_table::from_minterms( unsigned num_vars, std::span<std::uint64_t const> onset,
                                        std::span<std::uint64_t const> dcset )
{
  truth_table t( num_vars );
  std::set<std::uint64_t> seen;
  for ( auto m : onset )
  {
    t.check_minterm( m );
    t.set( m, tv::one );
    seen.insert( m );
  }
  for ( auto m : dcset )
  {
    t.check_minterm( m );
    if ( seen.count( m ) )
    {
      throw spec_conflict_error( "minterm " + std::to_string( m ) + " is in both onset and dcset" );
    }
    t.set( m, tv::dont_care );
  }
  return t;
}

truth_table truth_table::from_minterms( unsigned num_vars, std::initializer_list<std::uint64_t> onset,
                                        std::initializer_list<std::uint64_t> dcset )
{
  return from_minterms( num_vars, std::span<std::uint64_t const>( onset.begin(), onset.size() ),
                        std::span<std::uint64_t const>( dcset.begin(), dcset.size() ) );
}

truth_table truth_table::constant( unsigned num_vars, bool value )
{
  return truth_table( num_vars, value ? tv::one : tv::zero );
}

truth_table truth_table::nth_var( unsigned num_vars, unsigned var )
{
  truth_table t( num_vars );
  if ( var >= num_vars )
  {
    throw range_error( "variable index " + std::to_string( var ) + " out of range" );
  }
  auto const bit = num_vars - 1u - var;
  for ( std::size_t w = 0; w < t.value_.size(); ++w )
  {
    std::uint64_t word = bit < 6u ? projections[bit] : ( ( ( w >> ( bit - 6u ) ) & 1u ) ? ~0ull : 0ull );
    t.value_[w] = word & t.care_[w];
  }
  return t;
}

truth_table truth_table::from_string( std::string_view text )
{
  auto const size = text.size();
  if ( size < 2u || !std::has_single_bit( size ) )
  {
    throw range_error( "truth table string length must be a power of two >= 2" );
  }
  truth_table t( static_cast<unsigned>( std::countr_zero( size ) ) );
  for ( std::size_t m = 0; m < size; ++m )
  {
    switch ( text[m] )
    {
    case '0':
      break;
    case '1':
      t.set( m, tv::one );
      break;
    case 'x':
    case 'X':
    case '-':
      t.set( m, tv::dont_care );
      break;
    default:
      throw range_error( std::string( "invalid truth table character '" ) + text[m] + "'" );
    }
  }
  return t;
}

truth_table truth_table::from_words( unsigned num_vars, std::vector<std::uint64_t> care, std::vector<std::uint64_t> value )
{
  truth_table t( num_vars );
  if ( care.size() != t.care_.size() || value.size() != t.value_.size() )
  {
    throw arity_error( "word count does not match number of variables" );
  }
  auto const mask = t.last_word_mask();
  for ( std::size_t w = 0; w < care.size(); ++w )
  {
    care[w] &= mask;
    value[w] &= care[w];
  }
  t.care_ = std::move( care );
  t.value_ = std::move( value );
  return t;
}

std::uint64_t truth_table::last_word_mask() const noexcept
{
  return num_vars_ >= 6u ? ~0ull : ( ( 1ull << ( 1u << num_vars_ ) ) - 1u );
}

void truth_table::check_minterm( std::uint64_t minterm ) const
{
  if ( minterm >= num_minterms() )
  {
    throw range_error( "minterm " + std::to_string( minterm ) + " out of range for " + std::to_string( num_vars_ ) +
                       " variables" );
  }
}

tv truth_table::get( std::uint64_t minterm ) const
{
  check_minterm( minterm );
  auto const w = minterm >> 6u;
  auto const b = 1ull << ( minterm & 63u );
  if ( !( care_[w] & b ) )
  {
    return tv::dont_care;
  }
  return ( value_[w] & b ) ? tv::one : tv::zero;
}

void truth_table::set( std::uint64_t minterm, tv value )
{
  check_minterm( minterm );
  auto const w = minterm >> 6u;
  auto const b = 1ull << ( minterm & 63u );
  switch ( value )
  {
  case tv::zero:
    care_[w] |= b;
    value_[w] &= ~b;
    break;
  case tv::one:
    care_[w] |= b;
    value_[w] |= b;
    break;
  case tv::dont_care:
    care_[w] &= ~b;
    value_[w] &= ~b;
    break;
  }
}

bool truth_table::is_fully_specified() const noexcept
{
  auto const mask = last_word_mask();
  return std::all_of( care_.begin(), care_.end(), [mask]( auto w ) { return w == mask; } );
}

bool truth_table::is_all_dont_care() const noexcept
{
  return std::all_of( care_.begin(), care_.end(), []( auto w ) { return w == 0u; } );
}

bool truth_table::admits_constant( bool value ) const noexcept
{
  for ( std::size_t w = 0; w < care_.size(); ++w )
  {
    if ( ( value ? ( care_[w] & ~value_[w] ) : value_[w] ) != 0u )
    {
      return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> truth_table::onset() const
{
  std::vector<std::uint64_t> result;
  for ( std::uint64_t m = 0; m < num_minterms(); ++m )
  {
    if ( get( m ) == tv::one )
      result.push_back( m );
  }
  return result;
}

std::vector<std::uint64_t> truth_table::offset() const
{
  std::vector<std::uint64_t> result;
  for ( std::uint64_t m = 0; m < num_minterms(); ++m )
  {
    if ( get( m ) == tv::zero )
      result.push_back( m );
  }
  return result;
}

std::vector<std::uint64_t> truth_table::dcset() const
{
  std::vector<std::uint64_t> result;
  for ( std::uint64_t m = 0; m < num_minterms(); ++m )
  {
    if ( get( m ) == tv::dont_care )
      result.push_back( m );
  }
  return result;
}

std::uint64_t truth_table::count_onset() const noexcept
{
  std::uint64_t count = 0;
  for ( auto w : value_ )
    count += std::popcount( w );
  return count;
}

std::uint64_t truth_table::count_care() const noexcept
{
  std::uint64_t count = 0;
  for ( auto w : care_ )
    count += std::popcount( w );
  return count;
}

truth_table truth_table::complement() const
{
  truth_table t = *this;
  for ( std::size_t w = 0; w < care_.size(); ++w )
  {
    t.value_[w] = care_[w] & ~value_[w];
  }
  return t;
}

bool truth_table::depends_on( unsigned var ) const
{
  if ( var >= num_vars_ )
  {
    throw range_error( "variable index " + std::to_string( var ) + " out of range" );
  }
  auto const bit = std::uint64_t{ 1 } << ( num_vars_ - 1u - var );
  for ( std::uint64_t m = 0; m < num_minterms(); ++m )
  {
    if ( m & bit )
      continue;
    auto const lo = get( m );
    auto const hi = get( m | bit );
    if ( lo != tv::dont_care && hi != tv::dont_care && lo != hi )
      return true;
  }
  return false;
}

truth_table truth_table::drop_var( unsigned var ) const
{
  if ( num_vars_ < 2u )
  {
    throw range_error( "cannot drop the only variable of a table" );
  }
  if ( depends_on( var ) )
  {
    throw contract_error( "variable " + std::to_string( var ) + " is relevant and cannot be dropped" );
  }
  truth_table t( num_vars_ - 1u, tv::dont_care );
  auto const k = num_vars_ - 1u - var;
  auto const low_mask = ( std::uint64_t{ 1 } << k ) - 1u;
  for ( std::uint64_t m = 0; m < t.num_minterms(); ++m )
  {
    auto const lo = ( ( m & ~low_mask ) << 1u ) | ( m & low_mask );
    auto const a = get( lo );
    auto const b = get( lo | ( std::uint64_t{ 1 } << k ) );
    t.set( m, a != tv::dont_care ? a : b );
  }
  return t;
}

std::string truth_table::to_string() const
{
  std::string s;
  s.reserve( num_minterms() );
  for ( std::uint64_t m = 0; m < num_minterms(); ++m )
  {
    switch ( get( m ) )
    {
    case tv::zero:
      s.push_back( '0' );
      break;
    case tv::one:
      s.push_back( '1' );
      break;
    case tv::dont_care:
      s.push_back( 'X' );
      break;
    }
  }
  return s;
}

std::size_t truth_table::hash() const noexcept
{
  std::size_t h = num_vars_;
  auto mix = [&h]( std::uint64_t v ) { h ^= std::hash<std::uint64_t>{}( v ) + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 ); };
  for ( std::size_t w = 0; w < care_.size(); ++w )
  {
    mix( care_[w] );
    mix( value_[w] );
  }
  return h;
}

truth_table truth_table::operator~() const
{
  truth_table t = *this;
  for ( std::size_t w = 0; w < care_.size(); ++w )
    t.value_[w] = care_[w] & ~value_[w];
  return t;
}

truth_table truth_table::operator&( truth_table const& other ) const
{
  if ( other.num_vars_ != num_vars_ )
    throw arity_error( "bitwise operation on tables of different arity" );
  truth_table t = *this;
  for ( std::size_t w = 0; w < care_.size(); ++w )
    t.value_[w] &= other.value_[w];
  return t;
}

truth_table truth_table::operator|( truth_table const& other ) const
{
  if ( other.num_vars_ != num_vars_ )
    throw arity_error( "bitwise operation on tables of different arity" );
  truth_table t = *this;
  for ( std::size_t w = 0; w < care_.size(); ++w )
    t.value_[w] = ( t.value_[w] | other.value_[w] ) & care_[w];
  return t;
}

truth_table truth_table::operator^( truth_table const& other ) const
{
  if ( other.num_vars_ != num_vars_ )
    throw arity_error( "bitwise operation on tables of different arity" );
  truth_table t = *this;
  for ( std::size_t w = 0; w < care_.size(); ++w )
    t.value_[w] = ( t.value_[w] ^ other.value_[w] ) & care_[w];
  return t;
}

std::uint64_t distance( truth_table const& a, truth_table const& b )
{
  if ( a.num_vars() != b.num_vars() )
  {
    throw arity_error( "distance between tables of " + std::to_string( a.num_vars() ) + " and " +
                       std::to_string( b.num_vars() ) + " variables" );
  }
  auto const ac = a.care_words(), av = a.value_words(), bc = b.care_words(), bv = b.value_words();
  std::uint64_t d = 0;
  for ( std::size_t w = 0; w < ac.size(); ++w )
    d += std::popcount( ( av[w] ^ bv[w] ) & ac[w] & bc[w] );
  return d;
}

bool is_compatible( truth_table const& spec, truth_table const& concrete )
{
  if ( spec.num_vars() != concrete.num_vars() )
  {
    throw arity_error( "compatibility check between tables of different arity" );
  }
  if ( !concrete.is_fully_specified() )
  {
    throw contract_error( "compatibility check requires a fully specified function" );
  }
  auto const sc = spec.care_words(), sv = spec.value_words(), cv = concrete.value_words();
  for ( std::size_t w = 0; w < sc.size(); ++w )
  {
    if ( ( sv[w] ^ cv[w] ) & sc[w] )
      return false;
  }
  return true;
}

truth_table maj( truth_table const& a, truth_table const& b, truth_table const& c )
{
  return ( a & b ) | ( b & c ) | ( c & a );
}

multi_output_spec::multi_output_spec( unsigned num_vars, std::vector<std::string> input_names )
    : num_vars_( num_vars ), input_names_( std::move( input_names ) )
{
  check_num_vars( num_vars );
  if ( input_names_.empty() )
  {
    input_names_ = default_var_names( num_vars );
  }
  if ( input_names_.size() != num_vars )
  {
    throw arity_error( "expected " + std::to_string( num_vars ) + " input names, got " +
                       std::to_string( input_names_.size() ) );
  }
}

void multi_output_spec::add_output( std::string name, truth_table table )
{
  if ( table.num_vars() != num_vars_ )
  {
    throw arity_error( "output '" + name + "' has " + std::to_string( table.num_vars() ) + " variables, expected " +
                       std::to_string( num_vars_ ) );
  }
  for ( auto const& o : outputs_ )
  {
    if ( o.name == name )
      throw spec_conflict_error( "duplicate output name '" + name + "'" );
  }
  outputs_.push_back( { std::move( name ), std::move( table ) } );
}

std::vector<std::string> default_var_names( unsigned num_vars )
{
  std::vector<std::string> names;
  names.reserve( num_vars );
  for ( unsigned i = 0; i < num_vars; ++i )
  {
    names.push_back( num_vars <= 26u ? std::string( 1, static_cast<char>( 'a' + i ) ) : "x" + std::to_string( i ) );
  }
  return names;
}

} // namespace majsyn
