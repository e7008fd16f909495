#include "majsyn/cover.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <bit>

namespace majsyn
{

unsigned implicant::literal_count() const noexcept
{
  return static_cast<unsigned>( std::popcount( mask ) );
}

std::optional<bool> implicant::literal( unsigned var, unsigned num_vars ) const noexcept
{
  auto const bit = std::uint32_t{ 1 } << ( num_vars - 1u - var );
  if ( ( mask & bit ) == 0u )
    return std::nullopt;
  return ( bits & bit ) != 0u;
}

bool cover::is_one() const noexcept
{
  return std::any_of( implicants.begin(), implicants.end(), []( auto const& i ) { return i.mask == 0u; } );
}

unsigned cover::literal_count() const noexcept
{
  unsigned total = 0;
  for ( auto const& i : implicants )
    total += i.literal_count();
  return total;
}

unsigned cover::gate_count() const noexcept
{
  if ( is_zero() || is_one() )
    return 0u;
  unsigned const p = static_cast<unsigned>( implicants.size() );
  return ( literal_count() - p ) + ( p - 1u );
}

truth_table cover::function() const
{
  truth_table t( num_vars, tv::zero );
  for ( std::uint64_t m = 0; m < t.num_minterms(); ++m )
  {
    for ( auto const& i : implicants )
    {
      if ( i.covers( m ) )
      {
        t.set( m, tv::one );
        break;
      }
    }
  }
  return t;
}

namespace
{

constexpr std::uint64_t pack( implicant const& i ) noexcept
{
  return ( std::uint64_t{ i.mask } << 32u ) | i.bits;
}

/// Fewer literals first, then earlier variables (higher mask bits), then phase.
bool canonical_less( implicant const& x, implicant const& y ) noexcept
{
  if ( x.literal_count() != y.literal_count() )
    return x.literal_count() < y.literal_count();
  if ( x.mask != y.mask )
    return x.mask > y.mask;
  return x.bits > y.bits;
}

void check_arity( truth_table const& spec )
{
  if ( spec.num_vars() > 16u )
    throw arity_error( "two-level minimization supports at most 16 variables" );
}

/// Calls `fn(minterm)` for every minterm inside the cube.
template<class Fn>
void for_each_minterm( implicant const& cube, unsigned num_vars, Fn&& fn )
{
  std::uint32_t const full = num_vars == 32u ? ~std::uint32_t{ 0 } : ( ( std::uint32_t{ 1 } << num_vars ) - 1u );
  std::uint32_t const free = full & ~cube.mask;
  std::uint32_t sub = 0;
  do
  {
    fn( static_cast<std::uint64_t>( cube.bits | sub ) );
    sub = ( sub - free ) & free;
  } while ( sub != 0u );
}

struct covering_problem
{
  std::vector<implicant> primes;
  std::vector<std::vector<std::uint32_t>> covers;      // onset indices covered by each prime
  std::vector<std::vector<std::uint32_t>> covered_by;  // primes covering each onset minterm
};

covering_problem build_problem( truth_table const& spec, std::vector<implicant> primes )
{
  auto const n = spec.num_vars();
  auto const onset = spec.onset();
  std::vector<std::int32_t> index( spec.num_minterms(), -1 );
  for ( std::size_t i = 0; i < onset.size(); ++i )
    index[onset[i]] = static_cast<std::int32_t>( i );

  covering_problem p;
  p.primes = std::move( primes );
  p.covers.resize( p.primes.size() );
  p.covered_by.resize( onset.size() );
  for ( std::uint32_t j = 0; j < p.primes.size(); ++j )
  {
    for_each_minterm( p.primes[j], n, [&]( std::uint64_t m ) {
      if ( index[m] >= 0 )
      {
        p.covers[j].push_back( static_cast<std::uint32_t>( index[m] ) );
        p.covered_by[static_cast<std::size_t>( index[m] )].push_back( j );
      }
    } );
  }
  return p;
}

std::vector<std::uint32_t> greedy_cover( covering_problem const& p )
{
  auto const num_onset = p.covered_by.size();
  std::vector<bool> covered( num_onset, false );
  std::vector<bool> chosen( p.primes.size(), false );
  std::vector<std::uint32_t> selection;
  std::size_t remaining = num_onset;

  auto take = [&]( std::uint32_t j ) {
    chosen[j] = true;
    selection.push_back( j );
    for ( auto m : p.covers[j] )
    {
      if ( !covered[m] )
      {
        covered[m] = true;
        --remaining;
      }
    }
  };

  for ( std::size_t m = 0; m < num_onset; ++m )
  {
    if ( p.covered_by[m].size() == 1u && !chosen[p.covered_by[m][0]] )
      take( p.covered_by[m][0] );
  }

  while ( remaining > 0u )
  {
    std::uint32_t best = 0;
    std::size_t best_gain = 0;
    for ( std::uint32_t j = 0; j < p.primes.size(); ++j )
    {
      if ( chosen[j] )
        continue;
      std::size_t gain = 0;
      for ( auto m : p.covers[j] )
        gain += covered[m] ? 0u : 1u;
      // primes are sorted canonically, so the first maximum has the fewest literals
      if ( gain > best_gain )
      {
        best_gain = gain;
        best = j;
      }
    }
    take( best );
  }

  // drop selections made redundant by later picks, last chosen first
  std::vector<std::uint32_t> count( num_onset, 0 );
  for ( auto j : selection )
    for ( auto m : p.covers[j] )
      ++count[m];
  std::vector<std::uint32_t> result;
  for ( auto it = selection.rbegin(); it != selection.rend(); ++it )
  {
    auto const& cov = p.covers[*it];
    if ( std::all_of( cov.begin(), cov.end(), [&]( auto m ) { return count[m] > 1u; } ) )
    {
      for ( auto m : cov )
        --count[m];
    }
    else
    {
      result.push_back( *it );
    }
  }
  return result;
}

/// Branch and bound on (implicant count, literal count); onset must fit in 64 bits.
class exact_cover
{
public:
  explicit exact_cover( covering_problem const& p ) : p_( p )
  {
    for ( auto const& cov : p.covers )
    {
      std::uint64_t bits = 0;
      for ( auto m : cov )
        bits |= std::uint64_t{ 1 } << m;
      masks_.push_back( bits );
    }
  }

  std::vector<std::uint32_t> solve( std::vector<std::uint32_t> initial )
  {
    best_ = std::move( initial );
    best_cost_ = cost_of( best_ );
    std::uint64_t const all = p_.covered_by.size() == 64u ? ~std::uint64_t{ 0 }
                                                          : ( std::uint64_t{ 1 } << p_.covered_by.size() ) - 1u;
    current_.clear();
    recurse( all, 0u );
    return best_;
  }

private:
  std::pair<std::size_t, unsigned> cost_of( std::vector<std::uint32_t> const& sel ) const
  {
    unsigned lits = 0;
    for ( auto j : sel )
      lits += p_.primes[j].literal_count();
    return { sel.size(), lits };
  }

  void recurse( std::uint64_t uncovered, unsigned literals )
  {
    if ( ++nodes_ > node_limit )
      return;
    if ( uncovered == 0u )
    {
      std::pair<std::size_t, unsigned> const cost{ current_.size(), literals };
      if ( cost < best_cost_ )
      {
        best_cost_ = cost;
        best_ = current_;
      }
      return;
    }
    if ( current_.size() + 1u > best_cost_.first )
      return;

    // branch on the uncovered minterm with the fewest candidate primes
    std::size_t pick = 0;
    std::size_t fewest = ~std::size_t{ 0 };
    for ( auto rest = uncovered; rest != 0u; rest &= rest - 1u )
    {
      auto const m = static_cast<std::size_t>( std::countr_zero( rest ) );
      if ( p_.covered_by[m].size() < fewest )
      {
        fewest = p_.covered_by[m].size();
        pick = m;
      }
    }
    for ( auto j : p_.covered_by[pick] )
    {
      current_.push_back( j );
      recurse( uncovered & ~masks_[j], literals + p_.primes[j].literal_count() );
      current_.pop_back();
    }
  }

  static constexpr std::size_t node_limit = 2'000'000u;

  covering_problem const& p_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_;
  std::pair<std::size_t, unsigned> best_cost_{};
  std::size_t nodes_{ 0 };
};

} // namespace

std::vector<implicant> prime_implicants( truth_table const& spec )
{
  check_arity( spec );
  auto const n = spec.num_vars();
  std::uint32_t const full = ( std::uint32_t{ 1 } << n ) - 1u;

  std::vector<implicant> level;
  for ( std::uint64_t m = 0; m < spec.num_minterms(); ++m )
  {
    if ( spec.get( m ) != tv::zero )
      level.push_back( { full, static_cast<std::uint32_t>( m ) } );
  }

  // levels are kept sorted by packed key so partners are found by binary search
  std::vector<implicant> primes;
  while ( !level.empty() )
  {
    std::vector<std::uint64_t> keys;
    keys.reserve( level.size() );
    for ( auto const& c : level )
      keys.push_back( pack( c ) );
    std::vector<bool> merged( level.size(), false );
    std::vector<std::uint64_t> next;
    for ( std::size_t i = 0; i < level.size(); ++i )
    {
      auto const& c = level[i];
      for ( auto rest = c.mask; rest != 0u; rest &= rest - 1u )
      {
        auto const bit = rest & ( ~rest + 1u );
        auto const it = std::lower_bound( keys.begin(), keys.end(), pack( { c.mask, c.bits ^ bit } ) );
        if ( it == keys.end() || *it != pack( { c.mask, c.bits ^ bit } ) )
          continue;
        merged[i] = true;
        merged[static_cast<std::size_t>( it - keys.begin() )] = true;
        next.push_back( pack( { c.mask & ~bit, c.bits & ~bit } ) );
      }
    }
    for ( std::size_t i = 0; i < level.size(); ++i )
    {
      if ( !merged[i] )
        primes.push_back( level[i] );
    }
    std::sort( next.begin(), next.end() );
    next.erase( std::unique( next.begin(), next.end() ), next.end() );
    level.clear();
    for ( auto k : next )
      level.push_back( { static_cast<std::uint32_t>( k >> 32u ), static_cast<std::uint32_t>( k ) } );
  }

  // keep primes that touch the onset
  std::vector<implicant> useful;
  for ( auto const& c : primes )
  {
    bool hits = false;
    for_each_minterm( c, n, [&]( std::uint64_t m ) { hits = hits || spec.get( m ) == tv::one; } );
    if ( hits )
      useful.push_back( c );
  }
  std::sort( useful.begin(), useful.end(), canonical_less );
  return useful;
}

cover minimize( truth_table const& spec )
{
  check_arity( spec );
  cover result;
  result.num_vars = spec.num_vars();
  if ( spec.count_onset() == 0u )
    return result;

  auto problem = build_problem( spec, prime_implicants( spec ) );
  auto selection = greedy_cover( problem );
  if ( spec.num_vars() <= 5u )
    selection = exact_cover( problem ).solve( std::move( selection ) );

  for ( auto j : selection )
    result.implicants.push_back( problem.primes[j] );
  std::sort( result.implicants.begin(), result.implicants.end(), canonical_less );
  return result;
}

namespace
{

signal balanced( network& net, std::span<signal const> items, bool is_or )
{
  if ( items.size() == 1u )
    return items[0];
  auto const mid = items.size() / 2u;
  auto const left = balanced( net, items.first( mid ), is_or );
  auto const right = balanced( net, items.subspan( mid ), is_or );
  return is_or ? net.create_or( left, right ) : net.create_and( left, right );
}

} // namespace

signal cover_to_majority( network& net, cover const& c )
{
  if ( c.num_vars != net.num_vars() )
    throw arity_error( "cover and network have different numbers of variables" );
  if ( c.is_zero() )
    return net.constant( false );
  if ( c.is_one() )
    return net.constant( true );

  std::vector<signal> terms;
  for ( auto const& cube : c.implicants )
  {
    std::vector<signal> lits;
    for ( unsigned v = 0; v < c.num_vars; ++v )
    {
      if ( auto const phase = cube.literal( v, c.num_vars ) )
        lits.push_back( net.var( v ) ^ !*phase );
    }
    terms.push_back( balanced( net, lits, false ) );
  }
  return balanced( net, terms, true );
}

network cover_to_majority( cover const& c )
{
  network net( c.num_vars );
  auto const s = cover_to_majority( net, c );
  return make_expr( std::move( net ), s );
}

two_level_result two_level( truth_table const& spec )
{
  auto direct = minimize( spec );
  auto inverse = minimize( spec.complement() );
  bool const flip = inverse.gate_count() < direct.gate_count();
  auto& chosen = flip ? inverse : direct;

  network net( spec.num_vars() );
  auto s = cover_to_majority( net, chosen );
  auto function = chosen.function();
  if ( flip )
  {
    s = !s;
    function = ~function;
  }
  return { make_expr( std::move( net ), s ), std::move( function ), std::move( chosen ), flip };
}

} // namespace majsyn
