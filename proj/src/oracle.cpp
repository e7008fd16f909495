#include "majsyn/oracle.hpp"

#include "majsyn/errors.hpp"

#include <array>
#include <bit>
#include <random>

namespace majsyn
{

equivalence_report check_equivalence( network const& net, multi_output_spec const& spec, check_mode mode )
{
  if ( net.num_vars() != spec.num_vars() )
    throw arity_error( "network and spec have different input counts" );
  if ( net.roots().size() != spec.num_outputs() )
    throw arity_error( "network and spec have different output counts" );

  auto const& outputs = spec.outputs();
  equivalence_report report;
  auto check_one = [&]( std::uint64_t m, std::vector<bool> const& values ) {
    ++report.checked;
    for ( std::size_t o = 0; o < outputs.size(); ++o )
    {
      auto const want = outputs[o].table.get( m );
      if ( want != tv::dont_care && ( want == tv::one ) != values[o] )
      {
        report.equivalent = false;
        report.first_counterexample = m;
        report.failing_output = o;
        return false;
      }
    }
    return true;
  };

  if ( mode.exhaustive )
  {
    // bit-parallel simulation, then scan for the smallest mismatch
    auto const funcs = net.root_functions();
    auto const total = spec.outputs().front().table.num_minterms();
    std::uint64_t first = total;
    std::size_t first_output = 0;
    for ( std::size_t o = 0; o < outputs.size(); ++o )
    {
      auto const care = outputs[o].table.care_words();
      auto const want = outputs[o].table.value_words();
      auto const got = funcs[o].value_words();
      for ( std::size_t w = 0; w < care.size(); ++w )
      {
        auto const diff = ( want[w] ^ got[w] ) & care[w];
        if ( diff != 0u )
        {
          auto const m = w * 64u + static_cast<std::uint64_t>( std::countr_zero( diff ) );
          if ( m < first )
          {
            first = m;
            first_output = o;
          }
          break;
        }
      }
    }
    if ( first < total )
    {
      report.equivalent = false;
      report.first_counterexample = first;
      report.failing_output = first_output;
      report.checked = first + 1u;
    }
    else
      report.checked = total;
    return report;
  }

  std::mt19937_64 rng( sample_seed );
  std::uniform_int_distribution<std::uint64_t> pick( 0, spec.outputs().front().table.num_minterms() - 1u );
  for ( std::uint64_t i = 0; i < mode.samples; ++i )
  {
    auto const m = pick( rng );
    if ( !check_one( m, net.eval( m ) ) )
      break;
  }
  return report;
}

namespace
{

struct operand
{
  std::uint32_t index;
  bool complemented;
};

struct gate_choice
{
  std::array<std::uint32_t, 3> ops;
  std::uint8_t negated; // 0 none, 1..3 which operand is complemented
  auto key() const { return std::array<std::uint32_t, 4>{ ops[0], ops[1], ops[2], negated }; }
};

class chain_search
{
public:
  chain_search( truth_table const& spec ) : n_( spec.num_vars() )
  {
    auto const bits = std::uint64_t{ 1 } << n_;
    mask_ = bits >= 64u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << bits ) - 1u;
    care_ = spec.care_words()[0] & mask_;
    target_ = spec.value_words()[0] & mask_;
    tables_.push_back( 0u );
    for ( unsigned v = 0; v < n_; ++v )
    {
      std::uint64_t t = 0;
      for ( std::uint64_t m = 0; m < bits; ++m )
        if ( ( m >> ( n_ - 1 - v ) ) & 1u )
          t |= std::uint64_t{ 1 } << m;
      tables_.push_back( t );
    }
    uses_.assign( tables_.size(), 0u );
  }

  /// Tries chains of exactly `g` gates; on success `chain_` and `root_negated_` hold the witness.
  bool run( unsigned g )
  {
    gates_ = g;
    chain_.clear();
    if ( g == 0u )
    {
      for ( std::uint32_t i = 0; i < tables_.size(); ++i )
        for ( bool neg : { false, true } )
          if ( ++explored_, matches( tables_[i] ^ ( neg ? mask_ : 0u ) ) )
          {
            root_ = { i, neg };
            return true;
          }
      return false;
    }
    return extend();
  }

  std::uint64_t explored() const { return explored_; }

  optimal_result witness() const
  {
    network net( n_ );
    std::vector<signal> sigs{ net.constant( false ) };
    for ( unsigned v = 0; v < n_; ++v )
      sigs.push_back( net.var( v ) );
    for ( auto const& c : chain_ )
    {
      std::array<signal, 3> in;
      for ( unsigned k = 0; k < 3; ++k )
        in[k] = sigs[c.ops[k]] ^ ( c.negated == k + 1u );
      sigs.push_back( net.create_gate( in[0], in[1], in[2] ) );
    }
    auto const root = sigs[root_.index] ^ root_.complemented;
    return { gates_, make_expr( std::move( net ), root ), explored_ };
  }

private:
  bool matches( std::uint64_t f ) const { return ( ( f ^ target_ ) & care_ ) == 0u; }

  static std::uint64_t maj3( std::uint64_t a, std::uint64_t b, std::uint64_t c )
  {
    return ( a & b ) | ( b & c ) | ( a & c );
  }

  bool extend()
  {
    auto const size = static_cast<std::uint32_t>( tables_.size() );
    auto const placed = static_cast<unsigned>( chain_.size() );
    bool const last = placed + 1u == gates_;
    auto const first_gate = n_ + 1u;

    unsigned unused = 0;
    for ( auto i = first_gate; i < size; ++i )
      unused += uses_[i] == 0u ? 1u : 0u;
    // each remaining gate removes at most two dangling gates net; one (the root) is left
    auto const remaining = gates_ - placed;
    if ( unused > 2u * remaining + 1u )
      return false;

    auto const prev = placed == 0u ? 0u : size - 1u;
    for ( std::uint32_t i = 0; i < size; ++i )
      for ( auto j = i + 1u; j < size; ++j )
        for ( auto k = j + 1u; k < size; ++k )
        {
          // the last gate must consume every dangling gate
          if ( last )
          {
            unsigned covered = 0;
            for ( auto x : { i, j, k } )
              covered += x >= first_gate && uses_[x] == 0u ? 1u : 0u;
            if ( covered != unused )
              continue;
          }
          bool const uses_prev = placed > 0u && ( i == prev || j == prev || k == prev );
          for ( std::uint8_t neg = 0; neg < 4; ++neg )
          {
            gate_choice const c{ { i, j, k }, neg };
            if ( placed > 0u && !uses_prev && !( chain_.back().key() < c.key() ) )
              continue;
            ++explored_;
            auto a = tables_[i], b = tables_[j], d = tables_[k];
            if ( neg == 1u )
              a = ~a & mask_;
            else if ( neg == 2u )
              b = ~b & mask_;
            else if ( neg == 3u )
              d = ~d & mask_;
            auto const f = maj3( a, b, d );
            if ( last )
            {
              for ( bool out_neg : { false, true } )
              {
                if ( matches( f ^ ( out_neg ? mask_ : 0u ) ) )
                {
                  chain_.push_back( c );
                  root_ = { size, out_neg };
                  return true;
                }
              }
              continue;
            }
            if ( redundant( f ) )
              continue;
            chain_.push_back( c );
            tables_.push_back( f );
            uses_.push_back( 0u );
            ++uses_[i], ++uses_[j], ++uses_[k];
            if ( extend() )
              return true;
            --uses_[i], --uses_[j], --uses_[k];
            uses_.pop_back();
            tables_.pop_back();
            chain_.pop_back();
          }
        }
    return false;
  }

  /// A gate equal to an existing signal (or its complement) can be removed.
  bool redundant( std::uint64_t f ) const
  {
    for ( auto t : tables_ )
      if ( t == f || ( ~t & mask_ ) == f )
        return true;
    return false;
  }

  unsigned n_;
  std::uint64_t mask_{ 0 }, care_{ 0 }, target_{ 0 };
  std::vector<std::uint64_t> tables_;
  std::vector<unsigned> uses_;
  std::vector<gate_choice> chain_;
  unsigned gates_{ 0 };
  operand root_{ 0, false };
  std::uint64_t explored_{ 0 };
};

} // namespace

std::optional<optimal_result> optimal_synth( truth_table const& spec, unsigned max_gates )
{
  if ( max_gates > 7u )
    throw config_error( "optimal_synth supports at most 7 gates" );
  if ( spec.num_vars() > 6u )
    throw arity_error( "optimal_synth supports at most 6 inputs" );
  chain_search search( spec );
  for ( unsigned g = 0; g <= max_gates; ++g )
  {
    if ( search.run( g ) )
      return search.witness();
  }
  return std::nullopt;
}

} // namespace majsyn
