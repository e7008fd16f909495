#include "majsyn/network.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <optional>

namespace majsyn
{

namespace
{

std::uint32_t literal_code( signal s )
{
  return ( s.index << 1u ) | ( s.complemented ? 1u : 0u );
}

} // namespace

network::network( unsigned num_vars, gate_kind kind ) : num_vars_( num_vars ), kind_( kind ), table_( 16u, 0u )
{
  nodes_.reserve( num_vars + 17u );
  nodes_.push_back( node{ node_type::constant, 0u, {} } );
  for ( unsigned i = 0; i < num_vars; ++i )
  {
    nodes_.push_back( node{ node_type::variable, i, {} } );
  }
}

std::size_t network::slot_of( std::array<signal, 3> const& children ) const noexcept
{
  std::uint64_t h = literal_code( children[0] );
  h = h * 0x9e3779b97f4a7c15ull + literal_code( children[1] );
  h = h * 0x9e3779b97f4a7c15ull + literal_code( children[2] );
  h ^= h >> 29u;
  auto const mask = table_.size() - 1u;
  auto slot = static_cast<std::size_t>( h ) & mask;
  while ( table_[slot] != 0u && nodes_[table_[slot]].children != children )
    slot = ( slot + 1u ) & mask;
  return slot;
}

void network::grow_table()
{
  table_.assign( table_.size() * 2u, 0u );
  for ( std::uint32_t n = 0; n < nodes_.size(); ++n )
  {
    if ( nodes_[n].type == node_type::gate )
      table_[slot_of( nodes_[n].children )] = n;
  }
}

signal network::var( unsigned i ) const
{
  if ( i >= num_vars_ )
  {
    throw range_error( "variable index " + std::to_string( i ) + " out of range" );
  }
  return { i + 1u, false };
}

signal network::create_gate( signal a, signal b, signal c )
{
  std::array<signal, 3> ch{ a, b, c };
  for ( auto const& s : ch )
  {
    if ( s.index >= nodes_.size() )
      throw range_error( "signal refers to a node that does not exist" );
  }
  std::sort( ch.begin(), ch.end() );

  bool const minority = kind_ == gate_kind::minority;
  // M(x,x,y) = x and M(x,x',y) = y; the minority versions complement the result
  auto trivial = [&]( signal x, signal y, signal other ) -> std::optional<signal> {
    if ( x.index != y.index )
      return std::nullopt;
    signal r = x.complemented == y.complemented ? x : other;
    return minority ? !r : r;
  };
  if ( auto r = trivial( ch[0], ch[1], ch[2] ) )
    return *r;
  if ( auto r = trivial( ch[1], ch[2], ch[0] ) )
    return *r;

  auto slot = slot_of( ch );
  if ( table_[slot] != 0u )
  {
    return { table_[slot], false };
  }
  auto const index = static_cast<std::uint32_t>( nodes_.size() );
  nodes_.push_back( node{ node_type::gate, 0u, ch } );
  if ( 2u * ++num_gates_ > table_.size() )
    grow_table();
  else
    table_[slot] = index;
  return { index, false };
}

signal network::create_and( signal a, signal b )
{
  if ( kind_ == gate_kind::minority )
    return !create_gate( !a, !b, constant( true ) );
  return create_gate( a, b, constant( false ) );
}

signal network::create_or( signal a, signal b )
{
  if ( kind_ == gate_kind::minority )
    return !create_gate( !a, !b, constant( false ) );
  return create_gate( a, b, constant( true ) );
}

signal network::import( network const& src, signal s, std::span<signal const> var_map )
{
  if ( src.kind_ != kind_ )
  {
    throw contract_error( "cannot import between majority and minority networks" );
  }
  if ( !var_map.empty() && var_map.size() != src.num_vars_ )
  {
    throw arity_error( "variable map size does not match source network" );
  }
  if ( var_map.empty() && src.num_vars_ > num_vars_ )
  {
    throw arity_error( "source network has more inputs than the destination" );
  }

  std::vector<std::uint32_t> stack{ s.index };
  std::vector<bool> in_cone( src.size(), false );
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( in_cone[n] )
      continue;
    in_cone[n] = true;
    if ( src.nodes_[n].type == node_type::gate )
    {
      for ( auto const& c : src.nodes_[n].children )
        stack.push_back( c.index );
    }
  }

  std::vector<signal> mapped( src.size() );
  for ( std::uint32_t n = 0; n < src.size(); ++n )
  {
    if ( !in_cone[n] )
      continue;
    auto const& nd = src.nodes_[n];
    switch ( nd.type )
    {
    case node_type::constant:
      mapped[n] = constant( false );
      break;
    case node_type::variable:
      mapped[n] = var_map.empty() ? var( nd.var ) : var_map[nd.var];
      break;
    case node_type::gate:
      mapped[n] = create_gate( mapped[nd.children[0].index] ^ nd.children[0].complemented,
                               mapped[nd.children[1].index] ^ nd.children[1].complemented,
                               mapped[nd.children[2].index] ^ nd.children[2].complemented );
      break;
    }
  }
  return mapped[s.index] ^ s.complemented;
}

void network::add_root( std::string name, signal s )
{
  if ( s.index >= nodes_.size() )
    throw range_error( "root refers to a node that does not exist" );
  roots_.push_back( { std::move( name ), s } );
}

std::vector<truth_table> network::simulate() const
{
  if ( num_vars_ == 0u )
  {
    throw contract_error( "cannot simulate a network without inputs" );
  }
  std::vector<std::vector<std::uint64_t>> words( nodes_.size() );
  truth_table const zero = truth_table::constant( num_vars_, false );
  auto const num_words = zero.care_words().size();
  auto const full = std::vector<std::uint64_t>( zero.care_words().begin(), zero.care_words().end() );
  bool const minority = kind_ == gate_kind::minority;

  for ( std::uint32_t n = 0; n < nodes_.size(); ++n )
  {
    auto const& nd = nodes_[n];
    switch ( nd.type )
    {
    case node_type::constant:
      words[n].assign( num_words, 0u );
      break;
    case node_type::variable:
    {
      auto t = truth_table::nth_var( num_vars_, nd.var );
      words[n].assign( t.value_words().begin(), t.value_words().end() );
      break;
    }
    case node_type::gate:
    {
      auto& out = words[n];
      out.resize( num_words );
      auto const& x = words[nd.children[0].index];
      auto const& y = words[nd.children[1].index];
      auto const& z = words[nd.children[2].index];
      std::uint64_t const cx = nd.children[0].complemented ? ~0ull : 0ull;
      std::uint64_t const cy = nd.children[1].complemented ? ~0ull : 0ull;
      std::uint64_t const cz = nd.children[2].complemented ? ~0ull : 0ull;
      for ( std::size_t w = 0; w < num_words; ++w )
      {
        auto const a = x[w] ^ cx, b = y[w] ^ cy, c = z[w] ^ cz;
        auto m = ( a & b ) | ( b & c ) | ( a & c );
        out[w] = ( minority ? ~m : m ) & full[w];
      }
      break;
    }
    }
  }

  std::vector<truth_table> tables;
  tables.reserve( nodes_.size() );
  for ( auto& w : words )
  {
    tables.push_back( truth_table::from_words( num_vars_, full, std::move( w ) ) );
  }
  return tables;
}

truth_table network::function_of( signal s ) const
{
  auto tables = simulate();
  auto t = std::move( tables.at( s.index ) );
  return s.complemented ? ~t : t;
}

std::vector<truth_table> network::root_functions() const
{
  auto tables = simulate();
  std::vector<truth_table> result;
  result.reserve( roots_.size() );
  for ( auto const& r : roots_ )
  {
    result.push_back( r.sig.complemented ? ~tables[r.sig.index] : tables[r.sig.index] );
  }
  return result;
}

std::vector<bool> network::eval( std::uint64_t assignment ) const
{
  if ( num_vars_ < 64u && assignment >= ( std::uint64_t{ 1 } << num_vars_ ) )
  {
    throw range_error( "assignment out of range" );
  }
  std::vector<bool> value( nodes_.size() );
  for ( std::uint32_t n = 0; n < nodes_.size(); ++n )
  {
    auto const& nd = nodes_[n];
    switch ( nd.type )
    {
    case node_type::constant:
      value[n] = false;
      break;
    case node_type::variable:
      value[n] = ( assignment >> ( num_vars_ - 1u - nd.var ) ) & 1u;
      break;
    case node_type::gate:
    {
      int ones = 0;
      for ( auto const& c : nd.children )
        ones += ( value[c.index] != c.complemented ) ? 1 : 0;
      value[n] = ( ones >= 2 ) != ( kind_ == gate_kind::minority );
      break;
    }
    }
  }
  std::vector<bool> result;
  result.reserve( roots_.size() );
  for ( auto const& r : roots_ )
    result.push_back( value[r.sig.index] != r.sig.complemented );
  return result;
}

network make_expr( network net, signal s, std::string name )
{
  network result( net.num_vars(), net.kind() );
  auto const r = result.import( net, s );
  result.add_root( std::move( name ), r );
  return result;
}

signal expr_root( network const& expr )
{
  if ( expr.roots().size() != 1u )
  {
    throw contract_error( "expression networks have exactly one root" );
  }
  return expr.roots().front().sig;
}

namespace
{

metrics metrics_for_roots( network const& net, std::span<signal const> roots )
{
  metrics m;
  std::vector<std::int32_t> owner( net.size(), -1 );
  std::vector<bool> shared( net.size(), false );
  std::vector<bool> reachable( net.size(), false );

  for ( std::size_t r = 0; r < roots.size(); ++r )
  {
    std::vector<bool> seen( net.size(), false );
    std::vector<std::uint32_t> stack{ roots[r].index };
    while ( !stack.empty() )
    {
      auto const n = stack.back();
      stack.pop_back();
      if ( seen[n] )
        continue;
      seen[n] = true;
      reachable[n] = true;
      if ( owner[n] == -1 )
        owner[n] = static_cast<std::int32_t>( r );
      else if ( owner[n] != static_cast<std::int32_t>( r ) )
        shared[n] = true;
      if ( net.is_gate( n ) )
      {
        for ( auto const& c : net.at( n ).children )
          stack.push_back( c.index );
      }
    }
  }

  std::vector<bool> inverted( net.size(), false );
  std::vector<std::uint32_t> depth( net.size(), 0u );
  for ( std::uint32_t n = 0; n < net.size(); ++n )
  {
    if ( !reachable[n] || !net.is_gate( n ) )
      continue;
    ++m.nom;
    if ( shared[n] )
      ++m.shared;
    std::uint32_t d = 0;
    for ( auto const& c : net.at( n ).children )
    {
      d = std::max( d, depth[c.index] );
      if ( c.complemented && c.index != 0u )
        inverted[c.index] = true;
    }
    depth[n] = d + 1u;
  }
  for ( auto const& r : roots )
  {
    m.levels = std::max( m.levels, depth[r.index] );
    if ( r.complemented && r.index != 0u )
      inverted[r.index] = true;
  }
  m.noi = static_cast<std::uint32_t>( std::count( inverted.begin(), inverted.end(), true ) );
  return m;
}

} // namespace

metrics compute_metrics( network const& net )
{
  std::vector<signal> roots;
  for ( auto const& r : net.roots() )
    roots.push_back( r.sig );
  return metrics_for_roots( net, roots );
}

metrics compute_metrics( network const& net, signal s )
{
  return metrics_for_roots( net, std::span<signal const>( &s, 1u ) );
}

network cleanup( network const& net )
{
  network result( net.num_vars(), net.kind() );
  for ( auto const& r : net.roots() )
  {
    result.add_root( r.name, result.import( net, r.sig ) );
  }
  return result;
}

namespace
{

/// One round of greedy polarity flipping followed by a rebuild.
network push_inverters_once( network const& net, bool& improved )
{
  auto const size = net.size();
  std::vector<bool> reachable( size, false );
  {
    std::vector<std::uint32_t> stack;
    for ( auto const& r : net.roots() )
      stack.push_back( r.sig.index );
    while ( !stack.empty() )
    {
      auto const n = stack.back();
      stack.pop_back();
      if ( reachable[n] )
        continue;
      reachable[n] = true;
      if ( net.is_gate( n ) )
        for ( auto const& c : net.at( n ).children )
          stack.push_back( c.index );
    }
  }

  // references to each node: (parent gate or root) and stored complement
  struct reference
  {
    std::int64_t parent; // -1 for roots
    bool complemented;
  };
  std::vector<std::vector<reference>> refs( size );
  for ( std::uint32_t n = 0; n < size; ++n )
  {
    if ( reachable[n] && net.is_gate( n ) )
      for ( auto const& c : net.at( n ).children )
        refs[c.index].push_back( { n, c.complemented } );
  }
  for ( auto const& r : net.roots() )
    refs[r.sig.index].push_back( { -1, r.sig.complemented } );

  std::vector<bool> flip( size, false );
  auto effective = [&]( std::uint32_t child, reference const& ref ) {
    bool c = ref.complemented != flip[child];
    if ( ref.parent >= 0 && flip[static_cast<std::size_t>( ref.parent )] )
      c = !c;
    return c;
  };
  auto inverted_count = [&]( std::uint32_t n ) {
    std::size_t k = 0;
    for ( auto const& ref : refs[n] )
      k += effective( n, ref ) ? 1u : 0u;
    return k;
  };
  auto needs_inverter = [&]( std::uint32_t n ) { return n != 0u && inverted_count( n ) > 0u; };

  improved = false;
  bool changed = true;
  while ( changed )
  {
    changed = false;
    for ( std::uint32_t n = 0; n < size; ++n )
    {
      if ( !reachable[n] || !net.is_gate( n ) )
        continue;
      std::vector<std::uint32_t> affected{ n };
      for ( auto const& c : net.at( n ).children )
        affected.push_back( c.index );
      int before = 0;
      for ( auto a : affected )
        before += needs_inverter( a ) ? 1 : 0;
      flip[n] = !flip[n];
      int after = 0;
      for ( auto a : affected )
        after += needs_inverter( a ) ? 1 : 0;
      if ( after < before )
      {
        changed = improved = true;
      }
      else
      {
        flip[n] = !flip[n];
      }
    }
  }

  network result( net.num_vars(), net.kind() );
  std::vector<signal> mapped( size );
  for ( std::uint32_t n = 0; n < size; ++n )
  {
    if ( !reachable[n] )
      continue;
    auto const& nd = net.at( n );
    if ( nd.type == node_type::constant )
      mapped[n] = result.constant( false );
    else if ( nd.type == node_type::variable )
      mapped[n] = result.var( nd.var );
    else
    {
      std::array<signal, 3> ch;
      for ( std::size_t i = 0; i < 3; ++i )
      {
        auto const& c = nd.children[i];
        // mapped[c] realizes child c complemented iff flip[c]
        ch[i] = mapped[c.index] ^ ( c.complemented != flip[c.index] ) ^ flip[n];
      }
      mapped[n] = result.create_gate( ch[0], ch[1], ch[2] );
    }
  }
  for ( auto const& r : net.roots() )
    result.add_root( r.name, mapped[r.sig.index] ^ ( r.sig.complemented != flip[r.sig.index] ) );
  return cleanup( result );
}

} // namespace

network push_inverters( network const& net )
{
  network current = cleanup( net );
  auto best = compute_metrics( current ).noi;
  for ( ;; )
  {
    bool improved = false;
    auto next = push_inverters_once( current, improved );
    auto const noi = compute_metrics( next ).noi;
    if ( !improved || noi >= best )
      return current;
    best = noi;
    current = std::move( next );
  }
}

network to_minority( network const& net )
{
  if ( net.kind() == gate_kind::minority )
    return push_inverters( net );

  network result( net.num_vars(), gate_kind::minority );
  std::vector<signal> mapped( net.size() );
  for ( std::uint32_t n = 0; n < net.size(); ++n )
  {
    auto const& nd = net.at( n );
    if ( nd.type == node_type::constant )
      mapped[n] = result.constant( false );
    else if ( nd.type == node_type::variable )
      mapped[n] = result.var( nd.var );
    else
    {
      std::array<signal, 3> ch;
      for ( std::size_t i = 0; i < 3; ++i )
        ch[i] = mapped[nd.children[i].index] ^ nd.children[i].complemented;
      // the minority node computes the complement of the majority node
      mapped[n] = !result.create_gate( ch[0], ch[1], ch[2] );
    }
  }
  for ( auto const& r : net.roots() )
    result.add_root( r.name, mapped[r.sig.index] ^ r.sig.complemented );
  return push_inverters( result );
}

signal apply_proposition( network& net, signal u, signal f, signal g, signal d )
{
  return net.create_gate( u, net.create_and( f, !g ), net.create_and( g, d ) );
}

std::string to_expr_string( network const& net, signal s, std::span<std::string const> var_names )
{
  auto const& nd = net.at( s.index );
  switch ( nd.type )
  {
  case node_type::constant:
    return s.complemented ? "1" : "0";
  case node_type::variable:
  {
    std::string name = nd.var < var_names.size() ? var_names[nd.var] : "x" + std::to_string( nd.var );
    return s.complemented ? name + "'" : name;
  }
  case node_type::gate:
    break;
  }
  std::string out = net.kind() == gate_kind::minority ? "Min(" : "M(";
  for ( std::size_t i = 0; i < 3; ++i )
  {
    if ( i )
      out += ',';
    out += to_expr_string( net, nd.children[i], var_names );
  }
  out += ')';
  if ( s.complemented )
    out += '\'';
  return out;
}

namespace
{

class expr_parser
{
public:
  expr_parser( network& net, std::string_view text, std::span<std::string const> names )
      : net_( net ), text_( text ), names_( names )
  {
  }

  signal parse()
  {
    auto s = expression();
    skip_ws();
    if ( pos_ != text_.size() )
      fail( "unexpected trailing input" );
    return s;
  }

private:
  [[noreturn]] void fail( std::string const& message ) const
  {
    throw parse_error( message, 0u, pos_ + 1u );
  }

  void skip_ws()
  {
    while ( pos_ < text_.size() && std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
      ++pos_;
  }

  void expect( char c )
  {
    skip_ws();
    if ( pos_ >= text_.size() || text_[pos_] != c )
      fail( std::string( "expected '" ) + c + "'" );
    ++pos_;
  }

  signal expression()
  {
    auto s = primary();
    for ( skip_ws(); pos_ < text_.size() && text_[pos_] == '\''; skip_ws() )
    {
      ++pos_;
      s = !s;
    }
    return s;
  }

  signal primary()
  {
    skip_ws();
    if ( pos_ >= text_.size() )
      fail( "unexpected end of expression" );
    auto const c = text_[pos_];
    if ( c == '0' || c == '1' )
    {
      ++pos_;
      return net_.constant( c == '1' );
    }
    if ( !( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' ) )
      fail( std::string( "unexpected character '" ) + c + "'" );

    auto const start = pos_;
    while ( pos_ < text_.size() &&
            ( std::isalnum( static_cast<unsigned char>( text_[pos_] ) ) || text_[pos_] == '_' ) )
      ++pos_;
    std::string_view const ident = text_.substr( start, pos_ - start );

    auto const after_ident = pos_;
    skip_ws();
    bool const call = pos_ < text_.size() && text_[pos_] == '(';
    if ( call && ( ident == "M" || ident == "Maj" || ident == "Min" ) )
    {
      ++pos_;
      auto a = expression();
      expect( ',' );
      auto b = expression();
      expect( ',' );
      auto d = expression();
      expect( ')' );
      auto const g = net_.create_gate( a, b, d );
      // Min(x,y,z) = M(x,y,z)'
      bool const want_minority = ident == "Min";
      bool const is_minority = net_.kind() == gate_kind::minority;
      return want_minority != is_minority ? !g : g;
    }
    pos_ = after_ident;
    for ( std::size_t i = 0; i < names_.size(); ++i )
    {
      if ( names_[i] == ident )
        return net_.var( static_cast<unsigned>( i ) );
    }
    pos_ = start;
    fail( "unknown variable '" + std::string( ident ) + "'" );
  }

  network& net_;
  std::string_view text_;
  std::span<std::string const> names_;
  std::size_t pos_{ 0 };
};

} // namespace

signal parse_expr_into( network& net, std::string_view text, std::span<std::string const> var_names )
{
  return expr_parser( net, text, var_names ).parse();
}

network parse_expr( std::string_view text, std::span<std::string const> var_names )
{
  network net( static_cast<unsigned>( var_names.size() ) );
  auto const s = parse_expr_into( net, text, var_names );
  net.add_root( "f", s );
  return net;
}

} // namespace majsyn
