#include "majsyn/io.hpp"

#include "majsyn/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <unordered_set>

namespace majsyn
{

namespace
{

std::string_view trim( std::string_view s )
{
  auto const first = s.find_first_not_of( " \t\r" );
  if ( first == std::string_view::npos )
    return {};
  auto const last = s.find_last_not_of( " \t\r" );
  return s.substr( first, last - first + 1 );
}

std::string_view strip_comment( std::string_view s )
{
  auto const hash = s.find( '#' );
  return trim( hash == std::string_view::npos ? s : s.substr( 0, hash ) );
}

std::vector<std::string_view> split_ws( std::string_view s )
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while ( i < s.size() )
  {
    while ( i < s.size() && ( s[i] == ' ' || s[i] == '\t' ) )
      ++i;
    auto const start = i;
    while ( i < s.size() && s[i] != ' ' && s[i] != '\t' )
      ++i;
    if ( i > start )
      out.push_back( s.substr( start, i - start ) );
  }
  return out;
}

/// Iterates over lines with 1-based numbers.
template<class Fn>
void for_each_line( std::string_view text, Fn&& fn )
{
  std::size_t line = 0;
  while ( !text.empty() )
  {
    ++line;
    auto const nl = text.find( '\n' );
    fn( text.substr( 0, nl ), line );
    if ( nl == std::string_view::npos )
      break;
    text.remove_prefix( nl + 1 );
  }
}

std::uint64_t parse_uint( std::string_view s, std::size_t line, char const* what )
{
  std::uint64_t v = 0;
  auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc{} || ptr != s.data() + s.size() )
    throw parse_error( std::string( "expected a number for " ) + what + ", got '" + std::string( s ) + "'", line );
  return v;
}

std::vector<std::string> names_or_default( std::vector<std::string> names, std::size_t count, std::string const& prefix )
{
  if ( !names.empty() )
    return names;
  if ( count == 1u )
    return { prefix };
  for ( std::size_t i = 0; i < count; ++i )
    names.push_back( prefix + std::to_string( i ) );
  return names;
}

void check_unique( std::vector<std::string> const& names, std::size_t line, char const* what )
{
  std::unordered_set<std::string> seen;
  for ( auto const& n : names )
  {
    if ( !seen.insert( n ).second )
      throw parse_error( std::string( "duplicate " ) + what + " name '" + n + "'", line );
  }
}

/// Calls `fn(m)` for every minterm matching the input part of a cube.
template<class Fn>
void expand_cube( std::string_view cube, Fn&& fn )
{
  auto const n = cube.size();
  std::uint64_t fixed = 0, free_mask = 0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const bit = std::uint64_t{ 1 } << ( n - 1 - i );
    if ( cube[i] == '1' )
      fixed |= bit;
    else if ( cube[i] == '-' )
      free_mask |= bit;
  }
  // enumerate subsets of free_mask
  std::uint64_t sub = 0;
  do
  {
    fn( fixed | sub );
    sub = ( sub - free_mask ) & free_mask;
  } while ( sub != 0u );
}

enum class pla_type
{
  f,
  fd,
  fr
};

void set_bit( std::vector<std::uint64_t>& words, std::uint64_t m )
{
  words[m >> 6u] |= std::uint64_t{ 1 } << ( m & 63u );
}

bool test_bit( std::vector<std::uint64_t> const& words, std::uint64_t m )
{
  return ( words[m >> 6u] >> ( m & 63u ) ) & 1u;
}

} // namespace

multi_output_spec parse_pla( std::string_view text )
{
  std::optional<unsigned> num_inputs, num_outputs;
  std::vector<std::string> ilb, ob;
  std::size_t ilb_line = 0;
  auto type = pla_type::fd;
  bool ended = false;

  struct cube_line
  {
    std::string in, out;
    std::size_t line;
  };
  std::vector<cube_line> cubes;

  for_each_line( text, [&]( std::string_view raw, std::size_t line ) {
    auto const s = strip_comment( raw );
    if ( s.empty() || ended )
      return;
    auto const tokens = split_ws( s );
    auto const& head = tokens.front();
    if ( head[0] == '.' )
    {
      auto need_args = [&]( std::size_t k ) {
        if ( tokens.size() != k + 1 )
          throw parse_error( "directive " + std::string( head ) + " expects " + std::to_string( k ) + " argument(s)",
                             line );
      };
      if ( head == ".i" )
      {
        need_args( 1 );
        auto const v = parse_uint( tokens[1], line, ".i" );
        if ( v < 1u || v > truth_table::max_vars )
          throw parse_error( ".i must be between 1 and " + std::to_string( truth_table::max_vars ), line );
        num_inputs = static_cast<unsigned>( v );
      }
      else if ( head == ".o" )
      {
        need_args( 1 );
        auto const v = parse_uint( tokens[1], line, ".o" );
        if ( v < 1u || v > 4096u )
          throw parse_error( ".o must be between 1 and 4096", line );
        num_outputs = static_cast<unsigned>( v );
      }
      else if ( head == ".p" )
      {
        need_args( 1 );
        parse_uint( tokens[1], line, ".p" );
      }
      else if ( head == ".ilb" )
      {
        ilb.assign( tokens.begin() + 1, tokens.end() );
        ilb_line = line;
        check_unique( ilb, line, "input" );
      }
      else if ( head == ".ob" )
      {
        ob.assign( tokens.begin() + 1, tokens.end() );
        check_unique( ob, line, "output" );
      }
      else if ( head == ".type" )
      {
        need_args( 1 );
        if ( tokens[1] == "f" )
          type = pla_type::f;
        else if ( tokens[1] == "fd" )
          type = pla_type::fd;
        else if ( tokens[1] == "fr" )
          type = pla_type::fr;
        else
          throw parse_error( "unsupported .type '" + std::string( tokens[1] ) + "'", line );
      }
      else if ( head == ".e" || head == ".end" )
      {
        ended = true;
      }
      else
      {
        throw parse_error( "unsupported directive " + std::string( head ), line );
      }
      return;
    }

    if ( !num_inputs || !num_outputs )
      throw parse_error( "cube before .i and .o", line );
    std::string in, out;
    if ( tokens.size() == 2u )
    {
      in = tokens[0];
      out = tokens[1];
    }
    else if ( tokens.size() == 1u && tokens[0].size() == *num_inputs + *num_outputs )
    {
      in = tokens[0].substr( 0, *num_inputs );
      out = tokens[0].substr( *num_inputs );
    }
    else
    {
      // allow the input part to be split by blanks
      std::string all;
      for ( auto t : tokens )
        all += t;
      if ( all.size() != *num_inputs + *num_outputs )
        throw parse_error( "cube has the wrong number of columns", line );
      in = all.substr( 0, *num_inputs );
      out = all.substr( *num_inputs );
    }
    if ( in.size() != *num_inputs )
      throw parse_error( "cube input part has " + std::to_string( in.size() ) + " columns, expected " +
                             std::to_string( *num_inputs ),
                         line );
    if ( out.size() != *num_outputs )
      throw parse_error( "cube output part has " + std::to_string( out.size() ) + " columns, expected " +
                             std::to_string( *num_outputs ),
                         line );
    for ( std::size_t i = 0; i < in.size(); ++i )
    {
      if ( in[i] != '0' && in[i] != '1' && in[i] != '-' )
        throw parse_error( std::string( "invalid input character '" ) + in[i] + "'", line, i + 1 );
    }
    for ( std::size_t i = 0; i < out.size(); ++i )
    {
      if ( out[i] != '0' && out[i] != '1' && out[i] != '-' && out[i] != '~' )
        throw parse_error( std::string( "invalid output character '" ) + out[i] + "'", line, in.size() + i + 1 );
    }
    cubes.push_back( { std::move( in ), std::move( out ), line } );
  } );

  if ( !num_inputs )
    throw parse_error( "missing .i directive", 0 );
  if ( !num_outputs )
    throw parse_error( "missing .o directive", 0 );
  if ( !ilb.empty() && ilb.size() != *num_inputs )
    throw parse_error( ".ilb lists " + std::to_string( ilb.size() ) + " names for " + std::to_string( *num_inputs ) +
                           " inputs",
                       ilb_line );
  if ( !ob.empty() && ob.size() != *num_outputs )
    throw parse_error( ".ob does not match .o", 0 );

  auto const n = *num_inputs;
  auto const words = std::max<std::size_t>( 1u, ( std::size_t{ 1 } << n ) / 64u );
  std::vector<std::vector<std::uint64_t>> on( *num_outputs, std::vector<std::uint64_t>( words ) );
  auto off = on, dc = on;

  for ( auto const& c : cubes )
  {
    expand_cube( c.in, [&]( std::uint64_t m ) {
      for ( std::size_t o = 0; o < c.out.size(); ++o )
      {
        auto const ch = c.out[o];
        if ( type == pla_type::fr )
        {
          if ( ch == '1' )
          {
            if ( test_bit( off[o], m ) )
              throw parse_error( "minterm " + std::to_string( m ) + " is both on and off", c.line );
            set_bit( on[o], m );
          }
          else if ( ch == '0' )
          {
            if ( test_bit( on[o], m ) )
              throw parse_error( "minterm " + std::to_string( m ) + " is both on and off", c.line );
            set_bit( off[o], m );
          }
        }
        else if ( ch == '1' )
          set_bit( on[o], m );
        else if ( ch == '-' && type == pla_type::fd )
          set_bit( dc[o], m );
      }
    } );
  }

  auto const total_bits = std::uint64_t{ 1 } << n;
  auto const tail = total_bits >= 64u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << total_bits ) - 1u;
  multi_output_spec spec( n, ilb.empty() ? default_var_names( n ) : ilb );
  auto const names = names_or_default( ob, *num_outputs, "f" );
  for ( std::size_t o = 0; o < *num_outputs; ++o )
  {
    std::vector<std::uint64_t> care( words ), value( words );
    for ( std::size_t w = 0; w < words; ++w )
    {
      if ( type == pla_type::fr )
        care[w] = on[o][w] | off[o][w];
      else
        care[w] = ~dc[o][w]; // on+dc counts as dc
      value[w] = on[o][w] & care[w];
    }
    care.back() &= tail;
    value.back() &= tail;
    spec.add_output( names[o], truth_table::from_words( n, std::move( care ), std::move( value ) ) );
  }
  return spec;
}

std::string emit_pla( multi_output_spec const& spec )
{
  auto const n = spec.num_vars();
  auto const& outputs = spec.outputs();
  std::ostringstream os;
  os << ".i " << n << "\n.o " << outputs.size() << "\n";
  if ( !spec.input_names().empty() )
  {
    os << ".ilb";
    for ( auto const& name : spec.input_names() )
      os << ' ' << name;
    os << '\n';
  }
  os << ".ob";
  for ( auto const& o : outputs )
    os << ' ' << o.name;
  os << "\n.type fr\n";

  std::vector<std::string> lines;
  for ( std::uint64_t m = 0; m < ( std::uint64_t{ 1 } << n ); ++m )
  {
    std::string out;
    bool any = false;
    for ( auto const& o : outputs )
    {
      auto const v = o.table.get( m );
      out += v == tv::one ? '1' : v == tv::zero ? '0' : '-';
      any = any || v != tv::dont_care;
    }
    if ( !any )
      continue;
    std::string in( n, '0' );
    for ( unsigned i = 0; i < n; ++i )
      in[i] = ( ( m >> ( n - 1 - i ) ) & 1u ) ? '1' : '0';
    lines.push_back( in + ' ' + out );
  }
  os << ".p " << lines.size() << '\n';
  for ( auto const& l : lines )
    os << l << '\n';
  os << ".e\n";
  return os.str();
}

namespace
{

std::vector<std::uint64_t> parse_index_list( std::string_view s, std::size_t line, std::uint64_t limit )
{
  s = trim( s );
  if ( s.size() < 2u || s.front() != '(' || s.back() != ')' )
    throw parse_error( "expected a parenthesized minterm list", line );
  s = s.substr( 1, s.size() - 2 );
  std::vector<std::uint64_t> out;
  if ( trim( s ).empty() )
    return out;
  while ( true )
  {
    auto const comma = s.find( ',' );
    auto const item = trim( s.substr( 0, comma ) );
    auto const v = parse_uint( item, line, "minterm" );
    if ( v >= limit )
      throw parse_error( "minterm " + std::to_string( v ) + " out of range", line );
    out.push_back( v );
    if ( comma == std::string_view::npos )
      break;
    s.remove_prefix( comma + 1 );
  }
  return out;
}

} // namespace

multi_output_spec parse_minterm_list( std::string_view text )
{
  std::optional<unsigned> num_vars;
  std::vector<std::string> inputs;
  std::vector<std::string> names;
  std::vector<truth_table> tables;

  for_each_line( text, [&]( std::string_view raw, std::size_t line ) {
    auto const s = strip_comment( raw );
    if ( s.empty() )
      return;
    if ( s[0] == '.' )
    {
      auto const tokens = split_ws( s );
      if ( tokens[0] == ".vars" )
      {
        if ( tokens.size() != 2u )
          throw parse_error( ".vars expects one argument", line );
        auto const v = parse_uint( tokens[1], line, ".vars" );
        if ( v < 1u || v > truth_table::max_vars )
          throw parse_error( ".vars must be between 1 and " + std::to_string( truth_table::max_vars ), line );
        num_vars = static_cast<unsigned>( v );
      }
      else if ( tokens[0] == ".inputs" )
      {
        inputs.assign( tokens.begin() + 1, tokens.end() );
        check_unique( inputs, line, "input" );
        if ( num_vars && inputs.size() != *num_vars )
          throw parse_error( ".inputs does not match .vars", line );
        if ( !num_vars )
          num_vars = static_cast<unsigned>( inputs.size() );
      }
      else
        throw parse_error( "unsupported directive " + std::string( tokens[0] ), line );
      return;
    }
    if ( !num_vars )
      throw parse_error( "output before .vars", line );
    auto const eq = s.find( '=' );
    if ( eq == std::string_view::npos )
      throw parse_error( "expected 'name = (minterms)'", line );
    auto const name = std::string( trim( s.substr( 0, eq ) ) );
    if ( name.empty() || name.find_first_of( " \t" ) != std::string::npos )
      throw parse_error( "invalid output name", line );
    if ( std::find( names.begin(), names.end(), name ) != names.end() )
      throw parse_error( "duplicate output name '" + name + "'", line );
    auto rest = s.substr( eq + 1 );
    std::string_view dc_part;
    if ( auto const dc = rest.find( "dc" ); dc != std::string_view::npos )
    {
      dc_part = rest.substr( dc + 2 );
      rest = rest.substr( 0, dc );
    }
    auto const limit = std::uint64_t{ 1 } << *num_vars;
    auto const onset = parse_index_list( rest, line, limit );
    auto const dcset = dc_part.empty() ? std::vector<std::uint64_t>{} : parse_index_list( dc_part, line, limit );
    try
    {
      tables.push_back( truth_table::from_minterms( *num_vars, onset, dcset ) );
    }
    catch ( spec_conflict_error const& e )
    {
      throw parse_error( e.what(), line );
    }
    names.push_back( name );
  } );

  if ( !num_vars )
    throw parse_error( "missing .vars directive", 0 );
  if ( tables.empty() )
    throw parse_error( "no outputs listed", 0 );
  multi_output_spec spec( *num_vars, inputs.empty() ? default_var_names( *num_vars ) : inputs );
  for ( std::size_t i = 0; i < tables.size(); ++i )
    spec.add_output( names[i], std::move( tables[i] ) );
  return spec;
}

multi_output_spec parse_spec( std::string_view text )
{
  bool minterm_list = false;
  for_each_line( text, [&]( std::string_view raw, std::size_t ) {
    auto const s = strip_comment( raw );
    if ( s.starts_with( ".vars" ) )
      minterm_list = true;
  } );
  return minterm_list ? parse_minterm_list( text ) : parse_pla( text );
}

std::string read_text_file( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw error( "cannot open " + path.string() );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

multi_output_spec read_spec_file( std::filesystem::path const& path )
{
  return parse_spec( read_text_file( path ) );
}

namespace
{

/// Minority when every gate call in `text` is Min(...), majority otherwise.
gate_kind netlist_kind( std::string_view text )
{
  static std::regex const call( R"((^|[^A-Za-z0-9_])(M|Maj|Min)\s*\()" );
  bool any_min = false, any_maj = false;
  for_each_line( text, [&]( std::string_view raw, std::size_t ) {
    auto const s = std::string( strip_comment( raw ) );
    for ( std::sregex_iterator it( s.begin(), s.end(), call ), end; it != end; ++it )
      ( ( *it )[2] == "Min" ? any_min : any_maj ) = true;
  } );
  return any_min && !any_maj ? gate_kind::minority : gate_kind::majority;
}

} // namespace

network parse_netlist( std::string_view text, std::vector<std::string>* input_names )
{
  auto const kind = netlist_kind( text );
  std::optional<network> net;
  std::vector<std::string> inputs;
  std::unordered_set<std::string> roots;

  for_each_line( text, [&]( std::string_view raw, std::size_t line ) {
    auto const s = strip_comment( raw );
    if ( s.empty() )
      return;
    if ( s[0] == '.' )
    {
      auto const tokens = split_ws( s );
      if ( tokens[0] != ".inputs" )
        throw parse_error( "unsupported directive " + std::string( tokens[0] ), line );
      if ( net )
        throw parse_error( ".inputs appears twice", line );
      inputs.assign( tokens.begin() + 1, tokens.end() );
      if ( inputs.empty() || inputs.size() > truth_table::max_vars )
        throw parse_error( ".inputs must list between 1 and " + std::to_string( truth_table::max_vars ) + " names",
                           line );
      check_unique( inputs, line, "input" );
      net.emplace( static_cast<unsigned>( inputs.size() ), kind );
      return;
    }
    if ( !net )
      throw parse_error( "expression before .inputs", line );
    auto const eq = s.find( '=' );
    if ( eq == std::string_view::npos )
      throw parse_error( "expected 'name = expression'", line );
    auto name = std::string( trim( s.substr( 0, eq ) ) );
    if ( name.empty() || name.find_first_of( " \t" ) != std::string::npos )
      throw parse_error( "invalid output name", line );
    if ( !roots.insert( name ).second )
      throw parse_error( "duplicate output name '" + name + "'", line );
    try
    {
      auto const sig = parse_expr_into( *net, s.substr( eq + 1 ), inputs );
      net->add_root( std::move( name ), sig );
    }
    catch ( parse_error const& e )
    {
      throw parse_error( e.what(), line );
    }
  } );

  if ( !net )
    throw parse_error( "missing .inputs directive", 0 );
  if ( net->roots().empty() )
    throw parse_error( "netlist has no outputs", 0 );
  if ( input_names )
    *input_names = inputs;
  return std::move( *net );
}

std::string emit_netlist( network const& net, std::vector<std::string> const& input_names )
{
  if ( input_names.size() != net.num_vars() )
    throw arity_error( "input name count does not match the network" );
  std::ostringstream os;
  os << ".inputs";
  for ( auto const& n : input_names )
    os << ' ' << n;
  os << '\n';
  for ( auto const& r : net.roots() )
    os << r.name << " = " << to_expr_string( net, r.sig, input_names ) << '\n';
  return os.str();
}

} // namespace majsyn
