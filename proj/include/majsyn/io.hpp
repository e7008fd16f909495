#pragma once

#include "majsyn/network.hpp"
#include "majsyn/truth_table.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace majsyn
{

/*! \brief Parses the Berkeley PLA subset.

  Directives: .i .o .p .ilb .ob .type (f, fd or fr) and .e/.end.  Cube
  input parts use 0, 1 and -; output parts use 0, 1, - and ~.  With type fr
  an output 1 adds the minterms to the onset and 0 to the offset; minterms
  no cube mentions are don't cares, and a minterm in both sets is an error.
  With types f and fd (the default) minterms are off unless a cube puts
  them on; in fd an output - marks don't cares.  Errors carry the line.
*/
multi_output_spec parse_pla( std::string_view text );

/// Writes `spec` as a .type fr PLA with one line per minterm defined for any output.
std::string emit_pla( multi_output_spec const& spec );

/*! \brief Parses the minterm-list format.

      .vars 3
      .inputs a b c        (optional)
      f = (0,3,6)
      g = (1,2) dc (5)     (optional don't-care list)

  Minterms not listed are off.  `#` starts a comment.
*/
multi_output_spec parse_minterm_list( std::string_view text );

/// Picks the format from the content: `.vars` selects the minterm list, anything else is PLA.
multi_output_spec parse_spec( std::string_view text );
multi_output_spec read_spec_file( std::filesystem::path const& path );

/*! \brief Parses a netlist: `.inputs a b c` followed by `name = expr` lines.

  Expressions use the M/Maj/Min grammar.  Each line adds one root in order.
  The network is a minority network when every gate is written Min(...).
*/
network parse_netlist( std::string_view text, std::vector<std::string>* input_names = nullptr );

/// The inverse of `parse_netlist`.
std::string emit_netlist( network const& net, std::vector<std::string> const& input_names );

std::string read_text_file( std::filesystem::path const& path );

} // namespace majsyn
