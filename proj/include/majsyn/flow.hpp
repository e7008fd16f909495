#pragma once

#include "majsyn/network.hpp"
#include "majsyn/synth.hpp"
#include "majsyn/truth_table.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace majsyn
{

/// Where the expression of one output came from.
struct output_provenance
{
  std::string method;
  std::string base;
  bool complement_side{ false };
  bool reuse_phase{ false };
};

/*! \brief Result of multi-output synthesis.

  `net` has one root per output, in spec order.  `totals` is measured on the
  merged, hash-consed network, so shared gates count once.
*/
struct flow_result
{
  network net;
  std::vector<metrics> per_output;
  metrics totals;
  std::vector<output_provenance> provenance;
};

struct flow_options
{
  /// Worker threads for per-output candidate generation; 0 picks the hardware concurrency.
  unsigned jobs{ 1 };
  /// Candidates kept per output for the selection phase.
  std::size_t keep_per_output{ 12 };
  /// Candidates of each other output injected as externals during reuse.
  std::size_t reuse_top{ 3 };
  /// Largest number of combinations searched exhaustively.
  std::size_t exhaustive_limit{ 100000 };
};

/// Chosen candidate index per output and the merged cost of the choice.
struct selection
{
  std::vector<std::size_t> chosen;
  metrics merged;
};

/*! \brief Picks one candidate per output minimizing the merged cost.

  Each candidate is a single-root network over the shared inputs.  Cost is
  (total nom, max levels, total noi) of the merged network; more shared gates
  break ties, then the smaller index vector.  The search is exhaustive when
  the number of combinations is at most `exhaustive_limit`, otherwise greedy
  starting from each output's first candidate with two refinement passes.
*/
selection choose_variant( std::vector<std::vector<network>> const& candidates, std::size_t exhaustive_limit = 100000 );

/// Merges the chosen candidates into one network with a root per output.
network merge_selection( std::vector<std::vector<network>> const& candidates, std::vector<std::size_t> const& chosen,
                         std::vector<std::string> const& names );

/*! \brief Multi-output synthesis.

  Each output is projected onto the variables it depends on and synthesized
  there, directly and through its complement.  A second round re-synthesizes
  every output with the best expressions of the other outputs as extra
  bases.  One candidate per output is then selected for the lowest merged
  cost, inverters are pushed, and every output is verified.
*/
flow_result synthesize_multi( multi_output_spec const& spec, synth_config const& cfg,
                              flow_options const& options = {} );

} // namespace majsyn
