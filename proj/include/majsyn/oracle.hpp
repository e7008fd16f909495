#pragma once

#include "majsyn/network.hpp"
#include "majsyn/truth_table.hpp"

#include <cstdint>
#include <optional>

namespace majsyn
{

/// Seed of the sampled equivalence mode; fixed so reports are reproducible.
inline constexpr std::uint64_t sample_seed = 0x6d616a73796eu;

struct check_mode
{
  bool exhaustive{ true };
  std::uint64_t samples{ 0 };

  static check_mode all() { return { true, 0 }; }
  static check_mode sampled( std::uint64_t n ) { return { false, n }; }
};

struct equivalence_report
{
  bool equivalent{ true };
  std::optional<std::uint64_t> first_counterexample;
  /// Index of the first output that disagrees at the counterexample.
  std::optional<std::size_t> failing_output;
  std::uint64_t checked{ 0 };
};

/*! \brief Compares every root of `net` with the matching output of `spec`.

  Don't-care positions are skipped.  Exhaustive mode visits all assignments
  in increasing order, so the counterexample is the smallest failing one.
  Sampled mode draws assignments from a generator seeded with `sample_seed`.
*/
equivalence_report check_equivalence( network const& net, multi_output_spec const& spec,
                                      check_mode mode = check_mode::all() );

struct optimal_result
{
  unsigned min_nom{ 0 };
  network witness;
  std::uint64_t explored{ 0 };
};

/*! \brief Exact minimum majority-gate count by iterative deepening.

  Chains of g = 0, 1, ... gates are enumerated over constants, inputs and
  earlier gates.  A gate has at most one complemented operand (self-duality
  moves the rest to its output), operands are strictly increasing, every
  gate but the last must feed a later gate, and independent neighbours are
  kept in increasing order.  Returns nullopt when no chain of at most
  `max_gates` gates exists.  Supports up to 6 inputs; the search is only
  practical for 3 or 4.
*/
std::optional<optimal_result> optimal_synth( truth_table const& spec, unsigned max_gates = 7u );

} // namespace majsyn
