#pragma once

#include "majsyn/network.hpp"
#include "majsyn/truth_table.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace majsyn
{

/*! \brief Product term (cube).

  Bit `k` of `mask` is set when the variable at minterm bit position `k`
  appears as a literal; the same bit of `bits` gives its phase.  Position
  `k` belongs to variable `num_vars - 1 - k`.  An empty mask is the
  constant-one cube.
*/
struct implicant
{
  std::uint32_t mask{ 0 };
  std::uint32_t bits{ 0 };

  unsigned literal_count() const noexcept;
  bool covers( std::uint64_t minterm ) const noexcept { return ( minterm & mask ) == bits; }
  /// Phase of variable `var` in this cube, or nullopt when absent.
  std::optional<bool> literal( unsigned var, unsigned num_vars ) const noexcept;

  friend auto operator<=>( implicant const&, implicant const& ) = default;
};

/// Sum of products over `num_vars` inputs; no implicants means constant zero.
struct cover
{
  unsigned num_vars{ 1 };
  std::vector<implicant> implicants;

  bool is_zero() const noexcept { return implicants.empty(); }
  bool is_one() const noexcept;
  unsigned literal_count() const noexcept;
  /// Majority gates used by `cover_to_majority` before structural hashing.
  unsigned gate_count() const noexcept;
  /// The completely specified function the cover computes.
  truth_table function() const;
};

/*! \brief Two-level minimization of an incompletely specified function.

  Prime implicants are generated Quine-McCluskey style from onset and dcset.
  The covering problem is solved exactly by branch and bound for up to five
  variables and greedily above (essential primes, then largest coverage, ties
  by fewer literals).  The result is minimal in (implicants, literals) among
  the explored covers and deterministic.
*/
cover minimize( truth_table const& spec );

/// All prime implicants of `spec` that cover at least one onset minterm.
std::vector<implicant> prime_implicants( truth_table const& spec );

/// Balanced AND trees M(x, y, 0) per implicant, joined by a balanced OR tree M(x, y, 1).
signal cover_to_majority( network& net, cover const& c );
network cover_to_majority( cover const& c );

/// Result of two-level synthesis with complement-side selection.
struct two_level_result
{
  network expr;
  truth_table function;
  cover chosen;
  bool complemented{ false };
};

/// Minimizes `spec` and its complement and keeps the complement side (with an
/// output inverter) only when it needs strictly fewer gates.
two_level_result two_level( truth_table const& spec );

} // namespace majsyn
