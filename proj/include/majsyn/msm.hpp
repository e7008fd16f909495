#pragma once

#include "majsyn/network.hpp"
#include "majsyn/truth_table.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace majsyn
{

/// Three distinct variable indices, stored in increasing order.
class variable_triple
{
public:
  variable_triple( unsigned x, unsigned y, unsigned z );

  std::array<unsigned, 3> const& vars() const noexcept { return vars_; }
  unsigned operator[]( std::size_t i ) const { return vars_.at( i ); }
  friend auto operator<=>( variable_triple const&, variable_triple const& ) = default;

private:
  std::array<unsigned, 3> vars_;
};

/// All C(num_vars, 3) triples in lexicographic order.
std::vector<variable_triple> all_triples( unsigned num_vars );

/*! \brief One column of a majority specification matrix.

  Polarity bit 2 belongs to the first variable of the triple, bit 0 to the
  last; a set bit means the variable enters uncomplemented.  Column 010 over
  (a, b, c) is therefore M(a', b, c').
*/
struct msm_column
{
  variable_triple triple;
  std::uint8_t polarity;
  truth_table spec;
};

/// The eight columns over `triple` in polarity order 000..111, each evaluated
/// over all `num_vars` inputs (constant along the other variables).
std::vector<msm_column> build_msm( unsigned num_vars, variable_triple const& triple );

struct column_source
{
  variable_triple triple;
  std::uint8_t polarity;
};

struct literal_source
{
  unsigned var;
  bool positive;
};

/// M(c, x, y) with a constant input, i.e. the AND (c = 0) or OR (c = 1) of two literals.
struct padded_source
{
  bool constant;
  unsigned var_a;
  bool positive_a;
  unsigned var_b;
  bool positive_b;
};

/// A previously synthesized single-root expression.
struct external_source
{
  std::shared_ptr<network const> expr;
  std::string label;
};

/*! \brief A base function the synthesis methods may start from. */
struct candidate_base
{
  std::variant<column_source, literal_source, padded_source, external_source> source;
  truth_table spec;

  static candidate_base from_column( unsigned num_vars, variable_triple const& triple, std::uint8_t polarity );
  static candidate_base from_literal( unsigned num_vars, unsigned var, bool positive );
  static candidate_base from_padded( unsigned num_vars, bool constant, unsigned var_a, bool positive_a, unsigned var_b,
                                     bool positive_b );
  /// `expr` must be a single-root network over the same inputs.
  static candidate_base from_external( network expr, std::string label );

  unsigned complemented_inputs() const;
  /// Polarity code used for tie-breaking (column code; literal/padded phases packed similarly).
  unsigned polarity_code() const;
  /// Variables touched, used as the last tie-breaker.
  std::array<unsigned, 3> vars_key() const;

  /// Builds the base inside `net` and returns its signal.
  signal build( network& net ) const;
  std::string describe( std::span<std::string const> var_names ) const;
};

enum class candidate_tier : std::uint8_t
{
  columns_only,
  plus_literals,
  plus_constant_padded,
  plus_externals
};

/// Candidate bases for `spec`: MSM columns over every triple, then literals,
/// constant-padded pairs and externals according to `tier`.  Entries with the
/// same function are kept once (first occurrence wins).
std::vector<candidate_base> candidate_pool( truth_table const& spec, std::vector<candidate_base> const& externals,
                                            candidate_tier tier );

/// Up to `top_k` candidates with the smallest distance to `spec`.  Ties go to
/// fewer complemented inputs, then lower polarity code, then smaller variables.
std::vector<candidate_base> rank_candidates( truth_table const& spec, std::vector<candidate_base> const& pool,
                                             std::size_t top_k );

} // namespace majsyn
