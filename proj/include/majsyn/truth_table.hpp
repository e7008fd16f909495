#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace majsyn
{

/// Value of an incompletely specified function at one minterm.
enum class tv : std::uint8_t
{
  zero,
  one,
  dont_care
};

/*! \brief Completely or incompletely specified single-output Boolean function.

  Values are stored as two bit masks: `care` marks the defined minterms and
  `value` holds their values.  Bits of `value` outside of `care` are always
  zero, which makes equality and hashing purely structural.

  Minterm `m` assigns variable `i` the bit `(m >> (num_vars - 1 - i)) & 1`,
  i.e. variable 0 is the most significant position of the minterm index.
*/
class truth_table
{
public:
  static constexpr unsigned max_vars = 20u;

  /// Constant zero over one variable.
  truth_table();
  explicit truth_table( unsigned num_vars, tv fill = tv::zero );

  static truth_table from_minterms( unsigned num_vars, std::span<std::uint64_t const> onset,
                                    std::span<std::uint64_t const> dcset = {} );
  static truth_table from_minterms( unsigned num_vars, std::initializer_list<std::uint64_t> onset,
                                    std::initializer_list<std::uint64_t> dcset = {} );
  static truth_table constant( unsigned num_vars, bool value );
  static truth_table nth_var( unsigned num_vars, unsigned var );

  /// Parses a string of '0', '1', 'X'/'-' characters listed in minterm order 0, 1, ...
  static truth_table from_string( std::string_view text );

  unsigned num_vars() const noexcept { return num_vars_; }
  std::uint64_t num_minterms() const noexcept { return std::uint64_t{ 1 } << num_vars_; }

  tv get( std::uint64_t minterm ) const;
  void set( std::uint64_t minterm, tv value );

  bool is_fully_specified() const noexcept;
  bool is_all_dont_care() const noexcept;
  /// True iff the constant `value` is compatible with every defined minterm.
  bool admits_constant( bool value ) const noexcept;

  std::vector<std::uint64_t> onset() const;
  std::vector<std::uint64_t> offset() const;
  std::vector<std::uint64_t> dcset() const;
  std::uint64_t count_onset() const noexcept;
  std::uint64_t count_care() const noexcept;

  truth_table complement() const;

  /// Variable `var` is irrelevant if every pair of minterms differing only in
  /// `var` is compatible (equal where both are defined).
  bool depends_on( unsigned var ) const;
  /// Removes an irrelevant variable, merging the two cofactors.
  truth_table drop_var( unsigned var ) const;

  std::span<std::uint64_t const> care_words() const noexcept { return care_; }
  std::span<std::uint64_t const> value_words() const noexcept { return value_; }

  std::string to_string() const;
  std::size_t hash() const noexcept;

  friend bool operator==( truth_table const&, truth_table const& ) = default;

  /* bitwise operations on fully specified tables */
  truth_table operator~() const;
  truth_table operator&( truth_table const& other ) const;
  truth_table operator|( truth_table const& other ) const;
  truth_table operator^( truth_table const& other ) const;

  /// Builds a table from raw word masks; value bits outside care are cleared.
  static truth_table from_words( unsigned num_vars, std::vector<std::uint64_t> care, std::vector<std::uint64_t> value );

private:
  std::uint64_t last_word_mask() const noexcept;
  void check_minterm( std::uint64_t minterm ) const;

  unsigned num_vars_{ 1 };
  std::vector<std::uint64_t> care_;
  std::vector<std::uint64_t> value_;
};

/// Number of minterms defined in both tables where their values differ.
std::uint64_t distance( truth_table const& a, truth_table const& b );

/// True iff the fully specified `concrete` agrees with `spec` on every defined minterm.
bool is_compatible( truth_table const& spec, truth_table const& concrete );

/// Bitwise majority of three fully specified tables.
truth_table maj( truth_table const& a, truth_table const& b, truth_table const& c );

/*! \brief Multi-output specification over a shared input space. */
struct output_spec
{
  std::string name;
  truth_table table;
};

class multi_output_spec
{
public:
  multi_output_spec() = default;
  multi_output_spec( unsigned num_vars, std::vector<std::string> input_names = {} );

  void add_output( std::string name, truth_table table );

  unsigned num_vars() const noexcept { return num_vars_; }
  std::vector<output_spec> const& outputs() const noexcept { return outputs_; }
  std::vector<std::string> const& input_names() const noexcept { return input_names_; }
  std::size_t num_outputs() const noexcept { return outputs_.size(); }

private:
  unsigned num_vars_{ 0 };
  std::vector<std::string> input_names_;
  std::vector<output_spec> outputs_;
};

/// Default variable names: a, b, c, ... for up to 26 inputs, x0, x1, ... beyond.
std::vector<std::string> default_var_names( unsigned num_vars );

} // namespace majsyn

template<>
struct std::hash<majsyn::truth_table>
{
  std::size_t operator()( majsyn::truth_table const& t ) const noexcept { return t.hash(); }
};
