#pragma once

#include "majsyn/truth_table.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace majsyn
{

/// Edge into the network: a node index plus an optional complement.
struct signal
{
  std::uint32_t index{ 0 };
  bool complemented{ false };

  signal operator!() const noexcept { return { index, !complemented }; }
  signal operator^( bool c ) const noexcept { return { index, complemented != c }; }
  friend auto operator<=>( signal const&, signal const& ) = default;
};

enum class gate_kind : std::uint8_t
{
  majority,
  minority
};

enum class node_type : std::uint8_t
{
  constant,
  variable,
  gate
};

struct node
{
  node_type type{ node_type::constant };
  std::uint32_t var{ 0 };
  std::array<signal, 3> children{};
};

struct root
{
  std::string name;
  signal sig;
};

/*! \brief Hash-consed network of three-input majority (or minority) gates.

  Node 0 is constant zero, nodes 1..num_vars are the primary inputs.  Gate
  children are kept sorted, so structurally identical gates share one node.
  `create_gate` applies the trivial identities M(x,x,y) = x and M(x,x',y) = y
  eagerly; nothing else is simplified (a gate with a constant input is still
  a gate).

  Nodes are only ever appended, so index order is a topological order.
*/
class network
{
public:
  explicit network( unsigned num_vars = 0u, gate_kind kind = gate_kind::majority );

  unsigned num_vars() const noexcept { return num_vars_; }
  gate_kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  node const& at( std::uint32_t index ) const { return nodes_.at( index ); }
  bool is_gate( std::uint32_t index ) const { return nodes_.at( index ).type == node_type::gate; }
  bool is_constant( signal s ) const { return s.index == 0u; }

  signal constant( bool value ) const noexcept { return { 0u, value }; }
  signal var( unsigned i ) const;

  signal create_gate( signal a, signal b, signal c );
  /// AND / OR built from a gate with a constant input.
  signal create_and( signal a, signal b );
  signal create_or( signal a, signal b );

  /// Copies the cone of `s` from `src`.  When `var_map` is non-empty, input `i`
  /// of `src` is replaced by `var_map[i]`.
  signal import( network const& src, signal s, std::span<signal const> var_map = {} );

  void add_root( std::string name, signal s );
  std::vector<root> const& roots() const noexcept { return roots_; }
  void set_root( std::size_t i, signal s ) { roots_.at( i ).sig = s; }

  /// Simulates every node over all minterms.
  std::vector<truth_table> simulate() const;
  /// Function of every root, complement included.
  std::vector<truth_table> root_functions() const;
  truth_table function_of( signal s ) const;
  /// Evaluates all roots on one assignment.
  std::vector<bool> eval( std::uint64_t assignment ) const;

private:
  std::size_t slot_of( std::array<signal, 3> const& children ) const noexcept;
  void grow_table();

  unsigned num_vars_;
  gate_kind kind_;
  std::vector<node> nodes_;
  std::vector<root> roots_;
  // open-addressing structural hash: gate node indices, 0 marks an empty slot
  std::vector<std::uint32_t> table_;
  std::size_t num_gates_{ 0 };
};

/// Network with exactly one root named "f", the unit produced by synthesis.
network make_expr( network net, signal s, std::string name = "f" );
signal expr_root( network const& expr );

/*! \brief Cost vector of a network.

  `noi` counts distinct complemented nets: a node referenced complemented at
  least once (by a gate or a root) needs one inverter, however often it is
  used.  Complemented constants are constants and cost nothing.  `levels`
  counts gates only.
*/
struct metrics
{
  std::uint32_t nom{ 0 };
  std::uint32_t levels{ 0 };
  std::uint32_t noi{ 0 };
  std::uint32_t shared{ 0 };

  std::uint32_t ntg() const noexcept { return nom + noi; }
  /// Lexicographic cost order: gates, then levels, then inverters.
  auto cost_key() const noexcept { return std::array<std::uint32_t, 3>{ nom, levels, noi }; }
  bool better_than( metrics const& other ) const noexcept { return cost_key() < other.cost_key(); }
  friend bool operator==( metrics const&, metrics const& ) = default;
};

metrics compute_metrics( network const& net );
/// Metrics of a single cone, as if `s` were the only root.
metrics compute_metrics( network const& net, signal s );

/// Copy holding only the nodes reachable from the roots.
network cleanup( network const& net );

/// Moves complements across gates (M(a',b',c') = M(a,b,c)') while the
/// inverter count strictly drops.  Root functions are preserved.
network push_inverters( network const& net );

/// Reinterprets every gate as a minority gate, adjusting edge complements so
/// that every root keeps its function.
network to_minority( network const& net );

/// u(fg' + gd) as M(u, M(f, g', 0), M(g, d, 0)).
signal apply_proposition( network& net, signal u, signal f, signal g, signal d );

/// Prints `s` in the M(...) expression grammar, expanding shared nodes.
std::string to_expr_string( network const& net, signal s, std::span<std::string const> var_names );

/// Parses one expression; `var_names[i]` names input i.
network parse_expr( std::string_view text, std::span<std::string const> var_names );
/// Parses into an existing network and returns the expression's signal.
signal parse_expr_into( network& net, std::string_view text, std::span<std::string const> var_names );

} // namespace majsyn
