#pragma once

#include "majsyn/network.hpp"
#include "majsyn/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace majsyn
{

struct bench_reference
{
  std::uint32_t levels{ 0 };
  std::uint32_t gates{ 0 };
  std::uint32_t inverters{ 0 };
};

struct bench_entry
{
  std::string name;
  /// Resolved against the suite file's directory.
  std::filesystem::path file;
  std::string source;
  bench_reference reference;
  double gate_tolerance{ 1.25 };
  std::uint32_t level_slack{ 1 };
  std::uint32_t inverter_slack{ 1 };
  /// Informational entries are reported but never fail the suite.
  bool informational{ false };

  std::uint32_t gate_limit() const;
};

/*! \brief Reads a TOML suite.

  A `[defaults]` table may set gate_tolerance, level_slack and
  inverter_slack; each `[[benchmark]]` needs name, file and a reference
  table with levels, gates and inverters, and may override the defaults or
  set `status = "informational"`.  Throws parse_error with the line number.
*/
std::vector<bench_entry> load_suite( std::filesystem::path const& path );

struct bench_outcome
{
  bench_entry entry;
  unsigned inputs{ 0 };
  std::size_t outputs{ 0 };
  metrics got;
  bool verified{ false };
  bool within_gates{ false };
  bool within_levels{ false };
  bool within_inverters{ false };
  double wall_ms{ 0.0 };
  /// Non-empty when the entry could not be run.
  std::string failure;

  bool passed() const noexcept { return failure.empty() && verified && within_gates && within_levels && within_inverters; }
};

bench_outcome run_bench_entry( bench_entry const& entry, synth_config const& cfg );

/// Runs every entry on up to `jobs` threads; results keep suite order.
std::vector<bench_outcome> run_suite( std::vector<bench_entry> const& entries, synth_config const& cfg, unsigned jobs );

/// Comparison table, one row per entry; timing column only if `timing`.
std::string format_bench_table( std::vector<bench_outcome> const& outcomes, bool timing );

} // namespace majsyn
