#pragma once

#include "majsyn/cover.hpp"
#include "majsyn/msm.hpp"
#include "majsyn/network.hpp"
#include "majsyn/truth_table.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace majsyn
{

/*! \brief Knobs of single-output synthesis.

  `max_depth` bounds the tree recursion; unset means `num_vars - 2` (at least 1).
  A sub-function is synthesized recursively when its minimized cover has more
  than `recursion_threshold` implicants.
*/
struct synth_config
{
  std::size_t top_k_bases{ 4 };
  candidate_tier tier{ candidate_tier::plus_constant_padded };
  std::optional<unsigned> max_depth;
  std::size_t postprocess_budget{ 20000 };
  std::size_t recursion_threshold{ 2 };

  /// Throws config_error on out-of-range fields.
  void validate() const;
  unsigned depth_limit( unsigned num_vars ) const;
};

enum class decomposition_mode : std::uint8_t
{
  method1,
  method2,
  combined
};

/*! \brief F = M(f1, f2, f3) with f1 fixed.

  `f2_spec` is the raw requirement on f2 (F where F differs from f1, don't
  care elsewhere) and `f2` the completion actually used.  `f3_spec` is
  derived from `f2`: F where f2 differs from f1, don't care elsewhere.
*/
struct decomposition
{
  candidate_base f1;
  truth_table f2_spec;
  truth_table f2;
  truth_table f3_spec;
  decomposition_mode mode{ decomposition_mode::method2 };
};

enum class stage_order : std::uint8_t
{
  and_then_or,
  or_then_and
};

/// AND correction of the base followed by an OR correction (or the reverse).
/// A stage whose corrector minimizes to its absorbing constant is skipped.
network method1( truth_table const& spec, candidate_base const& base, stage_order order = stage_order::and_then_or );

/// f2 from the base mismatches, minimized and resolved, then f3 from the resolved f2.
decomposition method2( truth_table const& spec, candidate_base const& base );

/// One correction stage on the base (the cheaper of AND and OR), then method2
/// with the corrected expression as f1.
network method_combined( truth_table const& spec, candidate_base const& base );

/// Reassigns the flexible values of f2 and f3 to lower the cost of the
/// assembled M(f1, f2, f3).  Minterms where F differs from f1 stay fixed.
/// Explores at most `budget` assignments.  Cost is measured after inverter
/// pushing and the result is never costlier than `dec`.
decomposition postprocess( decomposition const& dec, truth_table const& spec, std::size_t budget );

/// M(f1, f2, f3) with f2 and f3 realized as two-level expressions.
network assemble( decomposition const& dec );

struct synth_candidate
{
  network expr;
  metrics cost;
  std::string method;
  std::string base;
};

namespace detail
{
class engine;
}

/*! \brief Memoizing synthesizer for one input space, configuration and set
  of externals.  Results are pure functions of those and the spec, so one
  instance may serve many specs.  Not thread-safe.
*/
class synthesizer
{
public:
  synthesizer( unsigned num_vars, synth_config const& cfg, std::vector<candidate_base> const& externals = {} );
  ~synthesizer();
  synthesizer( synthesizer&& ) noexcept;
  synthesizer& operator=( synthesizer&& ) noexcept;

  /// Same contract as `synth_single`.
  std::vector<synth_candidate> const& run( truth_table const& spec );
  /// Number of memoized entries.
  std::size_t memo_size() const noexcept;

private:
  std::unique_ptr<detail::engine> impl_;
};

/*! \brief Candidate expressions for one output, best first.

  Runs method1 (both stage orders), method2 with post-processing and the
  combined method on the `top_k_bases` best-ranked bases, plus the two-level
  baseline and any pool member that already matches.  Sub-functions with
  large covers are synthesized recursively as their own main functions.
  Every candidate is verified against `spec` (soundness_error otherwise) and
  the list is sorted by (nom, levels, noi), duplicates removed.
*/
std::vector<synth_candidate> synth_single( truth_table const& spec, synth_config const& cfg,
                                           std::vector<candidate_base> const& externals = {} );

} // namespace majsyn
