#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cakecut/errors.hpp"
#include "cakecut/interval_set.hpp"
#include "cakecut/rational.hpp"
#include "cakecut/valuation.hpp"

namespace cakecut {

// A valuation is sliceable iff it has no jumps at all: any finite interval
// partition leaves one part carrying a full jump. When it is not, the
// obstruction names a largest jump.
struct SliceabilityReport {
    bool sliceable = false;
    std::optional<Jump> obstruction;
};

SliceabilityReport is_sliceable(const Valuation& v);

class NotSliceableError : public PreconditionError {
  public:
    explicit NotSliceableError(const Jump& j);
    const Jump& obstruction() const { return obstruction_; }

  private:
    Jump obstruction_;
};

// Partition of [0,1] into consecutive intervals, each of mass in (0, epsilon].
struct Slicing {
    std::vector<IntervalSet> pieces;
    std::vector<Mass> masses;
    Rational epsilon;
};

// Deterministic slicing by quantile cuts at masses eps, 2*eps, ...
// Piece count is ceil(totalMass/eps). Throws NotSliceableError on any jump,
// DomainError for eps <= 0 or a valuation of zero total mass.
Slicing slice(const Valuation& v, const Rational& epsilon);

struct GreedyStep {
    IntervalSet piece_chosen;
    Mass piece_mass;
    Mass remainder_mass;      // what is left after this pick
    Rational c_of_remainder;  // sup of achievable masses <= eps, before the pick
};

// Instrumented run of the greedy extraction procedure: repeatedly remove a
// sub-piece of mass in (c/2, c] where c = sup of achievable masses <= eps of
// the current remainder. Stops when the remainder mass drops to eps or below
// (terminated), when no positive admissible piece exists, or after max_iter
// steps. remainder_limit is the analytic limit of the remainder mass over an
// unbounded run: the total mass of jumps no admissible piece can ever capture.
struct GreedyTrace {
    std::vector<GreedyStep> steps;
    bool terminated = false;
    Mass final_remainder_mass;
    Rational remainder_limit;
    bool limit_is_zero = false;
};

GreedyTrace greedy_slicing(const Valuation& v, const Rational& epsilon, std::size_t max_iter);

struct AtomEntry {
    Rational x;
    Rational mass;
};

// Atoms plus continuous remainder. The remainder keeps the original segments
// and drops every jump, so it is always sliceable, and atom masses plus the
// remainder total equal the original total exactly.
struct Decomposition {
    std::vector<AtomEntry> atoms;
    Valuation remainder;
};

// Measures only: phantom jumps of a content have no point to carry their mass.
Decomposition decompose(const Valuation& v);

struct TruthRow {
    std::string fixture;
    Convention convention = Convention::Stieltjes;
    bool atom_free = false;
    bool sliceable = false;
    bool d_universal = false;
    bool dd_universal = false;
    bool theorem_consistent = false;
};

// One row per fixture. Analytic verdicts (continuity of the cdf) are
// cross-checked against sample_count random (piece, alpha) probes plus one
// constructed failing probe per jumpy fixture; a mismatch throws. For
// measures theorem_consistent states the biconditional
// d_universal <-> (sliceable and atom_free); content rows report the same
// computed value for observation.
std::vector<TruthRow> truth_table(const std::vector<Valuation>& fixtures, int sample_count,
                                  std::uint64_t seed);

} // namespace cakecut
