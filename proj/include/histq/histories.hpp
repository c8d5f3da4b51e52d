#pragma once

#include "histq/experiment.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace histq {

// One assignment of a measurement outcome to every slot.
struct History {
    std::vector<std::size_t> outcomes; // index into each slot's frame
    std::vector<std::string> labels;   // matching projector labels
};

// The operator product selecting one history: P_αn·U_n ··· P_α1·U_1·P_ψ,
// with the final-state projector P_φ leftmost when the schedule is
// post-selected.
struct ChainOperator {
    History history;
    ComplexMatrix matrix;
};

// Σ over all record-compatible chains.  `matrix` always includes every
// chain, even fully destructive ones; `content` lists the histories
// that actually survive in the sum: a history is kept only if its
// outcome remains reachable at every stage once the unrecorded
// alternatives of the earlier slots are summed over (this is what makes
// destructive interference — e.g. a branch that cancels against its
// mirror image — drop out of the content while still being a perfectly
// valid chain on its own).
struct HistoryOperator {
    Schedule schedule;
    ComplexMatrix matrix;
    std::vector<ChainOperator> content;
    std::size_t total_enumerated = 0; // all record-compatible outcome tuples
};

inline constexpr double kPruneTol = 1e-12;
inline constexpr std::size_t kHistoryBudget = 1000000;

// Fills labels from outcome indices; validates length, range, and
// record compatibility.
History make_history(const Schedule& s, const std::vector<std::size_t>& outcomes);

ChainOperator chain_operator(const Schedule& s, const History& h);

// Tr(C†C).  The trace is evaluated as a complex number and its
// imaginary part checked against tol — a nonzero imaginary part means
// the chain was corrupted somewhere.
double weight(const ChainOperator& c, double tol = kEntryTol);

// All record-compatible chains with weight > kPruneTol, in lexicographic
// outcome order (earliest slot varying slowest).  `total` (if non-null)
// receives the count of ALL compatible tuples, pruned ones included.
// Enumeration reuses partial chain products along the DFS prefix, so no
// factor is ever re-multiplied.
std::vector<ChainOperator> enumerate_histories(const Schedule& s, std::size_t* total = nullptr);

HistoryOperator history_operator(const Schedule& s);

// The complex number A with C_{ψ,α,φ} = |φ⟩A⟨ψ|; requires a
// post-selected schedule.  |A|² equals the chain's weight.
Complex amplitude(const Schedule& s, const History& h);

} // namespace histq
