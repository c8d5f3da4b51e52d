#pragma once

#include "histq/histories.hpp"

#include <utility>
#include <vector>

namespace histq {

// Outcome of applying one measured projector to a history operator:
// C → P·C, with the record written into the schedule.  `removed` and
// `added` are the content diff — `added` nonempty means the measurement
// opened up histories that interference had previously erased.
struct CollapseResult {
    HistoryOperator before;
    HistoryOperator after;
    double probability = 0.0;
    std::vector<History> removed;
    std::vector<History> added;
};

// Applies outcome p (a member of extend_frame) at the next measurement
// time.  When the last slot already carries extend_frame and is
// unrecorded, the record lands there; otherwise a new slot (unitary I,
// frame = extend_frame) is appended.  Non-destructive: `c` stays valid.
// With a post-selected schedule the record lands before the final
// projector, so after.matrix is P_φ·P·W rather than P·C.
CollapseResult collapse(const HistoryOperator& c, const Projector& p, const Frame& extend_frame,
                        double tol = kEntryTol);

// Label-sequence set difference of the two contents, truncated to the
// slots the schedules share.  `after` must extend `before` by exactly
// one recorded outcome (at an existing slot or one appended slot).
std::pair<std::vector<History>, std::vector<History>> content_diff(const HistoryOperator& before,
                                                                   const HistoryOperator& after);

} // namespace histq
