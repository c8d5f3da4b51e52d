#include "histq/collapse.hpp"

#include "histq/errors.hpp"

#include <set>

namespace histq {

namespace {

bool same_frame(const Frame& a, const Frame& b, double tol) {
    if (a.dim != b.dim || a.projectors.size() != b.projectors.size()) return false;
    for (std::size_t k = 0; k < a.projectors.size(); ++k) {
        if (a.projectors[k].label != b.projectors[k].label) return false;
        if (!approx_eq(a.projectors[k].matrix, b.projectors[k].matrix, tol)) return false;
    }
    return true;
}

std::vector<std::string> truncated_labels(const History& h, std::size_t n) {
    return {h.labels.begin(), h.labels.begin() + n};
}

History truncated(const History& h, std::size_t n) {
    History out;
    out.outcomes.assign(h.outcomes.begin(), h.outcomes.begin() + n);
    out.labels.assign(h.labels.begin(), h.labels.begin() + n);
    return out;
}

} // namespace

CollapseResult collapse(const HistoryOperator& c, const Projector& p, const Frame& extend_frame,
                        double tol) {
    int idx = -1;
    for (std::size_t k = 0; k < extend_frame.projectors.size(); ++k) {
        const Projector& member = extend_frame.projectors[k];
        if (member.label == p.label && approx_eq(member.matrix, p.matrix, tol)) {
            idx = static_cast<int>(k);
            break;
        }
    }
    if (idx < 0) {
        throw EngineError("collapse: projector '" + p.label + "' is not a member of frame '" +
                          extend_frame.label + "'");
    }
    const double before_norm = norm_sq(c.matrix);
    if (before_norm <= tol) {
        throw EngineError("collapse: history operator has ~zero norm; the recorded outcomes "
                          "are already impossible");
    }

    Schedule extended = c.schedule;
    Slot& last = extended.slots.back();
    if (!last.recorded && same_frame(last.frame, extend_frame, tol)) {
        last.recorded = static_cast<std::size_t>(idx);
    } else {
        extended.slots.push_back(
            {ComplexMatrix::identity(extended.dim), extend_frame, static_cast<std::size_t>(idx)});
    }

    CollapseResult res;
    res.before = c;
    res.after = history_operator(extended);
    res.probability = norm_sq(res.after.matrix) / before_norm;
    auto diff = content_diff(res.before, res.after);
    res.removed = std::move(diff.first);
    res.added = std::move(diff.second);
    return res;
}

std::pair<std::vector<History>, std::vector<History>> content_diff(const HistoryOperator& before,
                                                                   const HistoryOperator& after) {
    const std::size_t nb = before.schedule.slots.size();
    const std::size_t na = after.schedule.slots.size();
    if (before.schedule.dim != after.schedule.dim || (na != nb && na != nb + 1)) {
        throw EngineError("content_diff: schedules are not related by a single measurement");
    }
    std::size_t new_records = 0;
    for (std::size_t k = 0; k < nb; ++k) {
        const Slot& sb = before.schedule.slots[k];
        const Slot& sa = after.schedule.slots[k];
        if (sb.frame.projectors.size() != sa.frame.projectors.size()) {
            throw EngineError("content_diff: slot " + std::to_string(k + 1) + " frames differ");
        }
        if (sb.recorded != sa.recorded) {
            if (sb.recorded || !sa.recorded) {
                throw EngineError("content_diff: slot " + std::to_string(k + 1) +
                                  " records are incompatible");
            }
            ++new_records;
        }
    }
    if (na == nb + 1) {
        if (!after.schedule.slots.back().recorded) {
            throw EngineError("content_diff: appended slot carries no recorded outcome");
        }
        ++new_records;
    }
    if (new_records != 1) {
        throw EngineError("content_diff: expected exactly one new recorded outcome, found " +
                          std::to_string(new_records));
    }

    std::set<std::vector<std::string>> before_keys, after_keys;
    for (const auto& ch : before.content) before_keys.insert(ch.history.labels);
    for (const auto& ch : after.content) after_keys.insert(truncated_labels(ch.history, nb));

    std::vector<History> removed, added;
    std::set<std::vector<std::string>> emitted;
    for (const auto& ch : before.content) {
        if (!after_keys.count(ch.history.labels) && emitted.insert(ch.history.labels).second) {
            removed.push_back(ch.history);
        }
    }
    emitted.clear();
    for (const auto& ch : after.content) {
        auto key = truncated_labels(ch.history, nb);
        if (!before_keys.count(key) && emitted.insert(key).second) {
            added.push_back(truncated(ch.history, nb));
        }
    }
    return {std::move(removed), std::move(added)};
}

} // namespace histq
