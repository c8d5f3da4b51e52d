#include "histq/histories.hpp"

#include "histq/errors.hpp"

#include <cmath>
#include <utility>

namespace histq {

namespace {

// Product of compatible-outcome counts, with the budget enforced.
std::size_t compatible_count(const Schedule& s) {
    std::size_t total = 1;
    for (const auto& slot : s.slots) {
        const std::size_t choices = slot.recorded ? 1 : slot.frame.projectors.size();
        if (total > kHistoryBudget / choices) {
            throw EngineError("history budget exceeded: more than " + std::to_string(kHistoryBudget) +
                              " histories to enumerate");
        }
        total *= choices;
    }
    return total;
}

ComplexMatrix initial_projector(const Schedule& s) { return outer(s.initial, s.initial); }

// Partial history operators W_0..W_n: W_0 = P_ψ, then one slot at a
// time with recorded outcomes applied and unrecorded frames summed out
// (a full frame sums to the identity, so the sum is just the unitary).
std::vector<ComplexMatrix> partial_operators(const Schedule& s) {
    std::vector<ComplexMatrix> w;
    w.reserve(s.slots.size() + 1);
    w.push_back(initial_projector(s));
    for (const auto& slot : s.slots) {
        ComplexMatrix next = slot.unitary * w.back();
        if (slot.recorded) next = slot.frame.projectors[*slot.recorded].matrix * next;
        w.push_back(std::move(next));
    }
    return w;
}

void enumerate_rec(const Schedule& s, std::size_t k, const ComplexMatrix& prefix,
                   std::vector<std::size_t>& outcomes, std::vector<ChainOperator>& out) {
    if (k == s.slots.size()) {
        ComplexMatrix chain = s.final ? outer(*s.final, *s.final) * prefix : prefix;
        if (norm_sq(chain) > kPruneTol) {
            out.push_back({make_history(s, outcomes), std::move(chain)});
        }
        return;
    }
    const Slot& slot = s.slots[k];
    const ComplexMatrix evolved = slot.unitary * prefix;
    const std::size_t lo = slot.recorded ? *slot.recorded : 0;
    const std::size_t hi = slot.recorded ? *slot.recorded + 1 : slot.frame.projectors.size();
    for (std::size_t a = lo; a < hi; ++a) {
        outcomes.push_back(a);
        enumerate_rec(s, k + 1, slot.frame.projectors[a].matrix * evolved, outcomes, out);
        outcomes.pop_back();
    }
}

// True iff the history stays visible in the summed operator: applying
// the suffix P_αn·U_n ··· P_αk·U_k (and P_φ, if any) to the partial
// operator W_{k-1} must leave something of norm² > kPruneTol for every
// k.  k = 1 is the chain-weight check itself.
bool survives_in_sum(const Schedule& s, const History& h, const std::vector<ComplexMatrix>& w) {
    const std::size_t n = s.slots.size();
    ComplexMatrix suffix =
        s.final ? outer(*s.final, *s.final) : ComplexMatrix::identity(s.dim);
    for (std::size_t k = n; k >= 1; --k) {
        const Slot& slot = s.slots[k - 1];
        suffix = suffix * slot.frame.projectors[h.outcomes[k - 1]].matrix * slot.unitary;
        if (norm_sq(suffix * w[k - 1]) <= kPruneTol) return false;
    }
    return true;
}

} // namespace

History make_history(const Schedule& s, const std::vector<std::size_t>& outcomes) {
    if (outcomes.size() != s.slots.size()) {
        throw EngineError("history has " + std::to_string(outcomes.size()) + " outcomes, schedule has " +
                          std::to_string(s.slots.size()) + " slots");
    }
    History h;
    h.outcomes = outcomes;
    h.labels.reserve(outcomes.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const Slot& slot = s.slots[k];
        if (outcomes[k] >= slot.frame.projectors.size()) {
            throw EngineError("history outcome " + std::to_string(outcomes[k]) + " out of range at slot " +
                              std::to_string(k + 1));
        }
        if (slot.recorded && *slot.recorded != outcomes[k]) {
            throw EngineError("history outcome '" + slot.frame.projectors[outcomes[k]].label +
                              "' conflicts with the recorded outcome '" +
                              slot.frame.projectors[*slot.recorded].label + "' at slot " +
                              std::to_string(k + 1));
        }
        h.labels.push_back(slot.frame.projectors[outcomes[k]].label);
    }
    return h;
}

ChainOperator chain_operator(const Schedule& s, const History& h) {
    require_valid(s);
    History checked = make_history(s, h.outcomes);
    ComplexMatrix m = initial_projector(s);
    for (std::size_t k = 0; k < s.slots.size(); ++k) {
        const Slot& slot = s.slots[k];
        m = slot.frame.projectors[checked.outcomes[k]].matrix * (slot.unitary * m);
    }
    if (s.final) m = outer(*s.final, *s.final) * m;
    return {std::move(checked), std::move(m)};
}

double weight(const ChainOperator& c, double tol) {
    const Complex t = trace(adjoint(c.matrix) * c.matrix);
    if (std::abs(t.imag()) > tol) {
        throw EngineError("weight trace has imaginary part " + std::to_string(t.imag()) +
                          "; chain operator is corrupted");
    }
    return t.real();
}

std::vector<ChainOperator> enumerate_histories(const Schedule& s, std::size_t* total) {
    require_valid(s);
    const std::size_t count = compatible_count(s);
    if (total) *total = count;
    std::vector<ChainOperator> out;
    std::vector<std::size_t> outcomes;
    enumerate_rec(s, 0, initial_projector(s), outcomes, out);
    return out;
}

HistoryOperator history_operator(const Schedule& s) {
    require_valid(s);
    HistoryOperator ho;
    ho.schedule = s;
    ho.total_enumerated = compatible_count(s);
    const auto w = partial_operators(s);
    ho.matrix = s.final ? outer(*s.final, *s.final) * w.back() : w.back();
    for (auto& chain : enumerate_histories(s)) {
        if (survives_in_sum(s, chain.history, w)) ho.content.push_back(std::move(chain));
    }
    return ho;
}

Complex amplitude(const Schedule& s, const History& h) {
    require_valid(s);
    if (!s.final) throw EngineError("amplitude needs a post-selected final state");
    History checked = make_history(s, h.outcomes);
    // Vector route, independent of the chain-matrix products:
    // A = ⟨φ| P_αn·U_n ··· P_α1·U_1 |ψ⟩.
    StateVector v = s.initial;
    for (std::size_t k = 0; k < s.slots.size(); ++k) {
        const Slot& slot = s.slots[k];
        v = slot.frame.projectors[checked.outcomes[k]].matrix * (slot.unitary * v);
    }
    return inner(*s.final, v);
}

} // namespace histq
