#include "histq/probability.hpp"

#include "histq/errors.hpp"

#include <cmath>
#include <utility>

namespace histq {

namespace {

void check_projector_dim(const Projector& p, std::size_t dim, const char* what) {
    if (p.matrix.dim() != dim) {
        throw std::invalid_argument(std::string(what) + ": projector dim " +
                                    std::to_string(p.matrix.dim()) + " != schedule dim " +
                                    std::to_string(dim));
    }
}

double real_checked(Complex z, double tol, const char* what) {
    if (std::abs(z.imag()) > tol) {
        throw EngineError(std::string(what) + ": imaginary part " + std::to_string(z.imag()) +
                          " exceeds tolerance");
    }
    return z.real();
}

} // namespace

Complex DecoherenceReport::condition_value(std::size_t b, std::size_t a) const {
    return gram[b][a] + std::conj(gram[a][b]);
}

double joint_probability(const Schedule& s, const History& h) {
    return weight(chain_operator(s, h));
}

double conditional_next(const Schedule& s, const Projector& p, double tol) {
    check_projector_dim(p, s.dim, "conditional_next");
    const HistoryOperator ho = history_operator(s);
    const StateVector v = ho.matrix * s.initial; // C P_ψ|ψ⟩ = C|ψ⟩, ψ normalized
    const double den = v.norm_sq();
    if (den <= tol) {
        throw EngineError("conditional_next: history operator has ~zero norm "
                          "(conditioning on an impossible record)");
    }
    const double num = real_checked(inner(v, p.matrix * v), tol, "conditional_next");
    return num / den;
}

double conditional_next_trace(const Schedule& s, const Projector& p, double tol) {
    check_projector_dim(p, s.dim, "conditional_next");
    const ComplexMatrix c = history_operator(s).matrix;
    const ComplexMatrix cdag = adjoint(c);
    const double den = real_checked(trace(cdag * c), tol, "conditional_next denominator");
    if (den <= tol) {
        throw EngineError("conditional_next: history operator has ~zero norm "
                          "(conditioning on an impossible record)");
    }
    const double num = real_checked(trace(cdag * (p.matrix * c)), tol, "conditional_next numerator");
    return num / den;
}

double intermediate_probability(const Schedule& s, std::size_t i, std::size_t beta, double tol) {
    require_valid(s);
    if (i >= s.slots.size()) {
        throw EngineError("intermediate_probability: slot " + std::to_string(i + 1) + " out of range");
    }
    const Slot& mid = s.slots[i];
    if (mid.recorded) {
        throw EngineError("intermediate_probability: slot " + std::to_string(i + 1) +
                          " already has a recorded outcome");
    }
    if (beta >= mid.frame.projectors.size()) {
        throw EngineError("intermediate_probability: outcome index out of range");
    }
    for (std::size_t j = 0; j < s.slots.size(); ++j) {
        if (j == i) continue;
        if (!s.slots[j].recorded && s.slots[j].frame.projectors.size() > 1) {
            throw EngineError("intermediate_probability: slot " + std::to_string(j + 1) +
                              " is neither recorded nor trivial; the formula needs every other "
                              "outcome pinned");
        }
    }
    std::vector<std::size_t> outcomes(s.slots.size());
    for (std::size_t j = 0; j < s.slots.size(); ++j) {
        outcomes[j] = s.slots[j].recorded ? *s.slots[j].recorded : 0;
    }
    double den = 0.0, num = 0.0;
    for (std::size_t g = 0; g < mid.frame.projectors.size(); ++g) {
        outcomes[i] = g;
        const double w = weight(chain_operator(s, make_history(s, outcomes)));
        den += w;
        if (g == beta) num = w;
    }
    if (den <= tol) {
        throw EngineError("intermediate_probability: conditioning set has ~zero probability");
    }
    return num / den;
}

double two_vector_probability(const StateVector& psi, const ComplexMatrix& u1, const Frame& frame,
                              const ComplexMatrix& u2, const StateVector& phi, std::size_t beta,
                              double tol) {
    if (!psi.is_normalized(kNormTol) || !phi.is_normalized(kNormTol)) {
        throw ValidationError("two_vector_probability: states must be normalized");
    }
    if (!is_unitary(u1) || !is_unitary(u2)) {
        throw ValidationError("two_vector_probability: evolutions must be unitary");
    }
    auto bad = frame.violations();
    if (!bad.empty()) throw ValidationError("two_vector_probability: invalid frame: " + bad.front());
    if (psi.dim() != frame.dim || phi.dim() != frame.dim || u1.dim() != frame.dim ||
        u2.dim() != frame.dim) {
        throw std::invalid_argument("two_vector_probability: dimension mismatch");
    }
    if (beta >= frame.projectors.size()) {
        throw EngineError("two_vector_probability: outcome index out of range");
    }
    const StateVector fw = u1 * psi;          // |ψ(t₁)⟩
    const StateVector bw = adjoint(u2) * phi; // |φ(t₁)⟩
    double den = 0.0, num = 0.0;
    for (std::size_t g = 0; g < frame.projectors.size(); ++g) {
        const double term = std::norm(inner(fw, frame.projectors[g].matrix * bw));
        den += term;
        if (g == beta) num = term;
    }
    if (den <= tol) {
        throw EngineError("two_vector_probability: pre/post-selected pair has ~zero overlap "
                          "through every outcome");
    }
    return num / den;
}

DecoherenceReport decoherence_report(const Schedule& s, double tol) {
    const HistoryOperator ho = history_operator(s);
    const ComplexMatrix p_psi = outer(s.initial, s.initial);
    DecoherenceReport rep;
    rep.tol = tol;
    const std::size_t n = ho.content.size();
    rep.histories.reserve(n);
    std::vector<ComplexMatrix> adjoints;
    adjoints.reserve(n);
    for (const auto& c : ho.content) {
        rep.histories.push_back(c.history);
        adjoints.push_back(adjoint(c.matrix));
    }
    rep.gram.assign(n, std::vector<Complex>(n));
    for (std::size_t b = 0; b < n; ++b) {
        const ComplexMatrix left = ho.content[b].matrix * p_psi;
        for (std::size_t a = 0; a < n; ++a) rep.gram[b][a] = trace(left * adjoints[a]);
    }
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) {
            if (a == b) continue;
            if (std::abs(rep.gram[b][a].real()) > tol) rep.consistent = false;
            if (std::abs(rep.gram[b][a]) > tol) rep.orthogonal = false;
            rep.worst_violation = std::max(rep.worst_violation, std::abs(rep.condition_value(b, a)));
        }
    }
    return rep;
}

SumRuleAudit sum_rule_audit(const Schedule& s, std::size_t i, double tol) {
    require_valid(s);
    if (i >= s.slots.size()) {
        throw EngineError("sum_rule_audit: slot " + std::to_string(i + 1) + " out of range");
    }
    if (s.slots[i].recorded) {
        throw EngineError("sum_rule_audit: slot " + std::to_string(i + 1) +
                          " has a recorded outcome; nothing to sum over");
    }
    // Coarse-graining frame {I} at slot i for the right-hand side.
    Schedule coarse = s;
    coarse.slots[i].frame = trivial_frame(s.dim);

    SumRuleAudit audit;
    audit.slot = i;

    // Walk every record-compatible assignment of the other slots.
    std::vector<std::size_t> outcomes(s.slots.size(), 0);
    std::size_t combos = 1;
    for (std::size_t j = 0; j < s.slots.size(); ++j) {
        if (j == i) continue;
        const std::size_t c = s.slots[j].recorded ? 1 : s.slots[j].frame.projectors.size();
        if (combos > kHistoryBudget / c) {
            throw EngineError("sum_rule_audit: more than " + std::to_string(kHistoryBudget) +
                              " coarse histories");
        }
        combos *= c;
        if (s.slots[j].recorded) outcomes[j] = *s.slots[j].recorded;
    }
    for (std::size_t idx = 0; idx < combos; ++idx) {
        std::size_t rest = idx;
        for (std::size_t j = s.slots.size(); j-- > 0;) {
            if (j == i || s.slots[j].recorded) continue;
            const std::size_t c = s.slots[j].frame.projectors.size();
            outcomes[j] = rest % c;
            rest /= c;
        }
        SumRuleRow row;
        for (std::size_t j = 0; j < s.slots.size(); ++j) {
            row.labels.push_back(j == i ? "*" : s.slots[j].frame.projectors[outcomes[j]].label);
        }
        for (std::size_t g = 0; g < s.slots[i].frame.projectors.size(); ++g) {
            outcomes[i] = g;
            row.lhs += weight(chain_operator(s, make_history(s, outcomes)));
        }
        outcomes[i] = 0;
        row.rhs = weight(chain_operator(coarse, make_history(coarse, outcomes)));
        if (std::abs(row.lhs - row.rhs) > tol) audit.holds = false;
        audit.rows.push_back(std::move(row));
    }
    return audit;
}

} // namespace histq
