#pragma once

#include "histq/histories.hpp"

#include <cstddef>
#include <vector>

namespace histq {

// Pairwise overlaps of the surviving histories.  gram[b][a] is the
// plain trace Tr(C_b P_ψ C_a†) (Hermitian across the pair swap); the
// decoherence condition asks for Tr(C_b P_ψ C_a†) + c.c. = 0, so the
// reported violation of a pair is |gram[b][a] + conj(gram[a][b])| =
// 2·|Re gram[b][a]|.  `orthogonal` is the stricter verdict that the
// full complex overlaps vanish, which implies consistency a fortiori.
struct DecoherenceReport {
    std::vector<History> histories;
    std::vector<std::vector<Complex>> gram;
    bool consistent = true;        // max |Re gram[b][a]| ≤ tol over a≠b
    bool orthogonal = true;        // max |gram[b][a]| ≤ tol over a≠b
    double worst_violation = 0.0;  // max |gram[b][a] + conj(gram[a][b])| over a≠b
    double tol = kEntryTol;

    // The decoherence-condition value for one pair.
    Complex condition_value(std::size_t b, std::size_t a) const;
};

// One coarse history in a sum-rule audit: `labels` has a "*" at the
// audited slot; lhs sums the fine-grained joints over that slot's
// outcomes, rhs is the joint with the frame replaced by {I}.
struct SumRuleRow {
    std::vector<std::string> labels;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct SumRuleAudit {
    std::size_t slot = 0; // 0-based audited slot
    std::vector<SumRuleRow> rows;
    bool holds = true;
};

// Tr(C_α P_ψ C_α†) — the weight of the history's chain.
double joint_probability(const Schedule& s, const History& h);

// Tr(C† P C) / Tr(C† C) with C the schedule's history operator: the
// probability of outcome p at the time right after the last slot.
// Evaluated as a vector sandwich ⟨ψ|M†PM|ψ⟩ (P_ψ is rank one); the
// full-trace route is conditional_next_trace below and must agree.
double conditional_next(const Schedule& s, const Projector& p, double tol = kEntryTol);
double conditional_next_trace(const Schedule& s, const Projector& p, double tol = kEntryTol);

// Probability of outcome `beta` at slot `i` (0-based) given everything
// around it: every other slot must be recorded or have a single-member
// frame, and slot i must be unrecorded.  Ratio of the β chain weight to
// the sum over slot i's frame.
double intermediate_probability(const Schedule& s, std::size_t i, std::size_t beta,
                                double tol = kEntryTol);

// Symmetric pre/post-selected formula evaluated through the forward and
// backward evolved vectors |ψ(t₁)⟩ = U1|ψ⟩, |φ(t₁)⟩ = U2†|φ⟩:
//   p(β) = |⟨ψ(t₁)|P_β|φ(t₁)⟩|² / Σ_γ |⟨ψ(t₁)|P_γ|φ(t₁)⟩|².
// Agrees with intermediate_probability on the equivalent two-slot
// schedule; the two routes share no code.
double two_vector_probability(const StateVector& psi, const ComplexMatrix& u1, const Frame& frame,
                              const ComplexMatrix& u2, const StateVector& phi, std::size_t beta,
                              double tol = kEntryTol);

DecoherenceReport decoherence_report(const Schedule& s, double tol = kEntryTol);

// Compares Σ over slot-i outcomes of the fine joints against the joint
// with frame {I} at slot i, for every coarse history.  Equality for
// every row is guaranteed when i is the last slot, and holds at inner
// slots exactly when interference is absent.
SumRuleAudit sum_rule_audit(const Schedule& s, std::size_t i, double tol = kEntryTol);

} // namespace histq
