// Acceptance runner: one scripted check per shipped guarantee, each
// printed as a single PASS/FAIL line.  Exits nonzero if anything fails.

#include "histq/collapse.hpp"
#include "histq/pathint.hpp"
#include "histq/probability.hpp"
#include "histq/scenario.hpp"

#include "helpers.hpp"
#include "oracle.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace histq;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
        throw CheckFailure(os.str());
    }
}

std::vector<std::vector<std::string>> content_labels(const HistoryOperator& ho) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : ho.content) out.push_back(c.history.labels);
    return out;
}

double off_diagonal_gram_max(const DecoherenceReport& rep) {
    double worst = 0.0;
    for (std::size_t b = 0; b < rep.gram.size(); ++b) {
        for (std::size_t a = 0; a < rep.gram.size(); ++a) {
            if (a != b) worst = std::max(worst, std::abs(rep.gram[b][a]));
        }
    }
    return worst;
}

// Random schedules shared by the randomized criteria; deterministic in
// the seed so a failure is reproducible from the printed message.
Schedule seeded_schedule(std::uint32_t seed) {
    const std::size_t dim = 2 + seed % 3;
    const std::size_t n_slots = 1 + (seed / 3) % 3;
    Schedule s;
    s.dim = dim;
    s.initial = oracle::random_state(dim, seed);
    for (std::size_t k = 0; k < n_slots; ++k) {
        std::vector<std::size_t> ranks;
        if (k % 2 == 0 || dim == 2) {
            ranks.assign(dim, 1);
        } else {
            ranks = {1, dim - 1};
        }
        s.slots.push_back({oracle::random_unitary(dim, seed * 100 + 10 * (unsigned)k + 1),
                           oracle::random_frame(dim, ranks, seed * 100 + 10 * (unsigned)k + 2),
                           std::nullopt});
    }
    if (seed % 3 == 0) {
        s.slots[0].recorded = seed % s.slots[0].frame.projectors.size();
    }
    if (seed % 4 == 0) {
        s.final = oracle::random_state(dim, seed + 5000);
    }
    return s;
}

// The teleportation circuit with Alice's outcome recorded and the
// matching correction applied to the held qubit.
Schedule corrected_teleport(std::size_t alice_outcome) {
    Schedule s = helpers::teleport();
    s.slots.push_back({ComplexMatrix::identity(8), helpers::alice_frame(), alice_outcome});
    if (alice_outcome != 0) {
        const ComplexMatrix i4 = ComplexMatrix::identity(4);
        ComplexMatrix fix = gate_X();
        if (alice_outcome == 2) fix = gate_Z();
        if (alice_outcome == 3) fix = gate_Z() * gate_X();
        s.slots.push_back({tensor(i4, fix), trivial_frame(8), std::nullopt});
    }
    return s;
}

// ---- criteria ----

void criterion_entangler() {
    const double tol = 1e-10;
    const Schedule s = helpers::entangler();
    const HistoryOperator ho = history_operator(s);
    expect(content_labels(ho) ==
               std::vector<std::vector<std::string>>{{"00", "00"}, {"10", "11"}},
           "unmeasured content is not exactly {00->00, 10->11}");

    const Frame comp = computational_frame(2);
    expect_near(conditional_next(s, comp.projectors[3]), 0.5, tol, "p(11) at the final time");
    expect_near(conditional_next_trace(s, comp.projectors[3]), 0.5, tol,
                "p(11), full-trace route");
    const Frame first_qubit = subsystem_frame(computational_frame(1), 0, {2, 2});
    expect_near(conditional_next(s, first_qubit.projectors[1]), 0.5, tol,
                "p(first qubit = 1)");

    const DecoherenceReport rep = decoherence_report(s);
    expect(rep.consistent, "the two histories should form a consistent set");
    expect(off_diagonal_gram_max(rep) <= tol, "off-diagonal overlaps should vanish");
}

void criterion_interferometer() {
    const double tol = 1e-10;
    const Schedule s = helpers::mach_zehnder();
    const StateVector e0 = StateVector::basis(2, 0);
    expect(approx_eq(history_operator(s).matrix, outer(e0, e0), tol),
           "unmeasured operator should collapse to |0><0|");

    for (std::size_t a1 = 0; a1 < 2; ++a1) {
        for (std::size_t a2 = 0; a2 < 2; ++a2) {
            expect_near(joint_probability(s, make_history(s, {a1, a2})), 0.25, tol,
                        "each watched joint is 1/4");
        }
    }
    const double p_first_0 = joint_probability(s, make_history(s, {0, 0})) +
                             joint_probability(s, make_history(s, {0, 1}));
    expect_near(p_first_0, 0.5, tol, "marginal of outcome 0 at the first splitter");
    const Frame comp = computational_frame(1);
    expect_near(conditional_next(s, comp.projectors[0]), 1.0, tol, "bright port");
    expect_near(conditional_next(s, comp.projectors[1]), 0.0, tol, "dark port");

    const DecoherenceReport rep = decoherence_report(s);
    expect(!rep.consistent, "interfering histories must not be reported consistent");
    expect_near(rep.worst_violation, 0.5, tol, "decoherence-condition violation");
    expect_near(std::abs(rep.gram[1][0]), 0.25, tol, "plain pair overlap");

    const SumRuleAudit audit = sum_rule_audit(s, 0);
    expect(!audit.holds, "slot-1 sum rule should fail");
    expect_near(audit.rows[0].lhs, 0.5, tol, "summed fine-grained weight");
    expect_near(audit.rows[0].rhs, 1.0, tol, "coarse weight");

    // record 0 at the first time: a history absent from the unmeasured
    // content must reappear
    Schedule recorded = s;
    recorded.slots[0].recorded = 0;
    const HistoryOperator before = history_operator(s);
    const HistoryOperator after = history_operator(recorded);
    const auto diff = content_diff(before, after);
    expect(diff.second.size() == 1 && diff.second[0].labels == std::vector<std::string>{"0", "1"},
           "recording should restore the 0->1 history");

    // then measure 1 at the second time
    const CollapseResult res = collapse(after, comp.projectors[1], comp);
    expect(content_labels(res.after) == std::vector<std::vector<std::string>>{{"0", "1"}},
           "surviving history should be 0->0->1");
    expect_near(res.probability, 0.5, tol, "probability of the second-time outcome 1");
}

void criterion_teleport() {
    const double tol = 1e-10;
    const Schedule s = helpers::teleport();
    expect(history_operator(s).content.size() == 8, "unmeasured content should hold 8 histories");

    const Frame alice = helpers::alice_frame();
    for (std::size_t m = 0; m < 4; ++m) {
        expect_near(conditional_next(s, alice.projectors[m]), 0.25, tol,
                    "each Alice outcome has probability 1/4");
    }

    Schedule rec00 = s;
    rec00.slots.push_back({ComplexMatrix::identity(8), alice, std::size_t{0}});
    expect(content_labels(history_operator(rec00)) ==
               std::vector<std::vector<std::string>>{{"000", "000", "000", "00"},
                                                     {"111", "101", "001", "00"}},
           "content after recording 00 is not the expected pair");

    const Frame bob = helpers::bob_frame();
    const double want0 = 1.0 / 3.0, want1 = 2.0 / 3.0;
    for (std::size_t m = 0; m < 4; ++m) {
        const Schedule t = corrected_teleport(m);
        const std::string tag = "Alice outcome " + std::to_string(m);
        expect_near(conditional_next(t, bob.projectors[0]), want0, tol, tag + ": p(0)");
        expect_near(conditional_next(t, bob.projectors[1]), want1, tol, tag + ": p(1)");
        // independent route: project-and-renormalize on raw amplitudes
        expect_near(oracle::next_probability(t, bob.projectors[0].matrix), want0, tol,
                    tag + ": oracle p(0)");
        expect_near(oracle::next_probability(t, bob.projectors[1].matrix), want1, tol,
                    tag + ": oracle p(1)");
    }
}

void criterion_three_box() {
    const double tol = 1e-10;
    const Frame frame_a = binary_frame(helpers::box_projector(0, "A"));
    const Frame frame_b = binary_frame(helpers::box_projector(1, "B"));
    const Schedule in_a = helpers::three_box(frame_a);
    const Schedule in_b = helpers::three_box(frame_b);
    expect_near(intermediate_probability(in_a, 0, 0), 1.0, tol, "box A is certain");
    expect_near(intermediate_probability(in_b, 0, 0), 1.0, tol, "box B is certain");
    expect(weight(chain_operator(in_a, make_history(in_a, {1}))) <= 1e-12,
           "the not-A chain should be annihilated");

    const Schedule full = helpers::three_box(helpers::box_frame_full());
    for (std::size_t k = 0; k < 3; ++k) {
        expect_near(intermediate_probability(full, 0, k), 1.0 / 3.0, tol,
                    "three-way frame gives 1/3 each");
    }

    Schedule pair;
    pair.dim = 3;
    pair.initial = helpers::three_box_state(1.0);
    pair.slots.push_back({ComplexMatrix::identity(3), helpers::box_frame_full(), std::nullopt});
    pair.slots.push_back(
        {ComplexMatrix::identity(3),
         binary_frame(state_projector(helpers::three_box_state(-1.0), "phi")), std::nullopt});
    const DecoherenceReport rep = decoherence_report(pair);
    expect(rep.histories.size() == 6, "the box/final family should hold six histories");
    expect(!rep.consistent, "the six-history family must be reported non-consistent");
}

void criterion_two_vector() {
    const double tol = 1e-10;
    const StateVector psi = helpers::three_box_state(1.0);
    const StateVector phi = helpers::three_box_state(-1.0);
    const ComplexMatrix id = ComplexMatrix::identity(3);
    const std::vector<Frame> box_frames = {binary_frame(helpers::box_projector(0, "A")),
                                           binary_frame(helpers::box_projector(1, "B")),
                                           helpers::box_frame_full()};
    for (const Frame& f : box_frames) {
        const Schedule s = helpers::three_box(f);
        for (std::size_t beta = 0; beta < f.projectors.size(); ++beta) {
            expect_near(two_vector_probability(psi, id, f, id, phi, beta),
                        intermediate_probability(s, 0, beta), tol,
                        "three-box two-vector value, outcome " + std::to_string(beta));
        }
    }
    for (std::uint32_t seed = 1; seed <= 50; ++seed) {
        const StateVector rpsi = oracle::random_state(3, seed);
        const StateVector rphi = oracle::random_state(3, seed + 900);
        const ComplexMatrix u1 = oracle::random_unitary(3, seed + 1800);
        const ComplexMatrix u2 = oracle::random_unitary(3, seed + 2700);
        const Frame f = oracle::random_frame(3,
                                             seed % 2 ? std::vector<std::size_t>{1, 1, 1}
                                                      : std::vector<std::size_t>{1, 2},
                                             seed + 3600);
        Schedule s;
        s.dim = 3;
        s.initial = rpsi;
        s.slots.push_back({u1, f, std::nullopt});
        s.slots.push_back({u2, trivial_frame(3), std::nullopt});
        s.final = rphi;
        for (std::size_t beta = 0; beta < f.projectors.size(); ++beta) {
            expect_near(two_vector_probability(rpsi, u1, f, u2, rphi, beta),
                        intermediate_probability(s, 0, beta), tol,
                        "random instance, seed " + std::to_string(seed));
        }
    }
}

void criterion_resummation() {
    const double tol = 1e-9;
    // summing every chain must rebuild the uninterrupted evolution
    auto check_resummation = [&](const Schedule& s, const std::string& tag) {
        const ComplexMatrix want = total_unitary(s) * outer(s.initial, s.initial);
        ComplexMatrix sum(s.dim);
        for (const auto& b : oracle::all_branches(s)) {
            sum = sum + chain_operator(s, make_history(s, b.outcomes)).matrix;
        }
        expect(approx_eq(sum, want, tol), tag + ": chain sum != total evolution");
    };
    for (const auto& [name, doc] : golden_scenarios()) {
        check_resummation(stripped(doc.to_schedule()), name);
    }
    for (std::size_t n : {2u, 4u, 8u}) {
        for (std::size_t slices : {1u, 2u, 3u}) {
            const GridSystem g = harmonic_oscillator(n, 1.0);
            const TimeSlicing ts{0.0, 1.1, slices};
            const std::string tag =
                "grid N=" + std::to_string(n) + " slices=" + std::to_string(slices);
            check_resummation(build_schedule(g, ts, 0), tag);

            const ComplexMatrix direct =
                oracle::matrix_exp(g.hamiltonian, Complex(0, -(ts.tn - ts.t0)));
            double total = 0.0;
            for (std::size_t to = 0; to < n; ++to) {
                const double p = propagation_probability(g, ts, 0, to);
                expect_near(p, std::norm(direct(to, 0)), tol, tag + ": endpoint probability");
                total += p;
            }
            expect_near(total, 1.0, 1e-10, tag + ": endpoint distribution normalization");
        }
    }
}

void criterion_oracle_equivalence() {
    const double tol = 1e-9;
    auto check_joint = [&](const Schedule& s, const std::string& tag) {
        for (const auto& b : oracle::all_branches(s)) {
            expect_near(joint_probability(s, make_history(s, b.outcomes)), b.weight, tol,
                        tag + ": joint probability mismatch");
        }
    };
    for (const auto& [name, doc] : golden_scenarios()) check_joint(doc.to_schedule(), name);
    for (std::uint32_t seed = 1; seed <= 50; ++seed) {
        check_joint(seeded_schedule(seed), "seed " + std::to_string(seed));
    }
}

void criterion_normalization() {
    const double tol = 1e-10;
    for (const auto& [name, doc] : golden_scenarios()) {
        const Schedule s = stripped(doc.to_schedule());
        double total = 0.0;
        for (const auto& b : oracle::all_branches(s)) {
            total += joint_probability(s, make_history(s, b.outcomes));
        }
        expect_near(total, 1.0, tol, name + ": weights should sum to 1");

        const SumRuleAudit audit = sum_rule_audit(s, s.slots.size() - 1);
        expect(audit.holds, name + ": last-slot sum rule should hold");
        for (const auto& row : audit.rows) {
            expect_near(row.lhs, row.rhs, tol, name + ": last-slot marginal row");
        }
    }
    // summing over any final-time frame cannot change earlier statistics
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const std::size_t dim = 2 + seed % 3;
        Schedule two;
        two.dim = dim;
        two.initial = oracle::random_state(dim, seed + 100);
        two.slots.push_back({oracle::random_unitary(dim, seed + 200),
                             oracle::random_frame(dim, std::vector<std::size_t>(dim, 1), seed + 300),
                             std::nullopt});
        two.slots.push_back({oracle::random_unitary(dim, seed + 400),
                             oracle::random_frame(dim, std::vector<std::size_t>(dim, 1), seed + 500),
                             std::nullopt});
        Schedule one = two;
        one.slots.pop_back();
        Schedule other = two;
        other.slots[1].frame = oracle::random_frame(dim, {1, dim - 1}, seed + 600);
        for (std::size_t a = 0; a < dim; ++a) {
            const double bare = joint_probability(one, make_history(one, {a}));
            double summed = 0.0, summed_other = 0.0;
            for (std::size_t b = 0; b < two.slots[1].frame.projectors.size(); ++b) {
                summed += joint_probability(two, make_history(two, {a, b}));
            }
            for (std::size_t b = 0; b < other.slots[1].frame.projectors.size(); ++b) {
                summed_other += joint_probability(other, make_history(other, {a, b}));
            }
            expect_near(summed, bare, tol, "seed " + std::to_string(seed) + ": future frame leaks");
            expect_near(summed_other, bare, tol,
                        "seed " + std::to_string(seed) + ": future frame choice leaks");
        }
    }
}

void criterion_dsl() {
    for (const auto& [name, doc] : golden_scenarios()) {
        const ScenarioDocument again = parse(render(doc), name);
        expect(again == doc, name + ": render/parse round trip is not the identity");
        const auto r1 = run_queries(doc);
        const auto r2 = run_queries(again);
        expect(format_json(doc, r1) == format_json(again, r2),
               name + ": structured output is not byte-stable");
        expect(format_table(doc, r1) == format_table(again, r2),
               name + ": table output is not byte-stable");
    }
    const auto positioned = [](const std::string& text, int line, int column) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return !e.diagnostics().empty() && e.diagnostics().front().line == line &&
                   e.diagnostics().front().column == column;
        }
        return false;
    };
    expect(positioned("dim 2\ninit |0\nslot unitary=I(2) frame=comp(1)\n", 2, 6),
           "unterminated ket should be positioned at 2:6");
    expect(positioned("dim 2\ninit |0>\nslot unitary=U frame=comp(1)\n", 3, 14),
           "undefined name should be positioned at 3:14");
    expect(positioned("dim 2\ninit |0>\nslot unitary=I(2) frame=comp(2)\n", 3, 19),
           "frame dimension clash should be positioned at 3:19");
}

struct Criterion {
    const char* label;
    std::function<void()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"entangler content, conditionals, and decoherence", criterion_entangler},
        {"interferometer statistics, sum rule, and restoration", criterion_interferometer},
        {"teleportation records and held-qubit statistics", criterion_teleport},
        {"three boxes: certainty, null chain, three-way split", criterion_three_box},
        {"two-vector formula matches the chain-weight route", criterion_two_vector},
        {"chain resummation and grid propagation", criterion_resummation},
        {"engine joints match the independent oracle", criterion_oracle_equivalence},
        {"normalization, last-slot marginals, no signaling from the future", criterion_normalization},
        {"scenario DSL round trip, positioned errors, stable output", criterion_dsl},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k].run();
            std::printf("PASS criterion %zu: %s\n", k + 1, criteria[k].label);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL criterion %zu: %s — %s\n", k + 1, criteria[k].label, e.what());
        }
    }
    if (failures == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    }
    return failures == 0 ? 0 : 1;
}
