#pragma once

#include "histq/collapse.hpp"
#include "histq/errors.hpp"
#include "histq/probability.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace histq {

// A named `state` or `op` definition.  The source text of the
// right-hand side is kept verbatim so render() round-trips through the
// exact same arithmetic.
struct NamedDef {
    enum class Kind { State, Op };
    Kind kind = Kind::State;
    std::string name;
    std::string text;
    StateVector state; // valid when kind == State
    ComplexMatrix op;  // valid when kind == Op
};

struct SlotDecl {
    std::string unitary_text;
    ComplexMatrix unitary;
    std::string frame_text;
    Frame frame;
    std::optional<std::string> record; // projector label
};

struct Query {
    enum class Kind {
        Histories,
        Operator,
        ProbJoint,
        ProbNext,
        ProbAt,
        ProbTwoVector,
        Amplitude,
        Consistent,
        SumRule,
        Collapse,
    };
    Kind kind = Kind::Histories;
    std::vector<std::string> labels; // joint/amplitude: one per slot; next/at/twovector/collapse: one
    std::size_t slot = 0;            // 1-based, as written (ProbAt/ProbTwoVector/SumRule)
    std::string frame_text;          // optional frame=... override (ProbNext/Collapse)
    std::optional<Frame> frame_value;
};

struct ScenarioDocument {
    std::string name = "scenario";
    std::size_t dim = 0;
    std::vector<NamedDef> defs; // states and ops in declaration order
    std::string init_text;
    StateVector init_value;
    std::string init_label = "psi";
    std::vector<SlotDecl> slots;
    std::optional<std::string> final_text;
    std::optional<StateVector> final_value;
    std::string final_label = "phi";
    std::vector<Query> queries;

    Schedule to_schedule() const;
};

// Semantic equality: same structure, same source texts, bit-identical
// evaluated values.  The document name is external metadata (the CLI
// sets it from the filename) and is not compared.
bool operator==(const ScenarioDocument& a, const ScenarioDocument& b);
inline bool operator!=(const ScenarioDocument& a, const ScenarioDocument& b) { return !(a == b); }

// Throws ParseError carrying every collected diagnostic (line/column
// are 1-based).  `name` is attached to the returned document.
ScenarioDocument parse(const std::string& text, const std::string& name = "scenario");

// Canonical text form; parse(render(doc)) == doc.
std::string render(const ScenarioDocument& doc);

// What one query produced; only the fields for its kind are populated.
struct HistoryRow {
    std::vector<std::string> labels;
    double weight = 0.0;
};

struct QueryResult {
    Query query;
    std::optional<double> value;    // prob-* / collapse probability
    std::optional<Complex> amp;     // amplitude
    std::vector<HistoryRow> histories;
    std::size_t total_enumerated = 0;
    std::optional<ComplexMatrix> op_matrix;
    std::optional<bool> consistent;
    std::optional<bool> orthogonal;
    std::optional<double> worst_violation;
    std::size_t gram_size = 0;
    std::optional<SumRuleAudit> audit;
    std::vector<std::vector<std::string>> removed, added; // collapse content diff
    std::vector<HistoryRow> content_after;                // collapse surviving histories
};

// Executes all queries in order.  Engine failures surface as EngineError
// with the offending query named in the message.
std::vector<QueryResult> run_queries(const ScenarioDocument& doc);

std::string format_table(const ScenarioDocument& doc, const std::vector<QueryResult>& results);
std::string format_json(const ScenarioDocument& doc, const std::vector<QueryResult>& results);

// Built-in scenarios reproducing the worked circuits: entangler,
// mach-zehnder, teleport (+ one variant per measured pair), three-box.
const std::vector<std::pair<std::string, std::string>>& golden_scenario_texts();
std::vector<std::pair<std::string, ScenarioDocument>> golden_scenarios();

} // namespace histq
