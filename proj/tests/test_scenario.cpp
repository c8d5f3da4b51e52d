#include "histq/errors.hpp"
#include "histq/scenario.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace histq;

namespace {

const std::string kBase = "dim 2\n"
                          "init |0>\n"
                          "slot unitary=I(2) frame=comp(1)\n";

// Parses text that must fail and hands back the collected diagnostics.
std::vector<Diagnostic> diags_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        REQUIRE(!e.diagnostics().empty());
        return e.diagnostics();
    }
    FAIL("expected a ParseError");
    return {};
}

void check_first(const std::string& text, int line, int column, const std::string& message) {
    const auto ds = diags_of(text);
    CHECK(ds.front().line == line);
    CHECK(ds.front().column == column);
    CHECK(ds.front().message == message);
}

} // namespace

TEST_CASE("parsing evaluates definitions, slots, and queries") {
    ScenarioDocument doc;
    for (const auto& [name, text] : golden_scenario_texts()) {
        if (name == "entangler") doc = parse(text, name);
    }
    CHECK(doc.name == "entangler");
    CHECK(doc.dim == 4);
    CHECK(doc.defs.empty());
    CHECK(doc.init_text == "|00>");
    CHECK(doc.init_label == "00");
    CHECK(approx_eq(outer(doc.init_value, doc.init_value),
                    outer(StateVector::basis(4, 0), StateVector::basis(4, 0)), 1e-15));

    REQUIRE(doc.slots.size() == 2);
    CHECK(doc.slots[0].unitary_text == "H (x) I(2)");
    CHECK(approx_eq(doc.slots[0].unitary, tensor(gate_H(), ComplexMatrix::identity(2)), 1e-15));
    CHECK(doc.slots[1].unitary_text == "CNOT");
    CHECK(doc.slots[0].frame.projectors.size() == 4);
    CHECK(!doc.slots[0].record.has_value());

    REQUIRE(doc.queries.size() == 8);
    CHECK(doc.queries[0].kind == Query::Kind::Histories);
    CHECK(doc.queries[1].kind == Query::Kind::ProbJoint);
    CHECK(doc.queries[1].labels == std::vector<std::string>{"00", "00"});
    CHECK(doc.queries[3].kind == Query::Kind::ProbNext);
    CHECK(doc.queries[4].frame_text == "lift(comp(1),1,[2,2])");
    REQUIRE(doc.queries[4].frame_value.has_value());
    CHECK(doc.queries[4].frame_value->dim == 4);
    CHECK(doc.queries[6].kind == Query::Kind::SumRule);
    CHECK(doc.queries[6].slot == 1);

    const Schedule s = doc.to_schedule();
    CHECK(validate(s).empty());
    CHECK(s.initial_label == "00");
}

TEST_CASE("every golden scenario parses, validates, and answers its queries") {
    const auto goldens = golden_scenarios();
    CHECK(goldens.size() == 12);
    for (const auto& [name, doc] : goldens) {
        CAPTURE(name);
        CHECK(doc.dim >= 2);
        CHECK(validate(doc.to_schedule()).empty());
        const auto results = run_queries(doc);
        CHECK(results.size() == doc.queries.size());
    }
}

TEST_CASE("a handful of frozen answers from the golden corpus") {
    for (const auto& [name, doc] : golden_scenarios()) {
        const auto results = run_queries(doc);
        if (name == "entangler") {
            // query 4: prob next 11
            REQUIRE(results[3].value.has_value());
            CHECK(*results[3].value == doctest::Approx(0.5).epsilon(1e-12));
            REQUIRE(results[5].consistent.has_value());
            CHECK(*results[5].consistent);
        } else if (name == "mach-zehnder") {
            REQUIRE(results[8].consistent.has_value());
            CHECK(!*results[8].consistent);
            CHECK(*results[8].worst_violation == doctest::Approx(0.5).epsilon(1e-12));
        } else if (name == "teleport-00") {
            // Bob's qubit after the 00 record: 1/3 vs 2/3
            REQUIRE(results[1].value.has_value());
            CHECK(*results[1].value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
            CHECK(*results[2].value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        } else if (name == "three-box-A") {
            // prob at 1 A == 1, amplitude ~A dead
            CHECK(*results[1].value == doctest::Approx(1.0).epsilon(1e-12));
            REQUIRE(results[4].amp.has_value());
            CHECK(std::abs(*results[4].amp) < 1e-12);
        }
    }
}

TEST_CASE("render and parse round-trip every golden document") {
    for (const auto& [name, doc] : golden_scenarios()) {
        CAPTURE(name);
        const std::string text = render(doc);
        const ScenarioDocument again = parse(text, name);
        CHECK(again == doc);
        CHECK(render(again) == text);
    }
}

TEST_CASE("formatted output is byte-stable across runs and a re-parse") {
    for (const auto& [name, doc] : golden_scenarios()) {
        CAPTURE(name);
        const auto r1 = run_queries(doc);
        const auto r2 = run_queries(doc);
        CHECK(format_table(doc, r1) == format_table(doc, r2));
        CHECK(format_json(doc, r1) == format_json(doc, r2));
        const ScenarioDocument again = parse(render(doc), name);
        CHECK(format_json(again, run_queries(again)) == format_json(doc, r1));
    }
}

TEST_CASE("document equality is structural, not nominal") {
    const ScenarioDocument a = parse(kBase, "a");
    CHECK(a == parse(kBase, "b")); // the name is metadata
    // same evaluated unitary, different spelling => different documents
    const ScenarioDocument spelled =
        parse("dim 2\ninit |0>\nslot unitary=1*I(2) frame=comp(1)\n", "a");
    CHECK(a != spelled);
    const ScenarioDocument recorded =
        parse("dim 2\ninit |0>\nslot unitary=I(2) frame=comp(1) record=0\n", "a");
    CHECK(a != recorded);
}

TEST_CASE("parse errors carry 1-based line and column positions") {
    check_first(kBase + "frob 3\n", 4, 1, "unknown directive 'frob'");
    check_first("dim 2\ninit |0>\nslot unitary=U frame=comp(1)\n", 3, 14, "undefined name 'U'");
    check_first("dim 2\ninit |0\nslot unitary=I(2) frame=comp(1)\n", 2, 6,
                "unterminated ket literal");
    check_first("dim 2\ndim 3\ninit |0>\nslot unitary=I(2) frame=comp(1)\n", 2, 1,
                "duplicate dim declaration");
    check_first("init |0>\ndim 2\nslot unitary=I(2) frame=comp(1)\n", 1, 1,
                "dim must be declared before init");
    check_first("dim 2\nstate v = I(2)\ninit |0>\nslot unitary=I(2) frame=comp(1)\n", 2, 11,
                "state definition evaluates to an operator");
    check_first("dim 2\ninit |0>\nslot unitary=2 (x) 3 frame=comp(1)\n", 3, 16,
                "cannot tensor a scalar with a scalar");
    check_first("dim 2\ninit |0>\nslot unitary=I(2) frame=comp(1) record=5\n", 3, 1,
                "recorded outcome '5' is not an outcome of the frame");
    check_first("dim 2\ninit |0>\nslot unitary=I(2) frame=comp(2)\n", 3, 19,
                "frame has dim 4, scenario has dim 2");
    check_first(kBase + "query prob joint 0 1\n", 4, 21,
                "expected 1 outcome labels (one per slot), got 2");
    check_first(kBase + "query sumrule 5\n", 4, 15, "slot 5 out of range (scenario has 1 slots)");
    check_first(kBase + "query prob next 7\n", 4, 17, "no outcome '7' in the frame");
    check_first(kBase + "query prob joint 7\n", 4, 7, "no outcome '7' in slot 1's frame");
    check_first(kBase + "query prob next 0 frame=comp(2)\n", 4, 24,
                "frame has dim 4, scenario has dim 2");
}

TEST_CASE("a structurally empty file reports the missing pieces") {
    const auto ds = diags_of("# nothing here\n");
    REQUIRE(ds.size() == 3);
    CHECK(ds[0].line == 1);
    CHECK(ds[0].column == 1);
    CHECK(ds[0].message == "missing dim declaration");
    CHECK(ds[1].message == "missing init declaration");
    CHECK(ds[2].message == "scenario has no slots");
}

TEST_CASE("the parser keeps going and reports every broken line") {
    const auto ds = diags_of("dim 2\ninit |0\nslot unitary=U frame=comp(1)\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].line == 2);
    CHECK(ds[0].column == 6);
    CHECK(ds[1].line == 3);
    CHECK(ds[1].column == 14);
    // what() renders each diagnostic as line:col: message
    try {
        parse("dim 2\ninit |0\nslot unitary=U frame=comp(1)\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("2:6: unterminated ket literal") != std::string::npos);
        CHECK(std::string(e.what()).find("3:14: undefined name 'U'") != std::string::npos);
    }
}

TEST_CASE("unicode tensor and ket delimiters are accepted") {
    const std::string utf8 = "dim 4\ninit |00\xE2\x9F\xA9\n"
                             "slot unitary=H \xE2\x8A\x97 I(2) frame=comp(2)\n";
    const ScenarioDocument doc = parse(utf8, "utf8");
    CHECK(approx_eq(doc.slots[0].unitary, tensor(gate_H(), ComplexMatrix::identity(2)), 1e-15));
    CHECK(doc.init_label == "00");
}

TEST_CASE("a failing query is reported with its index and description") {
    const std::string text = "dim 4\n"
                             "init |00>\n"
                             "slot unitary=H (x) I(2) frame=comp(2)\n"
                             "slot unitary=CNOT frame=comp(2) record=01\n"
                             "query prob next 11\n";
    const ScenarioDocument doc = parse(text, "dead-record");
    CHECK_THROWS_WITH_AS(run_queries(doc), doctest::Contains("query 1 (prob next 11)"),
                         EngineError);
}
