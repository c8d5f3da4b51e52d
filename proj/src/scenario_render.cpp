#include "histq/scenario.hpp"

#include <cmath>
#include <sstream>

namespace histq {

namespace {

bool bits_equal(const Complex& a, const Complex& b) {
    // bit-identical comparison; render/parse round-trips must not drift
    return a.real() == b.real() && a.imag() == b.imag() &&
           std::signbit(a.real()) == std::signbit(b.real()) &&
           std::signbit(a.imag()) == std::signbit(b.imag());
}

bool matrices_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            if (!bits_equal(a(r, c), b(r, c))) return false;
        }
    }
    return true;
}

bool states_equal(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        if (!bits_equal(a[j], b[j])) return false;
    }
    return true;
}

bool frames_equal(const Frame& a, const Frame& b) {
    if (a.dim != b.dim || a.label != b.label || a.projectors.size() != b.projectors.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.projectors.size(); ++k) {
        if (a.projectors[k].label != b.projectors[k].label) return false;
        if (!matrices_equal(a.projectors[k].matrix, b.projectors[k].matrix)) return false;
    }
    return true;
}

bool defs_equal(const NamedDef& a, const NamedDef& b) {
    if (a.kind != b.kind || a.name != b.name || a.text != b.text) return false;
    return a.kind == NamedDef::Kind::State ? states_equal(a.state, b.state)
                                           : matrices_equal(a.op, b.op);
}

bool slots_equal(const SlotDecl& a, const SlotDecl& b) {
    return a.unitary_text == b.unitary_text && a.frame_text == b.frame_text &&
           a.record == b.record && matrices_equal(a.unitary, b.unitary) &&
           frames_equal(a.frame, b.frame);
}

bool queries_equal(const Query& a, const Query& b) {
    if (a.kind != b.kind || a.labels != b.labels || a.slot != b.slot ||
        a.frame_text != b.frame_text) {
        return false;
    }
    if (a.frame_value.has_value() != b.frame_value.has_value()) return false;
    if (a.frame_value && !frames_equal(*a.frame_value, *b.frame_value)) return false;
    return true;
}

void render_query(std::ostringstream& out, const Query& q) {
    out << "query ";
    switch (q.kind) {
        case Query::Kind::Histories: out << "histories"; break;
        case Query::Kind::Operator: out << "operator"; break;
        case Query::Kind::ProbJoint: out << "prob joint"; break;
        case Query::Kind::ProbNext: out << "prob next"; break;
        case Query::Kind::ProbAt: out << "prob at " << q.slot; break;
        case Query::Kind::ProbTwoVector: out << "prob twovector " << q.slot; break;
        case Query::Kind::Amplitude: out << "amplitude"; break;
        case Query::Kind::Consistent: out << "consistent?"; break;
        case Query::Kind::SumRule: out << "sumrule " << q.slot; break;
        case Query::Kind::Collapse: out << "collapse"; break;
    }
    for (const auto& label : q.labels) out << ' ' << label;
    if (!q.frame_text.empty()) out << " frame=" << q.frame_text;
    out << '\n';
}

} // namespace

bool operator==(const ScenarioDocument& a, const ScenarioDocument& b) {
    if (a.dim != b.dim) return false;
    if (a.defs.size() != b.defs.size()) return false;
    for (std::size_t k = 0; k < a.defs.size(); ++k) {
        if (!defs_equal(a.defs[k], b.defs[k])) return false;
    }
    if (a.init_text != b.init_text || a.init_label != b.init_label ||
        !states_equal(a.init_value, b.init_value)) {
        return false;
    }
    if (a.slots.size() != b.slots.size()) return false;
    for (std::size_t k = 0; k < a.slots.size(); ++k) {
        if (!slots_equal(a.slots[k], b.slots[k])) return false;
    }
    if (a.final_text != b.final_text || a.final_label != b.final_label) return false;
    if (a.final_value.has_value() != b.final_value.has_value()) return false;
    if (a.final_value && !states_equal(*a.final_value, *b.final_value)) return false;
    if (a.queries.size() != b.queries.size()) return false;
    for (std::size_t k = 0; k < a.queries.size(); ++k) {
        if (!queries_equal(a.queries[k], b.queries[k])) return false;
    }
    return true;
}

std::string render(const ScenarioDocument& doc) {
    std::ostringstream out;
    out << "dim " << doc.dim << '\n';
    for (const auto& def : doc.defs) {
        out << (def.kind == NamedDef::Kind::State ? "state " : "op ") << def.name << " = "
            << def.text << '\n';
    }
    out << "init " << doc.init_text << '\n';
    for (const auto& decl : doc.slots) {
        out << "slot unitary=" << decl.unitary_text << " frame=" << decl.frame_text;
        if (decl.record) out << " record=" << *decl.record;
        out << '\n';
    }
    if (doc.final_text) out << "final " << *doc.final_text << '\n';
    for (const auto& q : doc.queries) render_query(out, q);
    return out.str();
}

} // namespace histq
