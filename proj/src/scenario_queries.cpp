#include "histq/scenario.hpp"

#include "histq/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace histq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string describe(const Query& q) {
    std::ostringstream out;
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
    return out.str();
}

const char* kind_slug(Query::Kind k) {
    switch (k) {
        case Query::Kind::Histories: return "histories";
        case Query::Kind::Operator: return "operator";
        case Query::Kind::ProbJoint: return "prob_joint";
        case Query::Kind::ProbNext: return "prob_next";
        case Query::Kind::ProbAt: return "prob_at";
        case Query::Kind::ProbTwoVector: return "prob_twovector";
        case Query::Kind::Amplitude: return "amplitude";
        case Query::Kind::Consistent: return "consistent";
        case Query::Kind::SumRule: return "sumrule";
        case Query::Kind::Collapse: return "collapse";
    }
    return "unknown";
}

History history_from_labels(const ScenarioDocument& doc, const std::vector<std::string>& labels) {
    if (labels.size() != doc.slots.size()) {
        throw EngineError("history needs one outcome per slot");
    }
    std::vector<std::size_t> outcomes;
    outcomes.reserve(labels.size());
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const int idx = doc.slots[k].frame.index_of(labels[k]);
        if (idx < 0) {
            throw EngineError("no outcome '" + labels[k] + "' in slot " + std::to_string(k + 1) +
                              "'s frame");
        }
        outcomes.push_back(static_cast<std::size_t>(idx));
    }
    return make_history(doc.to_schedule(), outcomes);
}

const Frame& effective_frame(const ScenarioDocument& doc, const Query& q) {
    if (q.frame_value) return *q.frame_value;
    if (doc.slots.empty()) throw EngineError("scenario has no slots to take a frame from");
    return doc.slots.back().frame;
}

const Projector& frame_member(const Frame& f, const std::string& label) {
    const int idx = f.index_of(label);
    if (idx < 0) throw EngineError("no outcome '" + label + "' in frame " + f.label);
    return f.projectors[static_cast<std::size_t>(idx)];
}

std::vector<HistoryRow> rows_of(const std::vector<ChainOperator>& chains) {
    std::vector<HistoryRow> rows;
    rows.reserve(chains.size());
    for (const auto& c : chains) rows.push_back({c.history.labels, weight(c)});
    return rows;
}

QueryResult run_one(const ScenarioDocument& doc, const Query& q) {
    QueryResult res;
    res.query = q;
    const Schedule s = doc.to_schedule();
    switch (q.kind) {
        case Query::Kind::Histories: {
            const HistoryOperator ho = history_operator(s);
            res.histories = rows_of(ho.content);
            res.total_enumerated = ho.total_enumerated;
            break;
        }
        case Query::Kind::Operator: {
            res.op_matrix = history_operator(s).matrix;
            break;
        }
        case Query::Kind::ProbJoint: {
            res.value = joint_probability(s, history_from_labels(doc, q.labels));
            break;
        }
        case Query::Kind::ProbNext: {
            const Frame& f = effective_frame(doc, q);
            res.value = conditional_next(s, frame_member(f, q.labels.at(0)));
            break;
        }
        case Query::Kind::ProbAt: {
            const Frame& f = doc.slots.at(q.slot - 1).frame;
            const int beta = f.index_of(q.labels.at(0));
            if (beta < 0) throw EngineError("no outcome '" + q.labels.at(0) + "' in frame " + f.label);
            res.value = intermediate_probability(s, q.slot - 1, static_cast<std::size_t>(beta));
            break;
        }
        case Query::Kind::ProbTwoVector: {
            if (!s.final) throw EngineError("needs a final state");
            for (std::size_t k = 0; k < doc.slots.size(); ++k) {
                if (k + 1 == q.slot) continue;
                if (doc.slots[k].frame.projectors.size() != 1) {
                    throw EngineError("slot " + std::to_string(k + 1) +
                                      " must carry a single-member frame");
                }
            }
            const Frame& f = doc.slots.at(q.slot - 1).frame;
            const int beta = f.index_of(q.labels.at(0));
            if (beta < 0) throw EngineError("no outcome '" + q.labels.at(0) + "' in frame " + f.label);
            ComplexMatrix u1 = ComplexMatrix::identity(doc.dim);
            ComplexMatrix u2 = ComplexMatrix::identity(doc.dim);
            for (std::size_t k = 0; k < q.slot; ++k) u1 = doc.slots[k].unitary * u1;
            for (std::size_t k = q.slot; k < doc.slots.size(); ++k) u2 = doc.slots[k].unitary * u2;
            res.value = two_vector_probability(s.initial, u1, f, u2, *s.final,
                                               static_cast<std::size_t>(beta));
            break;
        }
        case Query::Kind::Amplitude: {
            res.amp = amplitude(s, history_from_labels(doc, q.labels));
            break;
        }
        case Query::Kind::Consistent: {
            const DecoherenceReport rep = decoherence_report(s);
            res.consistent = rep.consistent;
            res.orthogonal = rep.orthogonal;
            res.worst_violation = rep.worst_violation;
            res.gram_size = rep.histories.size();
            break;
        }
        case Query::Kind::SumRule: {
            res.audit = sum_rule_audit(s, q.slot - 1);
            break;
        }
        case Query::Kind::Collapse: {
            const Frame& f = effective_frame(doc, q);
            const HistoryOperator ho = history_operator(s);
            const CollapseResult cr = collapse(ho, frame_member(f, q.labels.at(0)), f);
            res.value = cr.probability;
            for (const auto& h : cr.removed) res.removed.push_back(h.labels);
            for (const auto& h : cr.added) res.added.push_back(h.labels);
            res.content_after = rows_of(cr.after.content);
            break;
        }
    }
    return res;
}

// ------------------------------------------------------------ formatting

// Twelve significant digits, parsed back so equal values print
// identically; -0 is normalized to 0.
double round12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    double r = std::strtod(buf, nullptr);
    if (r == 0.0) r = 0.0;
    return r;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", round12(x));
    return buf;
}

// Annotates small rationals: 0.5 -> "(1/2)".  Purely cosmetic.
std::string rational_hint(double x) {
    // an integer renders the same with or without the hint
    for (int den = 2; den <= 16; ++den) {
        const double scaled = x * den;
        const double nearest = std::round(scaled);
        if (std::abs(scaled - nearest) < 1e-9) {
            const long long num = static_cast<long long>(nearest);
            if (num % den == 0) return "";
            std::ostringstream out;
            out << " (" << num << "/" << den << ")";
            return out.str();
        }
    }
    return "";
}

std::string fmt_complex(const Complex& z) {
    const double re = round12(z.real());
    const double im = round12(z.imag());
    if (im == 0.0) return fmt_double(re);
    if (re == 0.0) return fmt_double(im) + "i";
    return fmt_double(re) + (im > 0 ? "+" : "") + fmt_double(im) + "i";
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (k) out += " -> ";
        out += labels[k];
    }
    return out;
}

void table_histories(std::ostringstream& out, const std::vector<HistoryRow>& rows) {
    for (const auto& row : rows) {
        out << "  " << join_labels(row.labels) << "   weight " << fmt_double(row.weight)
            << rational_hint(row.weight) << '\n';
    }
}

ordered_json json_complex(const Complex& z) {
    return ordered_json{{"re", round12(z.real())}, {"im", round12(z.imag())}};
}

ordered_json json_rows(const std::vector<HistoryRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        arr.push_back(ordered_json{{"labels", row.labels}, {"weight", round12(row.weight)}});
    }
    return arr;
}

std::string frame_name(const ScenarioDocument& doc, const Query& q) {
    if (!q.frame_text.empty()) return q.frame_text;
    return doc.slots.empty() ? std::string() : doc.slots.back().frame_text;
}

} // namespace

std::vector<QueryResult> run_queries(const ScenarioDocument& doc) {
    std::vector<QueryResult> results;
    results.reserve(doc.queries.size());
    for (std::size_t k = 0; k < doc.queries.size(); ++k) {
        try {
            results.push_back(run_one(doc, doc.queries[k]));
        } catch (const EngineError& e) {
            throw EngineError("query " + std::to_string(k + 1) + " (" + describe(doc.queries[k]) +
                              "): " + e.what());
        }
    }
    return results;
}

std::string format_table(const ScenarioDocument& doc, const std::vector<QueryResult>& results) {
    std::ostringstream out;
    out << "scenario: " << doc.name << '\n';
    out << "dim " << doc.dim << ", " << doc.slots.size() << " slots, init " << doc.init_label;
    if (doc.final_value) out << ", final " << doc.final_label;
    out << '\n';
    for (const auto& res : results) {
        out << '\n' << "query " << describe(res.query) << '\n';
        switch (res.query.kind) {
            case Query::Kind::Histories:
                table_histories(out, res.histories);
                out << "  content " << res.histories.size() << " of " << res.total_enumerated
                    << " enumerated\n";
                break;
            case Query::Kind::Operator: {
                const ComplexMatrix& m = *res.op_matrix;
                for (std::size_t r = 0; r < m.dim(); ++r) {
                    out << "  [";
                    for (std::size_t c = 0; c < m.dim(); ++c) {
                        out << (c ? "  " : " ") << fmt_complex(m(r, c));
                    }
                    out << " ]\n";
                }
                break;
            }
            case Query::Kind::ProbJoint:
            case Query::Kind::ProbNext:
            case Query::Kind::ProbAt:
            case Query::Kind::ProbTwoVector:
                out << "  p = " << fmt_double(*res.value) << rational_hint(*res.value) << '\n';
                break;
            case Query::Kind::Amplitude:
                out << "  A = " << fmt_complex(*res.amp);
                if (res.amp->imag() == 0.0) out << rational_hint(res.amp->real());
                out << '\n';
                break;
            case Query::Kind::Consistent:
                out << "  consistent: " << (*res.consistent ? "yes" : "no")
                    << "   orthogonal: " << (*res.orthogonal ? "yes" : "no")
                    << "   worst violation " << fmt_double(*res.worst_violation) << "   ("
                    << res.gram_size << " histories)\n";
                break;
            case Query::Kind::SumRule: {
                const SumRuleAudit& audit = *res.audit;
                for (const auto& row : audit.rows) {
                    out << "  " << join_labels(row.labels) << "   sum " << fmt_double(row.lhs)
                        << "   coarse " << fmt_double(row.rhs) << '\n';
                }
                out << "  additive: " << (audit.holds ? "yes" : "no") << '\n';
                break;
            }
            case Query::Kind::Collapse:
                out << "  p = " << fmt_double(*res.value) << rational_hint(*res.value) << '\n';
                out << "  removed:";
                if (res.removed.empty()) out << " (none)";
                out << '\n';
                for (const auto& labels : res.removed) out << "    " << join_labels(labels) << '\n';
                out << "  added:";
                if (res.added.empty()) out << " (none)";
                out << '\n';
                for (const auto& labels : res.added) out << "    " << join_labels(labels) << '\n';
                out << "  content now:\n";
                table_histories(out, res.content_after);
                break;
        }
    }
    return out.str();
}

std::string format_json(const ScenarioDocument& doc, const std::vector<QueryResult>& results) {
    ordered_json root;
    root["scenario"] = doc.name;
    root["dim"] = doc.dim;
    root["slots"] = doc.slots.size();
    root["init"] = doc.init_label;
    if (doc.final_value) {
        root["final"] = doc.final_label;
    } else {
        root["final"] = nullptr;
    }
    ordered_json queries = ordered_json::array();
    for (const auto& res : results) {
        ordered_json q;
        q["query"] = describe(res.query);
        q["kind"] = kind_slug(res.query.kind);
        switch (res.query.kind) {
            case Query::Kind::Histories:
                q["histories"] = json_rows(res.histories);
                q["content_size"] = res.histories.size();
                q["enumerated"] = res.total_enumerated;
                break;
            case Query::Kind::Operator: {
                const ComplexMatrix& m = *res.op_matrix;
                ordered_json rows = ordered_json::array();
                for (std::size_t r = 0; r < m.dim(); ++r) {
                    ordered_json row = ordered_json::array();
                    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(json_complex(m(r, c)));
                    rows.push_back(std::move(row));
                }
                q["matrix"] = std::move(rows);
                break;
            }
            case Query::Kind::ProbJoint:
                q["outcomes"] = res.query.labels;
                q["value"] = round12(*res.value);
                break;
            case Query::Kind::ProbNext:
                q["outcome"] = res.query.labels.at(0);
                q["frame"] = frame_name(doc, res.query);
                q["value"] = round12(*res.value);
                break;
            case Query::Kind::ProbAt:
            case Query::Kind::ProbTwoVector:
                q["slot"] = res.query.slot;
                q["outcome"] = res.query.labels.at(0);
                q["value"] = round12(*res.value);
                break;
            case Query::Kind::Amplitude:
                q["outcomes"] = res.query.labels;
                q["value"] = json_complex(*res.amp);
                break;
            case Query::Kind::Consistent:
                q["consistent"] = *res.consistent;
                q["orthogonal"] = *res.orthogonal;
                q["worst_violation"] = round12(*res.worst_violation);
                q["histories"] = res.gram_size;
                break;
            case Query::Kind::SumRule: {
                const SumRuleAudit& audit = *res.audit;
                q["slot"] = res.query.slot;
                q["holds"] = audit.holds;
                ordered_json rows = ordered_json::array();
                for (const auto& row : audit.rows) {
                    rows.push_back(ordered_json{{"labels", row.labels},
                                                {"sum", round12(row.lhs)},
                                                {"coarse", round12(row.rhs)}});
                }
                q["rows"] = std::move(rows);
                break;
            }
            case Query::Kind::Collapse:
                q["outcome"] = res.query.labels.at(0);
                q["frame"] = frame_name(doc, res.query);
                q["value"] = round12(*res.value);
                q["removed"] = res.removed;
                q["added"] = res.added;
                q["content"] = json_rows(res.content_after);
                break;
        }
        queries.push_back(std::move(q));
    }
    root["queries"] = std::move(queries);
    return root.dump(2) + "\n";
}

} // namespace histq
