#include "histq/experiment.hpp"

#include "histq/errors.hpp"

#include <cmath>
#include <cstdio>

namespace histq {

std::vector<std::string> validate(const Schedule& s, double tol) {
    std::vector<std::string> out;
    if (s.dim == 0) {
        out.push_back("schedule dim must be >= 1");
        return out;
    }
    if (s.initial.dim() != s.dim) {
        out.push_back("initial state has dim " + std::to_string(s.initial.dim()) + ", schedule has dim " +
                      std::to_string(s.dim));
    } else if (!s.initial.is_normalized(kNormTol)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", s.initial.norm());
        out.push_back(std::string("initial state is not normalized (norm ") + buf + ")");
    }
    if (s.final) {
        if (s.final->dim() != s.dim) {
            out.push_back("final state has dim " + std::to_string(s.final->dim()) + ", schedule has dim " +
                          std::to_string(s.dim));
        } else if (!s.final->is_normalized(kNormTol)) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", s.final->norm());
            out.push_back(std::string("final state is not normalized (norm ") + buf + ")");
        }
    }
    if (s.slots.empty()) out.push_back("schedule has no slots");
    for (std::size_t k = 0; k < s.slots.size(); ++k) {
        const std::string tag = "slot " + std::to_string(k + 1) + ": ";
        const Slot& slot = s.slots[k];
        if (slot.unitary.dim() != s.dim) {
            out.push_back(tag + "unitary has dim " + std::to_string(slot.unitary.dim()) +
                          ", schedule has dim " + std::to_string(s.dim));
        } else {
            const double defect = unitarity_defect(slot.unitary);
            if (defect > tol) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3g", defect);
                out.push_back(tag + "matrix is not unitary (defect " + buf + ")");
            }
        }
        if (slot.frame.dim != s.dim) {
            out.push_back(tag + "frame has dim " + std::to_string(slot.frame.dim) + ", schedule has dim " +
                          std::to_string(s.dim));
        } else {
            for (const auto& v : slot.frame.violations(tol)) out.push_back(tag + v);
        }
        if (slot.recorded && *slot.recorded >= slot.frame.projectors.size()) {
            out.push_back(tag + "recorded outcome " + std::to_string(*slot.recorded) +
                          " out of range (frame has " + std::to_string(slot.frame.projectors.size()) +
                          " projectors)");
        }
    }
    return out;
}

void require_valid(const Schedule& s, double tol) {
    auto bad = validate(s, tol);
    if (bad.empty()) return;
    std::string msg = "invalid schedule:";
    for (const auto& v : bad) msg += "\n  - " + v;
    throw ValidationError(msg);
}

ComplexMatrix total_unitary(const Schedule& s) {
    require_valid(s);
    ComplexMatrix u = ComplexMatrix::identity(s.dim);
    for (const auto& slot : s.slots) u = slot.unitary * u;
    return u;
}

Schedule stripped(const Schedule& s) {
    Schedule out = s;
    for (auto& slot : out.slots) slot.recorded.reset();
    out.final.reset();
    return out;
}

} // namespace histq
