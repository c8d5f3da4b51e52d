#include "histq/scenario.hpp"

namespace histq {

namespace {

const char* kEntangler = R"(# Two qubits: a beam-splitting Hadamard, then an entangling CNOT.
dim 4
init |00>
slot unitary=H (x) I(2) frame=comp(2)
slot unitary=CNOT frame=comp(2)
query histories
query prob joint 00 00
query prob joint 10 11
query prob next 11
query prob next 1 frame=lift(comp(1),1,[2,2])
query consistent?
query sumrule 1
query collapse 11
)";

const char* kMachZehnder = R"(# Balanced interferometer: two beam splitters, no which-path record.
dim 2
init |0>
slot unitary=H frame=comp(1)
slot unitary=H frame=comp(1)
query histories
query operator
query prob joint 0 0
query prob joint 0 1
query prob joint 1 0
query prob joint 1 1
query prob next 0
query prob next 1
query consistent?
query sumrule 1
)";

const char* kTeleport = R"(# Qubit teleportation: Alice entangles and measures, Bob holds qubit 3.
dim 8
state psi = 1/sqrt(3)*|0> + sqrt(2)/sqrt(3)*|1>
state bell = 1/sqrt(2)*(|00> + |11>)
init psi (x) bell
slot unitary=I(8) frame=comp(3)
slot unitary=CNOT (x) I(2) frame=comp(3)
slot unitary=H (x) I(4) frame=comp(3)
query histories
query prob next 00 frame=lift(comp(2),1,[4,2])
query prob next 01 frame=lift(comp(2),1,[4,2])
query prob next 10 frame=lift(comp(2),1,[4,2])
query prob next 11 frame=lift(comp(2),1,[4,2])
query consistent?
)";

const char* kTeleport00 = R"(# Teleportation, Alice read 00: Bob already holds psi.
dim 8
state psi = 1/sqrt(3)*|0> + sqrt(2)/sqrt(3)*|1>
state bell = 1/sqrt(2)*(|00> + |11>)
init psi (x) bell
slot unitary=I(8) frame=comp(3)
slot unitary=CNOT (x) I(2) frame=comp(3)
slot unitary=H (x) I(4) frame=comp(3)
slot unitary=I(8) frame=lift(comp(2),1,[4,2]) record=00
query histories
query prob next 0 frame=lift(comp(1),3,[2,2,2])
query prob next 1 frame=lift(comp(1),3,[2,2,2])
)";

const char* kTeleport01 = R"(# Teleportation, Alice read 01: Bob applies X.
dim 8
state psi = 1/sqrt(3)*|0> + sqrt(2)/sqrt(3)*|1>
state bell = 1/sqrt(2)*(|00> + |11>)
init psi (x) bell
slot unitary=I(8) frame=comp(3)
slot unitary=CNOT (x) I(2) frame=comp(3)
slot unitary=H (x) I(4) frame=comp(3)
slot unitary=I(8) frame=lift(comp(2),1,[4,2]) record=01
slot unitary=I(4) (x) X frame=trivial(8)
query histories
query prob next 0 frame=lift(comp(1),3,[2,2,2])
query prob next 1 frame=lift(comp(1),3,[2,2,2])
)";

const char* kTeleport10 = R"(# Teleportation, Alice read 10: Bob applies Z.
dim 8
state psi = 1/sqrt(3)*|0> + sqrt(2)/sqrt(3)*|1>
state bell = 1/sqrt(2)*(|00> + |11>)
init psi (x) bell
slot unitary=I(8) frame=comp(3)
slot unitary=CNOT (x) I(2) frame=comp(3)
slot unitary=H (x) I(4) frame=comp(3)
slot unitary=I(8) frame=lift(comp(2),1,[4,2]) record=10
slot unitary=I(4) (x) Z frame=trivial(8)
query prob next 0 frame=lift(comp(1),3,[2,2,2])
query prob next 1 frame=lift(comp(1),3,[2,2,2])
)";

const char* kTeleport11 = R"(# Teleportation, Alice read 11: Bob applies X then Z.
dim 8
state psi = 1/sqrt(3)*|0> + sqrt(2)/sqrt(3)*|1>
state bell = 1/sqrt(2)*(|00> + |11>)
init psi (x) bell
slot unitary=I(8) frame=comp(3)
slot unitary=CNOT (x) I(2) frame=comp(3)
slot unitary=H (x) I(4) frame=comp(3)
slot unitary=I(8) frame=lift(comp(2),1,[4,2]) record=11
slot unitary=I(4) (x) (Z*X) frame=trivial(8)
query prob next 0 frame=lift(comp(1),3,[2,2,2])
query prob next 1 frame=lift(comp(1),3,[2,2,2])
)";

const char* kThreeBoxA = R"(# One particle, three boxes, pre- and post-selected: ask about box A.
dim 3
state A = basis(3,0)
state B = basis(3,1)
state C = basis(3,2)
state psi = 1/sqrt(3)*(A + B + C)
state phi = 1/sqrt(3)*(A + B - C)
init psi
slot unitary=I(3) frame=binary(A)
final phi
query histories
query prob at 1 A
query prob twovector 1 A
query amplitude A
query amplitude ~A
)";

const char* kThreeBoxB = R"(# Same pre/post-selection, asking about box B instead.
dim 3
state A = basis(3,0)
state B = basis(3,1)
state C = basis(3,2)
state psi = 1/sqrt(3)*(A + B + C)
state phi = 1/sqrt(3)*(A + B - C)
init psi
slot unitary=I(3) frame=binary(B)
final phi
query histories
query prob at 1 B
query prob twovector 1 B
query amplitude B
query amplitude ~B
)";

const char* kThreeBoxFull = R"(# Same pre/post-selection with the full box-by-box frame.
dim 3
state A = basis(3,0)
state B = basis(3,1)
state C = basis(3,2)
state psi = 1/sqrt(3)*(A + B + C)
state phi = 1/sqrt(3)*(A + B - C)
init psi
slot unitary=I(3) frame=frame{A,B,C}
final phi
query histories
query prob at 1 A
query prob at 1 B
query prob at 1 C
query prob twovector 1 A
)";

const char* kThreeBoxAFrames = R"(# Coarse box-A question followed by the post-selection question.
dim 3
state A = basis(3,0)
state B = basis(3,1)
state C = basis(3,2)
state psi = 1/sqrt(3)*(A + B + C)
state phi = 1/sqrt(3)*(A + B - C)
init psi
slot unitary=I(3) frame=binary(A)
slot unitary=I(3) frame=binary(phi)
query histories
query consistent?
)";

const char* kThreeBoxFullFrames = R"(# Fine-grained boxes followed by the post-selection question.
dim 3
state A = basis(3,0)
state B = basis(3,1)
state C = basis(3,2)
state psi = 1/sqrt(3)*(A + B + C)
state phi = 1/sqrt(3)*(A + B - C)
init psi
slot unitary=I(3) frame=frame{A,B,C}
slot unitary=I(3) frame=binary(phi)
query histories
query consistent?
)";

} // namespace

const std::vector<std::pair<std::string, std::string>>& golden_scenario_texts() {
    static const std::vector<std::pair<std::string, std::string>> texts = {
        {"entangler", kEntangler},
        {"mach-zehnder", kMachZehnder},
        {"teleport", kTeleport},
        {"teleport-00", kTeleport00},
        {"teleport-01", kTeleport01},
        {"teleport-10", kTeleport10},
        {"teleport-11", kTeleport11},
        {"three-box-A", kThreeBoxA},
        {"three-box-B", kThreeBoxB},
        {"three-box-full", kThreeBoxFull},
        {"three-box-A-frames", kThreeBoxAFrames},
        {"three-box-full-frames", kThreeBoxFullFrames},
    };
    return texts;
}

std::vector<std::pair<std::string, ScenarioDocument>> golden_scenarios() {
    std::vector<std::pair<std::string, ScenarioDocument>> docs;
    for (const auto& [name, text] : golden_scenario_texts()) {
        docs.emplace_back(name, parse(text, name));
    }
    return docs;
}

} // namespace histq
