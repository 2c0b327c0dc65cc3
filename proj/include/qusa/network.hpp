#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qusa/common.hpp"

namespace qusa {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

enum class Label : std::uint8_t { X = 0, Y = 1, Z = 2, Sing = 3 };

/// Which label alphabet a device admits. Triode excludes Sing.
enum class Model : std::uint8_t { Triode, Equ };

int label_count(Model model);
const char* to_string(Axis axis);
const char* to_string(Label label);

/// Bit read off qubit `axis` of a triode in state `label`.
/// X,Y,Z set exactly their own axis; Sing sets all three.
int qubit_value(Label label, Axis axis);

struct QubitRef;
using Assignment = std::vector<Label>;

int qubit_value(const Assignment& a, const QubitRef& ref);

/// Sum of the three qubit values of one label (1 for X/Y/Z, 3 for Sing).
int qubit_sum(Label label);

struct QubitRef {
    int triode = 0;
    Axis axis = Axis::X;
    auto operator<=>(const QubitRef&) const = default;
};

std::string to_string(const QubitRef& q);

/// Unordered pair of distinct qubits held in canonical (sorted) order.
struct Wire {
    Wire(QubitRef a, QubitRef b);
    QubitRef a;
    QubitRef b;
    auto operator<=>(const Wire&) const = default;
};

struct TriodeNetwork {
    TriodeNetwork() = default;
    /// Validates wire endpoints against triode_count and rejects duplicates.
    TriodeNetwork(int triode_count, std::vector<Wire> wires);

    int triode_count = 0;
    std::vector<Wire> wires;
};

std::string to_string(const Assignment& a);
Assignment parse_labels(const std::string& text);

/// 1 when the two endpoint bits disagree, else 0.
int wire_error(const Wire& w, const Assignment& a);

/// Number of frustrated wires under `a`.
int total_error(const TriodeNetwork& net, const Assignment& a);

struct EnergyParams {
    double g = 1.0;        // per-wire error cost
    double g_prime = 0.0;  // trap term strength
    bool trap_free = false;
};

/// Plain form: g * total_error. Trap-free form multiplies the error count
/// by g + g' * sum over triodes of (3 - qubit_sum), which on Sing-free
/// assignments collapses to (g + 2*T*g') * total_error.
double assignment_energy(const TriodeNetwork& net, const Assignment& a,
                         const EnergyParams& params);

struct EnumerationCaps {
    int triode_cap = 12;  // 3^12 labelings
    int equ_cap = 10;     // 4^10 labelings
};

/// All zero-error assignments in lexicographic order (triode 0 varies
/// slowest). Refuses networks beyond the cap rather than truncating.
std::vector<Assignment> enumerate_solutions(const TriodeNetwork& net, Model model,
                                            const EnumerationCaps& caps = {});

/// Exact cover over variables 0..variable_count-1: each clause is a set of
/// 3 distinct variables of which exactly one must be 1.
struct ExactCoverInstance {
    ExactCoverInstance() = default;
    ExactCoverInstance(int variable_count, std::vector<std::array<int, 3>> clauses);

    int variable_count = 0;
    std::vector<std::array<int, 3>> clauses;
};

struct EncodedCover {
    TriodeNetwork network;
    /// For each variable, one representative qubit, or nullopt when the
    /// variable appears in no clause (then it is unconstrained).
    std::vector<std::optional<QubitRef>> variable_refs;
};

/// One triode per clause; clause slots map to axes in listed order; repeated
/// variables are chained with wires between consecutive occurrences.
EncodedCover encode_exact_cover(const ExactCoverInstance& inst);

/// Fixed network with designated input and output qubits realizing a
/// Boolean function in its zero-error set.
struct GadgetSpec {
    TriodeNetwork network;
    std::vector<QubitRef> input_refs;
    std::vector<QubitRef> output_refs;
};

GadgetSpec build_not_gadget();
GadgetSpec build_nor_gadget();

/// True when the zero-error set of the gadget, projected onto
/// (inputs, outputs), equals `table` exactly: every solution lands in the
/// table and every table row is realized by some solution.
bool verify_gadget(const GadgetSpec& gadget, Model model,
                   const std::set<std::vector<int>>& table,
                   const EnumerationCaps& caps = {});

/// Line-oriented network file:
///   triodes N
///   wire T.A T.A     (A in {x,y,z})
/// '#' comments and blank lines are skipped.
TriodeNetwork parse_network(std::istream& in, const std::string& source);

/// Canonical text form, parseable by parse_network. Lines separated by
/// `separator`.
std::string to_text(const TriodeNetwork& net, const std::string& separator = "\n");

/// Line-oriented exact cover file:
///   vars N
///   clause I J K
ExactCoverInstance parse_exact_cover(std::istream& in, const std::string& source);

}  // namespace qusa
