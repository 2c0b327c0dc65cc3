#include "qusa/network.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>

namespace qusa {

int label_count(Model model) { return model == Model::Triode ? 3 : 4; }

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    throw std::logic_error("bad axis");
}

const char* to_string(Label label) {
    switch (label) {
        case Label::X: return "X";
        case Label::Y: return "Y";
        case Label::Z: return "Z";
        case Label::Sing: return "Sing";
    }
    throw std::logic_error("bad label");
}

int qubit_value(Label label, Axis axis) {
    if (label == Label::Sing) return 1;
    return static_cast<int>(label) == static_cast<int>(axis) ? 1 : 0;
}

int qubit_value(const Assignment& a, const QubitRef& ref) {
    return qubit_value(a.at(ref.triode), ref.axis);
}

int qubit_sum(Label label) { return label == Label::Sing ? 3 : 1; }

std::string to_string(const QubitRef& q) {
    return std::to_string(q.triode) + "." + to_string(q.axis);
}

Wire::Wire(QubitRef qa, QubitRef qb) : a(qa), b(qb) {
    if (a == b) throw std::invalid_argument("wire endpoints coincide: " + to_string(a));
    if (b < a) std::swap(a, b);
}

TriodeNetwork::TriodeNetwork(int count, std::vector<Wire> ws)
    : triode_count(count), wires(std::move(ws)) {
    if (triode_count < 0) throw std::invalid_argument("triode_count must be nonnegative");
    std::set<Wire> seen;
    for (const Wire& w : wires) {
        for (const QubitRef& q : {w.a, w.b}) {
            if (q.triode < 0 || q.triode >= triode_count)
                throw std::invalid_argument("wire endpoint out of range: " + to_string(q));
        }
        if (!seen.insert(w).second)
            throw std::invalid_argument("duplicate wire: " + to_string(w.a) + " " + to_string(w.b));
    }
}

std::string to_string(const Assignment& a) {
    std::string out;
    for (Label l : a) out += to_string(l);
    return out;
}

Assignment parse_labels(const std::string& text) {
    Assignment out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 4, "Sing") == 0) {
            out.push_back(Label::Sing);
            i += 4;
        } else if (text[i] == 'X') {
            out.push_back(Label::X);
            ++i;
        } else if (text[i] == 'Y') {
            out.push_back(Label::Y);
            ++i;
        } else if (text[i] == 'Z') {
            out.push_back(Label::Z);
            ++i;
        } else {
            throw std::invalid_argument("bad label string: " + text);
        }
    }
    return out;
}

int wire_error(const Wire& w, const Assignment& a) {
    const int va = qubit_value(a.at(w.a.triode), w.a.axis);
    const int vb = qubit_value(a.at(w.b.triode), w.b.axis);
    return va ^ vb;
}

int total_error(const TriodeNetwork& net, const Assignment& a) {
    if (static_cast<int>(a.size()) != net.triode_count)
        throw std::invalid_argument("assignment length does not match network");
    int err = 0;
    for (const Wire& w : net.wires) err += wire_error(w, a);
    return err;
}

double assignment_energy(const TriodeNetwork& net, const Assignment& a,
                         const EnergyParams& params) {
    const int err = total_error(net, a);
    if (!params.trap_free) return params.g * err;
    int depth = 0;
    for (Label l : a) depth += 3 - qubit_sum(l);
    return err * (params.g + params.g_prime * depth);
}

std::vector<Assignment> enumerate_solutions(const TriodeNetwork& net, Model model,
                                            const EnumerationCaps& caps) {
    const int cap = model == Model::Triode ? caps.triode_cap : caps.equ_cap;
    if (net.triode_count > cap)
        throw CapError("enumeration over " + std::to_string(net.triode_count) +
                       " triodes exceeds cap " + std::to_string(cap));
    const int radix = label_count(model);
    std::vector<Assignment> out;
    Assignment a(net.triode_count, Label::X);
    // odometer over labels, triode 0 most significant
    while (true) {
        if (total_error(net, a) == 0) out.push_back(a);
        int pos = net.triode_count - 1;
        while (pos >= 0) {
            const int next = static_cast<int>(a[pos]) + 1;
            if (next < radix) {
                a[pos] = static_cast<Label>(next);
                break;
            }
            a[pos] = Label::X;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

ExactCoverInstance::ExactCoverInstance(int count, std::vector<std::array<int, 3>> cls)
    : variable_count(count), clauses(std::move(cls)) {
    if (variable_count < 1) throw std::invalid_argument("variable_count must be positive");
    for (const auto& c : clauses) {
        for (int v : c)
            if (v < 0 || v >= variable_count)
                throw std::invalid_argument("clause variable out of range: " + std::to_string(v));
        if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2])
            throw std::invalid_argument("clause variables must be distinct");
    }
}

EncodedCover encode_exact_cover(const ExactCoverInstance& inst) {
    if (inst.clauses.empty()) throw std::invalid_argument("instance has no clauses");
    EncodedCover enc;
    enc.variable_refs.assign(inst.variable_count, std::nullopt);
    std::vector<Wire> wires;
    std::map<int, QubitRef> last_seen;
    for (std::size_t t = 0; t < inst.clauses.size(); ++t) {
        for (int slot = 0; slot < 3; ++slot) {
            const int var = inst.clauses[t][slot];
            const QubitRef here{static_cast<int>(t), static_cast<Axis>(slot)};
            if (auto it = last_seen.find(var); it != last_seen.end())
                wires.emplace_back(it->second, here);
            else
                enc.variable_refs[var] = here;
            last_seen[var] = here;
        }
    }
    enc.network = TriodeNetwork(static_cast<int>(inst.clauses.size()), std::move(wires));
    return enc;
}

GadgetSpec build_not_gadget() {
    // Tying 1.x to 1.y forces triode 1 to label Z on the triode alphabet,
    // so both tied qubits read 0. Wiring one of them to 0.z pins q(0.z)=0;
    // triode 0 is then X or Y and 0.x is the complement of 0.y.
    TriodeNetwork net(2, {Wire({1, Axis::X}, {1, Axis::Y}), Wire({0, Axis::Z}, {1, Axis::X})});
    GadgetSpec g;
    g.network = std::move(net);
    g.input_refs = {{0, Axis::Y}};
    g.output_refs = {{0, Axis::X}};
    return g;
}

GadgetSpec build_nor_gadget() {
    // Three coupled clauses: a+u+z=1, b+k+z=1, u+k+m=1 with a,b the inputs
    // and z the output. z=1 forces a=b=0; z=0 forces u=!a, k=!b, and the
    // third clause is satisfiable unless u=k=1, i.e. unless a=b=0.
    TriodeNetwork net(3, {
                             Wire({0, Axis::Z}, {1, Axis::Z}),  // shared z
                             Wire({0, Axis::Y}, {2, Axis::X}),  // u chained
                             Wire({1, Axis::Y}, {2, Axis::Y}),  // k chained
                         });
    GadgetSpec g;
    g.network = std::move(net);
    g.input_refs = {{0, Axis::X}, {1, Axis::X}};
    g.output_refs = {{0, Axis::Z}};
    return g;
}

bool verify_gadget(const GadgetSpec& gadget, Model model,
                   const std::set<std::vector<int>>& table, const EnumerationCaps& caps) {
    const auto solutions = enumerate_solutions(gadget.network, model, caps);
    std::set<std::vector<int>> seen;
    for (const Assignment& a : solutions) {
        std::vector<int> row;
        for (const QubitRef& q : gadget.input_refs) row.push_back(qubit_value(a, q));
        for (const QubitRef& q : gadget.output_refs) row.push_back(qubit_value(a, q));
        if (!table.count(row)) return false;  // solution outside the table
        seen.insert(row);
    }
    return seen == table;  // every row realized
}

namespace {

QubitRef parse_qubit_ref(const std::string& tok, const std::string& source, int line) {
    const auto dot = tok.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= tok.size())
        throw ParseError(source, line, "expected T.axis, got '" + tok + "'");
    int triode = 0;
    try {
        std::size_t used = 0;
        triode = std::stoi(tok.substr(0, dot), &used);
        if (used != dot) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw ParseError(source, line, "bad triode index in '" + tok + "'");
    }
    const std::string ax = tok.substr(dot + 1);
    Axis axis;
    if (ax == "x") axis = Axis::X;
    else if (ax == "y") axis = Axis::Y;
    else if (ax == "z") axis = Axis::Z;
    else throw ParseError(source, line, "bad axis '" + ax + "' (want x, y, or z)");
    return {triode, axis};
}

/// Strips comments, splits into tokens; returns false for blank lines.
bool tokenize_line(const std::string& raw, std::vector<std::string>& tokens) {
    std::string text = raw.substr(0, raw.find('#'));
    tokens.clear();
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return !tokens.empty();
}

int parse_count(const std::string& tok, const std::string& source, int line,
                const char* what, int minimum) {
    try {
        std::size_t used = 0;
        const int n = std::stoi(tok, &used);
        if (used != tok.size() || n < minimum) throw std::invalid_argument("");
        return n;
    } catch (const std::exception&) {
        throw ParseError(source, line, std::string("bad ") + what + " count '" + tok + "'");
    }
}

}  // namespace

TriodeNetwork parse_network(std::istream& in, const std::string& source) {
    std::string raw;
    std::vector<std::string> tok;
    int line = 0;
    int triodes = -1;
    std::vector<Wire> wires;
    while (std::getline(in, raw)) {
        ++line;
        if (!tokenize_line(raw, tok)) continue;
        if (tok[0] == "triodes") {
            if (tok.size() != 2) throw ParseError(source, line, "usage: triodes N");
            if (triodes >= 0) throw ParseError(source, line, "duplicate triodes line");
            // an empty network (zero triodes) is legal
            triodes = parse_count(tok[1], source, line, "triode", 0);
        } else if (tok[0] == "wire") {
            if (tok.size() != 3) throw ParseError(source, line, "usage: wire T.a T.a");
            if (triodes < 0) throw ParseError(source, line, "wire before triodes line");
            try {
                wires.emplace_back(parse_qubit_ref(tok[1], source, line),
                                   parse_qubit_ref(tok[2], source, line));
            } catch (const std::invalid_argument& e) {
                throw ParseError(source, line, e.what());
            }
        } else {
            throw ParseError(source, line, "unknown directive '" + tok[0] + "'");
        }
    }
    if (triodes < 0) throw ParseError(source, line, "missing triodes line");
    try {
        return TriodeNetwork(triodes, std::move(wires));
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, line, e.what());
    }
}

ExactCoverInstance parse_exact_cover(std::istream& in, const std::string& source) {
    std::string raw;
    std::vector<std::string> tok;
    int line = 0;
    int vars = -1;
    std::vector<std::array<int, 3>> clauses;
    while (std::getline(in, raw)) {
        ++line;
        if (!tokenize_line(raw, tok)) continue;
        if (tok[0] == "vars") {
            if (tok.size() != 2) throw ParseError(source, line, "usage: vars N");
            if (vars >= 0) throw ParseError(source, line, "duplicate vars line");
            vars = parse_count(tok[1], source, line, "variable", 1);
        } else if (tok[0] == "clause") {
            if (tok.size() != 4) throw ParseError(source, line, "usage: clause I J K");
            if (vars < 0) throw ParseError(source, line, "clause before vars line");
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) {
                try {
                    std::size_t used = 0;
                    c[i] = std::stoi(tok[i + 1], &used);
                    if (used != tok[i + 1].size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw ParseError(source, line, "bad variable '" + tok[i + 1] + "'");
                }
            }
            clauses.push_back(c);
        } else {
            throw ParseError(source, line, "unknown directive '" + tok[0] + "'");
        }
    }
    if (vars < 0) throw ParseError(source, line, "missing vars line");
    try {
        return ExactCoverInstance(vars, std::move(clauses));
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, line, e.what());
    }
}

std::string to_text(const TriodeNetwork& net, const std::string& separator) {
    std::string out = "triodes " + std::to_string(net.triode_count);
    for (const Wire& w : net.wires) {
        out += separator;
        out += "wire " + to_string(w.a) + " " + to_string(w.b);
    }
    return out;
}

}  // namespace qusa
