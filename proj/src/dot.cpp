#include "moore/dot.hpp"

#include <sstream>

namespace moore {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

} // namespace

std::string to_dot(const MooreMachine& m) {
    std::ostringstream os;
    os << "digraph moore {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    os << "  __start [shape=point];\n";
    for (State s = 0; s < m.state_count(); ++s) {
        os << "  " << quoted(m.state_name(s)) << " [label=" << quoted(m.state_name(s) + "/" + m.output(s)) << "];\n";
    }
    os << "  __start -> " << quoted(m.state_name(m.initial())) << ";\n";
    for (State s = 0; s < m.state_count(); ++s) {
        for (Symbol j = 0; j < m.input_count(); ++j) {
            os << "  " << quoted(m.state_name(s)) << " -> " << quoted(m.state_name(m.next(s, j)))
               << " [label=" << quoted(m.input_name(j)) << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace moore
