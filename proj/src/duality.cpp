#include "moore/duality.hpp"

#include <unordered_map>

#include "moore/error.hpp"

namespace moore {

namespace {

struct VectorHash {
    std::size_t operator()(const OutputVector& f) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto v : f.values) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

void check_domain(const MooreMachine& m, const OutputVector& f) {
    if (f.size() != m.state_count()) {
        throw DomainError("vector has " + std::to_string(f.size()) + " entries but the machine has " +
                          std::to_string(m.state_count()) + " states");
    }
    for (auto v : f.values) {
        if (v >= m.output_count()) throw DomainError("vector value outside the output alphabet");
    }
}

std::string describe(const MooreMachine& base, const OutputVector& f) {
    std::string s = "vector:";
    for (State a = 0; a < base.state_count(); ++a) {
        s += ' ' + base.state_name(a) + '=' + base.outputs()[f(a)];
    }
    return s;
}

} // namespace

OutputVector output_vector(const MooreMachine& m) {
    return {{m.output_map().begin(), m.output_map().end()}};
}

OutputVector act_left_on_function(const MooreMachine& m, std::span<const Symbol> w, const OutputVector& f) {
    check_domain(m, f);
    OutputVector g{std::vector<std::uint32_t>(f.size())};
    for (State a = 0; a < m.state_count(); ++a) g.values[a] = f(right_action(m, a, w));
    return g;
}

OutputVector act_right_on_function(const MooreMachine& m, const OutputVector& f, std::span<const Symbol> w) {
    check_domain(m, f);
    OutputVector g{std::vector<std::uint32_t>(f.size())};
    for (State a = 0; a < m.state_count(); ++a) g.values[a] = f(left_action(m, w, a));
    return g;
}

OutputVector compose_transition(const MooreMachine& m, const OutputVector& f, Symbol j) {
    if (f.size() != m.state_count() || j >= m.input_count()) throw DomainError("vector or symbol does not fit the machine");
    OutputVector g{std::vector<std::uint32_t>(f.size())};
    for (State a = 0; a < m.state_count(); ++a) g.values[a] = f(m.next(a, j));
    return g;
}

DualMachine dual(const MooreMachine& m) {
    MooreMachine base = trim(m);
    const std::size_t q = base.input_count();

    std::vector<OutputVector> stack{output_vector(base)};
    std::unordered_map<OutputVector, State, VectorHash> index{{stack.front(), 0}};
    std::vector<State> table;

    // Elements below `lowest` are happy, so the lowest unhappy element is
    // always stack[lowest].
    for (std::size_t lowest = 0; lowest < stack.size(); ++lowest) {
        for (Symbol j = 0; j < q; ++j) {
            OutputVector next = compose_transition(base, stack[lowest], j);
            auto [it, inserted] = index.try_emplace(next, static_cast<State>(stack.size()));
            if (inserted) stack.push_back(std::move(next));
            table.push_back(it->second);
        }
    }

    const State i = base.initial();
    std::vector<std::string> names;
    std::vector<std::uint32_t> out;
    names.reserve(stack.size());
    out.reserve(stack.size());
    for (std::size_t s = 0; s < stack.size(); ++s) {
        names.push_back("d" + std::to_string(s));
        out.push_back(stack[s](i));
    }
    MooreMachine machine(std::move(names), q, {base.input_names().begin(), base.input_names().end()},
                         {base.outputs().begin(), base.outputs().end()}, std::move(table), std::move(out), 0);
    return {std::move(machine), std::move(base), std::move(stack)};
}

MooreMachine bidual(const MooreMachine& m) {
    return dual(dual(m).machine).machine;
}

std::string emit_dual(const DualMachine& d) {
    std::vector<std::string> comments;
    comments.reserve(d.vectors.size());
    for (const auto& f : d.vectors) comments.push_back(describe(d.base, f));
    return emit_machine(d.machine, comments);
}

} // namespace moore
