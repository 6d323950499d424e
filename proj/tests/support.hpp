#pragma once

// Shared fixtures, random generators and independent oracles for the test
// suites. Nothing here calls the dual construction or the minimizers.

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moore/duality.hpp"
#include "moore/machine.hpp"

namespace moore::testing {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_file(const std::string& name) { return std::string(MOORE_TEST_DATA) + "/" + name; }
inline std::string golden_file(const std::string& name) { return std::string(MOORE_GOLDEN_DIR) + "/" + name; }

inline MooreMachine load(const std::string& name) { return parse_machine(read_text(data_file(name))); }

inline Word word(std::string_view digits) {
    Word w;
    for (char c : digits) w.push_back(static_cast<Symbol>(c - '0'));
    return w;
}

/// Machine from a row table: rows[s][j] = δ(s, j); outputs are the digits of
/// the output map.
inline MooreMachine make_machine(std::vector<std::string> names, std::vector<std::vector<State>> rows,
                                 std::vector<std::uint32_t> out, std::size_t output_count, State initial = 0) {
    const std::size_t q = rows.front().size();
    std::vector<State> table;
    for (const auto& r : rows) table.insert(table.end(), r.begin(), r.end());
    std::vector<std::string> outputs;
    for (std::size_t k = 0; k < output_count; ++k) outputs.push_back(std::to_string(k));
    return MooreMachine(std::move(names), q, {}, std::move(outputs), std::move(table), std::move(out), initial);
}

/// Uniformly random machine with n states, q inputs and `outputs` output
/// symbols; not necessarily reachable.
inline MooreMachine random_machine(std::mt19937_64& rng, std::size_t n, std::size_t q, std::size_t outputs) {
    std::uniform_int_distribution<State> target(0, static_cast<State>(n - 1));
    std::uniform_int_distribution<std::uint32_t> out(0, static_cast<std::uint32_t>(outputs - 1));
    std::vector<std::string> names;
    for (std::size_t s = 0; s < n; ++s) names.push_back("s" + std::to_string(s));
    std::vector<State> table(n * q);
    for (auto& t : table) t = target(rng);
    std::vector<std::uint32_t> lambda(n);
    for (auto& o : lambda) o = out(rng);
    std::vector<std::string> symbols;
    for (std::size_t k = 0; k < outputs; ++k) symbols.push_back(std::to_string(k));
    return MooreMachine(std::move(names), q, {}, std::move(symbols), std::move(table), std::move(lambda),
                        target(rng));
}

/// Random reachable machine: |Q| <= max_states, q <= max_inputs,
/// |Δ| <= max_outputs.
inline MooreMachine random_reachable_machine(std::mt19937_64& rng, std::size_t max_states = 8,
                                             std::size_t max_inputs = 3, std::size_t max_outputs = 3) {
    std::uniform_int_distribution<std::size_t> n(1, max_states), q(1, max_inputs), d(1, max_outputs);
    return trim(random_machine(rng, n(rng), q(rng), d(rng)));
}

inline Word random_word(std::mt19937_64& rng, std::size_t q, std::size_t max_length) {
    std::uniform_int_distribution<std::size_t> len(0, max_length);
    std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(q - 1));
    Word w(len(rng));
    for (auto& j : w) j = sym(rng);
    return w;
}

/// Random permutation of the states, keeping the names.
inline MooreMachine shuffle_states(std::mt19937_64& rng, const MooreMachine& m) {
    std::vector<State> order(m.state_count());
    for (State s = 0; s < order.size(); ++s) order[s] = s;
    std::shuffle(order.begin(), order.end(), rng);
    return permute_states(m, order);
}

/// Equivalent machine with one extra state: a copy of `victim` (same output
/// and successors) that takes over a random subset of the edges into it.
inline MooreMachine split_state(std::mt19937_64& rng, const MooreMachine& m, State victim) {
    const std::size_t n = m.state_count();
    const std::size_t q = m.input_count();
    const State copy = static_cast<State>(n);
    std::vector<std::string> names(m.state_names().begin(), m.state_names().end());
    std::string name = m.state_name(victim) + "'";
    while (std::find(names.begin(), names.end(), name) != names.end()) name += "'";
    names.push_back(name);
    std::vector<State> table(m.transitions().begin(), m.transitions().end());
    for (Symbol j = 0; j < q; ++j) table.push_back(m.next(victim, j));
    std::bernoulli_distribution redirect(0.5);
    for (auto& t : table) {
        if (t == victim && redirect(rng)) t = copy;
    }
    std::vector<std::uint32_t> out(m.output_map().begin(), m.output_map().end());
    out.push_back(m.output_index(victim));
    return MooreMachine(std::move(names), q, {m.input_names().begin(), m.input_names().end()},
                        {m.outputs().begin(), m.outputs().end()}, std::move(table), std::move(out), m.initial());
}

/// Calls f(w) for every word of length <= max_length, shortlex order.
template <typename F>
void for_each_word(std::size_t q, std::size_t max_length, F f) {
    Word w;
    f(w);
    for (std::size_t len = 1; len <= max_length; ++len) {
        w.assign(len, 0);
        while (true) {
            f(w);
            std::size_t k = len;
            while (k > 0 && w[k - 1] == q - 1) w[--k] = 0;
            if (k == 0) break;
            ++w[k - 1];
        }
    }
}

/// Shortlex-least word on which M1·w and M2·w differ, searching every word
/// of length <= max_length. Empty optional when none is found.
inline std::optional<Word> brute_force_counterexample(const MooreMachine& m1, const MooreMachine& m2,
                                                      std::size_t max_length) {
    std::optional<Word> found;
    for_each_word(m1.input_count(), max_length, [&](const Word& w) {
        if (!found && run_right(m1, w) != run_right(m2, w)) found = w;
    });
    return found;
}

/// Vector-labeled machine built straight from the word definitions.
struct DefinitionalDual {
    std::vector<OutputVector> vectors;
    std::vector<State> table;
};

/// Right dual from its definition: the state reached by word w is the vector
/// a ↦ λ(a·w), and input j sends the state of w to the state of jw.
/// `left_dual_by_definition` uses a ↦ λ(w·a) and wj instead. Both walk the
/// states in the same worklist order as the library's dual.
inline DefinitionalDual dual_by_definition(const MooreMachine& machine, bool right) {
    const MooreMachine m = trim(machine);
    auto vector_of = [&](const Word& w) {
        OutputVector f{std::vector<std::uint32_t>(m.state_count())};
        for (State a = 0; a < m.state_count(); ++a)
            f.values[a] = m.output_index(right ? right_action(m, a, w) : left_action(m, w, a));
        return f;
    };
    DefinitionalDual d;
    std::vector<Word> words{Word{}};
    d.vectors.push_back(vector_of(words.front()));
    for (std::size_t k = 0; k < words.size(); ++k) {
        for (Symbol j = 0; j < m.input_count(); ++j) {
            Word w;
            if (right) {
                w.push_back(j);
                w.insert(w.end(), words[k].begin(), words[k].end());
            } else {
                w = words[k];
                w.push_back(j);
            }
            OutputVector f = vector_of(w);
            auto it = std::find(d.vectors.begin(), d.vectors.end(), f);
            if (it == d.vectors.end()) {
                d.table.push_back(static_cast<State>(d.vectors.size()));
                d.vectors.push_back(std::move(f));
                words.push_back(std::move(w));
            } else {
                d.table.push_back(static_cast<State>(it - d.vectors.begin()));
            }
        }
    }
    return d;
}

inline DefinitionalDual right_dual_by_definition(const MooreMachine& m) { return dual_by_definition(m, true); }
inline DefinitionalDual left_dual_by_definition(const MooreMachine& m) { return dual_by_definition(m, false); }

} // namespace moore::testing
