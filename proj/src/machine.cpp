#include "moore/machine.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "moore/error.hpp"

namespace moore {

namespace {

bool is_default_input_names(const std::vector<std::string>& names) {
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] != std::to_string(j)) return false;
    }
    return true;
}

void check_symbols(const MooreMachine& m, std::span<const Symbol> w) {
    for (Symbol j : w) {
        if (j >= m.input_count()) {
            throw DomainError("input symbol " + std::to_string(j) + " out of range (q = " +
                              std::to_string(m.input_count()) + ")");
        }
    }
}

void check_state(const MooreMachine& m, State s) {
    if (s >= m.state_count()) throw DomainError("state index " + std::to_string(s) + " out of range");
}

} // namespace

MooreMachine::MooreMachine(std::vector<std::string> states,
                           std::size_t input_count,
                           std::vector<std::string> input_names,
                           std::vector<std::string> outputs,
                           std::vector<State> transitions,
                           std::vector<std::uint32_t> output_map,
                           State initial)
    : states_(std::move(states)),
      input_count_(input_count),
      input_names_(std::move(input_names)),
      outputs_(std::move(outputs)),
      transitions_(std::move(transitions)),
      output_map_(std::move(output_map)),
      initial_(initial) {
    const std::size_t n = states_.size();
    if (n == 0) throw DomainError("a machine needs at least one state");
    if (input_count_ == 0) throw DomainError("a machine needs at least one input symbol");
    if (outputs_.empty()) throw DomainError("a machine needs at least one output symbol");
    if (!input_names_.empty()) {
        if (input_names_.size() != input_count_) throw DomainError("input name count does not match q");
        if (std::set<std::string>(input_names_.begin(), input_names_.end()).size() != input_count_)
            throw DomainError("input names must be distinct");
        if (is_default_input_names(input_names_)) input_names_.clear();
    }
    if (std::set<std::string>(states_.begin(), states_.end()).size() != n)
        throw DomainError("state identifiers must be distinct");
    if (std::set<std::string>(outputs_.begin(), outputs_.end()).size() != outputs_.size())
        throw DomainError("output symbols must be distinct");
    if (transitions_.size() != n * input_count_) throw DomainError("transition table must have n*q entries");
    for (State t : transitions_) {
        if (t >= n) throw DomainError("transition target out of range");
    }
    if (output_map_.size() != n) throw DomainError("output map must have one entry per state");
    for (auto o : output_map_) {
        if (o >= outputs_.size()) throw DomainError("output index out of range");
    }
    if (initial_ >= n) throw DomainError("initial state out of range");
}

std::string MooreMachine::input_name(Symbol j) const {
    return input_names_.empty() ? std::to_string(j) : input_names_[j];
}

std::optional<State> MooreMachine::find_state(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) return std::nullopt;
    return static_cast<State>(it - states_.begin());
}

std::optional<std::uint32_t> MooreMachine::find_output(std::string_view token) const {
    auto it = std::find(outputs_.begin(), outputs_.end(), token);
    if (it == outputs_.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - outputs_.begin());
}

State right_action(const MooreMachine& m, State s, std::span<const Symbol> w) {
    check_state(m, s);
    check_symbols(m, w);
    for (Symbol j : w) s = m.next(s, j);
    return s;
}

State left_action(const MooreMachine& m, std::span<const Symbol> w, State s) {
    check_state(m, s);
    check_symbols(m, w);
    for (auto it = w.rbegin(); it != w.rend(); ++it) s = m.next(s, *it);
    return s;
}

const std::string& run_right(const MooreMachine& m, std::span<const Symbol> w) {
    return m.output(right_action(m, m.initial(), w));
}

const std::string& run_left(const MooreMachine& m, std::span<const Symbol> w) {
    return m.output(left_action(m, w, m.initial()));
}

std::vector<State> reachable_states(const MooreMachine& m, State from) {
    check_state(m, from);
    std::vector<bool> seen(m.state_count(), false);
    std::vector<State> order{from};
    seen[from] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (Symbol j = 0; j < m.input_count(); ++j) {
            State t = m.next(order[head], j);
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    return order;
}

MooreMachine permute_states(const MooreMachine& m, std::span<const State> order) {
    const std::size_t q = m.input_count();
    std::vector<State> position(m.state_count(), static_cast<State>(-1));
    for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = static_cast<State>(k);

    std::vector<std::string> names;
    std::vector<State> table;
    std::vector<std::uint32_t> out;
    names.reserve(order.size());
    table.reserve(order.size() * q);
    for (State old : order) {
        names.push_back(m.state_name(old));
        out.push_back(m.output_index(old));
        for (Symbol j = 0; j < q; ++j) table.push_back(position[m.next(old, j)]);
    }
    return MooreMachine(std::move(names), q, {m.input_names().begin(), m.input_names().end()},
                        {m.outputs().begin(), m.outputs().end()}, std::move(table), std::move(out),
                        position[m.initial()]);
}

MooreMachine trim(const MooreMachine& m) {
    return permute_states(m, reachable_states(m, m.initial()));
}

MooreMachine parse_machine(std::string_view text) {
    using detail::fail;
    using detail::Token;

    const auto lines = detail::tokenize(text);
    if (lines.empty()) throw ParseError(1, 1, "empty file, expected 'moore v1'");
    const auto& header = lines.front();
    if (header.tokens[0].text != "moore") detail::fail(header.tokens[0], "expected 'moore v1' header");
    detail::expect_arity(header, 2, "moore v1");
    if (header.tokens[1].text != "v1") fail(header.tokens[1], "unsupported format version '" + header.tokens[1].text + "'");

    std::optional<Token> inputs_at, outputs_at, initial_at;
    std::size_t q = 0;
    std::vector<std::string> input_names;
    std::vector<std::string> outputs;
    std::vector<std::pair<Token, Token>> state_decls;
    std::vector<std::array<Token, 3>> trans_decls;
    Token initial_token;

    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        const auto& kw = line.tokens[0];
        if (kw.text == "inputs") {
            if (inputs_at) fail(kw, "duplicate declaration of 'inputs'");
            inputs_at = kw;
            if (line.tokens.size() < 2) fail(detail::end_of(line), "expected: inputs <q> | inputs <name>...");
            std::size_t count = 0;
            if (line.tokens.size() == 2 && detail::parse_count(line.tokens[1].text, count)) {
                if (count == 0) fail(line.tokens[1], "input count must be at least 1");
                q = count;
            } else {
                std::set<std::string> seen;
                for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                    if (!seen.insert(line.tokens[t].text).second)
                        fail(line.tokens[t], "duplicate declaration of input '" + line.tokens[t].text + "'");
                    input_names.push_back(line.tokens[t].text);
                }
                q = input_names.size();
            }
        } else if (kw.text == "outputs") {
            if (outputs_at) fail(kw, "duplicate declaration of 'outputs'");
            outputs_at = kw;
            if (line.tokens.size() < 2) fail(detail::end_of(line), "expected: outputs <sym>...");
            std::set<std::string> seen;
            for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                if (!seen.insert(line.tokens[t].text).second)
                    fail(line.tokens[t], "duplicate declaration of output '" + line.tokens[t].text + "'");
                outputs.push_back(line.tokens[t].text);
            }
        } else if (kw.text == "state") {
            detail::expect_arity(line, 3, "state <id> <output-sym>");
            state_decls.emplace_back(line.tokens[1], line.tokens[2]);
        } else if (kw.text == "initial") {
            if (initial_at) fail(kw, "duplicate declaration of 'initial'");
            detail::expect_arity(line, 2, "initial <id>");
            initial_at = kw;
            initial_token = line.tokens[1];
        } else if (kw.text == "trans") {
            detail::expect_arity(line, 4, "trans <id> <input> <id>");
            trans_decls.push_back({line.tokens[1], line.tokens[2], line.tokens[3]});
        } else {
            fail(kw, "unknown keyword '" + kw.text + "'");
        }
    }

    const Token eof{"", lines.back().number + 1, 1};
    if (!inputs_at) fail(eof, "missing 'inputs' declaration");
    if (!outputs_at) fail(eof, "missing 'outputs' declaration");
    if (state_decls.empty()) fail(eof, "missing 'state' declarations");
    if (!initial_at) fail(eof, "missing 'initial' declaration");

    std::map<std::string, State> state_index;
    std::vector<std::string> names;
    std::vector<std::uint32_t> out_map;
    for (const auto& [id, sym] : state_decls) {
        if (state_index.contains(id.text)) fail(id, "duplicate declaration of state '" + id.text + "'");
        auto o = std::find(outputs.begin(), outputs.end(), sym.text);
        if (o == outputs.end()) fail(sym, "unknown output symbol '" + sym.text + "'");
        state_index.emplace(id.text, static_cast<State>(names.size()));
        names.push_back(id.text);
        out_map.push_back(static_cast<std::uint32_t>(o - outputs.begin()));
    }
    auto resolve_state = [&](const Token& t) {
        auto it = state_index.find(t.text);
        if (it == state_index.end()) fail(t, "unknown state '" + t.text + "'");
        return it->second;
    };
    auto resolve_input = [&](const Token& t) -> Symbol {
        if (input_names.empty()) {
            std::size_t j = 0;
            if (!detail::parse_count(t.text, j) || j >= q) fail(t, "unknown input '" + t.text + "'");
            return static_cast<Symbol>(j);
        }
        auto it = std::find(input_names.begin(), input_names.end(), t.text);
        if (it == input_names.end()) fail(t, "unknown input '" + t.text + "'");
        return static_cast<Symbol>(it - input_names.begin());
    };

    const State initial = resolve_state(initial_token);
    constexpr State unset = static_cast<State>(-1);
    std::vector<State> table(names.size() * q, unset);
    for (const auto& [from, input, to] : trans_decls) {
        const State s = resolve_state(from);
        const Symbol j = resolve_input(input);
        const State t = resolve_state(to);
        auto& slot = table[s * q + j];
        if (slot != unset)
            fail(from, "duplicate declaration of transition (" + from.text + ", " + input.text + ")");
        slot = t;
    }
    for (std::size_t s = 0; s < names.size(); ++s) {
        for (std::size_t j = 0; j < q; ++j) {
            if (table[s * q + j] == unset) {
                const std::string input = input_names.empty() ? std::to_string(j) : input_names[j];
                fail(state_decls[s].first, "missing transition for state '" + names[s] + "' on input '" + input + "'");
            }
        }
    }
    return MooreMachine(std::move(names), q, std::move(input_names), std::move(outputs), std::move(table),
                        std::move(out_map), initial);
}

std::string emit_machine(const MooreMachine& m, std::span<const std::string> state_comments) {
    std::ostringstream os;
    os << "moore v1\n";
    if (m.has_default_input_names()) {
        os << "inputs " << m.input_count() << '\n';
    } else {
        os << "inputs";
        for (const auto& name : m.input_names()) os << ' ' << name;
        os << '\n';
    }
    os << "outputs";
    for (const auto& o : m.outputs()) os << ' ' << o;
    os << '\n';
    for (State s = 0; s < m.state_count(); ++s) {
        os << "state " << m.state_name(s) << ' ' << m.output(s);
        if (s < state_comments.size() && !state_comments[s].empty()) os << "  # " << state_comments[s];
        os << '\n';
    }
    os << "initial " << m.state_name(m.initial()) << '\n';
    for (State s = 0; s < m.state_count(); ++s) {
        for (Symbol j = 0; j < m.input_count(); ++j) {
            os << "trans " << m.state_name(s) << ' ' << m.input_name(j) << ' ' << m.state_name(m.next(s, j)) << '\n';
        }
    }
    return os.str();
}

Word parse_word(std::string_view text, std::size_t q) {
    Word w;
    if (text.empty() || text == "ε") return w;
    auto push = [&](std::size_t v, std::string_view piece) {
        if (v >= q) throw DomainError("symbol '" + std::string(piece) + "' out of range (q = " + std::to_string(q) + ")");
        w.push_back(static_cast<Symbol>(v));
    };
    if (q <= 10) {
        for (char c : text) {
            if (c < '0' || c > '9') throw DomainError("invalid word character '" + std::string(1, c) + "'");
            push(static_cast<std::size_t>(c - '0'), std::string_view(&c, 1));
        }
        return w;
    }
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        std::string_view piece = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        std::size_t v = 0;
        if (!detail::parse_count(piece, v)) throw DomainError("invalid word symbol '" + std::string(piece) + "'");
        push(v, piece);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return w;
}

std::string format_word(std::span<const Symbol> w, std::size_t q) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (q <= 10) {
            s += static_cast<char>('0' + w[k]);
        } else {
            if (k) s += ',';
            s += std::to_string(w[k]);
        }
    }
    return s;
}

Word reversed(std::span<const Symbol> w) { return Word(w.rbegin(), w.rend()); }

} // namespace moore
