#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moore {

using State = std::uint32_t;
using Symbol = std::uint32_t;

/// A finite word over the input alphabet {0, ..., q-1}. The empty vector is ε.
using Word = std::vector<Symbol>;

/// Deterministic Moore machine (Q, Σ, Δ, δ, λ, i) stored as dense tables.
///
/// States, inputs and outputs are addressed by index; the string names are
/// kept for display and serialization only. Outputs are compared across
/// machines by token, never by index.
class MooreMachine {
public:
    /// Validates every table; throws DomainError on any violation.
    ///
    /// `input_names` may be empty, meaning the inputs are the digits 0..q-1.
    /// `transitions` is row-major: entry s*q + j holds δ(s, j).
    /// `output_map[s]` indexes into `outputs`.
    MooreMachine(std::vector<std::string> states,
                 std::size_t input_count,
                 std::vector<std::string> input_names,
                 std::vector<std::string> outputs,
                 std::vector<State> transitions,
                 std::vector<std::uint32_t> output_map,
                 State initial);

    std::size_t state_count() const noexcept { return states_.size(); }
    std::size_t input_count() const noexcept { return input_count_; }
    std::size_t output_count() const noexcept { return outputs_.size(); }

    State initial() const noexcept { return initial_; }
    State next(State s, Symbol j) const { return transitions_[s * input_count_ + j]; }
    std::uint32_t output_index(State s) const { return output_map_[s]; }
    const std::string& output(State s) const { return outputs_[output_map_[s]]; }

    const std::string& state_name(State s) const { return states_[s]; }
    std::span<const std::string> state_names() const noexcept { return states_; }
    std::span<const std::string> outputs() const noexcept { return outputs_; }
    std::span<const State> transitions() const noexcept { return transitions_; }
    std::span<const std::uint32_t> output_map() const noexcept { return output_map_; }

    /// Display name of input j ("0", "1", ... unless names were bound).
    std::string input_name(Symbol j) const;
    bool has_default_input_names() const noexcept { return input_names_.empty(); }
    std::span<const std::string> input_names() const noexcept { return input_names_; }

    std::optional<State> find_state(std::string_view name) const;
    std::optional<std::uint32_t> find_output(std::string_view token) const;

    bool operator==(const MooreMachine&) const = default;

private:
    std::vector<std::string> states_;
    std::size_t input_count_;
    std::vector<std::string> input_names_;
    std::vector<std::string> outputs_;
    std::vector<State> transitions_;
    std::vector<std::uint32_t> output_map_;
    State initial_;
};

/// a·w: folds δ over w left to right starting at s.
State right_action(const MooreMachine& m, State s, std::span<const Symbol> w);

/// w·a: folds δ over w right to left, so the last letter is applied first.
State left_action(const MooreMachine& m, std::span<const Symbol> w, State s);

/// M·w = λ(i·w)
const std::string& run_right(const MooreMachine& m, std::span<const Symbol> w);

/// w·M = λ(w·i)
const std::string& run_left(const MooreMachine& m, std::span<const Symbol> w);

/// Breadth-first visit of the states reachable from `from` (letters in
/// ascending order). Returns the discovery order.
std::vector<State> reachable_states(const MooreMachine& m, State from);

/// Restriction to the states reachable from the initial state; the new state
/// order is the breadth-first discovery order, letters ascending.
MooreMachine trim(const MooreMachine& m);

/// Same machine with its states permuted: new state k is old state order[k].
/// `order` must be a permutation of the state indices.
MooreMachine permute_states(const MooreMachine& m, std::span<const State> order);

MooreMachine parse_machine(std::string_view text);

/// Canonical `.moore` text. Optional per-state comments are appended to the
/// matching `state` lines as `# <comment>`.
std::string emit_machine(const MooreMachine& m, std::span<const std::string> state_comments = {});

/// Words are written with one digit per letter when q <= 10 and as
/// comma-separated indices otherwise. "" and "ε" denote the empty word.
Word parse_word(std::string_view text, std::size_t q);
std::string format_word(std::span<const Symbol> w, std::size_t q);

Word reversed(std::span<const Symbol> w);

} // namespace moore
