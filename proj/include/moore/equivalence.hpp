#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moore/machine.hpp"

namespace moore {

/// γ : Δ1 × Δ2 → Δ used to label product states.
class OutputCombiner {
public:
    enum class Kind { Pair, First, Second, Table };

    /// Δ = Δ1 × Δ2, written "(o1,o2)".
    static OutputCombiner pair() { return OutputCombiner(Kind::Pair); }
    /// p1: keep the first machine's output.
    static OutputCombiner first() { return OutputCombiner(Kind::First); }
    /// p2: keep the second machine's output.
    static OutputCombiner second() { return OutputCombiner(Kind::Second); }
    /// Explicit table over output tokens. Δ is `outputs`; every value of the
    /// table must be one of them.
    static OutputCombiner table(std::vector<std::string> outputs,
                                std::map<std::pair<std::string, std::string>, std::string> entries);

    Kind kind() const noexcept { return kind_; }

    /// Δ for a product of machines with output alphabets `left` and `right`.
    std::vector<std::string> alphabet(std::span<const std::string> left, std::span<const std::string> right) const;

    /// γ(o1, o2); throws DomainError when a table combiner is not defined there.
    std::string combine(const std::string& o1, const std::string& o2) const;

private:
    explicit OutputCombiner(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<std::string> outputs_;
    std::map<std::pair<std::string, std::string>, std::string> entries_;
};

/// M1 ⊗γ M2 restricted to the pairs reachable from (i1, i2), discovered
/// breadth-first with letters ascending. States are named "(a1,a2)".
MooreMachine product(const MooreMachine& m1, const MooreMachine& m2, const OutputCombiner& gamma);

struct Counterexample {
    Word word;
    std::string left_output;
    std::string right_output;
};

struct EquivalenceResult {
    std::optional<Counterexample> counterexample;

    bool equivalent() const noexcept { return !counterexample.has_value(); }
    explicit operator bool() const noexcept { return equivalent(); }
};

/// Compares M1·w and M2·w for all words. On failure the counterexample is the
/// shortest word, lexicographically least among the shortest.
EquivalenceResult equivalent(const MooreMachine& m1, const MooreMachine& m2);

/// λ(a·w) = λ(b·w) for every word w.
bool states_equivalent(const MooreMachine& m, State a, State b);

/// Moore-style partition refinement (trim, split by λ, split by successor
/// blocks until stable). Kept independent of the dual construction so the two
/// can check each other. Each block is named after its first member.
MooreMachine oracle_minimize(const MooreMachine& m);

struct Isomorphism {
    /// mapping[a] is the image of state a of the first machine.
    std::vector<State> mapping;
};

/// The only candidate bijection is the one pairing the breadth-first
/// traversals from the two initial states; it is returned iff it preserves
/// δ, λ and the initial state.
std::optional<Isomorphism> isomorphic(const MooreMachine& m1, const MooreMachine& m2);

/// trim(m) with states renamed "0", "1", ... in breadth-first order.
MooreMachine normal_form(const MooreMachine& m);

/// normal_form(bidual(m)).
MooreMachine minimize(const MooreMachine& m);

} // namespace moore
