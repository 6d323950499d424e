#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moore/machine.hpp"

namespace moore {

/// An element f of Δ^Q: one output index (into the base machine's Δ) per base
/// state. Pointwise equality.
struct OutputVector {
    std::vector<std::uint32_t> values;

    std::uint32_t operator()(State a) const { return values[a]; }
    std::size_t size() const noexcept { return values.size(); }
    bool operator==(const OutputVector&) const = default;
};

/// The output map λ of `m` viewed as a vector.
OutputVector output_vector(const MooreMachine& m);

/// (w·f)(a) = f(a·w)
OutputVector act_left_on_function(const MooreMachine& m, std::span<const Symbol> w, const OutputVector& f);

/// (f·w)(a) = f(w·a)
OutputVector act_right_on_function(const MooreMachine& m, const OutputVector& f, std::span<const Symbol> w);

/// f∘δ(·, j), the successor of f under input j in the dual.
OutputVector compose_transition(const MooreMachine& m, const OutputVector& f, Symbol j);

/// Dual machine together with the vector that defines each of its states.
struct DualMachine {
    MooreMachine machine;
    /// The trimmed base machine the vectors are indexed by.
    MooreMachine base;
    /// vectors[s] is the element of Δ^Q that dual state s stands for.
    std::vector<OutputVector> vectors;
};

/// Dual of trim(m), built with the stack of "happy" vectors: start from λ,
/// take the lowest unhappy vector, push its successors f∘δ(·,j) for
/// j = 0..q-1 that are new, repeat until every vector is happy.
///
/// States are named d0, d1, ... in discovery order; d0 = λ is initial, and
/// the output of f is f(i). The dual reads words in the opposite direction:
/// run_left(dual, w) == run_right(m, w) and run_right(dual, w) == run_left(m, w).
DualMachine dual(const MooreMachine& m);

/// dual(dual(m)) without the metadata; the minimal machine equivalent to m.
MooreMachine bidual(const MooreMachine& m);

/// `.moore` text of the dual with each state's vector as a `# vector:` comment.
std::string emit_dual(const DualMachine& d);

} // namespace moore
