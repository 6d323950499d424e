#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moore/machine.hpp"

namespace moore {

using Letter = std::uint32_t;

/// A word over a substitution's alphabet, as letter indices.
using LetterWord = std::vector<Letter>;

/// Name of the padding letter ω and of its reserved output ⊥. Neither may be
/// used as a letter or output in a substitution.
inline constexpr std::string_view omega_name = "ω";
inline constexpr std::string_view sink_output_name = "⊥";

/// Endomorphism σ of the free monoid over a finite alphabet, with a
/// projection λ to outputs and a distinguished initial letter.
class Substitution {
public:
    /// Throws DomainError on empty images, unknown letters or outputs,
    /// duplicate names or reserved names.
    Substitution(std::vector<std::string> letters,
                 std::vector<LetterWord> rules,
                 std::vector<std::string> outputs,
                 std::vector<std::uint32_t> projection,
                 Letter initial);

    std::size_t letter_count() const noexcept { return letters_.size(); }
    const std::string& letter_name(Letter a) const { return letters_[a]; }
    std::span<const std::string> letters() const noexcept { return letters_; }
    std::span<const std::string> outputs() const noexcept { return outputs_; }
    const LetterWord& image(Letter a) const { return rules_[a]; }
    std::uint32_t projection(Letter a) const { return projection_[a]; }
    const std::string& output(Letter a) const { return outputs_[projection_[a]]; }
    Letter initial() const noexcept { return initial_; }

    /// q = max |σ(a)|
    std::size_t q() const noexcept { return q_; }
    bool constant_length() const;

    std::optional<Letter> find_letter(std::string_view name) const;

    bool operator==(const Substitution&) const = default;

private:
    std::vector<std::string> letters_;
    std::vector<LetterWord> rules_;
    std::vector<std::string> outputs_;
    std::vector<std::uint32_t> projection_;
    Letter initial_;
    std::size_t q_;
};

/// Where the ω fillers go when an image is padded to length q. For each
/// letter a, a template of length q; `true` marks a slot, and the slots
/// receive the letters of σ(a) from left to right.
class PaddingSpec {
public:
    /// Slots first, then ω: σ(a)ω^(q - |σ(a)|).
    static PaddingSpec trailing(const Substitution& s);

    /// Throws DomainError unless every template has length q and exactly
    /// |σ(a)| slots.
    PaddingSpec(const Substitution& s, std::vector<std::vector<bool>> templates);

    const std::vector<bool>& slots(Letter a) const { return templates_[a]; }
    std::size_t letter_count() const noexcept { return templates_.size(); }
    /// True when letter a uses the trailing template.
    bool is_trailing(Letter a) const;

    bool operator==(const PaddingSpec&) const = default;

private:
    PaddingSpec() = default;
    std::vector<std::vector<bool>> templates_;
};

/// A substitution file: the substitution and its padding (trailing unless
/// `pad` lines say otherwise).
struct SubstitutionFile {
    Substitution substitution;
    PaddingSpec padding;
};

SubstitutionFile parse_substitution(std::string_view text);
std::string emit_substitution(const Substitution& s, const PaddingSpec& pad);
std::string emit_substitution(const Substitution& s);

/// Parses a word of letter names: one letter per character when every name
/// is a single character, whitespace-separated names otherwise.
LetterWord parse_letters(const Substitution& s, std::string_view text);
std::string format_letters(const Substitution& s, std::span<const Letter> w);
/// The λ-image of w, formatted the same way as letters.
std::string format_projection(const Substitution& s, std::span<const Letter> w);

/// σ(w), the concatenation of the images of the letters of w.
LetterWord apply(const Substitution& s, std::span<const Letter> w);

/// σ^k(a) by repeated application.
LetterWord iterate(const Substitution& s, Letter a, std::size_t k);

/// |σ^k(i)| from letter counts, without expanding. Saturates at UINT64_MAX.
std::uint64_t fixed_point_length(const Substitution& s, std::size_t k);

/// First n letters of σ^∞(i). Requires σ(i) to start with i and |σ(i)| >= 2.
LetterWord expand_fixed_point(const Substitution& s, std::size_t n);

/// Moore machine over Q ∪ {ω} whose transitions read the padded images.
struct PaddedMachine {
    MooreMachine machine;
    State sink;
    std::string sink_output;
};

PaddedMachine to_padded_machine(const Substitution& s, const PaddingSpec& pad);
PaddedMachine to_padded_machine(const Substitution& s);

/// (σ^k(a))_n for a constant-length substitution: the base-q digits
/// n_0 ... n_{k-1} of n (least significant first) acting on a from the left.
Letter letter_at_constant(const Substitution& s, std::size_t k, Letter a, std::uint64_t n);

/// Σ w_j q^j. Throws on the empty word, a digit >= q, or overflow.
std::uint64_t phi(std::span<const Symbol> w, std::size_t q);

inline constexpr std::uint64_t default_psi_search_bound = 10'000'000;

/// The n-th digit word (from 0) of the numeration language, in increasing
/// order of φ and taking the shortest word of each φ value. Requires
/// δ(i, 0) = i. Throws DomainError when fewer than n+1 words are found among
/// the first `search_bound` candidates.
Word psi(const PaddedMachine& pm, std::uint64_t n, std::uint64_t search_bound = default_psi_search_bound);

/// (σ^k(i))_j = ψ(j)·i, computed without expansion.
Letter letter_at(const Substitution& s, const PaddingSpec& pad, std::size_t k, std::uint64_t j);

struct MinimizedSubstitution {
    Substitution substitution;
    PaddingSpec padding;
    /// class_of[a] is the new letter standing for original letter a, or
    /// `unreachable` for letters that never occur from the initial letter.
    std::vector<Letter> class_of;
    std::string note;

    static constexpr Letter unreachable = static_cast<Letter>(-1);
};

/// Merges letters whose padded-machine states are equivalent, through the
/// bidual of the padded machine. Each new letter is named after the first
/// original letter of its class.
MinimizedSubstitution minimize_substitution(const Substitution& s, const PaddingSpec& pad);

} // namespace moore
