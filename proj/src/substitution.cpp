#include "moore/substitution.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "moore/duality.hpp"
#include "moore/error.hpp"

namespace moore {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > saturated - b ? saturated : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > saturated / b ? saturated : a * b;
}

bool reserved(std::string_view name) { return name == omega_name || name == sink_output_name; }

void check_letters(const Substitution& s, std::span<const Letter> w) {
    for (Letter a : w) {
        if (a >= s.letter_count()) throw DomainError("letter index " + std::to_string(a) + " out of range");
    }
}

bool single_char_names(std::span<const std::string> names) {
    return std::all_of(names.begin(), names.end(), [](const std::string& n) { return n.size() == 1; });
}

std::string join_tokens(std::span<const std::string> names, bool compact) {
    std::string out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (k && !compact) out += ' ';
        out += names[k];
    }
    return out;
}

/// Base-q digits of m, least significant first; "0" for m = 0.
void digits_of(std::uint64_t m, std::size_t q, Word& out) {
    out.clear();
    do {
        out.push_back(static_cast<Symbol>(m % q));
        m /= q;
    } while (m != 0);
}

void require_initial_loop(const PaddedMachine& pm) {
    const auto& m = pm.machine;
    if (m.next(m.initial(), 0) != m.initial()) {
        throw DomainError("no fixed point: the padded image of the initial letter must start with that letter "
                          "(need δ(i,0) = i)");
    }
}

} // namespace

Substitution::Substitution(std::vector<std::string> letters,
                           std::vector<LetterWord> rules,
                           std::vector<std::string> outputs,
                           std::vector<std::uint32_t> projection,
                           Letter initial)
    : letters_(std::move(letters)),
      rules_(std::move(rules)),
      outputs_(std::move(outputs)),
      projection_(std::move(projection)),
      initial_(initial),
      q_(0) {
    const std::size_t n = letters_.size();
    if (n == 0) throw DomainError("a substitution needs at least one letter");
    if (outputs_.empty()) throw DomainError("a substitution needs at least one output symbol");
    if (std::set<std::string>(letters_.begin(), letters_.end()).size() != n)
        throw DomainError("letters must be distinct");
    if (std::set<std::string>(outputs_.begin(), outputs_.end()).size() != outputs_.size())
        throw DomainError("output symbols must be distinct");
    for (const auto& name : letters_)
        if (reserved(name)) throw DomainError("'" + name + "' is reserved and cannot be a letter");
    for (const auto& name : outputs_)
        if (reserved(name)) throw DomainError("'" + name + "' is reserved and cannot be an output");
    if (rules_.size() != n) throw DomainError("one rule per letter is required");
    for (Letter a = 0; a < n; ++a) {
        if (rules_[a].empty()) throw DomainError("empty image for letter '" + letters_[a] + "'");
        for (Letter b : rules_[a])
            if (b >= n) throw DomainError("image of '" + letters_[a] + "' uses an unknown letter");
        q_ = std::max(q_, rules_[a].size());
    }
    if (projection_.size() != n) throw DomainError("one output per letter is required");
    for (auto o : projection_)
        if (o >= outputs_.size()) throw DomainError("projection value out of range");
    if (initial_ >= n) throw DomainError("initial letter out of range");
}

bool Substitution::constant_length() const {
    return std::all_of(rules_.begin(), rules_.end(), [this](const LetterWord& r) { return r.size() == q_; });
}

std::optional<Letter> Substitution::find_letter(std::string_view name) const {
    auto it = std::find(letters_.begin(), letters_.end(), name);
    if (it == letters_.end()) return std::nullopt;
    return static_cast<Letter>(it - letters_.begin());
}

PaddingSpec PaddingSpec::trailing(const Substitution& s) {
    PaddingSpec p;
    for (Letter a = 0; a < s.letter_count(); ++a) {
        std::vector<bool> t(s.q(), false);
        std::fill_n(t.begin(), s.image(a).size(), true);
        p.templates_.push_back(std::move(t));
    }
    return p;
}

PaddingSpec::PaddingSpec(const Substitution& s, std::vector<std::vector<bool>> templates)
    : templates_(std::move(templates)) {
    if (templates_.size() != s.letter_count()) throw DomainError("one padding template per letter is required");
    for (Letter a = 0; a < s.letter_count(); ++a) {
        const auto& t = templates_[a];
        if (t.size() != s.q())
            throw DomainError("padding template of '" + s.letter_name(a) + "' must have length " + std::to_string(s.q()));
        if (static_cast<std::size_t>(std::count(t.begin(), t.end(), true)) != s.image(a).size())
            throw DomainError("padding template of '" + s.letter_name(a) + "' must have " +
                              std::to_string(s.image(a).size()) + " slots");
    }
}

bool PaddingSpec::is_trailing(Letter a) const {
    const auto& t = templates_[a];
    return std::is_sorted(t.begin(), t.end(), std::greater<>());
}

SubstitutionFile parse_substitution(std::string_view text) {
    using detail::fail;
    using detail::Token;

    const auto lines = detail::tokenize(text);
    if (lines.empty()) throw ParseError(1, 1, "empty file, expected 'subst v1'");
    const auto& header = lines.front();
    if (header.tokens[0].text != "subst") fail(header.tokens[0], "expected 'subst v1' header");
    detail::expect_arity(header, 2, "subst v1");
    if (header.tokens[1].text != "v1") fail(header.tokens[1], "unsupported format version '" + header.tokens[1].text + "'");

    std::optional<Token> letters_at, outputs_at, initial_at;
    std::vector<std::string> letters, outputs;
    Token initial_token;
    std::vector<const detail::Line*> rule_lines, out_lines, pad_lines;

    auto read_names = [](const detail::Line& line, std::vector<std::string>& into, const char* what) {
        if (line.tokens.size() < 2) fail(detail::end_of(line), std::string("expected: ") + what + " <id>...");
        std::set<std::string> seen;
        for (std::size_t t = 1; t < line.tokens.size(); ++t) {
            const auto& tok = line.tokens[t];
            if (reserved(tok.text)) fail(tok, "'" + tok.text + "' is reserved");
            if (!seen.insert(tok.text).second) fail(tok, "duplicate declaration of '" + tok.text + "'");
            into.push_back(tok.text);
        }
    };

    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        const auto& kw = line.tokens[0];
        if (kw.text == "letters") {
            if (letters_at) fail(kw, "duplicate declaration of 'letters'");
            letters_at = kw;
            read_names(line, letters, "letters");
        } else if (kw.text == "outputs") {
            if (outputs_at) fail(kw, "duplicate declaration of 'outputs'");
            outputs_at = kw;
            read_names(line, outputs, "outputs");
        } else if (kw.text == "initial") {
            if (initial_at) fail(kw, "duplicate declaration of 'initial'");
            detail::expect_arity(line, 2, "initial <id>");
            initial_at = kw;
            initial_token = line.tokens[1];
        } else if (kw.text == "rule") {
            if (line.tokens.size() < 3 || line.tokens[2].text != "->")
                fail(line.tokens.size() < 3 ? detail::end_of(line) : line.tokens[2], "expected: rule <id> -> <id>...");
            if (line.tokens.size() == 3) fail(detail::end_of(line), "empty image for letter '" + line.tokens[1].text + "'");
            rule_lines.push_back(&line);
        } else if (kw.text == "out") {
            detail::expect_arity(line, 3, "out <id> <sym>");
            out_lines.push_back(&line);
        } else if (kw.text == "pad") {
            if (line.tokens.size() < 3) fail(detail::end_of(line), "expected: pad <id> <template>");
            pad_lines.push_back(&line);
        } else {
            fail(kw, "unknown keyword '" + kw.text + "'");
        }
    }

    const Token eof{"", lines.back().number + 1, 1};
    if (!letters_at) fail(eof, "missing 'letters' declaration");
    if (!outputs_at) fail(eof, "missing 'outputs' declaration");
    if (!initial_at) fail(eof, "missing 'initial' declaration");

    auto resolve_letter = [&](const Token& t) {
        auto it = std::find(letters.begin(), letters.end(), t.text);
        if (it == letters.end()) fail(t, "unknown letter '" + t.text + "'");
        return static_cast<Letter>(it - letters.begin());
    };

    const std::size_t n = letters.size();
    std::vector<LetterWord> rules(n);
    std::vector<bool> has_rule(n, false);
    for (const auto* line : rule_lines) {
        const Letter a = resolve_letter(line->tokens[1]);
        if (has_rule[a]) fail(line->tokens[1], "duplicate rule for letter '" + letters[a] + "'");
        has_rule[a] = true;
        for (std::size_t t = 3; t < line->tokens.size(); ++t) rules[a].push_back(resolve_letter(line->tokens[t]));
    }
    std::vector<std::uint32_t> projection(n);
    std::vector<bool> has_out(n, false);
    for (const auto* line : out_lines) {
        const Letter a = resolve_letter(line->tokens[1]);
        if (has_out[a]) fail(line->tokens[1], "duplicate output for letter '" + letters[a] + "'");
        const auto& sym = line->tokens[2];
        auto it = std::find(outputs.begin(), outputs.end(), sym.text);
        if (it == outputs.end()) fail(sym, "unknown output symbol '" + sym.text + "'");
        has_out[a] = true;
        projection[a] = static_cast<std::uint32_t>(it - outputs.begin());
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (!has_rule[a]) fail(*letters_at, "missing rule for letter '" + letters[a] + "'");
        if (!has_out[a]) fail(*letters_at, "missing output for letter '" + letters[a] + "'");
    }
    const Letter initial = resolve_letter(initial_token);

    Substitution s(std::move(letters), std::move(rules), std::move(outputs), std::move(projection), initial);

    auto templates = std::vector<std::vector<bool>>();
    {
        PaddingSpec trailing = PaddingSpec::trailing(s);
        for (Letter a = 0; a < n; ++a) templates.push_back(trailing.slots(a));
    }
    std::vector<bool> has_pad(n, false);
    for (const auto* line : pad_lines) {
        const auto found = s.find_letter(line->tokens[1].text);
        if (!found) fail(line->tokens[1], "unknown letter '" + line->tokens[1].text + "'");
        const Letter a = *found;
        if (has_pad[a]) fail(line->tokens[1], "duplicate padding for letter '" + s.letter_name(a) + "'");
        has_pad[a] = true;
        std::vector<bool> t;
        for (std::size_t k = 2; k < line->tokens.size(); ++k) {
            const auto& tok = line->tokens[k];
            for (char c : tok.text) {
                if (c == '_') t.push_back(true);
                else if (c == 'w') t.push_back(false);
                else fail(tok, "padding template uses '_' (slot) and 'w' (omega) only");
            }
        }
        if (t.size() != s.q()) fail(line->tokens[2], "padding template must have length " + std::to_string(s.q()));
        if (static_cast<std::size_t>(std::count(t.begin(), t.end(), true)) != s.image(a).size())
            fail(line->tokens[2], "padding template must have " + std::to_string(s.image(a).size()) + " slots");
        templates[a] = std::move(t);
    }
    PaddingSpec pad(s, std::move(templates));
    return {std::move(s), std::move(pad)};
}

std::string emit_substitution(const Substitution& s, const PaddingSpec& pad) {
    std::ostringstream os;
    os << "subst v1\n";
    os << "letters " << join_tokens(s.letters(), false) << '\n';
    os << "outputs " << join_tokens(s.outputs(), false) << '\n';
    os << "initial " << s.letter_name(s.initial()) << '\n';
    for (Letter a = 0; a < s.letter_count(); ++a) {
        os << "rule " << s.letter_name(a) << " ->";
        for (Letter b : s.image(a)) os << ' ' << s.letter_name(b);
        os << '\n';
    }
    for (Letter a = 0; a < s.letter_count(); ++a) os << "out " << s.letter_name(a) << ' ' << s.output(a) << '\n';
    for (Letter a = 0; a < s.letter_count(); ++a) {
        if (pad.is_trailing(a)) continue;
        os << "pad " << s.letter_name(a);
        for (bool slot : pad.slots(a)) os << (slot ? " _" : " w");
        os << '\n';
    }
    return os.str();
}

std::string emit_substitution(const Substitution& s) {
    return emit_substitution(s, PaddingSpec::trailing(s));
}

LetterWord parse_letters(const Substitution& s, std::string_view text) {
    LetterWord w;
    auto push = [&](std::string_view name) {
        auto a = s.find_letter(name);
        if (!a) throw DomainError("unknown letter '" + std::string(name) + "'");
        w.push_back(*a);
    };
    if (single_char_names(s.letters())) {
        for (char c : text)
            if (c != ' ') push(std::string_view(&c, 1));
        return w;
    }
    std::istringstream is{std::string(text)};
    for (std::string name; is >> name;) push(name);
    return w;
}

std::string format_letters(const Substitution& s, std::span<const Letter> w) {
    std::vector<std::string> names;
    names.reserve(w.size());
    for (Letter a : w) names.push_back(s.letter_name(a));
    return join_tokens(names, single_char_names(s.letters()));
}

std::string format_projection(const Substitution& s, std::span<const Letter> w) {
    std::vector<std::string> names;
    names.reserve(w.size());
    for (Letter a : w) names.push_back(s.output(a));
    return join_tokens(names, single_char_names(s.outputs()));
}

LetterWord apply(const Substitution& s, std::span<const Letter> w) {
    check_letters(s, w);
    LetterWord out;
    for (Letter a : w) out.insert(out.end(), s.image(a).begin(), s.image(a).end());
    return out;
}

LetterWord iterate(const Substitution& s, Letter a, std::size_t k) {
    LetterWord w{a};
    check_letters(s, w);
    for (std::size_t t = 0; t < k; ++t) w = moore::apply(s, w);
    return w;
}

std::uint64_t fixed_point_length(const Substitution& s, std::size_t k) {
    const std::size_t n = s.letter_count();
    std::vector<std::uint64_t> counts(n, 0);
    counts[s.initial()] = 1;
    for (std::size_t t = 0; t < k; ++t) {
        std::vector<std::uint64_t> next(n, 0);
        for (Letter a = 0; a < n; ++a) {
            if (counts[a] == 0) continue;
            for (Letter b : s.image(a)) next[b] = saturating_add(next[b], counts[a]);
        }
        if (next == counts) break;
        counts = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto c : counts) total = saturating_add(total, c);
    return total;
}

LetterWord expand_fixed_point(const Substitution& s, std::size_t n) {
    const Letter i = s.initial();
    const auto& first = s.image(i);
    if (first.front() != i || first.size() < 2)
        throw DomainError("no fixed point: σ(i) must start with i and grow");

    LetterWord w{i};
    while (w.size() < n) {
        LetterWord next;
        next.reserve(n);
        for (Letter a : w) {
            const auto& img = s.image(a);
            next.insert(next.end(), img.begin(), img.end());
            if (next.size() >= n) break;
        }
        if (next.size() > n) next.resize(n);
        w = std::move(next);
    }
    w.resize(n);
    return w;
}

PaddedMachine to_padded_machine(const Substitution& s, const PaddingSpec& pad) {
    if (pad.letter_count() != s.letter_count()) throw DomainError("padding does not match the substitution");
    const std::size_t n = s.letter_count();
    const std::size_t q = s.q();
    const State sink = static_cast<State>(n);

    std::vector<std::string> names(s.letters().begin(), s.letters().end());
    names.emplace_back(omega_name);
    std::vector<std::string> outputs(s.outputs().begin(), s.outputs().end());
    outputs.emplace_back(sink_output_name);

    std::vector<State> table;
    std::vector<std::uint32_t> out;
    table.reserve((n + 1) * q);
    for (Letter a = 0; a < n; ++a) {
        const auto& slots = pad.slots(a);
        if (slots.size() != q) throw DomainError("padding template length does not match q");
        std::size_t next_letter = 0;
        for (std::size_t j = 0; j < q; ++j) {
            if (slots[j]) {
                if (next_letter >= s.image(a).size()) throw DomainError("padding template has too many slots");
                table.push_back(s.image(a)[next_letter++]);
            } else {
                table.push_back(sink);
            }
        }
        if (next_letter != s.image(a).size()) throw DomainError("padding template has too few slots");
        out.push_back(s.projection(a));
    }
    table.insert(table.end(), q, sink);
    out.push_back(static_cast<std::uint32_t>(outputs.size() - 1));

    MooreMachine m(std::move(names), q, {}, std::move(outputs), std::move(table), std::move(out), s.initial());
    return {std::move(m), sink, std::string(sink_output_name)};
}

PaddedMachine to_padded_machine(const Substitution& s) {
    return to_padded_machine(s, PaddingSpec::trailing(s));
}

Letter letter_at_constant(const Substitution& s, std::size_t k, Letter a, std::uint64_t n) {
    if (!s.constant_length()) throw DomainError("letter_at_constant needs a constant-length substitution");
    if (a >= s.letter_count()) throw DomainError("letter index out of range");
    const std::size_t q = s.q();
    std::uint64_t bound = 1;
    for (std::size_t t = 0; t < k; ++t) bound = saturating_mul(bound, q);
    if (n >= bound) {
        throw DomainError("index " + std::to_string(n) + " out of range for σ^" + std::to_string(k) + " (length " +
                          std::to_string(bound) + ")");
    }
    Word digits(k);
    for (std::size_t t = 0; t < k; ++t) {
        digits[t] = static_cast<Symbol>(n % q);
        n /= q;
    }
    const PaddedMachine pm = to_padded_machine(s);
    return left_action(pm.machine, digits, a);
}

std::uint64_t phi(std::span<const Symbol> w, std::size_t q) {
    if (w.empty()) throw DomainError("φ is defined on nonempty words only");
    std::uint64_t value = 0;
    std::uint64_t weight = 1;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] >= q) throw DomainError("digit " + std::to_string(w[j]) + " out of range (q = " + std::to_string(q) + ")");
        const std::uint64_t term = saturating_mul(w[j], weight);
        value = saturating_add(value, term);
        if (term == saturated || value == saturated) throw DomainError("φ overflows 64 bits");
        if (j + 1 < w.size()) {
            weight = saturating_mul(weight, q);
            if (weight == saturated && q > 1) throw DomainError("φ overflows 64 bits");
        }
    }
    return value;
}

Word psi(const PaddedMachine& pm, std::uint64_t n, std::uint64_t search_bound) {
    require_initial_loop(pm);
    const auto& m = pm.machine;
    const std::size_t q = m.input_count();
    if (q < 2) throw DomainError("ψ needs q >= 2");
    Word w;
    std::uint64_t kept = 0;
    for (std::uint64_t candidate = 0; candidate < search_bound; ++candidate) {
        digits_of(candidate, q, w);
        if (left_action(m, w, m.initial()) == pm.sink) continue;
        if (kept == n) return w;
        ++kept;
    }
    throw DomainError("rank " + std::to_string(n) + " not reached within " + std::to_string(search_bound) +
                      " candidates (finite or sparse numeration language)");
}

Letter letter_at(const Substitution& s, const PaddingSpec& pad, std::size_t k, std::uint64_t j) {
    const PaddedMachine pm = to_padded_machine(s, pad);
    require_initial_loop(pm);
    const std::uint64_t length = fixed_point_length(s, k);
    if (j >= length) {
        throw DomainError("index " + std::to_string(j) + " out of range for σ^" + std::to_string(k) + "(i) (length " +
                          std::to_string(length) + ")");
    }
    if (s.q() == 1) return s.initial();
    // Every position of σ^k(i) is addressed by a digit word of length k, so
    // its φ value is below q^k.
    std::uint64_t bound = 1;
    for (std::size_t t = 0; t < k; ++t) bound = saturating_mul(bound, s.q());
    const Word w = psi(pm, j, std::max(bound, default_psi_search_bound));
    const State letter = left_action(pm.machine, w, pm.machine.initial());
    return static_cast<Letter>(letter);
}

MinimizedSubstitution minimize_substitution(const Substitution& s, const PaddingSpec& pad) {
    const PaddedMachine pm = to_padded_machine(s, pad);
    require_initial_loop(pm);
    const MooreMachine& m = pm.machine;
    const MooreMachine reduced = bidual(m);

    // A breadth-first word to each reachable letter locates its class in the
    // bidual.
    const std::size_t n = s.letter_count();
    const std::size_t q = s.q();
    std::vector<std::optional<Word>> path(m.state_count());
    path[m.initial()] = Word{};
    for (State a : reachable_states(m, m.initial())) {
        for (Symbol j = 0; j < q; ++j) {
            const State b = m.next(a, j);
            if (path[b]) continue;
            Word w = *path[a];
            w.push_back(j);
            path[b] = std::move(w);
        }
    }

    constexpr State none = static_cast<State>(-1);
    State sink_class = none;
    for (State c = 0; c < reduced.state_count(); ++c) {
        if (reduced.output(c) == pm.sink_output) sink_class = c;
    }

    // New letters are ordered by their first original member.
    std::vector<Letter> class_of(n, MinimizedSubstitution::unreachable);
    std::vector<Letter> letter_of_class(reduced.state_count(), MinimizedSubstitution::unreachable);
    std::vector<State> class_of_letter;
    std::vector<std::string> names;
    std::map<Letter, std::vector<Letter>> members;
    for (Letter a = 0; a < n; ++a) {
        if (!path[a]) continue;
        const State c = right_action(reduced, reduced.initial(), *path[a]);
        if (letter_of_class[c] == MinimizedSubstitution::unreachable) {
            letter_of_class[c] = static_cast<Letter>(names.size());
            class_of_letter.push_back(c);
            names.push_back(s.letter_name(a));
        }
        class_of[a] = letter_of_class[c];
        members[class_of[a]].push_back(a);
    }

    std::vector<LetterWord> rules;
    std::vector<std::vector<bool>> templates;
    std::vector<std::uint32_t> projection;
    for (State c : class_of_letter) {
        LetterWord image;
        std::vector<bool> slots;
        for (Symbol j = 0; j < q; ++j) {
            const State d = reduced.next(c, j);
            slots.push_back(d != sink_class);
            if (d != sink_class) image.push_back(letter_of_class[d]);
        }
        rules.push_back(std::move(image));
        templates.push_back(std::move(slots));
        auto out = std::find(s.outputs().begin(), s.outputs().end(), reduced.output(c));
        projection.push_back(static_cast<std::uint32_t>(out - s.outputs().begin()));
    }

    Substitution result(names, std::move(rules), {s.outputs().begin(), s.outputs().end()}, std::move(projection),
                        class_of[s.initial()]);

    // Dropping letters can shorten the longest image. Templates are cut to the
    // new q; one that would lose a slot falls back to trailing padding.
    std::vector<std::string> reset;
    for (Letter a = 0; a < result.letter_count(); ++a) {
        auto& t = templates[a];
        if (std::find(t.begin() + static_cast<std::ptrdiff_t>(result.q()), t.end(), true) != t.end()) {
            t.assign(result.q(), false);
            std::fill_n(t.begin(), result.image(a).size(), true);
            reset.push_back(result.letter_name(a));
        }
        t.resize(result.q());
    }
    PaddingSpec padding(result, std::move(templates));

    std::string note = s.constant_length() ? "constant-length path" : "padded path";
    std::size_t reachable = 0;
    for (auto c : class_of) reachable += c != MinimizedSubstitution::unreachable;
    note += "; " + std::to_string(n) + " letters -> " + std::to_string(result.letter_count());
    if (reachable != n) note += " (" + std::to_string(n - reachable) + " unreachable dropped)";
    for (const auto& [letter, group] : members) {
        if (group.size() < 2) continue;
        note += "; merged";
        for (Letter a : group) note += ' ' + s.letter_name(a);
        note += " into " + names[letter];
    }
    if (result.q() != q) note += "; q " + std::to_string(q) + " -> " + std::to_string(result.q());
    for (const auto& name : reset) note += "; padding of " + name + " reset to trailing";
    return {std::move(result), std::move(padding), std::move(class_of), std::move(note)};
}

} // namespace moore
