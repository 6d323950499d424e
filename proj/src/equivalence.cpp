#include "moore/equivalence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "moore/duality.hpp"
#include "moore/error.hpp"

namespace moore {

namespace {

void require_same_inputs(const MooreMachine& m1, const MooreMachine& m2) {
    if (m1.input_count() != m2.input_count()) {
        throw DomainError("machines have different input counts (" + std::to_string(m1.input_count()) + " vs " +
                          std::to_string(m2.input_count()) + ")");
    }
}

using StatePair = std::pair<State, State>;

/// Breadth-first walk of the synchronized pairs from (s1, s2). Calls
/// `visit(pair, index)` on discovery; stops early when it returns false.
template <typename Visit>
void walk_pairs(const MooreMachine& m1, const MooreMachine& m2, StatePair start, std::vector<StatePair>& order,
                std::vector<std::pair<std::size_t, Symbol>>& parent, Visit visit) {
    const std::size_t q = m1.input_count();
    std::vector<std::uint32_t> seen(m1.state_count() * m2.state_count(), 0);
    auto key = [&](StatePair p) { return p.first * m2.state_count() + p.second; };

    order.assign(1, start);
    parent.assign(1, {0, 0});
    seen[key(start)] = 1;
    if (!visit(start, 0)) return;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (Symbol j = 0; j < q; ++j) {
            StatePair next{m1.next(order[head].first, j), m2.next(order[head].second, j)};
            if (seen[key(next)]) continue;
            seen[key(next)] = 1;
            order.push_back(next);
            parent.emplace_back(head, j);
            if (!visit(next, order.size() - 1)) return;
        }
    }
}

} // namespace

OutputCombiner OutputCombiner::table(std::vector<std::string> outputs,
                                     std::map<std::pair<std::string, std::string>, std::string> entries) {
    if (outputs.empty()) throw DomainError("combiner output alphabet is empty");
    for (const auto& [key, value] : entries) {
        if (std::find(outputs.begin(), outputs.end(), value) == outputs.end())
            throw DomainError("combiner value '" + value + "' is not in its output alphabet");
    }
    OutputCombiner c(Kind::Table);
    c.outputs_ = std::move(outputs);
    c.entries_ = std::move(entries);
    return c;
}

std::vector<std::string> OutputCombiner::alphabet(std::span<const std::string> left,
                                                  std::span<const std::string> right) const {
    switch (kind_) {
    case Kind::Pair: {
        std::vector<std::string> out;
        for (const auto& a : left)
            for (const auto& b : right) out.push_back(combine(a, b));
        return out;
    }
    case Kind::First: return {left.begin(), left.end()};
    case Kind::Second: return {right.begin(), right.end()};
    case Kind::Table: break;
    }
    return outputs_;
}

std::string OutputCombiner::combine(const std::string& o1, const std::string& o2) const {
    switch (kind_) {
    case Kind::Pair: return "(" + o1 + "," + o2 + ")";
    case Kind::First: return o1;
    case Kind::Second: return o2;
    case Kind::Table: break;
    }
    auto it = entries_.find({o1, o2});
    if (it == entries_.end()) throw DomainError("output combiner undefined on (" + o1 + ", " + o2 + ")");
    return it->second;
}

MooreMachine product(const MooreMachine& m1, const MooreMachine& m2, const OutputCombiner& gamma) {
    require_same_inputs(m1, m2);
    const std::size_t q = m1.input_count();
    std::vector<StatePair> order;
    std::vector<std::pair<std::size_t, Symbol>> parent;
    walk_pairs(m1, m2, {m1.initial(), m2.initial()}, order, parent, [](StatePair, std::size_t) { return true; });

    std::map<StatePair, State> index;
    for (std::size_t k = 0; k < order.size(); ++k) index.emplace(order[k], static_cast<State>(k));

    const std::vector<std::string> outputs = gamma.alphabet(m1.outputs(), m2.outputs());
    std::vector<std::string> names;
    std::vector<State> table;
    std::vector<std::uint32_t> out;
    for (const auto& [a1, a2] : order) {
        names.push_back("(" + m1.state_name(a1) + "," + m2.state_name(a2) + ")");
        const std::string o = gamma.combine(m1.output(a1), m2.output(a2));
        auto pos = std::find(outputs.begin(), outputs.end(), o);
        if (pos == outputs.end()) throw DomainError("combined output '" + o + "' is outside the combiner alphabet");
        out.push_back(static_cast<std::uint32_t>(pos - outputs.begin()));
        for (Symbol j = 0; j < q; ++j) table.push_back(index.at({m1.next(a1, j), m2.next(a2, j)}));
    }
    return MooreMachine(std::move(names), q, {m1.input_names().begin(), m1.input_names().end()}, outputs,
                        std::move(table), std::move(out), 0);
}

EquivalenceResult equivalent(const MooreMachine& m1, const MooreMachine& m2) {
    require_same_inputs(m1, m2);
    std::vector<StatePair> order;
    std::vector<std::pair<std::size_t, Symbol>> parent;
    std::optional<std::size_t> bad;
    walk_pairs(m1, m2, {m1.initial(), m2.initial()}, order, parent, [&](StatePair p, std::size_t k) {
        if (m1.output(p.first) == m2.output(p.second)) return true;
        bad = k;
        return false;
    });
    if (!bad) return {};

    Counterexample cex;
    for (std::size_t k = *bad; k != 0; k = parent[k].first) cex.word.push_back(parent[k].second);
    std::reverse(cex.word.begin(), cex.word.end());
    cex.left_output = m1.output(order[*bad].first);
    cex.right_output = m2.output(order[*bad].second);
    return {std::move(cex)};
}

bool states_equivalent(const MooreMachine& m, State a, State b) {
    if (a >= m.state_count() || b >= m.state_count()) throw DomainError("state index out of range");
    std::vector<StatePair> order;
    std::vector<std::pair<std::size_t, Symbol>> parent;
    bool same = true;
    walk_pairs(m, m, {a, b}, order, parent, [&](StatePair p, std::size_t) {
        same = m.output_index(p.first) == m.output_index(p.second);
        return same;
    });
    return same;
}

MooreMachine oracle_minimize(const MooreMachine& m) {
    const MooreMachine t = trim(m);
    const std::size_t n = t.state_count();
    const std::size_t q = t.input_count();

    // Blocks are numbered by first occurrence in state order.
    auto renumber = [n](const auto& signature_of) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> block(n);
        for (State s = 0; s < n; ++s) {
            auto [it, _] = ids.try_emplace(signature_of(s), static_cast<std::uint32_t>(ids.size()));
            block[s] = it->second;
        }
        return std::make_pair(block, ids.size());
    };

    auto [block, count] = renumber([&](State s) { return std::vector<std::uint32_t>{t.output_index(s)}; });
    while (true) {
        auto [refined, refined_count] = renumber([&, &block = block](State s) {
            std::vector<std::uint32_t> sig{block[s]};
            for (Symbol j = 0; j < q; ++j) sig.push_back(block[t.next(s, j)]);
            return sig;
        });
        block = std::move(refined);
        if (refined_count == count) break;
        count = refined_count;
    }

    std::vector<std::string> names(count);
    std::vector<std::uint32_t> out(count);
    std::vector<State> table(count * q);
    std::vector<bool> filled(count, false);
    for (State s = 0; s < n; ++s) {
        const auto b = block[s];
        if (filled[b]) continue;
        filled[b] = true;
        names[b] = t.state_name(s);
        out[b] = t.output_index(s);
        for (Symbol j = 0; j < q; ++j) table[b * q + j] = block[t.next(s, j)];
    }
    return MooreMachine(std::move(names), q, {t.input_names().begin(), t.input_names().end()},
                        {t.outputs().begin(), t.outputs().end()}, std::move(table), std::move(out),
                        block[t.initial()]);
}

std::optional<Isomorphism> isomorphic(const MooreMachine& m1, const MooreMachine& m2) {
    if (m1.state_count() != m2.state_count() || m1.input_count() != m2.input_count()) return std::nullopt;
    const std::size_t n = m1.state_count();
    constexpr State unset = static_cast<State>(-1);
    std::vector<State> forward(n, unset), backward(n, unset);
    std::vector<State> order{m1.initial()};
    forward[m1.initial()] = m2.initial();
    backward[m2.initial()] = m1.initial();

    for (std::size_t head = 0; head < order.size(); ++head) {
        const State a = order[head];
        if (m1.output(a) != m2.output(forward[a])) return std::nullopt;
        for (Symbol j = 0; j < m1.input_count(); ++j) {
            const State a2 = m1.next(a, j);
            const State b2 = m2.next(forward[a], j);
            if (forward[a2] == unset) {
                if (backward[b2] != unset) return std::nullopt;
                forward[a2] = b2;
                backward[b2] = a2;
                order.push_back(a2);
            } else if (forward[a2] != b2) {
                return std::nullopt;
            }
        }
    }
    if (order.size() != n) return std::nullopt;
    return Isomorphism{std::move(forward)};
}

MooreMachine normal_form(const MooreMachine& m) {
    const MooreMachine t = trim(m);
    std::vector<std::string> names;
    names.reserve(t.state_count());
    for (std::size_t s = 0; s < t.state_count(); ++s) names.push_back(std::to_string(s));
    return MooreMachine(std::move(names), t.input_count(), {t.input_names().begin(), t.input_names().end()},
                        {t.outputs().begin(), t.outputs().end()}, {t.transitions().begin(), t.transitions().end()},
                        {t.output_map().begin(), t.output_map().end()}, t.initial());
}

MooreMachine minimize(const MooreMachine& m) {
    return normal_form(bidual(m));
}

} // namespace moore
