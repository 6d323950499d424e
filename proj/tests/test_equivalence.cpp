#include <catch2/catch_amalgamated.hpp>

#include "moore/duality.hpp"
#include "moore/equivalence.hpp"
#include "moore/error.hpp"
#include "support.hpp"

using namespace moore;
using moore::testing::load;
using moore::testing::word;

TEST_CASE("product machines") {
    const auto m = load("paper.moore");

    SECTION("self product is the diagonal") {
        const auto p = product(m, m, OutputCombiner::pair());
        REQUIRE(p.state_count() == 3);
        CHECK(p.state_name(0) == "(i,i)");
        CHECK(p.state_name(1) == "(a,a)");
        CHECK(p.state_name(2) == "(b,b)");
        CHECK(p.output(1) == "(1,1)");
        CHECK(p.output_count() == 4);
    }
    SECTION("projections reproduce the factors") {
        std::mt19937_64 rng(2);
        for (int round = 0; round < 100; ++round) {
            auto m1 = testing::random_reachable_machine(rng);
            auto m2 = testing::random_machine(rng, 1 + rng() % 5, m1.input_count(), 2);
            const auto p1 = product(m1, m2, OutputCombiner::first());
            const auto p2 = product(m1, m2, OutputCombiner::second());
            for (int k = 0; k < 10; ++k) {
                const auto w = testing::random_word(rng, m1.input_count(), 10);
                CHECK(run_right(p1, w) == run_right(m1, w));
                CHECK(run_right(p2, w) == run_right(m2, w));
            }
        }
    }
    SECTION("product with the bidual pairs equal outputs") {
        const auto p = product(m, load("paper_bidual.moore"), OutputCombiner::pair());
        for (State s = 0; s < p.state_count(); ++s) {
            CHECK((p.output(s) == "(0,0)" || p.output(s) == "(1,1)"));
        }
    }
    SECTION("table combiner") {
        const auto xor_gamma = OutputCombiner::table(
            {"same", "diff"}, {{{"0", "0"}, "same"}, {{"1", "1"}, "same"}, {{"0", "1"}, "diff"}, {{"1", "0"}, "diff"}});
        const auto p = product(m, load("paper_dual.moore"), xor_gamma);
        CHECK(run_right(p, word("")) == "same");
        CHECK(run_right(p, word("01")) == "diff");

        const auto partial = OutputCombiner::table({"same"}, {{{"0", "0"}, "same"}});
        CHECK_THROWS_AS(product(m, m, partial), DomainError);
    }
    SECTION("input counts must agree") {
        const auto one = parse_machine("moore v1\ninputs 1\noutputs 0\nstate s 0\ninitial s\ntrans s 0 s\n");
        CHECK_THROWS_AS(product(m, one, OutputCombiner::pair()), DomainError);
        CHECK_THROWS_AS(equivalent(m, one), DomainError);
    }
}

TEST_CASE("equivalence with counterexamples") {
    const auto m = load("paper.moore");
    CHECK(equivalent(m, load("paper_bidual.moore")));

    const auto perturbed = equivalent(m, load("paper_perturbed.moore"));
    REQUIRE_FALSE(perturbed);
    CHECK(perturbed.counterexample->word.empty());
    CHECK(perturbed.counterexample->left_output == "0");
    CHECK(perturbed.counterexample->right_output == "1");

    // The dual reads in the other direction; the first disagreement on the
    // right is at 01 (M: i·01 = a, output 1; dual: t·01 = u, output 0).
    const auto against_dual = equivalent(m, dual(m).machine);
    REQUIRE_FALSE(against_dual);
    CHECK(against_dual.counterexample->word == word("01"));
    CHECK(against_dual.counterexample->left_output == "1");
    CHECK(against_dual.counterexample->right_output == "0");
    CHECK(testing::brute_force_counterexample(m, dual(m).machine, 4) == word("01"));
}

TEST_CASE("equivalence agrees with exhaustive search on small machines") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 300; ++round) {
        const std::size_t q = 1 + rng() % 2;
        const auto m1 = testing::random_machine(rng, 1 + rng() % 3, q, 2);
        const auto m2 = testing::random_machine(rng, 1 + rng() % 3, q, 2);
        // Distinguishable pairs are separated by a word shorter than |Q1|·|Q2|.
        const auto brute = testing::brute_force_counterexample(m1, m2, m1.state_count() * m2.state_count());
        const auto result = equivalent(m1, m2);
        CHECK(result.equivalent() == !brute.has_value());
        if (brute) {
            CHECK(result.counterexample->word == *brute);
            CHECK(result.counterexample->left_output == run_right(m1, *brute));
            CHECK(result.counterexample->right_output == run_right(m2, *brute));
        }
    }
}

TEST_CASE("state equivalence") {
    const auto m = load("paper.moore");
    const State i = *m.find_state("i"), a = *m.find_state("a"), b = *m.find_state("b");
    CHECK(states_equivalent(m, i, b));
    CHECK_FALSE(states_equivalent(m, i, a));
    CHECK(states_equivalent(m, a, a));
    CHECK_THROWS_AS(states_equivalent(m, i, 9), DomainError);

    std::mt19937_64 rng(37);
    for (int round = 0; round < 100; ++round) {
        const auto r = testing::random_machine(rng, 1 + rng() % 4, 1 + rng() % 2, 2);
        for (State s = 0; s < r.state_count(); ++s) {
            for (State t = 0; t < r.state_count(); ++t) {
                bool same = true;
                testing::for_each_word(r.input_count(), r.state_count() * r.state_count(), [&](const Word& w) {
                    same = same && r.output(right_action(r, s, w)) == r.output(right_action(r, t, w));
                });
                CHECK(states_equivalent(r, s, t) == same);
            }
        }
    }
}

TEST_CASE("partition-refinement oracle") {
    const auto m = load("paper.moore");
    const auto o = oracle_minimize(m);
    CHECK(o.state_count() == 2);
    CHECK(equivalent(m, o));
    CHECK(o.state_name(0) == "i");
    CHECK(o.state_name(1) == "a");

    const auto constant = parse_machine("moore v1\ninputs 1\noutputs 0\nstate p 0\nstate r 0\ninitial p\n"
                                        "trans p 0 r\ntrans r 0 p\n");
    CHECK(oracle_minimize(constant).state_count() == 1);

    std::mt19937_64 rng(41);
    for (int round = 0; round < 300; ++round) {
        const auto r = testing::random_reachable_machine(rng);
        const auto min = oracle_minimize(r);
        CHECK(min.state_count() == bidual(r).state_count());
        CHECK(equivalent(r, min));
    }
}

TEST_CASE("isomorphism") {
    const auto b = load("paper_bidual.moore");
    const auto renamed = parse_machine("moore v1\ninputs 2\noutputs 0 1\nstate q 1\nstate p 0\ninitial p\n"
                                       "trans p 0 p\ntrans p 1 q\ntrans q 0 p\ntrans q 1 p\n");
    const auto xi = isomorphic(b, renamed);
    REQUIRE(xi);
    CHECK(renamed.state_name(xi->mapping[*b.find_state("x")]) == "p");
    CHECK(renamed.state_name(xi->mapping[*b.find_state("y")]) == "q");

    const auto m = load("paper.moore");
    CHECK_FALSE(isomorphic(m, b));
    const auto swapped = parse_machine("moore v1\ninputs 2\noutputs 0 1\nstate i 1\nstate a 0\nstate b 1\ninitial i\n"
                                       "trans i 0 i\ntrans i 1 a\ntrans a 0 b\ntrans a 1 i\ntrans b 0 b\ntrans b 1 a\n");
    CHECK_FALSE(isomorphic(m, swapped));

    // Same tables, different initial state: not isomorphic as machines.
    const auto moved = parse_machine("moore v1\ninputs 2\noutputs 0 1\nstate x 0\nstate y 1\ninitial y\n"
                                     "trans x 0 x\ntrans x 1 y\ntrans y 0 x\ntrans y 1 x\n");
    CHECK_FALSE(isomorphic(b, moved));

    std::mt19937_64 rng(43);
    for (int round = 0; round < 200; ++round) {
        const auto r = testing::random_reachable_machine(rng);
        const auto s = testing::shuffle_states(rng, r);
        const auto iso = isomorphic(r, s);
        REQUIRE(iso);
        CHECK(equivalent(r, s));
        for (State a = 0; a < r.state_count(); ++a) CHECK(r.state_name(a) == s.state_name(iso->mapping[a]));
    }
}

TEST_CASE("normal form") {
    const auto listed_backwards = parse_machine("moore v1\ninputs 2\noutputs 0 1\nstate y 1\nstate x 0\ninitial x\n"
                                                "trans y 0 x\ntrans y 1 x\ntrans x 0 x\ntrans x 1 y\n");
    const auto nf = normal_form(listed_backwards);
    CHECK(emit_machine(nf) ==
          "moore v1\ninputs 2\noutputs 0 1\nstate 0 0\nstate 1 1\ninitial 0\n"
          "trans 0 0 0\ntrans 0 1 1\ntrans 1 0 0\ntrans 1 1 0\n");
    CHECK(normal_form(nf) == nf);

    std::mt19937_64 rng(47);
    for (int round = 0; round < 200; ++round) {
        const auto r = testing::random_reachable_machine(rng);
        CHECK(normal_form(testing::shuffle_states(rng, r)) == normal_form(testing::shuffle_states(rng, r)));
        CHECK(normal_form(normal_form(r)) == normal_form(r));
    }
}

TEST_CASE("minimize") {
    const auto m = load("paper.moore");
    CHECK(emit_machine(minimize(m)) == emit_machine(normal_form(load("paper_bidual.moore"))));

    const auto b = load("paper_bidual.moore");
    CHECK(isomorphic(minimize(b), b));

    std::mt19937_64 rng(53);
    for (int round = 0; round < 200; ++round) {
        const auto r = testing::random_reachable_machine(rng);
        const auto split = testing::split_state(rng, r, static_cast<State>(rng() % r.state_count()));
        REQUIRE(equivalent(r, split));
        CHECK(emit_machine(minimize(split)) == emit_machine(minimize(r)));
        CHECK(minimize(r).state_count() == oracle_minimize(r).state_count());
    }
}
