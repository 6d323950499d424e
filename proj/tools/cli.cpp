#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "moore/dot.hpp"
#include "moore/duality.hpp"
#include "moore/equivalence.hpp"
#include "moore/error.hpp"
#include "moore/machine.hpp"
#include "moore/substitution.hpp"

namespace moore::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MooreMachine load_machine(const std::string& path) {
    try {
        return parse_machine(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.detail());
    }
}

SubstitutionFile load_substitution(const std::string& path) {
    try {
        return parse_substitution(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.detail());
    }
}

std::string show_word(std::span<const Symbol> w, std::size_t q) {
    return w.empty() ? std::string("ε") : format_word(w, q);
}

/// Writes `text` to the -o path when one was given, else to `out`.
void deliver(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) throw IoError("cannot write '" + path + "'");
}

/// Parses `args` with `app` and runs the selected subcommand's action, mapping
/// every failure to the documented exit code.
int execute(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::function<int()>& action) {
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return success;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    try {
        return action();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return domain_error;
    }
}

} // namespace

int run_moore(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moore machine duality toolkit", "moore"};
    app.require_subcommand(1);

    std::string file, file2, output, word, side = "right", combine = "pair";

    auto* validate = app.add_subcommand("validate", "Check a .moore file");
    auto* run = app.add_subcommand("run", "Output of the machine on a word");
    auto* minimize_cmd = app.add_subcommand("minimize", "Minimal equivalent machine (normal form of the bidual)");
    auto* dual_cmd = app.add_subcommand("dual", "Dual machine, with each state's defining vector");
    auto* normal = app.add_subcommand("normal", "Canonical breadth-first renumbering");
    auto* equiv = app.add_subcommand("equiv", "Test two machines for equivalence");
    auto* iso = app.add_subcommand("iso", "Test two trimmed machines for isomorphism");
    auto* product_cmd = app.add_subcommand("product", "Reachable product machine");
    auto* dot = app.add_subcommand("dot", "Graphviz rendering");

    for (auto* sub : {validate, run, minimize_cmd, dual_cmd, normal, dot}) {
        sub->add_option("file", file, ".moore file")->required();
    }
    for (auto* sub : {equiv, iso, product_cmd}) {
        sub->add_option("first", file, "first .moore file")->required();
        sub->add_option("second", file2, "second .moore file")->required();
    }
    for (auto* sub : {minimize_cmd, dual_cmd, normal, product_cmd, dot}) {
        sub->add_option("-o,--output", output, "write the result to this path");
    }
    run->add_option("-w,--word", word, "input word (digits for q <= 10, else comma-separated)");
    run->add_option("--side", side, "right: M·w, left: w·M")->check(CLI::IsMember({"right", "left"}));
    product_cmd->add_option("--combine", combine, "output combiner")->check(CLI::IsMember({"pair", "first", "second"}));

    return execute(app, args, out, err, [&]() -> int {
        if (validate->parsed()) {
            const auto m = load_machine(file);
            out << "valid: " << m.state_count() << " states, " << m.input_count() << " inputs, " << m.output_count()
                << " outputs\n";
            return success;
        }
        if (run->parsed()) {
            const auto m = load_machine(file);
            const Word w = parse_word(word, m.input_count());
            out << (side == "left" ? run_left(m, w) : run_right(m, w)) << '\n';
            return success;
        }
        if (minimize_cmd->parsed()) {
            deliver(emit_machine(minimize(load_machine(file))), output, out);
            return success;
        }
        if (dual_cmd->parsed()) {
            deliver(emit_dual(dual(load_machine(file))), output, out);
            return success;
        }
        if (normal->parsed()) {
            deliver(emit_machine(normal_form(load_machine(file))), output, out);
            return success;
        }
        if (equiv->parsed()) {
            const auto m1 = load_machine(file);
            const auto m2 = load_machine(file2);
            const auto result = equivalent(m1, m2);
            if (result) {
                out << "equivalent\n";
                return success;
            }
            const auto& cex = *result.counterexample;
            out << "not equivalent\n"
                << "word: " << show_word(cex.word, m1.input_count()) << '\n'
                << "left: " << cex.left_output << '\n'
                << "right: " << cex.right_output << '\n';
            return negative;
        }
        if (iso->parsed()) {
            const auto m1 = trim(load_machine(file));
            const auto m2 = trim(load_machine(file2));
            const auto xi = isomorphic(m1, m2);
            if (!xi) {
                out << "not isomorphic\n";
                return negative;
            }
            out << "isomorphic\n";
            for (State a = 0; a < m1.state_count(); ++a) {
                out << m1.state_name(a) << " -> " << m2.state_name(xi->mapping[a]) << '\n';
            }
            return success;
        }
        if (product_cmd->parsed()) {
            const auto gamma = combine == "first"    ? OutputCombiner::first()
                               : combine == "second" ? OutputCombiner::second()
                                                     : OutputCombiner::pair();
            deliver(emit_machine(product(load_machine(file), load_machine(file2), gamma)), output, out);
            return success;
        }
        deliver(to_dot(load_machine(file)), output, out);
        return success;
    });
}

int run_subst(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Substitution toolkit: fixed points, numeration and minimization", "subst"};
    app.require_subcommand(1);

    std::string file, output, word, from;
    std::uint64_t n = 0;
    std::size_t k = 0;
    std::size_t q = 0;
    bool project = false;

    auto* validate = app.add_subcommand("validate", "Check a .subst file");
    auto* expand = app.add_subcommand("expand", "Prefix of the fixed point");
    auto* letter = app.add_subcommand("letter", "Letter of index n in σ^k, without expansion");
    auto* phi_cmd = app.add_subcommand("phi", "Weighted digit sum of a word");
    auto* psi_cmd = app.add_subcommand("psi", "n-th word of the numeration language");
    auto* minimize_cmd = app.add_subcommand("minimize", "Substitution on the fewest letters with the same projection");
    auto* to_machine = app.add_subcommand("to-machine", "Padded Moore machine of the substitution");

    for (auto* sub : {validate, expand, letter, psi_cmd, minimize_cmd, to_machine}) {
        sub->add_option("file", file, ".subst file")->required();
    }
    for (auto* sub : {expand, minimize_cmd, to_machine}) {
        sub->add_option("-o,--output", output, "write the result to this path");
    }
    expand->add_option("-n,--count", n, "number of letters")->required();
    expand->add_flag("--project", project, "print the λ-image instead of letters");
    letter->add_option("-k,--iterations", k, "iteration count k")->required();
    letter->add_option("-n,--index", n, "letter index")->required();
    letter->add_option("--from", from, "start letter (constant-length substitutions; default: fixed point)");
    phi_cmd->add_option("file", file, ".subst file supplying q");
    phi_cmd->add_option("-w,--word", word, "digit word")->required();
    phi_cmd->add_option("-q,--base", q, "base q (overrides the file)");
    psi_cmd->add_option("-n,--rank", n, "rank")->required();

    return execute(app, args, out, err, [&]() -> int {
        if (phi_cmd->parsed()) {
            if (q == 0) {
                if (file.empty()) throw IoError("phi needs a .subst file or -q");
                q = load_substitution(file).substitution.q();
            }
            out << phi(parse_word(word, q), q) << '\n';
            return success;
        }
        const auto doc = load_substitution(file);
        const auto& s = doc.substitution;
        if (validate->parsed()) {
            out << "valid: " << s.letter_count() << " letters, q=" << s.q() << ", "
                << (s.constant_length() ? "constant length" : "non-constant length") << '\n';
            return success;
        }
        if (expand->parsed()) {
            const auto prefix = expand_fixed_point(s, static_cast<std::size_t>(n));
            deliver((project ? format_projection(s, prefix) : format_letters(s, prefix)) + '\n', output, out);
            return success;
        }
        if (letter->parsed()) {
            Letter result;
            if (!from.empty()) {
                const auto a = s.find_letter(from);
                if (!a) throw DomainError("unknown letter '" + from + "'");
                result = letter_at_constant(s, k, *a, n);
            } else {
                result = letter_at(s, doc.padding, k, n);
            }
            out << s.letter_name(result) << '\n';
            return success;
        }
        if (psi_cmd->parsed()) {
            const auto pm = to_padded_machine(s, doc.padding);
            out << format_word(psi(pm, n), s.q()) << '\n';
            return success;
        }
        if (minimize_cmd->parsed()) {
            const auto result = minimize_substitution(s, doc.padding);
            deliver("# " + result.note + '\n' + emit_substitution(result.substitution, result.padding), output, out);
            return success;
        }
        deliver(emit_machine(to_padded_machine(s, doc.padding).machine), output, out);
        return success;
    });
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    const std::string program = argv.empty() ? "" : std::filesystem::path(argv[0]).filename().string();
    if (program == "moore") return run_moore({argv.begin() + 1, argv.end()}, out, err);
    if (program == "subst") return run_subst({argv.begin() + 1, argv.end()}, out, err);
    if (argv.size() >= 2 && argv[1] == "moore") return run_moore({argv.begin() + 2, argv.end()}, out, err);
    if (argv.size() >= 2 && argv[1] == "subst") return run_subst({argv.begin() + 2, argv.end()}, out, err);
    err << "usage: moore <subcommand> ... | subst <subcommand> ...\n";
    return usage_error;
}

} // namespace moore::cli
