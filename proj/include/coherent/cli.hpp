#pragma once

// Command-line front end. Every command reads its input from flags or a JSON
// file and writes one JSON or CSV document. Exit status: 0 on success, 1 for
// requests outside an operation's domain, 2 for malformed input.

#include "coherent/constructor.hpp"
#include "coherent/extremality.hpp"
#include "coherent/optimizer.hpp"
#include "coherent/representation.hpp"
#include "coherent/sequence.hpp"
#include "coherent/support_graph.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace coherent::cli {

namespace detail {

struct Options {
    std::string in;
    std::string z;
    std::string pattern;
    std::string alpha;
    std::string alphas;
    std::string delta;
    std::string name;
    std::string out;
    std::string format;
    int n_max = SearchConfig{}.n_max;
    int restarts = SearchConfig{}.restarts;
    std::uint64_t seed = 0;
    double tol = SearchConfig{}.tolerance;
};

inline std::string read_file(const std::string& path) {
    if (path.empty()) throw InputError("--in FILE is required");
    std::ifstream f(path);
    if (!f) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline nlohmann::json read_json(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

/// Representation from the document's "q" when present, otherwise the
/// solver's unique representation (precondition error when not unique).
inline Representation representation_for(const nlohmann::json& doc) {
    if (doc.contains("q")) {
        auto rep = parse_representation(doc);
        if (!check_in_R(rep)) throw PreconditionError("the supplied q does not satisfy the balance equations");
        return rep;
    }
    const auto m = parse_measure(doc);
    const auto u = uniqueness_check(m);
    if (!u.unique) throw PreconditionError("the measure has several representations; supply \"q\"");
    return u.witness;
}

inline double parse_real(const std::string& text, const char* flag) {
    if (text.empty()) throw InputError(std::string(flag) + " is required");
    return Rational::parse(text).to_double();
}

inline std::vector<double> parse_real_list(const std::string& text, const char* flag) {
    if (text.empty()) throw InputError(std::string(flag) + " is required");
    std::vector<double> out;
    for (const auto& r : parse_rational_list(text)) out.push_back(r.to_double());
    return out;
}

inline ExactSequence sequence_flag(const std::string& text) {
    if (text.empty()) throw InputError("--z is required");
    return ExactSequence::from_interior(parse_rational_list(text));
}

inline SearchConfig config(const Options& o) {
    SearchConfig c;
    c.n_max = o.n_max;
    c.restarts = o.restarts;
    c.seed = o.seed;
    c.tolerance = o.tol;
    c.validate();
    return c;
}

inline nlohmann::json real_sequence_json(const RealSequence& z) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : z.values()) arr.push_back(v);
    return arr;
}

inline std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

inline std::string execute(const std::string& command, const Options& o) {
    if (command == "check") {
        const auto v = find_representation(parse_measure(read_json(o.in)));
        nlohmann::json doc{{"coherent", v.coherent}};
        if (v.witness) doc["q"] = rational_list_to_json(v.witness->q);
        if (v.certificate) doc["certificate"] = rational_list_to_json(v.certificate->row_multipliers);
        return dump(doc);
    }
    if (command == "represent") {
        const auto m = parse_measure(read_json(o.in));
        const auto coh = find_representation(m);
        nlohmann::json doc{{"coherent", coh.coherent}};
        if (!coh.coherent) return dump(doc);
        const auto u = uniqueness_check(m);
        const auto mn = minimality_check(u.witness);
        doc["unique"] = u.unique;
        doc["q"] = rational_list_to_json(u.witness.q);
        if (u.second_witness) doc["second_q"] = rational_list_to_json(u.second_witness->q);
        doc["minimal"] = mn.minimal;
        doc["kernel_dimension"] = mn.kernel_dimension;
        return dump(doc);
    }
    if (command == "extremal") return dump(serialize_verdict(is_extremal(parse_measure(read_json(o.in)))));
    if (command == "classify") {
        const auto rep = representation_for(read_json(o.in));
        nlohmann::json classes = nlohmann::json::array();
        for (auto c : classify_points(rep)) classes.push_back(to_string(c));
        return dump({{"q", rational_list_to_json(rep.q)}, {"classes", classes}});
    }
    if (command == "cycle") {
        const auto doc = read_json(o.in);
        const auto m = parse_measure(doc);
        nlohmann::json out;
        const auto c = find_axial_cycle(m);
        out["cycle"] = c ? points_to_json(c->points) : nlohmann::json(nullptr);
        if (doc.contains("q")) {
            const auto rep = parse_representation(doc);
            if (!check_in_R(rep)) throw PreconditionError("the supplied q does not satisfy the balance equations");
            const auto alt = find_alternating_cycle(rep);
            out["alternating"] = alt ? points_to_json(alt->cycle.points) : nlohmann::json(nullptr);
        }
        return dump(out);
    }
    if (command == "path") {
        const auto r = is_axial_path(parse_measure(read_json(o.in)));
        nlohmann::json doc{{"is_path", r.is_path}};
        if (r.is_path) doc["path"] = points_to_json(r.path.points);
        else doc["reason"] = r.reason;
        if (r.cycle) doc["cycle"] = points_to_json(r.cycle->points);
        return dump(doc);
    }
    if (command == "phi") {
        const auto z = sequence_flag(o.z);
        const double alpha = parse_real(o.alpha, "--alpha");
        const double value = phi(z, alpha);
        if (o.format != "json") return format_g12(value) + "\n";
        nlohmann::json tags = nlohmann::json::array();
        for (auto t : tag_components(z, alpha)) tags.push_back(to_string(t));
        return dump({{"phi", value}, {"psi", psi(z, alpha)}, {"tags", tags}});
    }
    if (command == "reduce") {
        const double alpha = parse_real(o.alpha, "--alpha");
        const auto z = reduce_to_S_prime(sequence_flag(o.z), alpha);
        auto doc = serialize_sequence(z);
        doc["psi"] = psi(z, alpha);
        doc["in_s_prime"] = in_S_prime(z, alpha).member;
        return dump(doc);
    }
    if (command == "optimize") {
        const double alpha = parse_real(o.alpha, "--alpha");
        const auto r = maximize_phi(alpha, config(o));
        return dump({{"alpha", alpha}, {"z", real_sequence_json(r.z)}, {"value", r.value}, {"strategy", r.strategy}});
    }
    if (command == "sweep") {
        const auto rows = asymptotic_sweep(parse_real_list(o.alphas, "--alphas"), config(o));
        if (o.format != "json") return sweep_csv(rows);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"alpha", r.alpha}, {"best", r.best}, {"alpha_best", r.alpha_best()},
                           {"witness", r.witness}, {"alpha_witness", r.alpha_witness()},
                           {"envelope", r.envelope}, {"z", real_sequence_json(r.best_z)}});
        return dump(arr);
    }
    if (command == "threshold") {
        if (o.delta.empty()) throw InputError("--delta is required");
        const auto r = maximize_threshold(Rational::parse(o.delta), config(o));
        return dump({{"measure", serialize_measure(r.measure)},
                     {"value", r.value.str()},
                     {"bound", r.bound.str()},
                     {"value_real", r.value.to_double()},
                     {"bound_real", r.bound.to_double()},
                     {"source", r.source}});
    }
    if (command == "construct") {
        const auto z = sequence_flag(o.z);
        const auto pattern = o.pattern.empty() ? QPattern::alternating(z.n()) : parse_pattern(o.pattern);
        return dump(serialize_representation(measure_from_sequence(z, pattern).representation));
    }
    if (command == "fixture") {
        const auto f = fixture(o.name);
        return dump(f.representation ? serialize_representation(*f.representation) : serialize_measure(f.measure));
    }
    throw InputError("unknown command '" + command + "'");
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coherent distributions on the unit square: exact decisions and sharp-bound search", "coherent"};
    app.require_subcommand(1);
    detail::Options o;

    auto add_in = [&](CLI::App* s) { s->add_option("--in", o.in, "measure JSON file")->required(); };
    auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "write the result to FILE"); };
    auto add_search = [&](CLI::App* s) {
        s->add_option("--n-max", o.n_max, "largest sequence length searched");
        s->add_option("--restarts", o.restarts, "random restarts per length");
        s->add_option("--seed", o.seed, "seed for every random stream");
        s->add_option("--tol", o.tol, "step tolerance of the local search");
    };

    for (auto [name, help] : {std::pair{"check", "decide coherence"},
                              std::pair{"represent", "uniqueness and minimality of the representation"},
                              std::pair{"extremal", "full extremality verdict"},
                              std::pair{"classify", "lower/upper out and cut points"},
                              std::pair{"cycle", "axial and alternating cycles"},
                              std::pair{"path", "axial path ordering of the support"}}) {
        auto* s = app.add_subcommand(name, help);
        add_in(s);
        add_out(s);
    }
    for (auto [name, help] : {std::pair{"phi", "evaluate the discrepancy functional"},
                              std::pair{"reduce", "reduce a sequence to normal form"}}) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--z", o.z, "interior values, comma separated")->required();
        s->add_option("--alpha", o.alpha, "exponent >= 1")->required();
        s->add_option("--format", o.format, "text|json");
        add_out(s);
    }
    {
        auto* s = app.add_subcommand("optimize", "maximize the functional for one exponent");
        s->add_option("--alpha", o.alpha, "exponent >= 1")->required();
        add_search(s);
        add_out(s);
    }
    {
        auto* s = app.add_subcommand("sweep", "asymptotic table over several exponents");
        s->add_option("--alphas", o.alphas, "comma separated exponents >= 4")->required();
        s->add_option("--format", o.format, "csv|json");
        add_search(s);
        add_out(s);
    }
    {
        auto* s = app.add_subcommand("threshold", "maximize P(|X-Y| >= delta)");
        s->add_option("--delta", o.delta, "threshold in (1/2, 1]")->required();
        add_search(s);
        add_out(s);
    }
    {
        auto* s = app.add_subcommand("construct", "coherent measure realizing a sequence");
        s->add_option("--z", o.z, "interior values, comma separated")->required();
        s->add_option("--pattern", o.pattern, "quotients in {0,1}, comma separated; alternating 1,0,... by default");
        add_out(s);
    }
    {
        auto* s = app.add_subcommand("fixture", "emit a named measure");
        s->add_option("name", o.name, "staircase | rectangle-nonunique | dirac-diagonal | two-corner")->required();
        add_out(s);
    }

    std::vector<std::string> storage{"coherent"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const std::string text = detail::execute(command, o);
        if (o.out.empty()) {
            out << text;
        } else {
            std::ofstream f(o.out);
            if (!f) throw InputError("cannot write '" + o.out + "'");
            f << text;
        }
        return 0;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const StructureError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace coherent::cli
