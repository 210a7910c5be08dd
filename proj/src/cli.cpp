#include "dessins/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "dessins/decorated.hpp"
#include "dessins/dessin.hpp"
#include "dessins/invariants.hpp"
#include "dessins/lattice.hpp"
#include "dessins/shabat.hpp"

namespace dessins {

namespace {

cplx parse_cplx(const std::string& text) {
    const auto comma = text.find(',');
    size_t used = 0;
    if (comma == std::string::npos) {
        const double re = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("bad complex number: " + text);
        return {re, 0.0};
    }
    const std::string re_part = text.substr(0, comma);
    const std::string im_part = text.substr(comma + 1);
    const double re = std::stod(re_part, &used);
    if (used != re_part.size()) throw std::invalid_argument("bad complex number: " + text);
    const double im = std::stod(im_part, &used);
    if (used != im_part.size()) throw std::invalid_argument("bad complex number: " + text);
    return {re, im};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open file for writing: " + path);
    file << content;
}

ComplexPoly poly_from_options(const std::string& inline_json, const std::string& file) {
    if (!inline_json.empty() && !file.empty()) {
        throw std::invalid_argument("give either --poly or --poly-file, not both");
    }
    if (!inline_json.empty()) return ComplexPoly::from_json(inline_json);
    if (!file.empty()) return ComplexPoly::from_json(read_file(file));
    throw std::invalid_argument("a polynomial is required (--poly or --poly-file)");
}

InvariantFn invariant_by_name(const std::string& name) {
    if (name == "degree") return degree_invariant();
    if (name == "triple") return triple_invariant();
    if (name == "key") return key_invariant();
    throw std::invalid_argument("unknown invariant: " + name);
}

// Pool of dessins deduplicated by canonical key, from a file of dessin lines
// or a degree-truncated universe.
std::vector<BiasedDessin> load_pool(const std::string& file, int set_degree,
                                    bool trees_only, int workers) {
    std::vector<CanonicalKey> keys;
    if (!file.empty()) {
        std::istringstream in(read_file(file));
        std::set<CanonicalKey> seen;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            seen.insert(canonical_key(parse_dessin_line(line)));
        }
        keys.assign(seen.begin(), seen.end());
    } else if (set_degree > 0) {
        keys = enumerate_universe(set_degree, trees_only, workers);
    } else {
        throw std::invalid_argument("a pool is required (--set-file or --set-degree)");
    }
    std::vector<BiasedDessin> pool;
    pool.reserve(keys.size());
    for (const auto& key : keys) pool.push_back(dessin_from_key(key));
    return pool;
}

std::string map_csv(const std::vector<int>& map) {
    std::string out;
    for (size_t i = 0; i < map.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(map[i]);
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"biased dessins: permutation pairs, lattice operations, invariants, "
                 "and the Shabat-polynomial bridge"};
    app.require_subcommand(1);

    // ------------------------------------------------------------ enumerate
    auto* enumerate = app.add_subcommand("enumerate", "list all biased dessins of a degree");
    int enum_degree = 0;
    bool enum_trees = false;
    int enum_workers = 1;
    enumerate->add_option("--degree", enum_degree, "degree (number of edges)")->required();
    enumerate->add_flag("--trees", enum_trees, "restrict to biased plane trees");
    enumerate->add_option("--workers", enum_workers, "worker count (default 1)");
    enumerate->callback([&] {
        for (const auto& key : enumerate_biased(enum_degree, enum_trees, enum_workers)) {
            out << key.line() << "\n";
        }
    });

    // ----------------------------------------------------------------- canon
    auto* canon = app.add_subcommand("canon", "canonical form of a dessin line");
    std::string canon_line;
    bool canon_unbiased = false;
    canon->add_option("line", canon_line, "dessin line n:alpha:beta:chosen")->required();
    canon->add_flag("--unbiased", canon_unbiased, "canonical form of the underlying unbiased dessin");
    canon->callback([&] {
        const BiasedDessin d = parse_dessin_line(canon_line);
        out << (canon_unbiased ? unbiased_canonical(d) : canonical_key(d)).line() << "\n";
    });

    // ------------------------------------------------------------ tree-check
    auto* tree_check = app.add_subcommand("tree-check", "biased plane tree recognition");
    std::string tree_line;
    tree_check->add_option("line", tree_line, "dessin line")->required();
    tree_check->callback([&] {
        const BiasedDessin d = parse_dessin_line(tree_line);
        out << (is_biased_tree(d) ? "true" : "false") << " genus=" << genus(d) << "\n";
    });

    // ---------------------------------------------------------------- triple
    auto* triple = app.add_subcommand("triple", "partition triple of a dessin");
    std::string triple_line;
    triple->add_option("line", triple_line, "dessin line")->required();
    triple->callback([&] {
        out << partition_triple(parse_dessin_line(triple_line)).str() << "\n";
    });

    // ------------------------------------------------------------- join/meet
    auto* join_cmd = app.add_subcommand("join", "least upper bound of two biased dessins");
    std::string join_a, join_b;
    join_cmd->add_option("A", join_a, "first dessin line")->required();
    join_cmd->add_option("B", join_b, "second dessin line")->required();
    join_cmd->callback([&] {
        out << dessin_line(join(parse_dessin_line(join_a), parse_dessin_line(join_b))) << "\n";
    });

    auto* meet_cmd = app.add_subcommand("meet", "greatest lower bound of two biased dessins");
    std::string meet_a, meet_b;
    meet_cmd->add_option("A", meet_a, "first dessin line")->required();
    meet_cmd->add_option("B", meet_b, "second dessin line")->required();
    meet_cmd->callback([&] {
        out << dessin_line(meet(parse_dessin_line(meet_a), parse_dessin_line(meet_b))) << "\n";
    });

    // -------------------------------------------------------------- morphism
    auto* morphism_cmd = app.add_subcommand("morphism", "the unique morphism A -> B, if any");
    std::string mor_a, mor_b;
    morphism_cmd->add_option("A", mor_a, "source dessin line")->required();
    morphism_cmd->add_option("B", mor_b, "target dessin line")->required();
    morphism_cmd->callback([&] {
        const auto m = find_morphism(parse_dessin_line(mor_a), parse_dessin_line(mor_b));
        if (m) {
            out << map_csv(m->map) << "\n";
        } else {
            out << "none\n";
        }
    });

    // ----------------------------------------------------------------- tower
    auto* tower = app.add_subcommand("tower", "tower invariant h_S(X) as a formal sum");
    std::string tower_invariant_name, tower_file, tower_x;
    int tower_degree = 0;
    bool tower_trees = false;
    int tower_workers = 1;
    tower->add_option("--invariant", tower_invariant_name, "degree|triple|key")->required();
    tower->add_option("--set-file", tower_file, "file of dessin lines for the set S");
    tower->add_option("--set-degree", tower_degree, "use the full universe of degree <= N as S");
    tower->add_flag("--set-trees", tower_trees, "restrict --set-degree to trees");
    tower->add_option("--workers", tower_workers, "worker count (default 1)");
    tower->add_option("X", tower_x, "dessin line")->required();
    tower->callback([&] {
        const auto pool = load_pool(tower_file, tower_degree, tower_trees, tower_workers);
        const auto sum = tower_invariant(invariant_by_name(tower_invariant_name), pool,
                                         parse_dessin_line(tower_x));
        for (const auto& line : sum.lines()) out << line << "\n";
    });

    // --------------------------------------------------------------- descend
    auto* descend = app.add_subcommand(
        "descend", "unbiased invariant h_Sigma(X): sum of h over the bias classes");
    std::string descend_invariant_name, descend_x;
    descend->add_option("--invariant", descend_invariant_name, "degree|triple|key")->required();
    descend->add_option("X", descend_x, "any dessin line representing the unbiased dessin")
        ->required();
    descend->callback([&] {
        const CanonicalKey key = unbiased_canonical(parse_dessin_line(descend_x));
        const auto sum = unbiased_descent(invariant_by_name(descend_invariant_name), key);
        for (const auto& line : sum.lines()) out << line << "\n";
    });

    // --------------------------------------------------------------- lattice
    auto* lattice = app.add_subcommand("lattice", "decorated lattice of biased dessins");
    lattice->require_subcommand(1);
    auto* lat_build = lattice->add_subcommand("build", "build the degree-truncated lattice");
    int lat_degree = 0;
    int lat_workers = 1;
    std::string lat_out;
    lat_build->add_option("--max-degree", lat_degree, "maximum degree")->required();
    lat_build->add_option("--workers", lat_workers, "worker count (default 1)");
    lat_build->add_option("--out", lat_out, "output file (default stdout)");
    lat_build->callback([&] {
        write_output(lat_out, export_lattice_json(build_decorated(lat_degree, lat_workers)), out);
    });
    auto* lat_export = lattice->add_subcommand("export", "re-export a lattice file");
    std::string lat_in, lat_format = "json", lat_export_out;
    lat_export->add_option("--in", lat_in, "lattice JSON file")->required();
    lat_export->add_option("--format", lat_format, "json|dot")->required();
    lat_export->add_option("--out", lat_export_out, "output file (default stdout)");
    lat_export->callback([&] {
        const DecoratedLattice l = parse_lattice_json(read_file(lat_in));
        if (lat_format == "json") {
            write_output(lat_export_out, export_lattice_json(l), out);
        } else if (lat_format == "dot") {
            write_output(lat_export_out, export_lattice_dot(l), out);
        } else {
            throw std::invalid_argument("unsupported format: " + lat_format);
        }
    });

    // ---------------------------------------------------------------- shabat
    auto* shabat = app.add_subcommand("shabat", "numeric Shabat-polynomial bridge");
    shabat->require_subcommand(1);

    auto* sh_norm = shabat->add_subcommand("normalize", "unique biased normalization of f");
    std::string sn_poly, sn_poly_file, sn_vb, sn_vw, sn_u;
    sh_norm->add_option("--poly", sn_poly, "coefficients as JSON [[re,im],...], constant first");
    sh_norm->add_option("--poly-file", sn_poly_file, "file with coefficient JSON");
    sh_norm->add_option("--vb", sn_vb, "black vertex value re,im")->required();
    sh_norm->add_option("--vw", sn_vw, "white vertex value re,im")->required();
    sh_norm->add_option("--u", sn_u, "chosen root of f(z) = (vb+vw)/2, re,im")->required();
    sh_norm->callback([&] {
        const ComplexPoly f = poly_from_options(sn_poly, sn_poly_file);
        out << bias_normalize(f, parse_cplx(sn_vb), parse_cplx(sn_vw), parse_cplx(sn_u)).json()
            << "\n";
    });

    auto* sh_check = shabat->add_subcommand("check", "verify the biased Shabat conditions");
    std::string sc_poly, sc_poly_file;
    double sc_tol = 1e-9;
    sh_check->add_option("--poly", sc_poly, "coefficients as JSON");
    sh_check->add_option("--poly-file", sc_poly_file, "file with coefficient JSON");
    sh_check->add_option("--tol", sc_tol, "acceptance tolerance (default 1e-9)");
    sh_check->callback([&] {
        out << is_biased_shabat(poly_from_options(sc_poly, sc_poly_file), sc_tol).summary()
            << "\n";
    });

    auto* sh_extract = shabat->add_subcommand("extract", "biased tree of a Shabat polynomial");
    std::string se_poly, se_poly_file;
    sh_extract->add_option("--poly", se_poly, "coefficients as JSON");
    sh_extract->add_option("--poly-file", se_poly_file, "file with coefficient JSON");
    sh_extract->callback([&] {
        out << dessin_line(extract_tree(poly_from_options(se_poly, se_poly_file))) << "\n";
    });

    auto* sh_solve = shabat->add_subcommand("solve", "Shabat polynomial of a biased tree");
    std::string ss_tree;
    std::uint64_t ss_seed = 20150621;
    int ss_restarts = 20;
    sh_solve->add_option("--tree", ss_tree, "biased tree as a dessin line")->required();
    sh_solve->add_option("--seed", ss_seed, "random restart seed");
    sh_solve->add_option("--max-restarts", ss_restarts, "restart budget (default 20)");
    sh_solve->callback([&] {
        out << solve_shabat(parse_dessin_line(ss_tree), ss_seed, ss_restarts).json() << "\n";
    });

    // ------------------------------------------------------------------ run
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace dessins
