// pralg — exact model-theoretic computations on finite probability algebras.
//
// Subcommands: eval, atoms, indep, type, forking, rv, entropy, axioms, gen,
// selftest.  Exit codes: 0 ok, 1 property failure, 2 parse error, 3 semantic
// error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pralg/atoms.hpp"
#include "pralg/entropy.hpp"
#include "pralg/formula.hpp"
#include "pralg/independence.hpp"
#include "pralg/rv.hpp"
#include "pralg/selftest.hpp"
#include "pralg/structure_io.hpp"
#include "pralg/types.hpp"

using namespace pralg;
using Json = nlohmann::ordered_json;

namespace {

std::string event_labels(const FiniteProbabilityAlgebra& alg, const Event& e) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = e.members.find_first(); i != Bits::npos; i = e.members.find_next(i)) {
        if (!first) out += ",";
        out += alg.label(i);
        first = false;
    }
    return out + "}";
}

Json event_json(const FiniteProbabilityAlgebra& alg, const Event& e) {
    Json arr = Json::array();
    for (std::size_t i = e.members.find_first(); i != Bits::npos; i = e.members.find_next(i))
        arr.push_back(alg.label(i));
    return arr;
}

std::vector<Event> resolve_tuple(const StructureDocument& doc, const std::string& expr) {
    std::vector<Event> out;
    std::stringstream ss(expr);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        out.push_back(resolve_event(doc, name));
    }
    if (out.empty()) throw InvalidStructure("empty tuple expression: " + expr);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidStructure("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(bool as_json, const Json& doc, const std::string& text) {
    if (as_json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << text;
}

struct EvalArgs {
    std::string structure, formula_file, inline_text;
    std::vector<std::string> binds;
    bool witness = false, json = false;
    std::size_t max_atoms = 16;
};

int cmd_eval(const EvalArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    std::string text = args.inline_text.empty() ? read_file(args.formula_file)
                                                : args.inline_text;
    FormulaPtr f = parse_formula(text);
    Valuation val;
    for (const std::string& bind : args.binds) {
        std::size_t eq = bind.find('=');
        if (eq == std::string::npos)
            throw InvalidStructure("--bind expects var=EVENT, got: " + bind);
        val.emplace(bind.substr(0, eq), resolve_event(doc, bind.substr(eq + 1)));
    }
    EvalOptions opts{args.max_atoms};
    Json out;
    std::ostringstream txt;
    if (args.witness) {
        EvalWitness w = evaluate_with_witnesses(doc.algebra, f, val, &doc.events, opts);
        out["value"] = rat_string(w.value);
        out["decimal"] = rat_double(w.value);
        txt << rat_string(w.value) << " (~" << rat_double(w.value) << ")\n";
        Json witnesses = Json::object();
        for (const auto& [var, ev] : w.witnesses) {
            witnesses[var] = event_json(doc.algebra, ev);
            txt << "witness " << var << " = " << event_labels(doc.algebra, ev) << "\n";
        }
        out["witnesses"] = witnesses;
    } else {
        Rational v = evaluate(doc.algebra, f, val, &doc.events, opts);
        out["value"] = rat_string(v);
        out["decimal"] = rat_double(v);
        txt << rat_string(v) << " (~" << rat_double(v) << ")\n";
    }
    emit(args.json, out, txt.str());
    return 0;
}

struct AtomsArgs {
    std::string structure, event = "1";
    bool json = false;
};

int cmd_atoms(const AtomsArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    const auto& alg = doc.algebra;
    Event a = resolve_event(doc, args.event);
    PhiInvariant inv = phi_invariant(alg);
    Json out;
    std::ostringstream txt;
    Json phi_row = Json::array();
    txt << "Phi = [";
    for (std::size_t i = 0; i < inv.sorted_weights.size(); ++i) {
        if (i) txt << ", ";
        txt << rat_string(inv.sorted_weights[i]);
        phi_row.push_back(rat_string(inv.sorted_weights[i]));
    }
    txt << "]\n";
    out["phi_invariant"] = phi_row;
    out["event"] = event_json(alg, a);
    txt << "event " << event_labels(alg, a) << ", mu = " << rat_string(alg.mu(a)) << "\n";
    out["mu"] = rat_string(alg.mu(a));
    txt << "n\tat_n\tphi_n\n";
    Json rows = Json::array();
    for (std::size_t n = 1; n <= alg.size(); ++n) {
        Rational at = at_n(alg, a, n);
        Rational phi = phi_n_closed(alg, a, n);
        txt << n << "\t" << rat_string(at) << "\t" << rat_string(phi) << "\n";
        rows.push_back({{"n", n}, {"at_n", rat_string(at)}, {"phi_n", rat_string(phi)}});
    }
    out["rows"] = rows;
    Rational chi = chi_closed(alg, a);
    Rational theta = theta_closed(alg, a);
    txt << "chi = " << rat_string(chi) << ", theta = " << rat_string(theta) << "\n";
    out["chi"] = rat_string(chi);
    out["theta"] = rat_string(theta);
    emit(args.json, out, txt.str());
    return 0;
}

struct IndepArgs {
    std::string structure, S, T, W;
    bool json = false;
};

int cmd_indep(const IndepArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    std::vector<Event> S = resolve_tuple(doc, args.S);
    std::vector<Event> T = resolve_tuple(doc, args.T);
    std::vector<Event> W = args.W.empty() ? std::vector<Event>{} : resolve_tuple(doc, args.W);
    IndependenceReport rep = characterization_report(doc.algebra, S, T, W);
    Json out{{"independent", rep.independent()},
             {"defect", rat_string(rep.defect)},
             {"conditions",
              {{"product_identity", rep.product_identity},
               {"cond_prob_drop", rep.cond_prob_drop},
               {"w_measurable", rep.w_measurable},
               {"l2_norms_equal", rep.l2_norms_equal}}},
             {"all_agree", rep.all_agree()}};
    std::ostringstream txt;
    txt << "independent: " << (rep.independent() ? "yes" : "no") << "\n"
        << "defect     : " << rat_string(rep.defect) << "\n"
        << "(i)   product identity : " << rep.product_identity << "\n"
        << "(ii)  P(A|<WT>)=P(A|<W>): " << rep.cond_prob_drop << "\n"
        << "(iii) <W>-measurable    : " << rep.w_measurable << "\n"
        << "(iv)  equal L2 norms    : " << rep.l2_norms_equal << "\n";
    emit(args.json, out, txt.str());
    return 0;
}

struct TypeArgs {
    std::string structure, tuple, base = "trivial", other;
    bool distance = false, equals = false, realize = false, json = false;
};

int cmd_type(const TypeArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    const auto& alg = doc.algebra;
    std::vector<Event> a = resolve_tuple(doc, args.tuple);
    Subalgebra C = resolve_subalgebra(doc, args.base);
    TypeDescriptor desc = type_of(alg, a, C);
    Json out;
    std::ostringstream txt;
    if (args.distance || args.equals) {
        std::vector<Event> b = resolve_tuple(doc, args.other);
        if (args.equals) {
            bool eq = desc == type_of(alg, b, C);
            out["equal"] = eq;
            txt << "types equal: " << (eq ? "yes" : "no") << "\n";
        } else {
            Rational d = type_distance_partitions(alg, a, b, C);
            out["distance"] = rat_string(d);
            txt << "type distance: " << rat_string(d) << "\n";
        }
    } else if (args.realize) {
        Realization real = realize_type(alg, desc);
        out["extension_atoms"] = real.extension.size();
        Json tuple = Json::array();
        txt << "realized in extension with " << real.extension.size() << " atoms\n";
        for (std::size_t i = 0; i < real.tuple.size(); ++i) {
            tuple.push_back(event_json(real.extension, real.tuple[i]));
            txt << "a" << (i + 1) << " = " << event_labels(real.extension, real.tuple[i])
                << "\n";
        }
        out["tuple"] = tuple;
    } else {
        const std::size_t n = desc.arity;
        Json cells = Json::array();
        txt << "type descriptor, arity " << n << ", base blocks " << C.block_count() << "\n";
        for (std::size_t s = 0; s < desc.g.size(); ++s) {
            std::string sign;
            for (std::size_t i = 0; i < n; ++i)
                sign += ((s >> (n - 1 - i)) & 1) ? "+" : "-";
            Json values = Json::array();
            txt << "g[" << sign << "] =";
            for (const Rational& v : desc.g[s].values) {
                values.push_back(rat_string(v));
                txt << " " << rat_string(v);
            }
            txt << "\n";
            cells.push_back({{"sign", sign}, {"values", values}});
        }
        out["arity"] = n;
        out["cells"] = cells;
    }
    emit(args.json, out, txt.str());
    return 0;
}

struct ForkingArgs {
    std::string structure, tuple, E = "trivial", C = "full", eps = "1/8";
    bool json = false;
};

int cmd_forking(const ForkingArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    const auto& alg = doc.algebra;
    std::vector<Event> a = resolve_tuple(doc, args.tuple);
    Subalgebra E = resolve_subalgebra(doc, args.E);
    Subalgebra C = resolve_subalgebra(doc, args.C);
    Rational eps = parse_rational(args.eps);
    NonforkingExtension nf = nonforking_extension(alg, a, E, C);
    std::vector<Event> a_img = nf.map_tuple(alg, a);
    Subalgebra C_img = nf.map_subalgebra(alg, C);
    Rational d = type_distance_partitions(nf.extension, a_img, nf.tuple, C_img);
    bool forks = d > eps;
    Json out{{"distance_to_nonforking", rat_string(d)},
             {"eps", rat_string(eps)},
             {"eps_forks", forks},
             {"extension_atoms", nf.extension.size()}};
    std::ostringstream txt;
    txt << "non-forking extension realized in " << nf.extension.size() << " atoms\n"
        << "d(tp(a/C), nonforking ext of tp(a/E)) = " << rat_string(d) << "\n"
        << "eps = " << rat_string(eps) << ": " << (forks ? "eps-forks" : "does not eps-fork")
        << "\n";
    emit(args.json, out, txt.str());
    return 0;
}

struct RvArgs {
    std::string structure, E, F, of, base = "trivial";
    std::size_t depth = 3;
    bool json = false;
};

int cmd_rv(const RvArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    const auto& alg = doc.algebra;
    Json out;
    std::ostringstream txt;
    if (!args.E.empty() && !args.F.empty()) {
        RVPartition E = RVPartition::of(alg, resolve_tuple(doc, args.E));
        RVPartition F = RVPartition::of(alg, resolve_tuple(doc, args.F));
        Rational rho = rho_n(alg, E, F);
        Rational dp = dP_rv(alg, E, F);
        out["rho_n"] = rat_string(rho);
        out["d_P"] = rat_string(dp);
        txt << "rho_n = " << rat_string(rho) << "\n"
            << "d_P   = " << rat_string(dp) << "\n";
    } else if (!args.of.empty()) {
        Subalgebra C = resolve_subalgebra(doc, args.base);
        StepFunction f = cond_prob(alg, resolve_event(doc, args.of), C);
        RVPartition approx = dyadic_approx(alg, f, args.depth);
        out["depth"] = args.depth;
        Json parts = Json::array();
        txt << "dyadic approximation, depth " << args.depth << " (" << approx.n
            << " parts)\n";
        for (std::size_t j = 0; j < approx.n; ++j) {
            parts.push_back(event_json(alg, approx.parts[j]));
            if (!approx.parts[j].empty())
                txt << "E" << (j + 1) << " = " << event_labels(alg, approx.parts[j]) << "\n";
        }
        out["parts"] = parts;
        Rational err = l1_distance(alg, step_function_of(alg, approx), f);
        out["l1_error"] = rat_string(err);
        txt << "L1 error = " << rat_string(err) << "\n";
    } else {
        throw InvalidStructure("rv needs either --E and --F, or --of");
    }
    emit(args.json, out, txt.str());
    return 0;
}

struct EntropyArgs {
    std::string structure, A, C = "trivial", D, tuple, eps = "1/8";
    bool json = false;
};

int cmd_entropy(const EntropyArgs& args) {
    StructureDocument doc = load_structure(args.structure);
    const auto& alg = doc.algebra;
    Json out;
    std::ostringstream txt;
    if (!args.tuple.empty()) {
        if (args.D.empty()) throw InvalidStructure("forking gap needs --D");
        std::vector<Event> a = resolve_tuple(doc, args.tuple);
        Subalgebra E = resolve_subalgebra(doc, args.C);
        Subalgebra D = resolve_subalgebra(doc, args.D);
        EntropyForkingReport rep =
            entropy_forking_gap(alg, a, E, D, parse_rational(args.eps));
        out = Json{{"eps_forks", rep.forks},
                   {"H_coarse", rep.h_coarse},
                   {"H_fine", rep.h_fine},
                   {"threshold", rat_string(rep.threshold)},
                   {"inequality_ok", rep.inequality_ok}};
        if (!rep.forks) {
            txt << "no eps-fork at eps = " << args.eps << "\n";
        } else {
            txt << "eps-forks; H(a#/E) = " << rep.h_coarse << ", H(a#/D) = " << rep.h_fine
                << ", gap " << (rep.h_coarse - rep.h_fine) << " > eps^2/2 = "
                << rat_double(rep.threshold) << ": " << (rep.inequality_ok ? "ok" : "VIOLATED")
                << "\n";
        }
        emit(args.json, out, txt.str());
        return rep.inequality_ok ? 0 : 1;
    }
    Subalgebra A = resolve_subalgebra(doc, args.A);
    Subalgebra C = resolve_subalgebra(doc, args.C);
    double h = cond_entropy(alg, A, C);
    out["H"] = h;
    txt << "H(A/C) = " << h << "\n";
    if (!args.D.empty()) {
        Subalgebra D = resolve_subalgebra(doc, args.D);
        EntropyDropReport drop = entropy_drop(alg, A, C, D);
        out["gap"] = drop.gap;
        out["rhs_bound"] = rat_string(drop.rhs_bound);
        txt << "H(A/E) - H(A/D) = " << drop.gap
            << " >= " << rat_string(drop.rhs_bound) << " (exact bound)\n";
    }
    emit(args.json, out, txt.str());
    return 0;
}

struct AxiomsArgs {
    std::string structure;
    bool json = false;
};

int cmd_axioms(const AxiomsArgs& args) {
    StructureDocument doc = load_structure(args.structure, /*validate=*/false);
    AxiomReport rep = verify_axioms(doc.algebra);
    Json out;
    Json checks = Json::array();
    std::ostringstream txt;
    for (const AxiomCheck& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
        txt << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
        if (!c.witness.empty()) txt << " — " << c.witness;
        txt << "\n";
    }
    out["checks"] = checks;
    out["all_pass"] = rep.all_pass();
    emit(args.json, out, txt.str());
    return rep.all_pass() ? 0 : 1;
}

struct GenArgs {
    std::size_t uniform = 0, random = 0;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& args) {
    if ((args.uniform == 0) == (args.random == 0))
        throw InvalidStructure("gen needs exactly one of --uniform N or --random N");
    FiniteProbabilityAlgebra alg = args.uniform ? uniform_algebra(args.uniform)
                                                : random_algebra(args.seed, args.random);
    std::cout << structure_to_json(alg) << "\n";
    return 0;
}

struct SelfTestArgs {
    std::uint64_t seed = 20240801;
    int max_atoms = 10;
};

int cmd_selftest(const SelfTestArgs& args) {
    selftest::SelfTestConfig cfg;
    cfg.seed = args.seed;
    cfg.max_atoms = args.max_atoms;
    auto results = selftest::run_all(cfg, &std::cout);
    for (const auto& res : results)
        if (!res.pass) return 1;
    std::cout << "all " << results.size() << " property suites passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact model-theoretic computations on finite probability algebras"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate a formula on a structure");
    eval->add_option("--structure", eval_args.structure, "structure JSON file")->required();
    eval->add_option("--formula", eval_args.formula_file, "formula file");
    eval->add_option("--inline", eval_args.inline_text, "formula text");
    eval->add_option("--bind", eval_args.binds, "free-variable binding var=EVENT");
    eval->add_flag("--witness", eval_args.witness, "report quantifier witnesses");
    eval->add_flag("--json", eval_args.json, "machine-readable output");
    eval->add_option("--max-atoms", eval_args.max_atoms, "quantifier enumeration cap");

    AtomsArgs atoms_args;
    auto* atoms = app.add_subcommand("atoms", "atom-structure invariants");
    atoms->add_option("--structure", atoms_args.structure)->required();
    atoms->add_option("--event", atoms_args.event, "event expression (default 1)");
    atoms->add_flag("--json", atoms_args.json);

    IndepArgs indep_args;
    auto* indep = app.add_subcommand("indep", "conditional independence report");
    indep->add_option("--structure", indep_args.structure)->required();
    indep->add_option("--S", indep_args.S, "comma list of events")->required();
    indep->add_option("--T", indep_args.T, "comma list of events")->required();
    indep->add_option("--W", indep_args.W, "comma list of parameter events");
    indep->add_flag("--json", indep_args.json);

    TypeArgs type_args;
    auto* type = app.add_subcommand("type", "type descriptors over a base subalgebra");
    type->add_option("--structure", type_args.structure)->required();
    type->add_option("--tuple", type_args.tuple, "comma list of events")->required();
    type->add_option("--base", type_args.base, "base subalgebra (default trivial)");
    type->add_option("--other", type_args.other, "second tuple for --distance/--equals");
    type->add_flag("--distance", type_args.distance, "partition type distance to --other");
    type->add_flag("--equals", type_args.equals, "type equality with --other");
    type->add_flag("--realize", type_args.realize, "realize the descriptor");
    type->add_flag("--json", type_args.json);

    ForkingArgs forking_args;
    auto* forking = app.add_subcommand("forking", "non-forking extension and eps-forking");
    forking->add_option("--structure", forking_args.structure)->required();
    forking->add_option("--tuple", forking_args.tuple, "partition tuple")->required();
    forking->add_option("--E", forking_args.E, "small subalgebra (default trivial)");
    forking->add_option("--C", forking_args.C, "large subalgebra (default full)");
    forking->add_option("--eps", forking_args.eps, "threshold (default 1/8)");
    forking->add_flag("--json", forking_args.json);

    RvArgs rv_args;
    auto* rv = app.add_subcommand("rv", "partition random variables");
    rv->add_option("--structure", rv_args.structure)->required();
    rv->add_option("--E", rv_args.E, "first partition");
    rv->add_option("--F", rv_args.F, "second partition");
    rv->add_option("--of", rv_args.of, "event for dyadic approximation of P(event|base)");
    rv->add_option("--base", rv_args.base, "base subalgebra (default trivial)");
    rv->add_option("--depth", rv_args.depth, "dyadic depth (default 3)");
    rv->add_flag("--json", rv_args.json);

    EntropyArgs entropy_args;
    auto* entropy = app.add_subcommand("entropy", "conditional entropy reports");
    entropy->add_option("--structure", entropy_args.structure)->required();
    entropy->add_option("--A", entropy_args.A, "subalgebra whose entropy is measured");
    entropy->add_option("--C", entropy_args.C, "conditioning subalgebra (default trivial)");
    entropy->add_option("--D", entropy_args.D, "finer subalgebra for the drop report");
    entropy->add_option("--tuple", entropy_args.tuple, "partition tuple for the forking gap");
    entropy->add_option("--eps", entropy_args.eps, "eps for the forking gap (default 1/8)");
    entropy->add_flag("--json", entropy_args.json);

    AxiomsArgs axioms_args;
    auto* axioms = app.add_subcommand("axioms", "verify the axioms on a structure file");
    axioms->add_option("--structure", axioms_args.structure)->required();
    axioms->add_flag("--json", axioms_args.json);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a test structure");
    gen->add_option("--uniform", gen_args.uniform, "uniform algebra with N atoms");
    gen->add_option("--random", gen_args.random, "seeded random algebra with N atoms");
    gen->add_option("--seed", gen_args.seed, "seed for --random");

    SelfTestArgs selftest_args;
    auto* st = app.add_subcommand("selftest", "run every property suite");
    st->add_option("--seed", selftest_args.seed, "random seed");
    st->add_option("--max-atoms", selftest_args.max_atoms, "atom cap for random algebras");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_args);
        if (atoms->parsed()) return cmd_atoms(atoms_args);
        if (indep->parsed()) return cmd_indep(indep_args);
        if (type->parsed()) return cmd_type(type_args);
        if (forking->parsed()) return cmd_forking(forking_args);
        if (rv->parsed()) return cmd_rv(rv_args);
        if (entropy->parsed()) return cmd_entropy(entropy_args);
        if (axioms->parsed()) return cmd_axioms(axioms_args);
        if (gen->parsed()) return cmd_gen(gen_args);
        if (st->parsed()) return cmd_selftest(selftest_args);
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownSymbol& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidStructure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
