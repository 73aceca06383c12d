#include "jetlift/crux.hpp"
#include "jetlift/errors.hpp"
#include "jetlift/parser.hpp"
#include "jetlift/serialize.hpp"
#include "jetlift/shlie.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <climits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace jetlift;

namespace {

using Json = nlohmann::ordered_json;

// Inputs are loaded first, then the delegated operation runs. A domain
// error while loading is a usage error (exit 2); one thrown by the
// operation itself is a mathematical negative (exit 1).
enum class Phase { Input, Compute };
Phase g_phase = Phase::Input;
bool g_stdin_used = false;

struct Opts {
    int dim = 1;
    int arity = 1;
    int slot = 0;
    int axis = 1;
    int order_bound = -1;
    int kmax = 3;
    int nmax = 3;
    int trials = 5;
    int jet_order = -1;
    std::string seed_text;
    std::string format = "text";
    std::string arities_csv;
    std::vector<std::string> inputs;
};

std::string slurp(const std::string& arg) {
    if (arg == "-") {
        check_arg(!g_stdin_used, "stdin may be read only once");
        g_stdin_used = true;
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        check_arg(in.good(), "cannot open file: " + arg);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
    return arg;
}

bool looks_json(const std::string& s) {
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return c == '{';
    }
    return false;
}

void reject_foreign_doc(const std::string& s, const char* want) {
    if (looks_json(s))
        throw JetliftError(std::string("expected a \"") + want +
                           "\" document, got \"" + json_doc_type(s) + "\"");
}

LocalFunction load_lf(const std::string& arg, int dim) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "lf") return lf_from_json(s);
    reject_foreign_doc(s, "lf");
    return parse_lf(s, dim);
}

Ldo load_ldo(const std::string& arg, int dim, int arity) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "ldo") return ldo_from_json(s);
    reject_foreign_doc(s, "ldo");
    return parse_ldo(s, dim, arity);
}

HorizontalForm load_hform(const std::string& arg, int dim) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "hform") return hform_from_json(s);
    reject_foreign_doc(s, "hform");
    return parse_hform(s, dim);
}

OperatorForm load_oform(const std::string& arg, int dim, int arity) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "oform") return oform_from_json(s);
    reject_foreign_doc(s, "oform");
    return parse_oform(s, dim, arity);
}

DEndElement load_dend(const std::string& arg) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "dend") return dend_from_json(s);
    throw JetliftError("this command needs a \"dend\" JSON document");
}

ShLieTower load_tower(const std::string& arg) {
    std::string s = slurp(arg);
    if (json_doc_type(s) == "tower") return tower_from_json(s);
    throw JetliftError("this command needs a \"tower\" JSON document");
}

std::uint64_t resolve_seed(const Opts& o) {
    std::string text = o.seed_text;
    if (text.empty()) {
        const char* env = std::getenv("JETLIFT_SEED");
        if (env != nullptr) text = env;
    }
    if (text.empty()) return 12345;
    try {
        size_t used = 0;
        std::uint64_t v = std::stoull(text, &used);
        check_arg(used == text.size(), "");
        return v;
    } catch (const std::exception&) {
        throw JetliftError("seed must be a non-negative integer: " + text);
    }
}

void expect_inputs(const Opts& o, size_t n, const char* what) {
    if (o.inputs.size() != n)
        throw JetliftError(std::string("expected ") + what + ", got " +
                           std::to_string(o.inputs.size()) + " inputs");
}

int emit(const LocalFunction& f, const Opts& o) {
    if (o.format == "json") std::cout << to_json_text(f);
    else std::cout << f.str() << "\n";
    return 0;
}
int emit(const Ldo& a, const Opts& o) {
    if (o.format == "json") std::cout << to_json_text(a);
    else std::cout << a.str() << "\n";
    return 0;
}
int emit(const HorizontalForm& w, const Opts& o) {
    if (o.format == "json") std::cout << to_json_text(w);
    else std::cout << w.str() << "\n";
    return 0;
}
int emit(const OperatorForm& f, const Opts& o) {
    if (o.format == "json") std::cout << to_json_text(f);
    else std::cout << f.str() << "\n";
    return 0;
}
int emit(const DEndElement& f, const Opts& o) {
    if (o.format == "json") std::cout << to_json_text(f);
    else std::cout << f.str() << "\n";
    return 0;
}

std::vector<int> parse_arities(const std::string& csv, size_t n) {
    std::vector<int> ar(n, 1);
    if (csv.empty()) return ar;
    std::stringstream ss(csv);
    std::string item;
    size_t k = 0;
    while (std::getline(ss, item, ',')) {
        check_arg(k < n, "more arities than inner operators");
        try {
            ar[k] = std::stoi(item);
        } catch (const std::exception&) {
            throw JetliftError("bad arity list entry: " + item);
        }
        check_arg(ar[k] >= 1, "arities must be positive");
        ++k;
    }
    check_arg(k == n, "arity list must name every inner operator");
    return ar;
}

int run_apply(const Opts& o) {
    check_arg(o.inputs.size() >= 1, "expected an operator and its arguments");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    check_arg(static_cast<int>(o.inputs.size()) - 1 == a.arity(),
              "operator of arity " + std::to_string(a.arity()) + " needs " +
                  std::to_string(a.arity()) + " arguments");
    std::vector<LocalFunction> args;
    for (size_t k = 1; k < o.inputs.size(); ++k)
        args.push_back(load_lf(o.inputs[k], a.dim()));
    g_phase = Phase::Compute;
    return emit(a.apply(args), o);
}

int run_compose(const Opts& o) {
    check_arg(o.inputs.size() >= 2, "expected an outer and inner operators");
    Ldo outer = load_ldo(o.inputs[0], o.dim, o.arity);
    size_t inner_count = o.inputs.size() - 1;
    if (o.slot > 0) {
        check_arg(inner_count == 1, "slot composition takes one inner operator");
        std::vector<int> ar = parse_arities(o.arities_csv, 1);
        Ldo inner = load_ldo(o.inputs[1], outer.dim(), ar[0]);
        g_phase = Phase::Compute;
        return emit(outer.compose_slot(o.slot, inner), o);
    }
    check_arg(static_cast<int>(inner_count) == outer.arity(),
              "outer arity " + std::to_string(outer.arity()) + " needs " +
                  std::to_string(outer.arity()) + " inner operators");
    std::vector<int> ar = parse_arities(o.arities_csv, inner_count);
    std::vector<Ldo> inner;
    for (size_t k = 0; k < inner_count; ++k)
        inner.push_back(load_ldo(o.inputs[1 + k], outer.dim(), ar[k]));
    g_phase = Phase::Compute;
    return emit(Ldo::compose(outer, inner), o);
}

int run_char(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    return emit(a.characteristic(), o);
}

int run_adjoint(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    return emit(a.adjoint(), o);
}

int run_theta(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    int slot = o.slot > 0 ? o.slot : 1;
    g_phase = Phase::Compute;
    return emit(a.theta(o.axis, slot), o);
}

int run_crux_check(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    CruxReport rep = check_crux(a);
    if (o.format == "json") {
        Json j;
        j["version"] = 1;
        j["type"] = "crux";
        j["all_ok"] = rep.all_ok;
        j["sum_rule"] = rep.crux_ok;
        j["slot_rule"] = rep.crux2_ok;
        std::cout << j.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < rep.crux_ok.size(); ++i)
            std::cout << "sum rule, axis " << i + 1 << ": "
                      << (rep.crux_ok[i] ? "ok" : "FAIL") << "\n";
        for (size_t i = 0; i < rep.crux2_ok.size(); ++i)
            for (size_t j = 0; j < rep.crux2_ok[i].size(); ++j)
                std::cout << "slot rule, axis " << i + 1 << " slot " << j + 2
                          << ": " << (rep.crux2_ok[i][j] ? "ok" : "FAIL")
                          << "\n";
        std::cout << (rep.all_ok ? "all character relations hold"
                                 : "character relations violated")
                  << "\n";
    }
    return rep.all_ok ? 0 : 1;
}

int run_dh(const Opts& o) {
    expect_inputs(o, 1, "one horizontal form");
    HorizontalForm w = load_hform(o.inputs[0], o.dim);
    g_phase = Phase::Compute;
    return emit(dH(w), o);
}

int run_euler(const Opts& o) {
    expect_inputs(o, 1, "one top-degree form");
    HorizontalForm w = load_hform(o.inputs[0], o.dim);
    g_phase = Phase::Compute;
    return emit(euler(w), o);
}

int run_invert_dh(const Opts& o) {
    expect_inputs(o, 1, "one exact degree-1 form");
    HorizontalForm w = load_hform(o.inputs[0], o.dim);
    g_phase = Phase::Compute;
    return emit(invert_dH_1d(w), o);
}

int run_dop(const Opts& o) {
    expect_inputs(o, 1, "one operator form");
    OperatorForm f = load_oform(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    return emit(d_op(f), o);
}

int run_reduce_top(const Opts& o) {
    expect_inputs(o, 1, "one top-degree operator form");
    OperatorForm f = load_oform(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    TopReduction r = reduce_top(f);
    if (o.format == "json") {
        Json j;
        j["version"] = 1;
        j["type"] = "reduction";
        j["tilde"] = Json::parse(to_json_text(r.tilde));
        j["chi"] = Json::parse(to_json_text(r.chi));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "tilde: " << r.tilde.str() << "\n";
        std::cout << "chi: " << r.chi.str() << "\n";
    }
    return 0;
}

int run_solve_d(const Opts& o) {
    expect_inputs(o, 1, "one closed operator form");
    OperatorForm f = load_oform(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    return emit(solve_d(f), o);
}

int run_a0(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    std::vector<std::vector<Ldo>> obs = a0(a);
    if (o.format == "json") {
        Json entries = Json::array();
        for (size_t i = 0; i < obs.size(); ++i)
            for (size_t j = 0; j < obs[i].size(); ++j) {
                Json e;
                e["axis"] = i + 1;
                e["slot"] = j + 1;
                e["chi"] = obs[i][j].str();
                entries.push_back(std::move(e));
            }
        Json doc;
        doc["version"] = 1;
        doc["type"] = "a0";
        doc["entries"] = std::move(entries);
        std::cout << doc.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < obs.size(); ++i)
            for (size_t j = 0; j < obs[i].size(); ++j)
                std::cout << "chi(A o D[" << j + 1 << "," << i + 1
                          << "]) = " << obs[i][j].str() << "\n";
    }
    return 0;
}

int run_liftable(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    Ldo chi = a.characteristic();
    std::vector<std::vector<Ldo>> obs = a0(a);
    bool ok = is_liftable(a, o.order_bound);
    if (o.format == "json") {
        Json entries = Json::array();
        for (size_t i = 0; i < obs.size(); ++i)
            for (size_t j = 0; j < obs[i].size(); ++j) {
                Json e;
                e["axis"] = i + 1;
                e["slot"] = j + 1;
                e["chi"] = obs[i][j].str();
                entries.push_back(std::move(e));
            }
        Json doc;
        doc["version"] = 1;
        doc["type"] = "liftable";
        doc["window"] = o.order_bound;
        doc["chi"] = chi.str();
        doc["obstructions"] = std::move(entries);
        doc["liftable"] = ok;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "chi = " << chi.str() << "\n";
        for (size_t i = 0; i < obs.size(); ++i)
            for (size_t j = 0; j < obs[i].size(); ++j)
                if (!obs[i][j].is_zero())
                    std::cout << "chi(A o D[" << j + 1 << "," << i + 1
                              << "]) = " << obs[i][j].str() << "\n";
        if (o.order_bound >= 0)
            std::cout << "liftable on jet window " << o.order_bound << ": "
                      << (ok ? "yes" : "no") << "\n";
        else
            std::cout << "liftable: " << (ok ? "yes" : "no") << "\n";
    }
    return ok ? 0 : 1;
}

int run_lift(const Opts& o) {
    expect_inputs(o, 1, "one operator");
    Ldo a = load_ldo(o.inputs[0], o.dim, o.arity);
    g_phase = Phase::Compute;
    return emit(lift(a, o.order_bound), o);
}

int run_delta(const Opts& o) {
    expect_inputs(o, 1, "one dend document");
    DEndElement f = load_dend(o.inputs[0]);
    g_phase = Phase::Compute;
    return emit(dend_delta(f), o);
}

int run_solve_delta(const Opts& o) {
    expect_inputs(o, 1, "one dend document");
    DEndElement g = load_dend(o.inputs[0]);
    g_phase = Phase::Compute;
    DEndElement h =
        g.degree() == 0 ? bound_cycle(g, o.order_bound) : solve_delta(g);
    return emit(h, o);
}

int run_poisson_check(const Opts& o) {
    expect_inputs(o, 1, "one bilinear operator form");
    OperatorForm lt2 = load_oform(o.inputs[0], o.dim, 2);
    g_phase = Phase::Compute;
    PoissonCheck pc = check_poisson_conditions(lt2, o.order_bound);
    if (o.format == "json") {
        Json ins = Json::array();
        for (size_t i = 0; i < pc.chi_insert.size(); ++i)
            for (size_t j = 0; j < pc.chi_insert[i].size(); ++j) {
                Json e;
                e["axis"] = i + 1;
                e["slot"] = j + 1;
                e["chi"] = pc.chi_insert[i][j].str();
                ins.push_back(std::move(e));
            }
        Json doc;
        doc["version"] = 1;
        doc["type"] = "poisson";
        doc["window"] = o.order_bound;
        doc["liftable"] = pc.liftable;
        doc["antisymmetric"] = pc.antisymmetric;
        doc["jacobi"] = pc.jacobi;
        doc["chi_insert"] = std::move(ins);
        doc["chi_sym"] = pc.chi_sym.str();
        doc["chi_jacobi"] = pc.chi_jacobi.str();
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << pc.str() << "\n";
    }
    return pc.all() ? 0 : 1;
}

int run_skew(const Opts& o) {
    expect_inputs(o, 1, "one bilinear operator form");
    OperatorForm lt2 = load_oform(o.inputs[0], o.dim, 2);
    g_phase = Phase::Compute;
    return emit(skew_symmetrize(lt2, o.order_bound), o);
}

int run_jacobiator(const Opts& o) {
    expect_inputs(o, 1, "one dend document");
    DEndElement l2 = load_dend(o.inputs[0]);
    g_phase = Phase::Compute;
    return emit(jacobiator(l2, o.order_bound), o);
}

int default_jet(const ShLieTower& t, int flag) {
    if (flag >= 0) return flag;
    int c = t.certified_order();
    if (c == INT_MAX) return 3;
    return std::max(0, std::min(3, c));
}

Json verify_json(const ShLieVerifyReport& rep, int jet) {
    Json entries = Json::array();
    for (const ShLieVerifyEntry& e : rep.entries) {
        Json je;
        je["arity"] = e.arity;
        je["checked"] = e.checked;
        je["failures"] = e.failures;
        entries.push_back(std::move(je));
    }
    Json doc;
    doc["version"] = 1;
    doc["type"] = "verify";
    doc["nmax"] = rep.nmax;
    doc["trials"] = rep.trials;
    doc["seed"] = rep.seed;
    doc["jet_order"] = jet;
    doc["entries"] = std::move(entries);
    doc["ok"] = rep.ok();
    return doc;
}

int run_shlie_build(const Opts& o) {
    expect_inputs(o, 1, "one bilinear operator form");
    OperatorForm lt2 = load_oform(o.inputs[0], o.dim, 2);
    std::uint64_t seed = resolve_seed(o);
    g_phase = Phase::Compute;
    ShLieTower t = build_tower(lt2, o.kmax, o.order_bound);
    int jet = default_jet(t, o.jet_order);
    LfGenParams p;
    p.max_jet_order = jet;
    ShLieVerifyReport rep = verify_shlie(t, o.nmax, o.trials, seed, p);
    int c = t.certified_order();
    std::string cert = c == INT_MAX ? "all jet orders"
                                    : "jet order " + std::to_string(c);
    if (o.format == "json") {
        std::cout << to_json_text(t);
        std::cerr << "certified on " << cert << "\n" << rep.str() << "\n";
    } else {
        for (const auto& [k, el] : t.brackets)
            std::cout << "l_" << k << ": "
                      << (el.is_zero() ? "zero"
                                       : std::to_string(el.families().size()) +
                                             " families")
                      << "\n";
        std::cout << "window: " << t.window << "\n";
        std::cout << "certified on " << cert << "\n";
        std::cout << "verify at jet order " << jet << ":\n"
                  << rep.str() << "\n";
    }
    return rep.ok() ? 0 : 1;
}

int run_shlie_verify(const Opts& o) {
    expect_inputs(o, 1, "one tower document");
    ShLieTower t = load_tower(o.inputs[0]);
    std::uint64_t seed = resolve_seed(o);
    g_phase = Phase::Compute;
    int jet = default_jet(t, o.jet_order);
    LfGenParams p;
    p.max_jet_order = jet;
    ShLieVerifyReport rep = verify_shlie(t, o.nmax, o.trials, seed, p);
    if (o.format == "json")
        std::cout << verify_json(rep, jet).dump(2) << "\n";
    else
        std::cout << "verify at jet order " << jet << ":\n"
                  << rep.str() << "\n";
    return rep.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact calculus for local differential operators on jets"};
    app.require_subcommand(1);
    Opts o;
    int rc = 0;

    auto add_shape = [&](CLI::App* c, bool with_arity = true) {
        c->add_option("--dim", o.dim, "base dimension for expression inputs");
        if (with_arity)
            c->add_option("--arity", o.arity,
                          "operator arity for expression inputs");
        c->add_option("--format", o.format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };
    auto add_inputs = [&](CLI::App* c, const char* name, int n) {
        c->add_option(name, o.inputs,
                      "file, JSON document, expression text, or - for stdin")
            ->expected(n);
    };
    auto add_window = [&](CLI::App* c) {
        c->add_option("--order-bound", o.order_bound,
                      "jet-order window; -1 demands exact vanishing");
    };

    CLI::App* c;

    c = app.add_subcommand("apply", "Apply an operator to one function per slot");
    add_shape(c);
    add_inputs(c, "inputs", -1);
    c->callback([&] { rc = run_apply(o); });

    c = app.add_subcommand("compose",
                           "Operadic composition of an outer operator with inner ones");
    add_shape(c);
    c->add_option("--slot", o.slot, "compose into this slot only (identity elsewhere)");
    c->add_option("--arities", o.arities_csv,
                  "comma-separated arities of the inner operators (default all 1)");
    add_inputs(c, "inputs", -1);
    c->callback([&] { rc = run_compose(o); });

    c = app.add_subcommand("char", "Characteristic of an operator");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_char(o); });

    c = app.add_subcommand("adjoint", "Formal adjoint of a linear operator");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_adjoint(o); });

    c = app.add_subcommand("theta", "Jet-lowering derivation on one slot");
    add_shape(c);
    c->add_option("--axis", o.axis, "axis of the lowered index entry");
    c->add_option("--slot", o.slot, "slot the derivation acts on (default 1)");
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_theta(o); });

    c = app.add_subcommand("crux-check",
                           "Check the character relations of a multilinear operator");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_crux_check(o); });

    c = app.add_subcommand("dh", "Horizontal differential of a form");
    add_shape(c, false);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_dh(o); });

    c = app.add_subcommand("euler", "Variational derivative of a top-degree form");
    add_shape(c, false);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_euler(o); });

    c = app.add_subcommand("invert-dh",
                           "Write an exact 1-form on one base variable as dh of a function");
    add_shape(c, false);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_invert_dh(o); });

    c = app.add_subcommand("dop", "Differential of an operator-valued form");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_dop(o); });

    c = app.add_subcommand("reduce-top",
                           "Split a top-degree operator form as d(tilde) + chi");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_reduce_top(o); });

    c = app.add_subcommand("solve-d",
                           "Solve d(X) = Y for a closed operator form below top degree");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_solve_d(o); });

    c = app.add_subcommand("a0", "Lifting obstructions chi(A o D) per axis and slot");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_a0(o); });

    c = app.add_subcommand("liftable",
                           "Decide liftability; prints the characteristic and obstructions");
    add_shape(c);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_liftable(o); });

    c = app.add_subcommand("lift", "Lift an operator to a chain map on all degrees");
    add_shape(c);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_lift(o); });

    c = app.add_subcommand("delta", "Differential of a graded endomorphism element");
    add_shape(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_delta(o); });

    c = app.add_subcommand("solve-delta",
                           "Bound a delta-cycle: solve delta(h) = g");
    add_shape(c);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_solve_delta(o); });

    c = app.add_subcommand("poisson-check",
                           "Check the three bracket conditions of a bilinear top form");
    add_shape(c, false);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_poisson_check(o); });

    c = app.add_subcommand("skew",
                           "Skew-symmetrize a bilinear bracket by exact terms");
    add_shape(c, false);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_skew(o); });

    c = app.add_subcommand("jacobiator",
                           "Three-term unshuffle alternation of l2 composed with itself");
    add_shape(c);
    add_window(c);
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_jacobiator(o); });

    c = app.add_subcommand("shlie-build",
                           "Build the bracket tower from a bilinear bracket and verify it");
    add_shape(c, false);
    add_window(c);
    c->add_option("--kmax", o.kmax, "highest bracket arity to build");
    c->add_option("--nmax", o.nmax, "highest structure identity to verify");
    c->add_option("--trials", o.trials, "random tuples per identity");
    c->add_option("--seed", o.seed_text, "RNG seed (default env JETLIFT_SEED)");
    c->add_option("--jet-order", o.jet_order,
                  "jet order of the random tuples (default: certified order)");
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_shlie_build(o); });

    c = app.add_subcommand("shlie-verify",
                           "Verify the structure identities of a stored tower");
    add_shape(c, false);
    c->add_option("--nmax", o.nmax, "highest structure identity to verify");
    c->add_option("--trials", o.trials, "random tuples per identity");
    c->add_option("--seed", o.seed_text, "RNG seed (default env JETLIFT_SEED)");
    c->add_option("--jet-order", o.jet_order,
                  "jet order of the random tuples (default: certified order)");
    add_inputs(c, "input", 1);
    c->callback([&] { rc = run_shlie_verify(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 2;
    } catch (const JetliftError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return g_phase == Phase::Input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
