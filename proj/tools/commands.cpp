#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "unfold/diagram.hpp"
#include "unfold/dsp.hpp"
#include "unfold/io.hpp"
#include "unfold/kns.hpp"
#include "unfold/strata.hpp"

namespace unfold::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<QQi> parse_values(const std::string& s) {
    std::vector<QQi> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(QQi::parse(item));
        } catch (const std::exception& e) {
            throw DataError("bad value \"" + item + "\": " + e.what());
        }
    }
    return out;
}

std::vector<std::vector<QQi>> parse_point_values(const std::string& s) {
    std::vector<std::vector<QQi>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(parse_values(item));
    return out;
}

CanonicalForm load_form(const std::string& path) {
    auto j = read_json_file(path);
    return form_from_json(j.contains("form") ? j["form"] : j);
}

unsigned default_seed(unsigned fallback) {
    if (const char* s = std::getenv("UNFOLD_SEED")) {
        try {
            return static_cast<unsigned>(std::stoul(s));
        } catch (const std::exception&) {
            throw UsageError("UNFOLD_SEED must be an unsigned integer");
        }
    }
    return fallback;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << text;
}

SpectralCollection load_spec(const std::string& spec, int n) {
    try {
        return parse_kns(spec, n);
    } catch (const KnsError& e) {
        throw DataError(e.what());
    }
}

int cmd_invariants(const std::string& spec, int n, bool json, std::ostream& out) {
    auto c = load_spec(spec, n);
    if (json) {
        Json pts = Json::array();
        for (auto& t : c)
            pts.push_back({{"type", to_string(t)}, {"kns", to_kns(t)}, {"irr", irregularity(t)}, {"delta", delta(t)}});
        out << Json{{"points", pts}, {"rig", rigidity(c)}, {"moduli_dim", moduli_dim(c)}}.dump(2) << "\n";
        return kOk;
    }
    for (size_t i = 0; i < c.size(); ++i)
        out << "point " << i + 1 << ": " << to_string(c[i]) << "  Irr=" << irregularity(c[i])
            << " delta=" << delta(c[i]) << "\n";
    out << "rig = " << rigidity(c) << "\n";
    out << "moduli dim = " << moduli_dim(c) << "\n";
    return kOk;
}

int cmd_diagram(const std::string& spec, int n, bool reduced, bool dot, long long cap, const std::string& path,
                std::ostream& out) {
    auto c = load_spec(spec, n);
    try {
        if (reduced) {
            auto d = reduced_diagram(c, cap);
            emit(dot ? to_dot(d) : to_json(d).dump(2) + "\n", path, out);
        } else {
            auto d = unfolding_diagram(c, cap);
            emit(dot ? to_dot(d) : to_json(d).dump(2) + "\n", path, out);
        }
    } catch (const DiagramTooLarge& e) {
        throw DataError(e.what());
    }
    return kOk;
}

int cmd_unfold(const std::string& path, const std::string& stratum, bool sample, const std::string& at,
               unsigned seed, std::ostream& out) {
    auto f = load_form(path);
    std::vector<QQi> c;
    if (!at.empty()) {
        if (sample) throw UsageError("--sample and --at are exclusive");
        c = parse_values(at);
        if (static_cast<int>(c.size()) != f.k() + 1)
            throw DataError("--at needs " + std::to_string(f.k() + 1) + " values");
        if (!stratum.empty()) {
            auto p = SetPartition::parse(stratum);
            p.normalize(f.k() + 1);
            if (!(p == stratum_of(c))) throw DataError("the point does not lie on the given stratum");
        }
    } else {
        if (stratum.empty()) throw UsageError("unfold needs --stratum or --at");
        SetPartition p;
        try {
            p = SetPartition::parse(stratum);
            p.normalize(f.k() + 1);
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what());
        }
        try {
            c = sample_stratum(f, p, seed);
        } catch (const SamplingExhausted& e) {
            throw DataError(e.what());
        }
    }
    bool bh = in_BH(f, c);
    auto dec = partial_fractions(f, c);
    auto ver = verify_spectral_decomposition(f, c);
    auto [d0, d1] = delta_sum_check(f, c);
    auto orig = spectral_type_of(f);
    int rig0 = rigidity({orig}), rig1 = rigidity(ver.collection);
    Json v{{"in_BH", bh},
           {"ok", ver.ok && d0 == d1 && rig0 == rig1},
           {"collection", to_string(canonicalize(ver.collection))},
           {"expected", to_string(canonicalize(unfold_spectral(orig, dec.stratum)))},
           {"delta_sum", {d0, d1}},
           {"rigidity", {rig0, rig1}}};
    if (ver.mismatch) v["mismatch"] = {{"block", ver.mismatch->block}, {"reason", ver.mismatch->reason}};
    out << Json{{"form", to_json(f)}, {"type", to_string(orig)}, {"decomposition", to_json(dec)}, {"verification", v}}
               .dump(2)
        << "\n";
    return v["ok"].get<bool>() ? kOk : kFailed;
}

int cmd_verify(const std::string& path, unsigned seed, std::ostream& out) {
    auto f = load_form(path);
    auto orig = spectral_type_of(f);
    bool all = true;
    out << "form type " << to_string(orig) << "\n";
    for (auto& p : partitions(f.k())) {
        std::vector<QQi> c;
        try {
            c = sample_stratum(f, p, seed);
        } catch (const SamplingExhausted& e) {
            out << p.str() << "  sampling failed: " << e.what() << "\n";
            all = false;
            continue;
        }
        auto ver = verify_spectral_decomposition(f, c);
        auto [d0, d1] = delta_sum_check(f, c);
        bool ok = ver.ok && d0 == d1 && rigidity({orig}) == rigidity(ver.collection);
        all = all && ok;
        out << p.str() << "  c=(";
        for (size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
        out << ")  " << (ok ? "PASS" : "FAIL") << "  " << to_string(canonicalize(ver.collection)) << "\n";
    }
    return all ? kOk : kFailed;
}

int cmd_solve(const std::string& path, const std::optional<unsigned>& seed, const std::string& outpath,
              std::ostream& out) {
    auto in = instance_from_json(read_json_file(path));
    in.opt.seed = seed ? *seed : default_seed(in.opt.seed);
    auto sol = solve_dsp(in);
    auto j = to_json(sol, in);
    j["verification"] = to_json(verify_solution(sol.conn, in));
    emit(j.dump(2) + "\n", outpath, out);
    return kOk;
}

int cmd_continue(const std::string& path, const std::string& to, int steps, const std::string& detour,
                 const std::string& outpath, std::ostream& out) {
    DSPInstance in;
    auto sol = solution_from_json(read_json_file(path), in);
    auto target = parse_point_values(to);
    if (target.size() != in.points.size()) throw DataError("--to needs one ';'-separated vector per point");
    for (size_t a = 0; a < target.size(); ++a)
        if (static_cast<int>(target[a].size()) != in.points[a].form.k() + 1)
            throw DataError("--to vector " + std::to_string(a) + " has the wrong length");
    QQi kappa = detour.empty() ? QQi(0) : parse_values(detour).at(0);
    auto res = continue_family(in, sol, target, steps, kappa);
    Json st = Json::array();
    for (auto& s : res.steps) st.push_back({{"s", to_json(s.s)}, {"residual", s.residual}, {"iterations", s.iterations}});
    Json fib = Json::array();
    for (auto& p : res.fiber.poles) fib.push_back({{"pole", to_json(p.pole)}, {"order", p.order}, {"error", p.max_error}, {"ok", p.ok}});
    Json j{{"ok", res.ok},
           {"steps", st},
           {"endpoint_types", to_string(res.endpoint_types)},
           {"expected_types", to_string(res.expected_types)},
           {"rigidity", {res.rigidity_start, res.rigidity_end}},
           {"fiber", fib},
           {"verification", to_json(verify_solution(res.solution.conn, res.target))},
           {"solution", to_json(res.solution, res.target)}};
    emit(j.dump(2) + "\n", outpath, out);
    return res.ok ? kOk : kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral types, unfoldings and additive Deligne-Simpson problems for GL_n"};
    app.require_subcommand(1);

    std::string spec, file, stratum, at, to, outpath, detour;
    int n = 0, steps = 16;
    bool json = false, reduced = false, dot = false, sample = false, all_strata = false;
    long long cap = 200000;
    std::optional<unsigned> seed;

    auto* inv = app.add_subcommand("invariants", "Irr and delta per point, rigidity and moduli dimension");
    inv->add_option("spec", spec, "collection, e.g. \"22,22,22,211\"")->required();
    inv->add_option("-n", n, "rank n (default: from the first point)");
    inv->add_flag("--json", json, "JSON output");

    auto* dia = app.add_subcommand("diagram", "unfolding diagram of a collection");
    dia->add_option("spec", spec, "collection")->required();
    dia->add_option("-n", n, "rank n");
    dia->add_flag("--reduced", reduced, "merge vertices with equal labels");
    dia->add_flag("--dot", dot, "DOT instead of JSON");
    dia->add_option("--max-vertices", cap, "refuse diagrams with more vertices");
    dia->add_option("-o", outpath, "output file");

    auto* unf = app.add_subcommand("unfold", "partial fractions of a form on a stratum");
    unf->add_option("form", file, "form JSON")->required();
    unf->add_option("--stratum", stratum, "set partition, e.g. {0,1}{2,3}");
    unf->add_flag("--sample", sample, "sample c on the stratum (default)");
    unf->add_option("--at", at, "explicit c, comma separated");
    unf->add_option("--seed", seed, "sampling seed");

    auto* ver = app.add_subcommand("verify", "check the spectral decomposition on every stratum");
    ver->add_option("form", file, "form JSON")->required();
    ver->add_flag("--all-strata", all_strata, "all set partitions (the only mode)");
    ver->add_option("--seed", seed, "sampling seed");

    auto* sol = app.add_subcommand("solve", "solve an additive Deligne-Simpson instance");
    sol->add_option("instance", file, "instance JSON")->required();
    sol->add_option("--seed", seed, "solver seed (default: UNFOLD_SEED, then the instance)");
    sol->add_option("-o", outpath, "output file");

    auto* con = app.add_subcommand("continue", "continue a solution in the deformation parameters");
    con->add_option("solution", file, "solution JSON")->required();
    con->add_option("--to", to, "target c per point: \"c0,c1,...;c0,...\"")->required();
    con->add_option("--steps", steps, "initial number of steps")->check(CLI::PositiveNumber);
    con->add_option("--detour", detour, "imaginary bend kappa of the path s + i kappa s(1-s)");
    con->add_option("-o", outpath, "output file");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    try {
        unsigned s = seed ? *seed : default_seed(1);
        if (inv->parsed()) return cmd_invariants(spec, n, json, out);
        if (dia->parsed()) return cmd_diagram(spec, n, reduced, dot, cap, outpath, out);
        if (unf->parsed()) return cmd_unfold(file, stratum, sample, at, s, out);
        if (ver->parsed()) return cmd_verify(file, s, out);
        if (sol->parsed()) return cmd_solve(file, seed, outpath, out);
        if (con->parsed()) return cmd_continue(file, to, steps, detour, outpath, out);
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        err << "data: " << e.what() << "\n";
        return kData;
    } catch (const FuchsViolation& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const NoConvergence& e) {
        err << e.what() << "\n";
        return kNoConvergence;
    } catch (const ReducibleSolution& e) {
        err << e.what() << "\n";
        return kNoConvergence;
    } catch (const PathLeftBH& e) {
        err << e.what() << "\n";
        return kPathLeftBH;
    } catch (const std::invalid_argument& e) {
        err << "data: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

}  // namespace unfold::cli
