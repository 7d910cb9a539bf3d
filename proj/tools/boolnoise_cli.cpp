// boolnoise command-line driver. One experiment per invocation; every report
// carries the tool version, the option values and the seed in its header.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 usage or contract
// error, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

#include <boolnoise.hpp>

using namespace boolnoise;

namespace {

// Largest n for which `family` also builds the table to check the closed forms.
constexpr int kFamilyTableMaxN = 20;

struct Globals {
    unsigned workers = 1;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format = "csv";
    std::string config;
    std::string weights;
};

struct FunctionArgs {
    std::string family;
    std::string table;
    int n = 0;
    int t = 0;
    int s = 0;
    int depth = 0;
    std::optional<int> threshold;
    double weight_threshold = 0.0;
};

void add_function_options(CLI::App* app, FunctionArgs& a) {
    app->add_option("--family", a.family, "dictator|parity|majority|tribes|recmaj3|runs|weighted");
    app->add_option("--table", a.table, "read the function from a truth-table file");
    app->add_option("--n", a.n, "number of variables");
    app->add_option("--tribes", a.t, "tribes: number of tribes (default from n)");
    app->add_option("--tribe-size", a.s, "tribes: tribe size (default from n)");
    app->add_option("--depth", a.depth, "recmaj3: tree depth");
    app->add_option("--threshold", a.threshold, "runs: event R > threshold (default median)");
    app->add_option("--weight-threshold", a.weight_threshold, "weighted: event Σw_j x_j − Σw_j(1−x_j) > threshold");
}

std::vector<double> load_weights(const std::string& path) {
    require(!path.empty(), "--weights <file> is required here");
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open weights file " + path);
    return read_weights(in);
}

FamilySpec family_spec(const FunctionArgs& a, const Globals& g) {
    const auto kind = parse_family(a.family);
    switch (kind) {
        case FamilyKind::dictator: return FamilySpec::dictator(a.n);
        case FamilyKind::parity: return FamilySpec::parity(a.n);
        case FamilyKind::majority: return FamilySpec::majority(a.n);
        case FamilyKind::tribes: {
            if (a.t > 0 && a.s > 0) return FamilySpec::tribes(a.t, a.s, a.n);
            const auto p = tribes_params(a.n);
            return FamilySpec::tribes(p.t, p.s, a.n);
        }
        case FamilyKind::recursive_majority3: return FamilySpec::recursive_majority3(a.depth);
        case FamilyKind::runs: return FamilySpec::runs(a.n, a.threshold);
        case FamilyKind::weighted_majority:
            return FamilySpec::weighted_majority({load_weights(g.weights), a.weight_threshold});
    }
    throw ContractError("unknown family");
}

BooleanFunction load_function(const FunctionArgs& a, const Globals& g) {
    if (!a.table.empty()) {
        require(a.family.empty(), "give either --family or --table, not both");
        std::ifstream in(a.table);
        if (!in) throw ContractError("cannot open table file " + a.table);
        return read_table(in);
    }
    require(!a.family.empty(), "a function is required: --family <name> or --table <file>");
    auto spec = family_spec(a, g);
    spec.validate();
    require_table_size(spec.n, max_n(), "family");
    return make_family(spec);
}

std::string set_label(Mask s) {
    std::string out = "{";
    for (int j = 0; s; ++j, s >>= 1) {
        if (s & 1u) out += (out.size() > 1 ? "," : "") + std::to_string(j + 1);
    }
    return out + "}";
}

std::string join_results(const CLI::Option* opt) {
    std::string v;
    for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
    return v;
}

// Echo every option of the chain from the root to `leaf` that has a value.
std::vector<std::pair<std::string, std::string>> echo_config(const CLI::App* leaf) {
    std::vector<const CLI::App*> chain;
    for (auto* a = leaf; a; a = a->get_parent()) chain.insert(chain.begin(), a);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto* app : chain) {
        for (const auto* opt : app->get_options()) {
            if (opt->get_lnames().empty()) continue;
            const auto& name = opt->get_lnames().front();
            if (name == "help" || name == "config" || name == "seed" || name == "version") continue;
            std::string v = opt->count() ? join_results(opt) : opt->get_default_str();
            if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
            if (v.empty()) continue;
            out.emplace_back(name, v);
        }
    }
    return out;
}

struct Runner {
    Globals g;
    const CLI::App* active = nullptr;

    Report report(const std::string& command, std::vector<std::string> columns) const {
        Report r;
        r.command = command;
        r.config = echo_config(active);
        r.seed = g.seed;
        r.columns = std::move(columns);
        return r;
    }

    void emit(const Report& r) const {
        const auto f = parse_format(g.format);
        if (g.out.empty()) emit_report(std::cout, r, f);
        else emit_report(g.out, r, f);
    }
};

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{std::string()}; }

std::vector<int> edge_subset(const GridRectangle& grid, const std::string& which) {
    if (which == "right") return grid.right_half_edges();
    if (which == "all") {
        std::vector<int> all(grid.edge_count());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    throw ContractError("edge subset must be 'right' or 'all'");
}

// argv with config-file entries appended as --key=value, unless the same key
// already appears on the command line.
std::vector<std::string> merge_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    auto given = [&](const std::string& key) {
        for (const auto& a : args) {
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        }
        return false;
    };
    bool has_command = false;
    for (const auto& a : args) {
        has_command |= std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
    }
    for (const auto& [key, value] : parse_config_file(path)) {
        if (key == "command") {
            if (!has_command) {
                std::istringstream words(value);
                std::vector<std::string> cmd{std::istream_iterator<std::string>(words), {}};
                args.insert(args.begin(), cmd.begin(), cmd.end());
                has_command = true;
            }
            continue;
        }
        if (!given(key)) args.push_back("--" + key + "=" + value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-analytic noise sensitivity experiments on the Boolean cube", "boolnoise"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);
    Runner run;
    auto& g = run.g;
    app.add_option("--workers", g.workers, "worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", g.seed, "64-bit seed")->default_val(kDefaultSeed);
    app.add_option("--out", g.out, "report path (default stdout)");
    app.add_option("--format", g.format, "csv or json")->default_val("csv")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", g.config, "flat key=value file; command-line flags take precedence");
    app.add_option("--weights", g.weights, "weights file, one real per line");

    // spectrum
    FunctionArgs spec_fn;
    std::string prefix;
    auto* spectrum = app.add_subcommand("spectrum", "truth table and Fourier-Walsh spectrum");
    add_function_options(spectrum, spec_fn);
    spectrum->add_option("--prefix", prefix, "write <prefix>.table and <prefix>.spectrum");

    // influence
    FunctionArgs inf_fn;
    auto* influence_cmd = app.add_subcommand("influence", "influences, II, J and the α/β exponents");
    add_function_options(influence_cmd, inf_fn);
    bool do_monotonize = false;
    influence_cmd->add_flag("--monotonize", do_monotonize, "apply every shift before measuring");

    // noise
    FunctionArgs noise_fn;
    std::vector<double> noise_eps;
    std::vector<int> noise_q;
    std::string noise_model;
    auto* noise = app.add_subcommand("noise", "VAR(f, ε) under Bernoulli noise or VAR̃(f, q) under fixed-size noise");
    add_function_options(noise, noise_fn);
    noise->add_option("--eps", noise_eps, "Bernoulli rates")->delimiter(',');
    noise->add_option("--q", noise_q, "fixed noise sizes")->delimiter(',');
    noise->add_option("--noise", noise_model, "bernoulli:<eps> or fixed:<q>");

    // gauge
    FunctionArgs gauge_fn;
    std::vector<double> gauge_eps{0.05, 0.1, 0.2, 0.3};
    std::vector<double> gauge_delta;
    auto* gauge = app.add_subcommand("gauge", "sensitivity gauge φ(f, ε) against VAR(f, ε)");
    add_function_options(gauge, gauge_fn);
    gauge->add_option("--eps", gauge_eps, "noise rates")->delimiter(',')->capture_default_str();
    gauge->add_option("--delta", gauge_delta, "also report γ(f, ε, δ)")->delimiter(',');

    // majority
    FunctionArgs maj_fn;
    std::string maj_task = "lambda";
    std::string lambda_mode = "exact";
    std::uint64_t maj_samples = 100000;
    int agree_k = 0;
    double tail_t = 1.0;
    auto* majority = app.add_subcommand("majority", "correlation with majorities and weighted-sum identities");
    add_function_options(majority, maj_fn);
    majority->add_option("--task", maj_task, "lambda|inner|moment|tail|agreement")
        ->capture_default_str()
        ->check(CLI::IsMember({"lambda", "inner", "moment", "tail", "agreement"}));
    majority->add_option("--mode", lambda_mode, "lambda: exact or heuristic")
        ->capture_default_str()
        ->check(CLI::IsMember({"exact", "heuristic"}));
    majority->add_option("--samples", maj_samples, "Monte Carlo samples")->capture_default_str();
    majority->add_option("--k", agree_k, "agreement: size of the conditioning prefix (default ⌈√n⌉)");
    majority->add_option("--t", tail_t, "tail: threshold")->capture_default_str();

    // stability
    int stab_n = 0;
    std::vector<double> stab_eps{1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25};
    std::uint64_t stab_samples = 100000;
    double stab_threshold = 0.0;
    auto* stability = app.add_subcommand("stability", "stability deficit P[M △ N_ε M] of a weighted majority");
    stability->add_option("--n", stab_n, "uniform weights on n variables (otherwise --weights)");
    stability->add_option("--eps", stab_eps, "noise rates")->delimiter(',')->capture_default_str();
    stability->add_option("--samples", stab_samples, "samples per rate (exact for n <= 12)")->capture_default_str();
    stability->add_option("--weight-threshold", stab_threshold, "majority threshold")->capture_default_str();

    // family
    FunctionArgs fam_fn;
    auto* family = app.add_subcommand("family", "closed forms for the built-in families, checked against tables");
    add_function_options(family, fam_fn);

    // perc
    auto* perc = app.add_subcommand("perc", "bond percolation on the (m+1)×m rectangle");
    perc->require_subcommand(1);
    int m = 8;
    std::uint64_t perc_samples = 10000;
    bool exact = false, explore = false;
    std::string snapshot;
    auto* crossing = perc->add_subcommand("crossing", "P[C] by enumeration or sampling");
    crossing->add_option("--m", m, "grid size")->capture_default_str();
    crossing->add_option("--samples", perc_samples, "configurations")->capture_default_str();
    crossing->add_flag("--exact", exact, "enumerate all configurations (m <= 3)");
    crossing->add_flag("--explore", explore, "also run the exploration sampler and count disagreements");
    crossing->add_option("--snapshot", snapshot, "evaluate C on a saved configuration");

    double sens_eps = 0.2;
    std::uint64_t outer = 40000, inner = 1;
    std::vector<double> sens_delta{0.05, 0.1, 0.2};
    auto* sensitivity = perc->add_subcommand("sensitivity", "covariance proxy and γ̂ for C under ε-noise");
    sensitivity->add_option("--m", m, "grid size")->capture_default_str();
    sensitivity->add_option("--eps", sens_eps, "noise rate")->capture_default_str();
    sensitivity->add_option("--outer", outer, "base configurations")->capture_default_str();
    sensitivity->add_option("--inner", inner, "noised copies per base")->capture_default_str();
    sensitivity->add_option("--delta", sens_delta, "γ̂ thresholds")->delimiter(',')->capture_default_str();

    std::string subset = "right";
    auto* majcorr = perc->add_subcommand("majcorr", "E[χ_C · sign of the majority over an edge set]");
    majcorr->add_option("--m", m, "grid size")->capture_default_str();
    majcorr->add_option("--samples", perc_samples, "configurations")->capture_default_str();
    majcorr->add_option("--subset", subset, "right or all")->capture_default_str();

    double duration = 1.0, rate = 1.0;
    std::uint64_t replicas = 200;
    bool summary = false, rebuild = false;
    auto* dynamical = perc->add_subcommand("dynamical", "switching times of C under Poisson edge clocks");
    dynamical->add_option("--m", m, "grid size")->capture_default_str();
    dynamical->add_option("--duration", duration, "time horizon")->capture_default_str();
    dynamical->add_option("--rate", rate, "clock rate per edge")->capture_default_str();
    dynamical->add_option("--replicas", replicas, "independent runs")->capture_default_str();
    dynamical->add_flag("--summary", summary, "one row with the mean switch count");
    dynamical->add_flag("--rebuild", rebuild, "recompute C after every event");

    // walk
    FunctionArgs walk_fn;
    std::vector<double> walk_eps{0.1};
    std::vector<std::uint64_t> walk_steps;
    auto* walk = app.add_subcommand("walk", "lazy walk started on an event: mixing time or distance trajectory");
    add_function_options(walk, walk_fn);
    walk->add_option("--eps", walk_eps, "mixing thresholds")->delimiter(',')->capture_default_str();
    walk->add_option("--steps", walk_steps, "report the distance at these step counts instead")->delimiter(',');

    const std::vector<std::string> names{"spectrum", "influence", "noise",  "gauge", "majority",
                                         "stability", "family", "perc", "walk"};
    try {
        auto args = merge_config(argc, argv, names);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ContractError& e) {
        std::cerr << "boolnoise: " << e.what() << '\n';
        return 2;
    }

    try {
        if (spectrum->parsed()) {
            run.active = spectrum;
            auto f = load_function(spec_fn, g);
            auto sp = transform(f);
            if (!prefix.empty()) {
                save(prefix + ".table", f);
                save(prefix + ".spectrum", sp);
            }
            auto r = run.report("spectrum", {"mask", "set", "level", "coefficient"});
            for (Mask s = 0; s < sp.size(); ++s) {
                r.add_row({static_cast<std::int64_t>(s), set_label(s), std::int64_t{popcount(s)}, sp[s]});
            }
            run.emit(r);
        } else if (influence_cmd->parsed()) {
            run.active = influence_cmd;
            auto f = load_function(inf_fn, g);
            if (do_monotonize) f = monotonize(f);
            auto p = influence_profile(f);
            auto r = run.report("influence", {"quantity", "index", "value"});
            for (int k = 0; k < f.n(); ++k) r.add_row({std::string("I"), std::int64_t{k + 1}, p.per_var[k]});
            r.add_row({std::string("I_total"), std::string(), p.total_I});
            r.add_row({std::string("II"), std::string(), p.total_II});
            r.add_row({std::string("J"), std::string(), p.J});
            r.add_row({std::string("alpha"), std::string(), opt_cell(p.alpha)});
            r.add_row({std::string("beta"), std::string(), opt_cell(p.beta)});
            r.add_row({std::string("monotone"), std::string(), std::int64_t{is_monotone(f)}});
            run.emit(r);
        } else if (noise->parsed()) {
            run.active = noise;
            if (!noise_model.empty()) {
                const auto model = parse_noise(noise_model);
                if (auto* b = std::get_if<Bernoulli>(&model)) noise_eps.push_back(b->eps);
                else noise_q.push_back(std::get<FixedSize>(model).q);
            }
            require(!noise_eps.empty() || !noise_q.empty(), "noise: give --eps, --q or --noise");
            auto f = load_function(noise_fn, g);
            auto sp = transform(f);
            auto r = run.report("noise", {"model", "parameter", "variance"});
            for (double eps : noise_eps) r.add_row({std::string("bernoulli"), eps, var_noise(sp, eps)});
            for (int q : noise_q) r.add_row({std::string("fixed"), std::int64_t{q}, var_fixed(sp, q)});
            run.emit(r);
        } else if (gauge->parsed()) {
            run.active = gauge;
            auto f = load_function(gauge_fn, g);
            auto r = run.report("gauge", {"eps", "phi", "var", "half_var", "var_cube_root", "delta", "gamma"});
            for (double eps : gauge_eps) {
                auto res = gauge_phi(f, eps);
                const Cell half = 0.5 * res.var_noise, root = std::cbrt(res.var_noise);
                if (gauge_delta.empty()) {
                    r.add_row({eps, res.phi, res.var_noise, half, root, std::string(), std::string()});
                }
                for (double d : gauge_delta) r.add_row({eps, res.phi, res.var_noise, half, root, d, gamma(f, eps, d)});
            }
            run.emit(r);
        } else if (majority->parsed()) {
            run.active = majority;
            if (maj_task == "lambda") {
                auto f = load_function(maj_fn, g);
                auto res = lambda(f, lambda_mode == "exact" ? LambdaMode::exact : LambdaMode::heuristic);
                auto full = correlation_with_majority(f, full_mask(f.n()));
                auto r = run.report("majority", {"quantity", "value"});
                r.add_row({std::string("lambda"), res.value});
                r.add_row({std::string("best_subset"), set_label(res.best_subset)});
                r.add_row({std::string("corr_full_majority"), full.value});
                r.add_row({std::string("corr_bound_rhs"), opt_cell(full.bound_rhs)});
                run.emit(r);
            } else if (maj_task == "agreement") {
                require(maj_fn.n >= 1, "agreement: --n is required");
                const int k = agree_k > 0 ? agree_k : static_cast<int>(std::ceil(std::sqrt(maj_fn.n)));
                auto e = conditional_majority_agreement(maj_fn.n, k, maj_samples, g.seed);
                auto r = run.report("majority", {"n", "k", "agreement", "std_error", "samples"});
                r.add_row({std::int64_t{maj_fn.n}, std::int64_t{k}, e.value, e.std_error,
                           static_cast<std::int64_t>(e.samples)});
                run.emit(r);
            } else {
                auto w = g.weights.empty() ? WeightedMajority::uniform_weights(maj_fn.n).weights : load_weights(g.weights);
                auto r = run.report("majority", {"quantity", "value", "std_error"});
                if (maj_task == "inner") {
                    auto ip = influence_inner_product(w);
                    r.add_row({std::string("inner_product"), ip.ip, 0.0});
                    r.add_row({std::string("two_abs_mean"), 2.0 * ip.abs_mean, 0.0});
                } else if (maj_task == "moment") {
                    auto mc = moment_check(w, maj_samples, g.seed);
                    r.add_row({std::string("fourth_moment"), mc.fourth_moment, mc.std_error});
                    r.add_row({std::string("identity_rhs"), mc.identity_rhs, 0.0});
                } else {
                    auto tp = tail_probabilities(w, tail_t);
                    r.add_row({std::string("upper"), tp.upper, 0.0});
                    r.add_row({std::string("lower"), tp.lower, 0.0});
                }
                run.emit(r);
            }
        } else if (stability->parsed()) {
            run.active = stability;
            WeightedMajority wm = g.weights.empty() ? WeightedMajority::uniform_weights(stab_n, stab_threshold)
                                                    : WeightedMajority{load_weights(g.weights), stab_threshold};
            require(stab_n == 0 || g.weights.empty(), "stability: give --n or --weights, not both");
            auto r = run.report("stability", {"eps", "deficit", "std_error", "samples", "exact", "bound_3eps_quarter"});
            for (double eps : stab_eps) {
                auto e = stability_deficit(wm, eps, stab_samples, g.seed, g.workers);
                r.add_row({eps, e.value, e.std_error, static_cast<std::int64_t>(e.samples), std::int64_t{e.exact},
                           3.0 * std::pow(eps, 0.25)});
            }
            run.emit(r);
        } else if (family->parsed()) {
            run.active = family;
            require(!fam_fn.family.empty(), "family: --family is required");
            auto spec = family_spec(fam_fn, g);
            spec.validate();
            auto r = run.report("family", {"quantity", "closed_form", "table"});
            const bool small = spec.n <= kFamilyTableMaxN;
            std::optional<BooleanFunction> f;
            std::optional<InfluenceProfile> p;
            if (small) {
                f = make_family(spec);
                p = influence_profile(*f);
            }
            auto table = [&](auto get) { return small ? Cell{get()} : Cell{std::string()}; };
            r.add_row({std::string("n"), std::int64_t{spec.n}, std::string()});
            if (spec.kind == FamilyKind::tribes) {
                r.add_row({std::string("tribes"), std::int64_t{spec.t}, std::string()});
                r.add_row({std::string("tribe_size"), std::int64_t{spec.s}, std::string()});
                r.add_row({std::string("P"), tribes_probability(spec.t, spec.s), table([&] { return f->mean(); })});
                r.add_row({std::string("I_1"), tribes_influence(spec.t, spec.s), table([&] { return p->per_var[0]; })});
            } else if (spec.kind == FamilyKind::recursive_majority3) {
                const double ik = recursive_majority_influence(spec.depth);
                r.add_row({std::string("I_1"), ik, table([&] { return p->per_var[0]; })});
                r.add_row({std::string("I_1_scaled"), ik * std::pow(spec.n, std::log(2.0) / std::log(3.0)),
                           std::string()});
            } else if (spec.kind == FamilyKind::runs) {
                const int thr = spec.threshold.value_or(runs_median_threshold(spec.n));
                r.add_row({std::string("threshold"), std::int64_t{thr}, std::string()});
                r.add_row({std::string("P"), runs_upper_tail(spec.n, thr), table([&] { return f->mean(); })});
            } else {
                r.add_row({std::string("P"), std::string(), table([&] { return f->mean(); })});
            }
            if (small) {
                r.add_row({std::string("II"), std::string(), p->total_II});
                r.add_row({std::string("alpha"), std::string(), opt_cell(p->alpha)});
                r.add_row({std::string("beta"), std::string(), opt_cell(p->beta)});
            }
            run.emit(r);
        } else if (crossing->parsed()) {
            run.active = crossing;
            auto grid = build_grid(m);
            auto r = run.report("perc crossing", {"m", "value", "std_error", "samples", "exact", "explore_mismatches"});
            if (!snapshot.empty()) {
                std::ifstream in(snapshot);
                if (!in) throw ContractError("cannot open snapshot " + snapshot);
                const auto c = read_snapshot(in, grid);
                r.add_row({std::int64_t{m}, std::int64_t{has_crossing(grid, c)}, 0.0, std::int64_t{1}, std::int64_t{1},
                           std::string()});
            } else if (exact) {
                auto e = crossing_probability_exact(grid);
                r.add_row({std::int64_t{m}, e.value, 0.0, static_cast<std::int64_t>(e.samples), std::int64_t{1},
                           std::string()});
            } else {
                auto e = estimate_crossing(grid, perc_samples, g.seed, g.workers);
                Cell mismatches = std::string();
                if (explore) {
                    std::vector<std::uint8_t> bad(perc_samples, 0);
                    parallel_for(perc_samples, g.workers, [&](std::uint64_t i) {
                        Philox rng(g.seed, i);
                        const auto c = Configuration::uniform(grid.edge_count(), rng);
                        bad[i] = explore_crossing(grid, [&](int edge) { return c.test(edge); }).crossed !=
                                 has_crossing(grid, c);
                    });
                    mismatches = static_cast<std::int64_t>(std::accumulate(bad.begin(), bad.end(), 0));
                }
                r.add_row({std::int64_t{m}, e.value, e.std_error, static_cast<std::int64_t>(e.samples), std::int64_t{0},
                           mismatches});
            }
            run.emit(r);
        } else if (sensitivity->parsed()) {
            run.active = sensitivity;
            auto rep = estimate_noise_sensitivity(build_grid(m), sens_eps, sens_delta, outer, inner, g.seed, g.workers);
            auto r = run.report("perc sensitivity", {"quantity", "delta", "value", "std_error", "inner_adequate"});
            const std::string none;
            r.add_row({std::string("p_bar"), none, rep.p_bar, none, none});
            r.add_row({std::string("covariance"), none, rep.covariance.value, rep.covariance.std_error, none});
            r.add_row({std::string("inner_sigma"), none, rep.inner_sigma, none, none});
            for (std::size_t i = 0; i < rep.delta_grid.size(); ++i) {
                r.add_row({std::string("gamma_hat"), rep.delta_grid[i], rep.gamma_hat[i], none,
                           std::int64_t{rep.inner_adequate[i]}});
            }
            run.emit(r);
        } else if (majcorr->parsed()) {
            run.active = majcorr;
            auto grid = build_grid(m);
            auto e = estimate_majority_correlation(grid, edge_subset(grid, subset), perc_samples, g.seed, g.workers);
            auto r = run.report("perc majcorr", {"m", "value", "std_error", "samples"});
            r.add_row({std::int64_t{m}, e.value, e.std_error, static_cast<std::int64_t>(e.samples)});
            run.emit(r);
        } else if (dynamical->parsed()) {
            run.active = dynamical;
            auto grid = build_grid(m);
            std::vector<SwitchingRecord> recs(replicas);
            const auto mode = rebuild ? DynamicsMode::rebuild : DynamicsMode::fast;
            parallel_for(replicas, g.workers,
                         [&](std::uint64_t i) { recs[i] = run_dynamical(grid, duration, rate, g.seed, i, mode); });
            if (summary) {
                double sum = 0.0, sum2 = 0.0;
                for (const auto& rec : recs) {
                    const double k = static_cast<double>(rec.switch_times.size());
                    sum += k;
                    sum2 += k * k;
                }
                const double n = static_cast<double>(replicas);
                const double mean = sum / n;
                const double se = replicas > 1 ? std::sqrt((sum2 - n * mean * mean) / (n - 1) / n) : 0.0;
                auto r = run.report("perc dynamical", {"m", "replicas", "mean_switches", "std_error"});
                r.add_row({std::int64_t{m}, static_cast<std::int64_t>(replicas), mean, se});
                run.emit(r);
            } else {
                auto r = run.report("perc dynamical", {"replica", "initial_state", "switches", "first_switch", "events"});
                for (std::uint64_t i = 0; i < replicas; ++i) {
                    const auto& rec = recs[i];
                    r.add_row({static_cast<std::int64_t>(i), std::int64_t{rec.initial_state},
                               static_cast<std::int64_t>(rec.switch_times.size()),
                               rec.switch_times.empty() ? Cell{std::string()} : Cell{rec.switch_times.front()},
                               static_cast<std::int64_t>(rec.events)});
                }
                run.emit(r);
            }
        } else if (walk->parsed()) {
            run.active = walk;
            auto a = load_function(walk_fn, g);
            if (!walk_steps.empty()) {
                auto r = run.report("walk", {"t", "distance"});
                const auto start = walk_start(a);
                for (auto t : walk_steps) r.add_row({static_cast<std::int64_t>(t), tv_distance(walk_evolve(start, t))});
                run.emit(r);
            } else {
                auto r = run.report("walk", {"eps", "mixing_time", "mixing_time_over_n", "l2_bound_time"});
                for (double eps : walk_eps) {
                    auto res = mixing_time(a, eps);
                    r.add_row({eps, static_cast<std::int64_t>(res.t), static_cast<double>(res.t) / a.n(),
                               res.l2_t ? Cell{static_cast<std::int64_t>(*res.l2_t)} : Cell{std::string()}});
                }
                run.emit(r);
            }
        }
    } catch (const ContractError& e) {
        std::cerr << "boolnoise: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "boolnoise: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "boolnoise: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
