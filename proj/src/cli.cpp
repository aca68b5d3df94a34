#include "tsf/cli.hpp"

#include "tsf/error.hpp"
#include "tsf/harness.hpp"
#include "tsf/io.hpp"
#include "tsf/navier_stokes.hpp"
#include "tsf/spectral.hpp"
#include "tsf/stokes.hpp"
#include "tsf/viscosity.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace tsf::cli {

namespace {

struct Command {
    std::string name;
    std::string description;
    std::vector<std::string> required; ///< long flag names without dashes
    CLI::App* app = nullptr;
    std::vector<std::pair<std::string, std::function<std::string()>>> echo;
};

class Parser {
public:
    explicit Parser(RunConfig& cfg) : cfg_(cfg), app_("Spectral Stokes and Navier-Stokes solver on the flat torus") {
        app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app_.require_subcommand(1);
        commands_.reserve(8);

        auto& tc = add("tensor-check", "validate a viscosity tensor file and report C_A and |A|", {"tensor"});
        path(tc, "tensor", cfg.tensor, "tensor file");
        path(tc, "report", cfg.report, "report file (default: stdout only)");

        auto& ss = add("stokes-solve", "solve the linear Stokes system mode by mode", {"tensor", "f", "out"});
        path(ss, "tensor", cfg.tensor, "tensor file");
        path(ss, "f", cfg.f, "forcing (SPF, n components)");
        path(ss, "g", cfg.g, "divergence data (SPF scalar) or 'none'");
        number(ss, "s", cfg.s, "Sobolev index for the global bound check");
        path(ss, "out", cfg.out, "velocity output (SPF)");
        path(ss, "out-p", cfg.out_p, "pressure output (SPF)");
        path(ss, "report", cfg.report, "report file");
        flag(ss, "project-mean", cfg.project_mean, "remove nonzero means from the data instead of failing");

        auto& ns = add("ns-solve", "damped Picard iteration for the stationary Navier-Stokes system",
                       {"tensor", "f", "out-u", "out-p"});
        path(ns, "tensor", cfg.tensor, "tensor file");
        path(ns, "f", cfg.f, "forcing (SPF)");
        number(ns, "omega", cfg.omega, "relaxation in (0, 1]");
        number(ns, "tol", cfg.tol, "H^-1 residual tolerance");
        number(ns, "max-iter", cfg.max_iter, "iteration limit");
        path(ns, "initial", cfg.initial, "initial guess: stokes or zero");
        flag(ns, "dealias", cfg.dealias, "evaluate the advection term alias-free");
        path(ns, "out-u", cfg.out_u, "velocity output (SPF)");
        path(ns, "out-p", cfg.out_p, "pressure output (SPF)");
        path(ns, "report", cfg.report, "report file");

        auto& vf = add("verify", "run the property suites", {});
        path(vf, "suite", cfg.suite, "suite name, comma-separated list, or 'all'");
        number(vf, "seed", cfg.seed, "ensemble seed");
        number(vf, "m", cfg.m, "lattice truncation");
        number(vf, "n", cfg.n, "dimension (2 or 3)");
        number(vf, "draws", cfg.draws, "draws per property");
        path(vf, "report", cfg.report, "report file");

        auto& eg = add("export-grid", "sample an SPF field on a uniform grid as CSV", {"in", "out"});
        path(eg, "in", cfg.in, "field (SPF)");
        number(eg, "points", cfg.points, "grid points per axis (0: 2m + 1)");
        path(eg, "out", cfg.out, "CSV output");

        auto& mf = add("manufacture", "write data for a random exact solution",
                       {"tensor", "out-u", "out-p", "out-f"});
        path(mf, "tensor", cfg.tensor, "tensor file");
        number(mf, "seed", cfg.seed, "random seed");
        number(mf, "m", cfg.m, "lattice truncation");
        number(mf, "amplitude", cfg.amplitude, "H^1 norm of the velocity and H^0 norm of the pressure");
        flag(mf, "nonlinear", cfg.nonlinear, "include the advection term (solenoidal velocity, lattice 2m)");
        path(mf, "out-u", cfg.out_u, "exact velocity (SPF)");
        path(mf, "out-p", cfg.out_p, "exact pressure (SPF)");
        path(mf, "out-f", cfg.out_f, "forcing (SPF)");
        path(mf, "out-g", cfg.out_g, "divergence data (SPF)");
        path(mf, "report", cfg.report, "report file");

        auto& rs = add("residual", "re-apply the operator to a solution and report the residuals",
                       {"tensor", "u", "p", "f"});
        path(rs, "tensor", cfg.tensor, "tensor file");
        path(rs, "u", cfg.u, "velocity (SPF)");
        path(rs, "p", cfg.p, "pressure (SPF)");
        path(rs, "f", cfg.f, "forcing (SPF)");
        path(rs, "g", cfg.g, "divergence data (SPF) or 'none'");
        flag(rs, "nonlinear", cfg.nonlinear, "include the advection term");
        path(rs, "report", cfg.report, "report file");

        for (auto& c : commands_) c.app->add_option("--config", "key = value file supplying defaults");
    }

    void parse(const std::vector<std::string>& args) {
        std::vector<std::string> tokens = with_config(args);
        std::vector<const char*> argv;
        for (const auto& t : tokens) argv.push_back(t.c_str());
        app_.parse(static_cast<int>(argv.size()), argv.data());

        const Command* chosen = nullptr;
        for (const auto& c : commands_)
            if (c.app->parsed()) chosen = &c;
        cfg_.command = chosen->name;
        for (const auto& req : chosen->required) {
            const CLI::Option* opt = chosen->app->get_option("--" + req);
            if (opt->count() == 0) throw UsageError(chosen->name + ": missing required --" + req);
        }
        for (const auto& [key, value] : chosen->echo) cfg_.echo.emplace_back(key, value());
    }

    CLI::App& app() { return app_; }

private:
    Command& add(const std::string& name, const std::string& description, std::vector<std::string> required) {
        Command c{name, description, std::move(required), app_.add_subcommand(name, description), {}};
        commands_.push_back(std::move(c));
        return commands_.back();
    }

    void path(Command& c, const std::string& key, std::string& target, const std::string& help) {
        c.app->add_option("--" + key, target, help);
        c.echo.emplace_back(key, [&target] { return target; });
    }

    template <typename T>
    void number(Command& c, const std::string& key, T& target, const std::string& help) {
        c.app->add_option("--" + key, target, help)->capture_default_str();
        c.echo.emplace_back(key, [&target] {
            if constexpr (std::is_floating_point_v<T>)
                return io::format_double(target);
            else
                return std::to_string(target);
        });
    }

    void flag(Command& c, const std::string& key, bool& target, const std::string& help) {
        c.app->add_flag("--" + key + ",!--no-" + key, target, help);
        c.echo.emplace_back(key, [&target] { return std::string(target ? "true" : "false"); });
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {};
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    }

    /// Inserts config-file entries as "--key=value" tokens right after the command, so any
    /// flag given on the command line comes later and wins.
    std::vector<std::string> with_config(const std::vector<std::string>& args) {
        std::string config;
        for (std::size_t i = 2; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size()) throw UsageError("--config needs a file");
                config = args[i + 1];
            } else if (args[i].rfind("--config=", 0) == 0) {
                config = args[i].substr(9);
            }
        }
        if (config.empty() || args.size() < 2) return args;

        const Command* cmd = nullptr;
        for (const auto& c : commands_)
            if (c.name == args[1]) cmd = &c;
        if (!cmd) return args; // CLI11 reports the unknown command

        std::string text;
        try {
            text = io::read_file(config);
        } catch (const IoError& e) {
            throw UsageError(e.what());
        }
        std::vector<std::string> tokens(args.begin(), args.begin() + 2);
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string line = trim(raw.substr(0, raw.find('#')));
            if (line.empty()) continue;
            const std::string where = config + ":" + std::to_string(line_no);
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "config" || cmd->app->get_option_no_throw("--" + key) == nullptr)
                throw UsageError(where + ": unknown key '" + key + "' for " + cmd->name);
            tokens.push_back("--" + key + "=" + value);
        }
        tokens.insert(tokens.end(), args.begin() + 2, args.end());
        return tokens;
    }

    RunConfig& cfg_;
    CLI::App app_;
    std::vector<Command> commands_;
};

void check_ranges(const RunConfig& c) {
    auto fail = [](const std::string& msg) { throw UsageError(msg); };
    if (!(c.omega > 0.0 && c.omega <= 1.0)) fail("--omega must lie in (0, 1]");
    if (!(c.tol > 0.0)) fail("--tol must be positive");
    if (c.max_iter < 1) fail("--max-iter must be >= 1");
    if (c.m < 1) fail("--m must be >= 1");
    if (c.n != 2 && c.n != 3) fail("--n must be 2 or 3");
    if (c.draws < 1) fail("--draws must be >= 1");
    if (c.points < 0) fail("--points must be >= 0");
    if (!(c.amplitude > 0.0)) fail("--amplitude must be positive");
    if (!std::isfinite(c.s)) fail("--s must be finite");
    if (c.initial != "stokes" && c.initial != "zero") fail("--initial must be 'stokes' or 'zero'");
}

io::Report start_report(const RunConfig& c) {
    io::Report r;
    r.add("command", c.command);
    for (const auto& [k, v] : c.echo) r.add("config." + k, v);
    return r;
}

void emit(const RunConfig& c, const io::Report& r, std::ostream& out) {
    if (c.report.empty())
        out << r.str();
    else
        io::write_atomic(c.report, r.str());
}

std::string mode_string(const std::vector<int>& xi) {
    std::string s;
    for (std::size_t d = 0; d < xi.size(); ++d) s += (d ? "," : "") + std::to_string(xi[d]);
    return s;
}

ViscosityTensor load_validated(const std::string& path) { return validate(io::read_tensor(path)); }

ScalarField load_g(const std::string& path, const Lattice& lat) {
    if (path == "none" || path.empty()) return ScalarField::zeros(lat, true);
    return io::read_scalar(path);
}

int tensor_check(const RunConfig& c, std::ostream& out) {
    const ViscosityTensor raw = io::read_tensor(c.tensor);
    io::Report r = start_report(c);
    r.add("n", raw.dim());
    const auto bad = check_symmetry(raw);
    r.add("symmetry_violations", bad.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 20); ++i)
        r.add("symmetry_violation." + std::to_string(i), mode_string({bad[i][0] + 1, bad[i][1] + 1, bad[i][2] + 1, bad[i][3] + 1}));
    r.add("tensor_norm", tensor_norm(raw));
    int status = kExitOk;
    if (!bad.empty()) {
        r.add("elliptic", std::string("unknown"));
        status = kExitVerificationFailed;
    } else {
        const double lmin = restricted_form_min_eigenvalue(raw);
        r.add("restricted_min_eigenvalue", lmin);
        const bool elliptic = lmin > 1e-12;
        r.add("elliptic", elliptic);
        if (elliptic) {
            const ViscosityTensor t = validate(raw);
            r.add("ellipticity_constant", t.ellipticity());
            const EstimateConstants k = estimate_constants(t);
            r.add("c_uf", k.c_uf);
            r.add("c_ug", k.c_ug);
            r.add("c_pf", k.c_pf);
            r.add("c_pg", k.c_pg);
        } else {
            status = kExitVerificationFailed;
        }
    }
    r.add("status", std::string(status == kExitOk ? "ok" : "failed"));
    emit(c, r, out);
    return status;
}

int stokes_solve(const RunConfig& c, std::ostream& out) {
    const ViscosityTensor t = load_validated(c.tensor);
    const VectorField f = io::read_vector(c.f);
    const ScalarField g = load_g(c.g, f.lattice());
    StokesOptions o;
    o.s = c.s;
    o.project_mean = c.project_mean;
    const StokesSolution sol = solve_stokes(t, f, g, o);
    io::write_spf(c.out, sol.u);
    if (!c.out_p.empty()) io::write_spf(c.out_p, sol.p);

    const StokesSolveReport& rep = sol.report;
    io::Report r = start_report(c);
    r.add("n", f.lattice().dim());
    r.add("m", f.lattice().truncation());
    r.add("ellipticity_constant", rep.ellipticity);
    r.add("tensor_norm", rep.tensor_norm);
    r.add("c_uf", rep.constants.c_uf);
    r.add("c_ug", rep.constants.c_ug);
    r.add("c_pf", rep.constants.c_pf);
    r.add("c_pg", rep.constants.c_pg);
    r.add("max_mode_residual", rep.max_residual);
    r.add("max_divergence_defect", rep.max_divergence);
    r.add("min_velocity_slack", rep.min_velocity_slack);
    r.add("min_pressure_slack", rep.min_pressure_slack);
    r.add("estimate_violations", rep.estimate_violations);
    r.add("worst_mode", mode_string(rep.worst_mode));
    r.add("global.velocity_bound", std::string("C_uf/(2 pi^2) |f|_{s-2} + sqrt(2) C_ug/(2 pi) |g|_{s-1}"));
    r.add("global.pressure_bound", std::string("C_pf/(sqrt(2) pi) |f|_{s-2} + sqrt(2) C_pg |g|_{s-1}"));
    r.add("global.s", rep.global->s);
    r.add("global.velocity_lhs", rep.global->velocity_lhs);
    r.add("global.velocity_rhs", rep.global->velocity_rhs);
    r.add("global.pressure_lhs", rep.global->pressure_lhs);
    r.add("global.pressure_rhs", rep.global->pressure_rhs);
    r.add("global.holds", rep.global->holds);
    r.add("warnings", rep.warnings.size());
    for (std::size_t i = 0; i < rep.warnings.size(); ++i) r.add("warning." + std::to_string(i), rep.warnings[i]);
    const bool ok = rep.estimate_violations == 0 && rep.global->holds;
    r.add("status", std::string(ok ? "ok" : "estimate_violated"));
    emit(c, r, out);
    return ok ? kExitOk : kExitVerificationFailed;
}

int ns_solve(const RunConfig& c, std::ostream& out) {
    const ViscosityTensor t = load_validated(c.tensor);
    const VectorField f = io::read_vector(c.f);
    NSSolveOptions o;
    o.omega = c.omega;
    o.tolerance = c.tol;
    o.max_iterations = c.max_iter;
    o.dealias = c.dealias;
    o.initial = c.initial == "zero" ? InitialGuess::zero : InitialGuess::stokes;
    o.min_omega = std::min(o.min_omega, o.omega);
    const NSSolution sol = picard_solve(t, f, o);
    io::write_spf(c.out_u, sol.u);
    io::write_spf(c.out_p, sol.p);

    const NSSolveReport& rep = sol.report;
    io::Report r = start_report(c);
    r.add("n", f.lattice().dim());
    r.add("m", f.lattice().truncation());
    r.add("status", to_string(rep.status));
    r.add("iterations", rep.iterations);
    r.add("final_residual", rep.final_residual);
    r.add("ellipticity_constant", t.ellipticity());
    r.add("m0_bound", rep.m0_bound);
    r.add("velocity_h1", rep.velocity_h1);
    r.add("within_m0", rep.within_m0);
    r.add("max_divergence", rep.max_divergence);
    r.add("energy_product", rep.energy_product);
    r.add("warnings", rep.warnings.size());
    for (std::size_t i = 0; i < rep.warnings.size(); ++i) r.add("warning." + std::to_string(i), rep.warnings[i]);
    r.add("history", std::string("iter,omega,residual,accepted"));
    for (const auto& h : rep.history)
        r.add_line(std::to_string(h.iteration) + "," + io::format_double(h.omega) + "," +
                   io::format_double(h.residual) + "," + (h.accepted ? "1" : "0"));
    emit(c, r, out);
    return rep.status == NSStatus::converged ? kExitOk : kExitSolverError;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

int verify(const RunConfig& c, std::ostream& out) {
    const SuiteReport rep = run_suite(split(c.suite, ','), c.seed, {c.n, c.m, c.draws});
    io::Report r = start_report(c);
    for (const auto& k : rep.cases) {
        const std::string key = k.suite + "." + k.name;
        r.add(key + ".value", k.value);
        r.add(key + ".threshold", k.threshold);
        r.add(key + ".passed", k.passed);
        out << (k.passed ? "PASS " : "FAIL ") << key << " value=" << io::format_double(k.value)
            << " threshold=" << io::format_double(k.threshold) << "\n";
    }
    r.add("cases", rep.cases.size());
    r.add("all_passed", rep.all_passed());
    if (!c.report.empty()) io::write_atomic(c.report, r.str());
    return rep.all_passed() ? kExitOk : kExitVerificationFailed;
}

int export_grid(const RunConfig& c, std::ostream& out) {
    const auto comps = io::read_spf(c.in);
    const int points = c.points > 0 ? c.points : comps.front().lattice().side();
    io::write_atomic(c.out, io::grid_csv(comps, points));
    out << "wrote " << c.out << "\n";
    return kExitOk;
}

int manufacture_cmd(const RunConfig& c, std::ostream& out) {
    const ViscosityTensor t = load_validated(c.tensor);
    const Lattice lat = make_lattice(t.dim(), c.m);
    RandomFieldOptions o;
    o.divergence_free = c.nonlinear;
    VectorField u = random_vector_field(c.seed, lat, o);
    u *= c.amplitude / sobolev_norm(u, 1.0);
    ScalarField p = random_scalar_field(c.seed + 1, lat);
    p *= c.amplitude / sobolev_norm(p, 0.0);
    const ManufacturedProblem mp = manufacture(u, p, t, c.nonlinear);
    io::write_spf(c.out_u, mp.u_star);
    io::write_spf(c.out_p, mp.p_star);
    io::write_spf(c.out_f, mp.f);
    if (!c.out_g.empty()) io::write_spf(c.out_g, mp.g);

    io::Report r = start_report(c);
    r.add("n", t.dim());
    r.add("lattice_m", mp.f.lattice().truncation());
    r.add("velocity_h1", sobolev_norm(mp.u_star, 1.0));
    r.add("pressure_h0", sobolev_norm(mp.p_star, 0.0));
    r.add("forcing_hm1", sobolev_norm(mp.f, -1.0));
    r.add("divergence_h0", sobolev_norm(mp.g, 0.0));
    emit(c, r, out);
    return kExitOk;
}

int residual_cmd(const RunConfig& c, std::ostream& out) {
    const ViscosityTensor t = load_validated(c.tensor);
    const VectorField u = io::read_vector(c.u);
    const ScalarField p = io::read_scalar(c.p);
    const VectorField f = io::read_vector(c.f);
    const ScalarField g = load_g(c.g, u.lattice());
    require_same_lattice(u.lattice(), f.lattice(), "residual");
    require_same_lattice(u.lattice(), p.lattice(), "residual");
    require_same_lattice(u.lattice(), g.lattice(), "residual");

    VectorField r_mom = -1.0 * stokes_operator(t, u, p);
    if (c.nonlinear) r_mom += advection(u);
    r_mom -= f;
    const ScalarField r_div = divergence(u) - g;
    const double mom = sobolev_norm(r_mom, -1.0);
    const double div = sobolev_norm(r_div, 0.0);
    const double f_scale = sobolev_norm(f, -1.0);
    const double g_scale = std::max(sobolev_norm(g, 0.0), sobolev_norm(divergence(u), 0.0));

    io::Report r = start_report(c);
    r.add("momentum_residual_hm1", mom);
    r.add("relative_momentum_residual", f_scale > 0.0 ? mom / f_scale : mom);
    r.add("divergence_residual_h0", div);
    r.add("relative_divergence_residual", g_scale > 0.0 ? div / g_scale : div);
    emit(c, r, out);
    return kExitOk;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    Parser parser(cfg);
    try {
        parser.parse(args);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    check_ranges(cfg);
    return cfg;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> table{
        {"tensor-check", tensor_check}, {"stokes-solve", stokes_solve}, {"ns-solve", ns_solve},
        {"verify", verify},             {"export-grid", export_grid},   {"manufacture", manufacture_cmd},
        {"residual", residual_cmd},
    };
    const auto it = table.find(config.command);
    if (it == table.end()) {
        err << "tsf: unknown command '" << config.command << "'\n";
        return kExitUsage;
    }
    try {
        return it->second(config, out);
    } catch (const UnknownSuite& e) {
        err << "tsf: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "tsf: error: " << e.what() << "\n";
        return kExitSolverError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    Parser parser(cfg);
    try {
        parser.parse(args);
        check_ranges(cfg);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return parser.app().exit(e, out, err);
        err << "tsf: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "tsf: usage: " << e.what() << "\n";
        return kExitUsage;
    }
    return dispatch(cfg, out, err);
}

} // namespace tsf::cli
