#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "nep/continuation.hpp"
#include "nep/eig.hpp"
#include "nep/errors.hpp"
#include "nep/execution.hpp"
#include "nep/greens.hpp"
#include "nep/model_config.hpp"
#include "nep/phase.hpp"
#include "nep/profile_io.hpp"
#include "nep/shoot.hpp"
#include "nep/timemap.hpp"

namespace nep::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void usage(const std::string& msg)
{
    throw Error(ErrorCode::usage, msg);
}

void add_model_options(CLI::App* sub, RunConfig& c, bool required)
{
    auto* m = sub->add_option("--model", c.model, "built-in model (gelfand, alternative1, alternative2, nonconvex5)");
    auto* f = sub->add_option("--model-file", c.model_file, "JSON model definition");
    m->excludes(f);
    if (required) {
        sub->callback([sub, m, f] {
            if (m->count() == 0 && f->count() == 0) {
                throw CLI::RequiredError(sub->get_name() + " needs --model or --model-file");
            }
        });
    }
}

void add_problem_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--bc", c.bc, "boundary condition")->check(CLI::IsMember({"robin", "dirichlet"}));
    sub->add_option("--alpha", c.alpha, "Robin coefficient");
    sub->add_option("--lambda", c.lambda, "eigenvalue parameter");
    sub->add_option("--length", c.length, "interval length");
}

// Ranges that CLI11 validators cannot express in one place.
void validate(const RunConfig& c)
{
    const std::string& cmd = c.command;
    bool uses_problem = cmd == "phase" || cmd == "timemap" || cmd == "solve" || cmd == "count" || cmd == "branch";
    if (uses_problem) {
        if (c.bc == "robin") {
            if (!c.alpha) usage(cmd + ": --alpha is required for robin");
            if (*c.alpha == 0.0 || !std::isfinite(*c.alpha)) usage("--alpha must be finite and nonzero");
        } else if (c.alpha) {
            usage("--alpha only applies to --bc robin");
        }
        if (!(c.length > 0.0) || !std::isfinite(c.length)) usage("--length must be positive");
    }
    bool needs_lambda = cmd == "timemap" || cmd == "solve" || cmd == "count" || (cmd == "phase" && c.bc == "robin");
    if (needs_lambda && !c.lambda) usage(cmd + ": --lambda is required");
    if (c.lambda && (!(*c.lambda > 0.0) || !std::isfinite(*c.lambda))) usage("--lambda must be positive");

    if (cmd == "phase" && !c.energy) usage("phase: --C is required");
    if (cmd == "timemap") {
        if (c.branch.empty()) usage("timemap: --branch is required");
        if (!c.cmin || !c.cmax) usage("timemap: --cmin and --cmax are required");
        if (!(*c.cmin < *c.cmax)) usage("timemap: need cmin < cmax");
        bool dir_branch = c.branch == "dirichlet";
        if (dir_branch != (c.bc == "dirichlet")) usage("timemap: branch dirichlet goes with --bc dirichlet only");
    }
    if ((cmd == "phase" || cmd == "timemap") && c.n < 2) usage("--n must be at least 2");
    if (cmd == "solve" && (!(c.s_min < c.s_max) || c.n_scan < 2 || c.points < 16)) usage("solve: bad scan settings");
    if ((cmd == "spectrum" || cmd == "verify") && c.profile.empty()) usage(cmd + ": --profile is required");
    if (cmd == "spectrum" && (c.k < 1 || c.grid < 64)) usage("spectrum: need --k >= 1 and --grid >= 64");
    if (cmd == "branch") {
        if (c.seed == "profile" && c.seed_file.empty()) usage("branch: --seed profile needs a file");
        if (c.seed == "trivial" && !c.seed_file.empty()) usage("branch: a seed file needs --seed profile");
        if (c.steps < 1 || c.mesh < 32 || !(c.ds > 0.0) || !(c.ds_max >= c.ds)) usage("branch: bad step settings");
        if (c.direction != 1 && c.direction != -1) usage("--direction must be 1 or -1");
        if (c.snapshot_every < 0 || c.stability_every < 0) usage("branch: negative interval");
        if (c.snapshot_every > 0 && c.out.empty()) usage("branch: snapshots need --out");
    }
    if (cmd == "count" && c.samples < 16) usage("count: --samples must be at least 16");
}

// ---- output helpers

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string cell(const json& j)
{
    if (j.is_number_float()) return format_number(j.get<double>());
    if (j.is_number()) return j.dump();
    if (j.is_boolean()) return j.get<bool>() ? "1" : "0";
    if (j.is_null()) return "nan";
    return j.get<std::string>();
}

// NaN has no JSON form; it becomes null.
json num(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

std::string render(const Table& t, const std::string& command, const std::string& format)
{
    if (format == "json") {
        json doc;
        doc["format"] = "nep-phaseplane v1 " + command;
        doc["columns"] = t.columns;
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(r);
        doc["rows"] = rows;
        return doc.dump(1) + "\n";
    }
    std::string s = csv_header(command);
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? "," : "") + t.columns[i];
    }
    s += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            s += (i ? "," : "") + cell(r[i]);
        }
        s += "\n";
    }
    return s;
}

// Artifact to --out if given, else stdout.  The summary goes to stdout in the
// first case and to stderr in the second so stdout stays machine-readable.
void emit(const RunConfig& c, const std::string& content, const std::string& summary, std::ostream& out,
          std::ostream& err)
{
    if (c.out.empty()) {
        out << content;
        err << summary << "\n";
    } else {
        write_file_atomic(c.out, content);
        out << summary << "\n";
    }
}

NonlinearModel resolve_model(const RunConfig& c, const std::string& fallback = {})
{
    if (!c.model_file.empty()) return load_model_config(c.model_file);
    if (!c.model.empty()) return builtin_model(c.model);
    if (!fallback.empty()) return builtin_model(fallback);
    usage(c.command + ": --model or --model-file is required");
}

BoundaryCondition resolve_bc(const RunConfig& c)
{
    return c.bc == "dirichlet" ? BoundaryCondition::dirichlet() : BoundaryCondition::robin(*c.alpha);
}

std::string type_split(const std::map<SolutionType, int>& n)
{
    auto get = [&](SolutionType t) {
        auto it = n.find(t);
        return it == n.end() ? 0 : it->second;
    };
    std::ostringstream os;
    os << "s:" << get(SolutionType::s) << " i:" << get(SolutionType::i) << " d:" << get(SolutionType::d)
       << " c:" << get(SolutionType::c);
    return os.str();
}

// ---- commands

int cmd_phase(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    NonlinearModel model = resolve_model(c);
    BoundaryCondition bc = resolve_bc(c);
    Potential pot(model, default_convention(bc));
    const double C = *c.energy;
    PhaseGeometry g;
    if (bc.is_dirichlet()) {
        g = dirichlet_geometry(pot, C);
    } else {
        g = intersections(pot, std::sqrt(*c.lambda) / bc.alpha, C);
    }

    double lower = pot.range_lower();
    double vmax = std::isfinite(lower) ? std::sqrt(2.0 * std::max(0.0, C - lower)) : 0.0;
    for (const auto& p : g.plus) vmax = std::max(vmax, 1.5 * std::fabs(p.v));
    if (!(vmax > 0.0)) vmax = std::sqrt(2.0 * std::max(1.0, std::fabs(C)));

    Table t{{"kind", "label", "v", "u"}, {}};
    for (int j = 0; j < c.n; ++j) {
        double v = -vmax + 2.0 * vmax * (j + 0.5) / c.n;
        try {
            t.rows.push_back({"curve", "K", v, curve_height(pot, C, v)});
        } catch (const Error&) {
            // outside the range of F: K_C has no point above this v
        }
    }
    for (int j = 0; j < c.n; ++j) {
        double v = -vmax + 2.0 * vmax * j / (c.n - 1);
        if (bc.is_dirichlet()) {
            t.rows.push_back({"line_axis", "u=0", v, 0.0});
        } else {
            t.rows.push_back({"line_plus", "L+", v, g.gamma_star * v});
            t.rows.push_back({"line_minus", "L-", v, -g.gamma_star * v});
        }
    }
    for (std::size_t i = 0; i < g.plus.size(); ++i) {
        t.rows.push_back({"point_plus", "P" + std::to_string(i + 1) + "+", g.plus[i].v, g.plus[i].u});
        t.rows.push_back({"point_minus", "P" + std::to_string(i + 1) + "-", g.minus[i].v, g.minus[i].u});
    }

    std::ostringstream sum;
    sum << "phase: C=" << format_number(C) << " intersections: " << g.plus.size();
    if (g.C_tilde) sum << " C_tilde=" << format_number(*g.C_tilde);
    if (!bc.is_dirichlet()) {
        sum << " trajectories:";
        for (const auto& cls : classify(g)) sum << " " << cls.label << "=" << to_string(cls.type);
    }
    emit(c, render(t, "phase", c.format), sum.str(), out, err);
    return 0;
}

int cmd_timemap(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    NonlinearModel model = resolve_model(c);
    BoundaryCondition bc = resolve_bc(c);
    Potential pot(model, default_convention(bc));
    TimeMapBranch branch = time_map_branch_from_string(c.branch);
    double gamma_star = bc.is_robin() ? std::sqrt(*c.lambda) / bc.alpha : 0.0;

    std::vector<double> Cs;
    if (*c.cmin > 0.0) {
        Cs = log_space(*c.cmin, *c.cmax, c.n);
    } else {
        for (int j = 0; j < c.n; ++j) Cs.push_back(*c.cmin + (*c.cmax - *c.cmin) * j / (c.n - 1));
    }
    auto samples = sweep(pot, *c.lambda, gamma_star, branch, Cs);
    Table t{{"C", "length", "valid"}, {}};
    int valid = 0;
    for (const auto& s : samples) {
        valid += s.valid;
        t.rows.push_back({s.C, s.valid ? num(s.length) : json(nullptr), s.valid ? 1 : 0});
    }
    std::ostringstream sum;
    sum << "timemap: branch " << to_string(branch) << " samples: " << samples.size() << " valid: " << valid;
    emit(c, render(t, "timemap", c.format), sum.str(), out, err);
    return 0;
}

int cmd_count(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    NonlinearModel model = resolve_model(c);
    ProblemSpec p(c.length, resolve_bc(c), *c.lambda, model);
    p.validate();
    CountOptions opt;
    opt.samples = c.samples;
    SolutionCount n = count_solutions(p, opt);

    std::map<SolutionType, int> split;
    Table t{{"C", "type", "branch", "label", "tangent", "boundary_case"}, {}};
    for (const auto& r : n.roots) {
        ++split[r.trajectory.type];
        t.rows.push_back({r.C, to_string(r.trajectory.type), to_string(r.branch), r.trajectory.label, r.tangent ? 1 : 0,
                          r.trajectory.boundary_case ? 1 : 0});
    }
    std::string summary = "solutions: " + std::to_string(n.total()) + " (" + type_split(split) + ")";
    if (c.out.empty()) {
        out << summary << "\n";
    } else {
        write_file_atomic(c.out, render(t, "count", c.format));
        out << summary << "\n";
    }
    (void)err;
    return 0;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream&)
{
    NonlinearModel model = resolve_model(c);
    ProblemSpec p(c.length, resolve_bc(c), *c.lambda, model);
    p.validate();
    ShootOptions opt;
    opt.s_min = c.s_min;
    opt.s_max = c.s_max;
    opt.n_scan = c.n_scan;
    opt.n = c.points;
    ShootResult r = shoot(p, opt);

    fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create directory " + dir.string());

    bool greens_ok = p.bc.is_robin() && 2.0 + p.bc.alpha * p.length != 0.0;
    json summary;
    summary["format"] = "nep-phaseplane v1 solve";
    summary["model"] = model.name;
    summary["bc"] = c.bc;
    summary["alpha"] = p.bc.is_robin() ? json(p.bc.alpha) : json(nullptr);
    summary["lambda"] = p.lambda;
    summary["length"] = p.length;
    json list = json::array();
    std::map<SolutionType, int> split;
    for (std::size_t k = 0; k < r.profiles.size(); ++k) {
        const SolutionProfile& prof = r.profiles[k];
        ++split[prof.type];
        std::string name = "profile_" + std::to_string(k) + ".csv";
        write_file_atomic(dir / name, profile_to_csv(prof, "solve"));
        json e;
        e["file"] = name;
        e["class"] = to_string(prof.type);
        e["C"] = prof.energy;
        e["u0"] = prof.u.front();
        e["u_max"] = prof.u_max();
        e["shooting_parameter"] = r.parameters[k];
        e["boundary_residual"] = std::fabs(shooting_residual(p, r.parameters[k], c.points));
        e["energy_drift"] = energy_drift(p.pot, prof);
        e["integral_residual"] = greens_ok ? num(integral_residual(p, prof)) : json(nullptr);
        list.push_back(e);
    }
    summary["solutions"] = list;
    summary["blowups"] = r.blowups.size();
    write_file_atomic(dir / "summary.json", summary.dump(1) + "\n");

    out << "solve: " << r.profiles.size() << " profiles (" << type_split(split) << ") in " << dir.string() << "\n";
    return r.profiles.empty() ? 1 : 0;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    SolutionProfile prof = read_profile(c.profile);
    NonlinearModel model = resolve_model(c, prof.model_name);
    ProblemSpec p(prof.length(), prof.bc, prof.lambda, model);
    SpectrumResult s = linearized_spectrum(p, prof, c.k, c.grid);
    json doc;
    doc["format"] = "nep-phaseplane v1 spectrum";
    doc["profile"] = c.profile;
    doc["lambda"] = prof.lambda;
    doc["grid"] = s.grid;
    doc["mu"] = s.mu;
    doc["error"] = s.error;
    std::string summary = "spectrum: mu1=" + format_number(s.mu.front()) + " error=" + format_number(s.error.front());
    emit(c, doc.dump(1) + "\n", summary, out, err);
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    SolutionProfile prof = read_profile(c.profile);
    NonlinearModel model = resolve_model(c, prof.model_name);
    double L = prof.length();
    ProblemSpec p(L, prof.bc, prof.lambda, model);
    double h = L / static_cast<double>(prof.size() - 1);
    double tol = 10.0 * h * h;

    json doc;
    doc["format"] = "nep-phaseplane v1 verify";
    doc["profile"] = c.profile;
    double residual = 0.0;
    std::string kind;
    if (prof.bc.is_robin() && 2.0 + prof.bc.alpha * L != 0.0) {
        residual = integral_residual(p, prof);
        kind = "integral";
    } else {
        // Dirichlet or no Green's function: boundary values and energy conservation.
        residual = std::max({std::fabs(prof.u.front()), std::fabs(prof.u.back()), energy_drift(p.pot, prof)});
        kind = "boundary";
    }
    double defect = compatibility_defect(model, prof, L);
    doc["residual_kind"] = kind;
    doc["residual"] = residual;
    doc["tolerance"] = tol;
    doc["compatibility_defect"] = defect;
    doc["passed"] = residual <= tol;

    std::ostringstream sum;
    sum << "residual=" << format_number(residual) << " (" << kind << ", tol " << format_number(tol)
        << ") compatibility=" << format_number(defect);
    if (c.out.empty()) {
        out << sum.str() << "\n";
    } else {
        write_file_atomic(c.out, doc.dump(1) + "\n");
        out << sum.str() << "\n";
    }
    if (!(residual <= tol)) {
        err << "verify: residual exceeds tolerance\n";
        return 1;
    }
    return 0;
}

int cmd_branch(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    NonlinearModel model = resolve_model(c);
    FemProblem fem{c.length, resolve_bc(c), model, c.mesh};
    DiscreteState start;
    if (c.seed == "trivial") {
        start = trivial_state(fem);
    } else {
        start = seed_from_profile(fem, read_profile(c.seed_file));
    }
    ContinuationOptions opt;
    opt.steps = c.steps;
    opt.ds = c.ds;
    opt.ds_max = c.ds_max;
    opt.lambda_max = c.lambda_max;
    opt.direction = c.direction;
    opt.stability_every = c.stability_every;
    Branch br = trace_branch(fem, start, opt);

    Table t{{"s", "lambda", "u_max", "turning", "mu1_sign", "mu1"}, {}};
    for (const auto& pt : br.points) {
        t.rows.push_back({pt.state.s, pt.state.lambda, pt.u_max, pt.turning ? 1 : 0, pt.mu1_sign, num(pt.mu1)});
    }
    std::ostringstream sum;
    sum << "branch: " << br.points.size() << " points, " << br.turning_points.size() << " turning points";
    for (auto k : br.turning_points) sum << " lambda=" << format_number(br.points[k].state.lambda);
    sum << ", stop: " << br.stop_reason;
    emit(c, render(t, "branch", c.format), sum.str(), out, err);

    if (c.snapshot_every > 0) {
        json doc;
        doc["format"] = "nep-phaseplane v1 branch-states";
        doc["N"] = fem.N;
        doc["length"] = fem.length;
        json states = json::array();
        for (std::size_t i = 0; i < br.points.size(); i += static_cast<std::size_t>(c.snapshot_every)) {
            const auto& st = br.points[i].state;
            states.push_back({{"index", i}, {"s", st.s}, {"lambda", st.lambda}, {"u", st.u}});
        }
        doc["states"] = states;
        write_file_atomic(c.out + ".states.json", doc.dump() + "\n");
    }
    return br.points.size() < 2 ? 1 : 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args)
{
    RunConfig c;
    CLI::App app{"Phase-plane analysis and continuation for u'' + lambda f(u) = 0", "nep"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every command");

    auto* phase = app.add_subcommand("phase", "K_C samples, boundary lines and intersection points");
    add_model_options(phase, c, true);
    add_problem_options(phase, c);
    phase->add_option("--C", c.energy, "energy level");
    phase->add_option("--n", c.n, "samples per curve");

    auto* timemap = app.add_subcommand("timemap", "length function of one branch over a C range");
    add_model_options(timemap, c, true);
    add_problem_options(timemap, c);
    timemap->add_option("--branch", c.branch, "dirichlet, sym1, sym2, asym_monotone, asym_nonmonotone")
        ->check(CLI::IsMember({"dirichlet", "sym1", "sym2", "asym_monotone", "asym_nonmonotone"}));
    timemap->add_option("--cmin", c.cmin, "smallest energy");
    timemap->add_option("--cmax", c.cmax, "largest energy");
    timemap->add_option("--n", c.n, "number of energies (log-spaced when cmin > 0)");

    auto* solve = app.add_subcommand("solve", "all solutions by shooting; profile CSVs and summary.json");
    add_model_options(solve, c, true);
    add_problem_options(solve, c);
    solve->add_option("--s-min", c.s_min, "lower end of the shooting scan");
    solve->add_option("--s-max", c.s_max, "upper end of the shooting scan");
    solve->add_option("--scan", c.n_scan, "scan points");
    solve->add_option("--points", c.points, "RK4 steps per profile");

    auto* spectrum = app.add_subcommand("spectrum", "linearised eigenvalues of a stored profile");
    add_model_options(spectrum, c, false);
    spectrum->add_option("--profile", c.profile, "profile CSV");
    spectrum->add_option("--k", c.k, "number of eigenvalues");
    spectrum->add_option("--grid", c.grid, "finite elements");

    auto* branch = app.add_subcommand("branch", "pseudo-arclength continuation of a solution branch");
    add_model_options(branch, c, true);
    add_problem_options(branch, c);
    branch->add_option("--seed", c.seed, "trivial | profile FILE")
        ->expected(1, 2)
        ->each([&c](const std::string& s) {
            if (s == "trivial" || s == "profile") {
                c.seed = s;
            } else {
                c.seed_file = s;
            }
        });
    branch->add_option("--steps", c.steps, "continuation steps");
    branch->add_option("--N", c.mesh, "finite elements");
    branch->add_option("--ds", c.ds, "initial arclength step");
    branch->add_option("--ds-max", c.ds_max, "largest arclength step");
    branch->add_option("--lambda-max", c.lambda_max, "stop when lambda exceeds this");
    branch->add_option("--direction", c.direction, "initial sign of dlambda");
    branch->add_option("--stability-every", c.stability_every, "mu1 sign every k points (0 = off)");
    branch->add_option("--snapshot-every", c.snapshot_every, "full states every k points to OUT.states.json");

    auto* count = app.add_subcommand("count", "number and types of solutions from the time maps");
    add_model_options(count, c, true);
    add_problem_options(count, c);
    count->add_option("--samples", c.samples, "samples per branch");

    auto* verify = app.add_subcommand("verify", "integral-equation residual of a stored profile");
    add_model_options(verify, c, false);
    verify->add_option("--profile", c.profile, "profile CSV");

    for (auto* sub : {phase, timemap, solve, spectrum, branch, count, verify}) {
        sub->add_option("--out", c.out, "output path");
        sub->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        c.command = "help";
        const CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        c.help_text = target->help();
        return c;
    } catch (const CLI::CallForAllHelp&) {
        c.command = "help";
        c.help_text = app.help("", CLI::AppFormatMode::All);
        return c;
    } catch (const CLI::ParseError& e) {
        usage(e.what());
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.seed == "profile" && c.seed_file.empty() && c.command == "branch") {
        usage("branch: --seed profile needs a file");
    }
    validate(c);
    return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.command == "help") {
        out << c.help_text;
        return 0;
    }
    configure_threads_from_env();
    try {
        if (c.command == "phase") return cmd_phase(c, out, err);
        if (c.command == "timemap") return cmd_timemap(c, out, err);
        if (c.command == "solve") return cmd_solve(c, out, err);
        if (c.command == "spectrum") return cmd_spectrum(c, out, err);
        if (c.command == "branch") return cmd_branch(c, out, err);
        if (c.command == "count") return cmd_count(c, out, err);
        if (c.command == "verify") return cmd_verify(c, out, err);
        usage("unknown command '" + c.command + "'");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::usage ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    try {
        c = parse_args(args);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\nrun with --help for the command table\n";
        return 2;
    }
    return run(c, out, err);
}

}  // namespace nep::cli
