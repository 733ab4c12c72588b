#include <fermat3/cli.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

#include <fermat3/elliptic.hpp>
#include <fermat3/errors.hpp>
#include <fermat3/fermat_curve.hpp>
#include <fermat3/nevanlinna.hpp>

namespace fermat3::cli
{

namespace
{

std::vector<std::string> complex_cells(const std::optional<cd> &z)
{
    if (!z) {
        return {"", ""};
    }
    return {format_number(z->real()), format_number(z->imag())};
}

const std::vector<std::string> solution_header{
    "case",  "A_re",  "A_im",  "C_re",  "C_im",      "D_re",             "D_im",             "c0_re",  "c0_im", "c1_re",
    "c1_im", "mu_re", "mu_im", "nu_re", "nu_im",     "c_freedom",        "max_abs_residual", "max_rel_residual", "verdict"};

struct SolutionRow {
    std::string case_name;
    std::optional<cd> A, C, D, c0, c1;
    cd mu, nu;
    bool c_freedom = false;
    std::optional<double> max_abs, max_rel;
    Verdict verdict;
};

std::vector<std::string> solution_cells(const SolutionRow &row)
{
    std::vector<std::string> cells{row.case_name};
    for (const auto &z : {row.A, row.C, row.D, row.c0, row.c1, std::optional<cd>(row.mu), std::optional<cd>(row.nu)}) {
        const auto pair = complex_cells(z);
        cells.insert(cells.end(), pair.begin(), pair.end());
    }
    cells.push_back(row.c_freedom ? "true" : "false");
    cells.push_back(row.max_abs ? format_number(*row.max_abs) : "");
    cells.push_back(row.max_rel ? format_number(*row.max_rel) : "");
    cells.push_back(to_string(row.verdict));
    return cells;
}

CandidateSolution candidate_from_constants(const EquationInstance &inst, cd amp, cd constant, std::optional<cd> rate)
{
    CandidateSolution sol;
    sol.case_tag = classify(inst);
    const auto fwd = forward_constants(inst);
    sol.mu = fwd.mu;
    sol.nu = fwd.nu;
    sol.amp_A = amp;
    sol.free_C = constant;
    if (rate) {
        sol.rate_D = *rate;
    } else if (sol.case_tag == CaseTag::Case3) {
        const auto m = minors(inst);
        sol.rate_D = (inst.a(1) * inst.b(0) - inst.a(0) * inst.b(1)) / m.m12 + cd(0.0);
    }
    sol.pair = FermatPair{amp * fwd.mu, amp * fwd.nu};
    sol.c_freedom = c_freedom_check(inst, sol.rate_D).free;
    return sol;
}

Report solution_report(const CandidateSolution &sol, const VerificationReport &report)
{
    Report out;
    out.json = solution_json(sol, report);
    out.csv.header = solution_header;
    out.csv.rows.push_back(solution_cells({to_string(sol.case_tag), sol.amp_A, sol.free_C, sol.rate_D, sol.pair.c0,
                                           sol.pair.c1, sol.mu, sol.nu, sol.c_freedom, report.max_abs_residual,
                                           report.max_rel_residual, report.verdict}));
    return out;
}

int run_solve(const RunConfig &cfg, Report &out)
{
    const auto inst = cfg.instance();
    const auto tag = classify(inst);
    FermatPair pair{1, 0};
    if (cfg.pair_mode == PairMode::Forward) {
        const auto fwd = forward_constants(inst);
        if (!fwd.pair) {
            out.json = {{"case", to_string(tag)},
                        {"A", nullptr},
                        {"C", nullptr},
                        {"D", nullptr},
                        {"c0", nullptr},
                        {"c1", nullptr},
                        {"mu", complex_to_json(fwd.mu)},
                        {"nu", complex_to_json(fwd.nu)},
                        {"c_freedom", false},
                        {"max_rel_residual", nullptr},
                        {"verdict", to_string(Verdict::NoExponentialSolution)},
                        {"notes", {"mu^3 + nu^3 = 0: the exponential ansatz has no amplitude"}}};
            out.csv.header = solution_header;
            out.csv.rows.push_back(solution_cells({to_string(tag), std::nullopt, std::nullopt, std::nullopt,
                                                   std::nullopt, std::nullopt, fwd.mu, fwd.nu, false, std::nullopt,
                                                   std::nullopt, Verdict::NoExponentialSolution}));
            return exit_code::no_exponential_solution;
        }
        pair = *fwd.pair;
    } else {
        pair = FermatPair::make(*cfg.c0, *cfg.c1);
    }

    auto sol = solve_theorem(inst, pair, cfg.requested_C);
    // The solver drops a C that does not cancel; verify the requested one so
    // the report shows why.
    auto candidate = sol;
    candidate.free_C = cfg.requested_C;
    const auto report = verify_solution(inst, candidate, cfg.grid_or_default());
    out = solution_report(candidate, report);
    return exit_code_for(report.verdict);
}

int run_verify(const RunConfig &cfg, Report &out)
{
    const auto inst = cfg.instance();
    const auto sol = candidate_from_constants(inst, *cfg.A, cfg.requested_C, cfg.D);
    const auto report = verify_solution(inst, sol, cfg.grid_or_default());
    out = solution_report(sol, report);
    return exit_code_for(report.verdict);
}

std::vector<cd> cell_grid(const Lattice &lattice, int per_side)
{
    std::vector<cd> points;
    points.reserve(static_cast<std::size_t>(per_side) * static_cast<std::size_t>(per_side));
    for (int i = 0; i < per_side; ++i) {
        for (int j = 0; j < per_side; ++j) {
            const double x = (i + 0.5) / per_side - 0.5;
            const double y = (j + 0.5) / per_side - 0.5;
            points.push_back(x * lattice.omega1 + y * lattice.omega2);
        }
    }
    return points;
}

nlohmann::json lattice_json(const Lattice &lattice)
{
    return {{"omega1", complex_to_json(lattice.omega1)},
            {"omega2", complex_to_json(lattice.omega2)},
            {"area", lattice.area}};
}

int run_wp(const RunConfig &cfg, Report &out)
{
    const auto &lattice = equianharmonic_lattice();
    const auto settings = EvaluationSettings::defaults(lattice);
    out.csv.header = {"re_z", "im_z", "re_p", "im_p", "ode_residual"};
    auto samples = nlohmann::json::array();
    double worst_scaled = 0;
    std::size_t skipped = 0;
    for (cd z : cell_grid(lattice, cfg.grid_or_default())) {
        WpValue v;
        try {
            v = wp_eval(z, lattice, settings);
        } catch (const PoleProximity &) {
            ++skipped;
            continue;
        }
        const double ode = std::abs(v.p_prime * v.p_prime - 4.0 * v.p * v.p * v.p + 1.0);
        worst_scaled = std::max(worst_scaled, ode / (1.0 + std::pow(std::abs(v.p), 3)));
        out.csv.rows.push_back({format_number(z.real()), format_number(z.imag()), format_number(v.p.real()),
                                format_number(v.p.imag()), format_number(ode)});
        samples.push_back({{"z", complex_to_json(z)},
                           {"p", complex_to_json(v.p)},
                           {"p_prime", complex_to_json(v.p_prime)},
                           {"ode_residual", ode}});
    }
    out.json = {{"lattice", lattice_json(lattice)},
                {"samples", samples},
                {"skipped_near_poles", skipped},
                {"max_scaled_ode_residual", worst_scaled}};
    return worst_scaled <= 1e-9 ? exit_code::success : exit_code::failure;
}

int run_param(const RunConfig &cfg, Report &out)
{
    const auto &lattice = equianharmonic_lattice();
    const auto settings = EvaluationSettings::defaults(lattice);
    const PolynomialH h(Eigen::VectorXcd::Map(cfg.h.data(), static_cast<Eigen::Index>(cfg.h.size())));
    const CubeRootOfUnity eta(cfg.eta);

    out.csv.header = {"re_z", "im_z", "fermat_residual", "reflection_residual", "cubic_residual", "relation_residual"};
    double worst_fermat = 0, worst_reflection = 0, worst_cubic = 0, worst_relation = 0;
    std::size_t skipped = 0, used = 0;
    for (cd z : cell_grid(lattice, cfg.grid_or_default())) {
        try {
            const auto FG = baker_compose(h, eta, z, lattice, settings);
            const cd reflected = baker_second_via_reflection(h, eta, z, lattice, settings);
            const auto wp_h = wp_eval(h(z), lattice, settings);
            const auto ids = identity_residuals(FG.f, wp_h);
            const double fermat = std::abs(FG.f * FG.f * FG.f + FG.g * FG.g * FG.g - 1.0);
            const double reflection = std::abs(FG.g - reflected);
            const double p3 = 1.0 + std::pow(std::abs(wp_h.p), 3);
            worst_fermat = std::max(worst_fermat,
                                    fermat / (1.0 + std::pow(std::abs(FG.f), 3) + std::pow(std::abs(FG.g), 3)));
            worst_reflection = std::max(worst_reflection, reflection / (1.0 + std::abs(FG.g)));
            worst_cubic = std::max(worst_cubic, ids.cubic_residual / p3);
            worst_relation = std::max(worst_relation, ids.relation_residual / p3);
            out.csv.rows.push_back({format_number(z.real()), format_number(z.imag()), format_number(fermat),
                                    format_number(reflection), format_number(ids.cubic_residual),
                                    format_number(ids.relation_residual)});
            ++used;
        } catch (const PoleProximity &) {
            ++skipped;
        } catch (const PoleOfParametrization &) {
            ++skipped;
        }
    }
    auto h_json = nlohmann::json::array();
    for (cd coef : cfg.h) {
        h_json.push_back(complex_to_json(coef));
    }
    const bool ok = worst_fermat <= 1e-9 && worst_reflection <= 1e-9 && worst_cubic <= 1e-8 && worst_relation <= 1e-8;
    out.json = {{"h", h_json},
                {"eta", cfg.eta},
                {"points", used},
                {"skipped", skipped},
                {"max_scaled_fermat_residual", worst_fermat},
                {"max_scaled_reflection_residual", worst_reflection},
                {"max_scaled_cubic_residual", worst_cubic},
                {"max_scaled_relation_residual", worst_relation},
                {"pass", ok}};
    return ok ? exit_code::success : exit_code::failure;
}

std::vector<double> radius_grid(const RunConfig &cfg)
{
    std::vector<double> radii;
    for (int k = 0; k < cfg.r_count; ++k) {
        const double t = cfg.r_count == 1 ? 0.0 : static_cast<double>(k) / (cfg.r_count - 1);
        radii.push_back(cfg.r_spacing == "log" ? cfg.r_min * std::pow(cfg.r_max / cfg.r_min, t)
                                               : cfg.r_min + t * (cfg.r_max - cfg.r_min));
    }
    return radii;
}

int run_nevanlinna(const RunConfig &cfg, Report &out)
{
    const auto &lattice = equianharmonic_lattice();
    MeromorphicEvaluator f;
    if (cfg.function == "wp") {
        f = wp_evaluator(lattice);
    } else if (cfg.function == "exp") {
        f = exp_evaluator();
    } else {
        f = rational_evaluator([](cd z) { return (z * z + 1.0) / (z - 2.0); }, {{cd(2.0), 1}}, "(z^2+1)/(z-2)");
    }
    const auto curve = characteristic_curve(f, radius_grid(cfg), cfg.grid_or_default());
    const bool with_ratio = cfg.function == "wp";
    const auto ratios = wp_asymptotic_check(curve, lattice);

    out.csv.header = {"r", "m", "N", "T"};
    if (with_ratio) {
        out.csv.header.push_back("ratio");
    }
    auto samples = nlohmann::json::array();
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const auto &s = curve.samples[i];
        std::vector<std::string> row{format_number(s.r), format_number(s.m), format_number(s.N), format_number(s.T)};
        nlohmann::json js{{"r", s.r}, {"m", s.m}, {"N", s.N}, {"T", s.T}};
        if (with_ratio) {
            row.push_back(format_number(ratios[i].ratio));
            js["ratio"] = ratios[i].ratio;
        }
        out.csv.rows.push_back(std::move(row));
        samples.push_back(std::move(js));
    }
    out.json = {{"function", f.label}, {"curve", samples}, {"notes", curve.notes}};
    const auto positive = std::count_if(curve.samples.begin(), curve.samples.end(), [](const auto &s) { return s.T > 0; });
    if (positive >= 6 || positive == 0) {
        const auto order = order_estimate(curve);
        out.json["order"] = {{"rho_hat", order.rho_hat},
                             {"fit_range", {order.fit_range.first, order.fit_range.second}},
                             {"fit_quality", order.fit_quality},
                             {"notes", order.notes}};
    } else {
        out.json["order"] = nullptr;
        out.json["notes"].push_back("order estimate skipped: fewer than six samples with T > 0");
    }
    return exit_code::success;
}

} // namespace

nlohmann::json solution_json(const CandidateSolution &sol, const VerificationReport &report)
{
    nlohmann::json flags = nlohmann::json::object();
    for (const auto &[name, value] : report.constraint_flags) {
        flags[name] = value;
    }
    return {{"case", to_string(sol.case_tag)},
            {"A", complex_to_json(sol.amp_A)},
            {"C", complex_to_json(sol.free_C)},
            {"D", complex_to_json(sol.rate_D)},
            {"c0", complex_to_json(sol.pair.c0)},
            {"c1", complex_to_json(sol.pair.c1)},
            {"mu", complex_to_json(sol.mu)},
            {"nu", complex_to_json(sol.nu)},
            {"c_freedom", sol.c_freedom},
            {"max_abs_residual", report.max_abs_residual},
            {"max_rel_residual", report.max_rel_residual},
            {"verdict", to_string(report.verdict)},
            {"constraint_flags", flags},
            {"notes", sol.notes},
            {"diagnostics", report.diagnostics}};
}

int exit_code_for(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Exact:
        return exit_code::success;
    case Verdict::FailsUnlessCZero:
        return exit_code::fails_unless_c_zero;
    case Verdict::NoExponentialSolution:
        return exit_code::no_exponential_solution;
    case Verdict::Inexact:
        return exit_code::failure;
    }
    return exit_code::failure;
}

int dispatch(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
    Report report;
    int code = exit_code::failure;
    try {
        switch (cfg.command) {
        case Command::Solve:
            code = run_solve(cfg, report);
            break;
        case Command::Verify:
            code = run_verify(cfg, report);
            break;
        case Command::Wp:
            code = run_wp(cfg, report);
            break;
        case Command::Param:
            code = run_param(cfg, report);
            break;
        case Command::Nevanlinna:
            code = run_nevanlinna(cfg, report);
            break;
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const AssumptionViolated &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::failure;
    }
    if (!emit_report(report, cfg.format, cfg.output_path, out)) {
        err << "error: cannot write output to '" << cfg.output_path << "'\n";
        return exit_code::failure;
    }
    return code;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    auto parsed = parse_config(argc, argv, out, err);
    if (const int *code = std::get_if<int>(&parsed)) {
        return *code;
    }
    return dispatch(std::get<RunConfig>(parsed), out, err);
}

} // namespace fermat3::cli
