#include <fermat3/cli.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include <fermat3/errors.hpp>

namespace fermat3::cli
{

namespace
{

double parse_real(std::string_view text, const std::string &context)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw UsageError("malformed number '" + std::string(text) + "' in " + context);
    }
    return value;
}

const std::map<std::string, Command> &command_names()
{
    static const std::map<std::string, Command> names{{"solve", Command::Solve},
                                                      {"verify", Command::Verify},
                                                      {"wp", Command::Wp},
                                                      {"param", Command::Param},
                                                      {"nevanlinna", Command::Nevanlinna}};
    return names;
}

std::array<cd, 3> complex_triple_from_json(const nlohmann::json &j, const std::string &key)
{
    if (!j.is_array() || j.size() != 3) {
        throw UsageError("'" + key + "' must be an array of three [re, im] pairs");
    }
    return {complex_from_json(j[0], key), complex_from_json(j[1], key), complex_from_json(j[2], key)};
}

nlohmann::json complex_triple_to_json(const std::array<cd, 3> &v)
{
    return nlohmann::json::array({complex_to_json(v[0]), complex_to_json(v[1]), complex_to_json(v[2])});
}

std::array<cd, 3> complex_triple_from_flags(const std::vector<std::string> &parts, const std::string &flag)
{
    if (parts.size() != 3) {
        throw UsageError(flag + " takes exactly three complex values");
    }
    return {parse_complex_literal(parts[0]), parse_complex_literal(parts[1]), parse_complex_literal(parts[2])};
}

template <typename T>
T get_number(const nlohmann::json &j, const std::string &key)
{
    if (!j.is_number()) {
        throw UsageError("'" + key + "' must be a number");
    }
    if constexpr (std::is_integral_v<T>) {
        if (!j.is_number_integer()) {
            throw UsageError("'" + key + "' must be an integer");
        }
    }
    return j.get<T>();
}

std::string get_string(const nlohmann::json &j, const std::string &key)
{
    if (!j.is_string()) {
        throw UsageError("'" + key + "' must be a string");
    }
    return j.get<std::string>();
}

} // namespace

std::string to_string(Command command)
{
    for (const auto &[name, value] : command_names()) {
        if (value == command) {
            return name;
        }
    }
    return "unknown";
}

cd parse_complex_literal(const std::string &text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        return {parse_real(text, "'" + text + "'"), 0.0};
    }
    if (text.find(',', comma + 1) != std::string::npos) {
        throw UsageError("complex literal '" + text + "' must be 're,im'");
    }
    const std::string_view view(text);
    return {parse_real(view.substr(0, comma), "'" + text + "'"), parse_real(view.substr(comma + 1), "'" + text + "'")};
}

nlohmann::json complex_to_json(cd z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

cd complex_from_json(const nlohmann::json &j, const std::string &key)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw UsageError("'" + key + "' must hold complex numbers as [re, im]");
    }
    const cd z(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw UsageError("'" + key + "' is not finite");
    }
    return z;
}

EquationInstance RunConfig::instance() const
{
    if (!a || !b) {
        throw UsageError("both coefficient rows --a and --b are required");
    }
    if (!c) {
        throw UsageError("the shift --c is required");
    }
    if (*c == cd(0)) {
        throw UsageError("the shift c must be nonzero");
    }
    return EquationInstance::make(*a, *b, alpha, beta, *c);
}

int RunConfig::grid_or_default() const
{
    if (grid) {
        return *grid;
    }
    switch (command) {
    case Command::Solve:
    case Command::Verify:
        return 64;
    case Command::Wp:
        return 50;
    case Command::Param:
        return 10;
    case Command::Nevanlinna:
        return 256;
    }
    return 64;
}

RunConfig apply_config_json(const nlohmann::json &doc, RunConfig cfg)
{
    if (!doc.is_object()) {
        throw UsageError("config file must hold a JSON object");
    }
    for (const auto &[key, value] : doc.items()) {
        if (key == "command") {
            const auto name = get_string(value, key);
            const auto it = command_names().find(name);
            if (it == command_names().end()) {
                throw UsageError("unknown command '" + name + "'");
            }
            cfg.command = it->second;
        } else if (key == "a") {
            cfg.a = complex_triple_from_json(value, key);
        } else if (key == "b") {
            cfg.b = complex_triple_from_json(value, key);
        } else if (key == "alpha") {
            cfg.alpha = complex_from_json(value, key);
        } else if (key == "beta") {
            cfg.beta = complex_from_json(value, key);
        } else if (key == "c") {
            cfg.c = complex_from_json(value, key);
        } else if (key == "pair_mode") {
            const auto mode = get_string(value, key);
            if (mode == "forward") {
                cfg.pair_mode = PairMode::Forward;
            } else if (mode == "explicit") {
                cfg.pair_mode = PairMode::Explicit;
            } else {
                throw UsageError("pair_mode must be 'forward' or 'explicit'");
            }
        } else if (key == "c0") {
            cfg.c0 = complex_from_json(value, key);
        } else if (key == "c1") {
            cfg.c1 = complex_from_json(value, key);
        } else if (key == "C") {
            cfg.requested_C = complex_from_json(value, key);
        } else if (key == "A") {
            cfg.A = complex_from_json(value, key);
        } else if (key == "D") {
            cfg.D = complex_from_json(value, key);
        } else if (key == "grid") {
            cfg.grid = get_number<int>(value, key);
        } else if (key == "out") {
            cfg.output_path = get_string(value, key);
        } else if (key == "format") {
            const auto fmt = get_string(value, key);
            if (fmt == "json") {
                cfg.format = OutputFormat::Json;
            } else if (fmt == "csv") {
                cfg.format = OutputFormat::Csv;
            } else {
                throw UsageError("format must be 'json' or 'csv'");
            }
        } else if (key == "h") {
            if (!value.is_array()) {
                throw UsageError("'h' must be an array of [re, im] coefficients");
            }
            cfg.h.clear();
            for (const auto &coef : value) {
                cfg.h.push_back(complex_from_json(coef, key));
            }
        } else if (key == "eta") {
            cfg.eta = get_number<int>(value, key);
        } else if (key == "function") {
            cfg.function = get_string(value, key);
        } else if (key == "r_min") {
            cfg.r_min = get_number<double>(value, key);
        } else if (key == "r_max") {
            cfg.r_max = get_number<double>(value, key);
        } else if (key == "r_count") {
            cfg.r_count = get_number<int>(value, key);
        } else if (key == "r_spacing") {
            cfg.r_spacing = get_string(value, key);
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

nlohmann::json config_to_json(const RunConfig &cfg)
{
    nlohmann::json j;
    j["command"] = to_string(cfg.command);
    if (cfg.a) {
        j["a"] = complex_triple_to_json(*cfg.a);
    }
    if (cfg.b) {
        j["b"] = complex_triple_to_json(*cfg.b);
    }
    j["alpha"] = complex_to_json(cfg.alpha);
    j["beta"] = complex_to_json(cfg.beta);
    if (cfg.c) {
        j["c"] = complex_to_json(*cfg.c);
    }
    j["pair_mode"] = cfg.pair_mode == PairMode::Forward ? "forward" : "explicit";
    if (cfg.c0) {
        j["c0"] = complex_to_json(*cfg.c0);
    }
    if (cfg.c1) {
        j["c1"] = complex_to_json(*cfg.c1);
    }
    j["C"] = complex_to_json(cfg.requested_C);
    if (cfg.A) {
        j["A"] = complex_to_json(*cfg.A);
    }
    if (cfg.D) {
        j["D"] = complex_to_json(*cfg.D);
    }
    if (cfg.grid) {
        j["grid"] = *cfg.grid;
    }
    j["out"] = cfg.output_path;
    j["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
    j["h"] = nlohmann::json::array();
    for (cd coef : cfg.h) {
        j["h"].push_back(complex_to_json(coef));
    }
    j["eta"] = cfg.eta;
    j["function"] = cfg.function;
    j["r_min"] = cfg.r_min;
    j["r_max"] = cfg.r_max;
    j["r_count"] = cfg.r_count;
    j["r_spacing"] = cfg.r_spacing;
    return j;
}

void validate_config(const RunConfig &cfg)
{
    if (cfg.command == Command::Solve || cfg.command == Command::Verify) {
        (void)cfg.instance();
        if (cfg.grid_or_default() < 16) {
            throw UsageError("--grid must be at least 16 for solve and verify");
        }
    } else if (cfg.grid_or_default() < 1) {
        throw UsageError("--grid must be positive");
    }
    if (cfg.command == Command::Solve && cfg.pair_mode == PairMode::Explicit) {
        if (!cfg.c0 || !cfg.c1) {
            throw UsageError("--pair-mode explicit needs --c0 and --c1");
        }
        try {
            (void)FermatPair::make(*cfg.c0, *cfg.c1);
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.command == Command::Verify && !cfg.A) {
        throw UsageError("verify needs the candidate amplitude --A");
    }
    if (cfg.command == Command::Param) {
        if (cfg.h.empty() || cfg.h.size() > 9) {
            throw UsageError("--poly needs between 1 and 9 coefficients (degree <= 8)");
        }
        if (cfg.h.size() > 1 && cfg.h.back() == cd(0)) {
            throw UsageError("leading coefficient of --poly must be nonzero");
        }
        if (cfg.eta < 0 || cfg.eta > 2) {
            throw UsageError("--eta must be 0, 1 or 2");
        }
        if (cfg.grid_or_default() > 200) {
            throw UsageError("--grid for param is capped at 200 points per side");
        }
    }
    if (cfg.command == Command::Wp && cfg.grid_or_default() > 1000) {
        throw UsageError("--grid for wp is capped at 1000 points per side");
    }
    if (cfg.command == Command::Nevanlinna) {
        if (cfg.function != "wp" && cfg.function != "exp" && cfg.function != "rational") {
            throw UsageError("--function must be wp, exp or rational");
        }
        if (!(cfg.r_min > 0) || !(cfg.r_max >= cfg.r_min) || cfg.r_count < 1 || cfg.r_count > 400) {
            throw UsageError("radius grid needs 0 < r_min <= r_max and 1 <= r_count <= 400");
        }
        if (cfg.r_spacing != "linear" && cfg.r_spacing != "log") {
            throw UsageError("--r-spacing must be linear or log");
        }
        if (cfg.grid_or_default() < 256) {
            throw UsageError("--grid (initial angular nodes) must be at least 256 for nevanlinna");
        }
    }
}

std::variant<RunConfig, int> parse_config(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Fermat-type functional equation solver and equianharmonic wp toolkit", "fermat3"};
    app.require_subcommand(1);
    app.footer(R"(Complex values are written re,im on the command line and [re, im] in config files.

CSV columns:
  solve, verify  case,A_re,A_im,C_re,C_im,D_re,D_im,c0_re,c0_im,c1_re,c1_im,
                 mu_re,mu_im,nu_re,nu_im,c_freedom,max_abs_residual,max_rel_residual,verdict
  wp             re_z,im_z,re_p,im_p,ode_residual
  param          re_z,im_z,fermat_residual,reflection_residual,cubic_residual,relation_residual
  nevanlinna     r,m,N,T (plus ratio for --function wp)

Exit codes: 0 exact/success, 1 verification failed or internal error, 2 usage error,
            3 exact only with C = 0, 4 no exponential solution.)");

    std::string config_path;
    std::vector<std::string> a_flags, b_flags;
    std::string alpha_flag, beta_flag, c_flag, c0_flag, c1_flag, C_flag, A_flag, D_flag, pair_mode_flag;
    std::string format_flag, out_flag, function_flag, spacing_flag;
    std::vector<std::string> h_flags;
    int grid_flag = 0, eta_flag = 0, r_count_flag = 0;
    double r_min_flag = 0, r_max_flag = 0;

    app.add_option("--config", config_path, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
    auto *a_opt = app.add_option("--a", a_flags, "coefficients a0 a1 a2 (three re,im values)")->expected(3);
    auto *b_opt = app.add_option("--b", b_flags, "coefficients b0 b1 b2 (three re,im values)")->expected(3);
    auto *alpha_opt = app.add_option("--alpha", alpha_flag, "alpha (re,im)");
    auto *beta_opt = app.add_option("--beta", beta_flag, "beta (re,im)");
    auto *c_opt = app.add_option("--c", c_flag, "shift c != 0 (re,im)");
    auto *c0_opt = app.add_option("--c0", c0_flag, "explicit Fermat pair component c0 (re,im)");
    auto *c1_opt = app.add_option("--c1", c1_flag, "explicit Fermat pair component c1 (re,im)");
    auto *pair_opt = app.add_option("--pair-mode", pair_mode_flag, "forward | explicit")
                         ->check(CLI::IsMember({"forward", "explicit"}));
    auto *C_opt = app.add_option("--C", C_flag, "homogeneous constant C (re,im)");
    auto *A_opt = app.add_option("--A", A_flag, "candidate amplitude A for verify (re,im)");
    auto *D_opt = app.add_option("--D", D_flag, "candidate rate D for verify (re,im)");
    auto *grid_opt = app.add_option("--grid", grid_flag, "sampling size (see README)");
    auto *out_opt = app.add_option("--out", out_flag, "output path (default stdout)");
    auto *format_opt = app.add_option("--format", format_flag, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    auto *h_opt = app.add_option("--poly", h_flags, "inner polynomial coefficients, ascending (re,im each)");
    auto *eta_opt = app.add_option("--eta", eta_flag, "cube root of unity index 0, 1, 2");
    auto *function_opt = app.add_option("--function", function_flag, "wp | exp | rational");
    auto *r_min_opt = app.add_option("--r-min", r_min_flag, "smallest radius");
    auto *r_max_opt = app.add_option("--r-max", r_max_flag, "largest radius");
    auto *r_count_opt = app.add_option("--r-count", r_count_flag, "number of radii");
    auto *spacing_opt = app.add_option("--r-spacing", spacing_flag, "linear | log");

    std::map<CLI::App *, Command> subcommands;
    subcommands[app.add_subcommand("solve", "classify, solve and verify an equation instance")->fallthrough()]
        = Command::Solve;
    subcommands[app.add_subcommand("verify", "re-check a provided solution A, C, D")->fallthrough()]
        = Command::Verify;
    subcommands[app.add_subcommand("wp", "sample wp and wp' over one period cell")->fallthrough()] = Command::Wp;
    subcommands[app.add_subcommand("param", "Gross/Baker parametrization residual sweep")->fallthrough()]
        = Command::Param;
    subcommands[app.add_subcommand("nevanlinna", "Nevanlinna characteristic curve and order")->fallthrough()]
        = Command::Nevanlinna;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::success;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error &e) {
                throw UsageError(std::string("config file is not valid JSON: ") + e.what());
            }
            cfg = apply_config_json(doc, cfg);
        }
        for (const auto &[sub, command] : subcommands) {
            if (sub->parsed()) {
                cfg.command = command;
            }
        }
        if (a_opt->count() > 0) {
            cfg.a = complex_triple_from_flags(a_flags, "--a");
        }
        if (b_opt->count() > 0) {
            cfg.b = complex_triple_from_flags(b_flags, "--b");
        }
        if (alpha_opt->count() > 0) {
            cfg.alpha = parse_complex_literal(alpha_flag);
        }
        if (beta_opt->count() > 0) {
            cfg.beta = parse_complex_literal(beta_flag);
        }
        if (c_opt->count() > 0) {
            cfg.c = parse_complex_literal(c_flag);
        }
        if (c0_opt->count() > 0) {
            cfg.c0 = parse_complex_literal(c0_flag);
        }
        if (c1_opt->count() > 0) {
            cfg.c1 = parse_complex_literal(c1_flag);
        }
        if (pair_opt->count() > 0) {
            cfg.pair_mode = pair_mode_flag == "explicit" ? PairMode::Explicit : PairMode::Forward;
        }
        if (C_opt->count() > 0) {
            cfg.requested_C = parse_complex_literal(C_flag);
        }
        if (A_opt->count() > 0) {
            cfg.A = parse_complex_literal(A_flag);
        }
        if (D_opt->count() > 0) {
            cfg.D = parse_complex_literal(D_flag);
        }
        if (grid_opt->count() > 0) {
            cfg.grid = grid_flag;
        }
        if (out_opt->count() > 0) {
            cfg.output_path = out_flag;
        }
        if (format_opt->count() > 0) {
            cfg.format = format_flag == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        }
        if (h_opt->count() > 0) {
            cfg.h.clear();
            for (const auto &part : h_flags) {
                cfg.h.push_back(parse_complex_literal(part));
            }
        }
        if (eta_opt->count() > 0) {
            cfg.eta = eta_flag;
        }
        if (function_opt->count() > 0) {
            cfg.function = function_flag;
        }
        if (r_min_opt->count() > 0) {
            cfg.r_min = r_min_flag;
        }
        if (r_max_opt->count() > 0) {
            cfg.r_max = r_max_flag;
        }
        if (r_count_opt->count() > 0) {
            cfg.r_count = r_count_flag;
        }
        if (spacing_opt->count() > 0) {
            cfg.r_spacing = spacing_flag;
        }
        validate_config(cfg);
        return cfg;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const AssumptionViolated &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
}

} // namespace fermat3::cli
