#include "gdof/cli.hpp"

#include "gdof/analysis.hpp"
#include "gdof/error.hpp"
#include "gdof/schemes.hpp"
#include "gdof/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef GDOF_VERSION
#define GDOF_VERSION "0.0.0"
#endif

namespace gdof::cli {

namespace {

constexpr std::size_t kMaxGridPoints = 100000;

std::string num(double v) { return format_real(v); }

template <class T>
std::string num(const std::optional<T>& v)
{
    return v ? format_real(*v) : std::string();
}

std::string str(std::uint64_t v) { return std::to_string(v); }

const std::vector<std::string> kEchoColumns = {
    "tool_version", "cfg_command", "cfg_users", "cfg_base",  "cfg_levels",  "cfg_alpha",
    "cfg_alpha_grid", "cfg_trials", "cfg_seed", "cfg_zero_noise", "cfg_cap", "cfg_measured"};

std::vector<std::string> echo(const RunConfig& c)
{
    return {GDOF_VERSION,
            c.command,
            std::to_string(c.users),
            std::to_string(c.base),
            std::to_string(c.levels),
            c.alpha,
            c.alpha_grid,
            str(c.trials),
            str(c.seed),
            c.zero_noise ? "true" : "false",
            str(c.cap),
            c.measured ? "true" : "false"};
}

Table make_table(std::vector<std::string> columns)
{
    Table t;
    t.columns = std::move(columns);
    t.columns.insert(t.columns.end(), kEchoColumns.begin(), kEchoColumns.end());
    return t;
}

void add(Table& t, std::vector<std::string> row, const RunConfig& c)
{
    auto e = echo(c);
    row.insert(row.end(), e.begin(), e.end());
    t.add_row(std::move(row));
}

Rational single_alpha(const RunConfig& config)
{
    const auto alphas = alpha_values(config);
    if (alphas.size() != 1) {
        throw InvalidParameter(config.command + " needs a single alpha (--alpha), got " +
                               std::to_string(alphas.size()) + " values");
    }
    return alphas.front();
}

double noise_stddev(const RunConfig& config) { return config.zero_noise ? 0.0 : 1.0; }

std::string join_digits(std::span<const Digit> v)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? " " : "") << v[i];
    }
    return out.str();
}

std::string join_lines(const std::vector<std::string>& lines, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += (i ? sep : "") + lines[i];
    }
    return out;
}

} // namespace

std::vector<Rational> parse_alpha_grid(const std::string& text)
{
    std::vector<Rational> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ':');) {
            parts.push_back(p);
        }
        if (parts.size() != 3) {
            throw InvalidParameter("alpha grid must be lo:hi:step, got '" + text + "'");
        }
        const Rational lo = parse_rational(parts[0]);
        const Rational hi = parse_rational(parts[1]);
        const Rational step = parse_rational(parts[2]);
        if (step <= 0) {
            throw InvalidParameter("alpha grid step must be positive");
        }
        if (hi < lo) {
            throw InvalidParameter("alpha grid is empty: hi < lo");
        }
        for (Rational a = lo; a <= hi; a += step) {
            if (out.size() == kMaxGridPoints) {
                throw InvalidParameter("alpha grid has more than " +
                                       std::to_string(kMaxGridPoints) + " points");
            }
            out.push_back(a);
        }
    } else {
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ',');) {
            out.push_back(parse_rational(p));
        }
    }
    if (out.empty()) {
        throw InvalidParameter("alpha grid is empty");
    }
    return out;
}

std::vector<Rational> alpha_values(const RunConfig& config)
{
    if (!config.alpha.empty()) {
        return {parse_rational(config.alpha)};
    }
    return parse_alpha_grid(config.alpha_grid.empty() ? kDefaultGrid : config.alpha_grid);
}

void validate(const RunConfig& c)
{
    if (c.command != "curve" && c.command != "simulate" && c.command != "verify" &&
        c.command != "sweep") {
        throw InvalidParameter("unknown command '" + c.command +
                               "' (expected curve, simulate, verify or sweep)");
    }
    if (c.users < 2) {
        throw InvalidParameter("users (K) must be at least 2, got " + std::to_string(c.users));
    }
    if (c.levels < 1) {
        throw InvalidParameter("levels (M) must be at least 1, got " + std::to_string(c.levels));
    }
    const auto min_base = static_cast<std::uint32_t>(2 * c.users + 4);
    if (c.base < min_base) {
        throw BaseTooSmall("base (Q) must be at least 2K+4 = " + std::to_string(min_base) +
                           ", got " + std::to_string(c.base));
    }
    if (c.trials < 1) {
        throw InvalidParameter("trials must be at least 1");
    }
    if (c.threads < 1) {
        throw InvalidParameter("threads must be at least 1");
    }
    if (c.cap < 1) {
        throw InvalidParameter("cap must be at least 1");
    }
    if (c.format != "csv" && c.format != "json") {
        throw InvalidParameter("format must be csv or json, got '" + c.format + "'");
    }
    for (const auto& a : alpha_values(c)) {
        if (a < 0) {
            throw InvalidParameter("alpha must be nonnegative, got " + format_exact(a));
        }
    }
}

Table cmd_curve(const RunConfig& config)
{
    Table t = make_table({"alpha", "regime", "d_theory"});
    for (const auto& a : alpha_values(config)) {
        add(t, {format_exact(a), std::string(to_string(classify(a))),
                format_exact(gdof_theoretical(a, config.users))},
            config);
    }
    return t;
}

Table cmd_simulate(const RunConfig& config, std::ostream& diag)
{
    const Rational alpha = single_alpha(config);
    const Regime regime = classify(alpha);
    // Channel preconditions (alpha = 1, base) before the scheme-specific ones.
    derive_params(config.users, config.base, config.levels, alpha, 1);
    const SignalLayout layout = build_layout(regime, config.users, config.base, config.levels, alpha);
    const ChannelParams params = params_for(layout, alpha);

    SimOptions opts;
    opts.trials = config.trials;
    opts.seed = config.seed;
    opts.noise_stddev = noise_stddev(config);
    opts.threads = config.threads;
    const auto start = std::chrono::steady_clock::now();
    const SimResult r = simulate(layout, params, opts);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    // Wall time is not part of the table so equal configs give equal files.
    diag << "simulate: " << r.trials << " trials in " << wall.count() << " s\n";

    Table t = make_table({"metric", "index", "value", "errors", "count", "ci_low", "ci_high"});
    auto scalar = [&](const std::string& metric, const std::string& value) {
        add(t, {metric, "", value, "", "", "", ""}, config);
    };
    auto estimate = [&](const std::string& metric, const LevelEstimate& e) {
        add(t, {metric, std::to_string(e.level), num(e.rate), str(e.errors), str(e.trials),
                num(e.ci_low), num(e.ci_high)},
            config);
    };
    scalar("regime", std::string(to_string(r.regime)));
    scalar("alpha", format_exact(alpha));
    scalar("seed", str(r.seed));
    scalar("trials", str(r.trials));
    scalar("N", std::to_string(layout.N));
    scalar("span", std::to_string(layout.span));
    scalar("window", std::to_string(params.window));
    scalar("alphabet_size", str(layout.alphabet.size()));
    for (const auto& e : r.profile.levels) {
        estimate("level_error", e);
    }
    for (const auto& e : r.info_digit_error) {
        estimate("info_digit_error", e);
    }
    for (const auto& e : r.user_message_error) {
        estimate("user_message_error", e);
    }
    add(t, {"flagged_decodes", "",
            num(r.decodes ? static_cast<double>(r.flagged_decodes) / static_cast<double>(r.decodes)
                          : 0.0),
            str(r.flagged_decodes), str(r.decodes), "", ""},
        config);
    scalar("rate_formula_qits", num(r.rate_formula_qits));
    scalar("rate_measured_qits", num(r.rate_measured_qits));
    scalar("d_formula", num(r.d_formula));
    scalar("d_measured", num(r.d_measured));
    scalar("d_empirical", num(config.measured ? r.d_measured : r.d_formula));
    scalar("d_theory", format_exact(r.d_theory));
    scalar("alphabet_penalty", num(alphabet_penalty(layout)));
    return t;
}

Table cmd_verify(const RunConfig& config, bool& counterexample, std::ostream& diag)
{
    counterexample = false;
    Table t = make_table({"alpha", "regime", "K", "Q", "M", "mode", "evaluations", "failures",
                          "status", "receiver", "messages", "interference_sum", "received",
                          "decoded", "reason", "trace"});
    for (const auto& alpha : alpha_values(config)) {
        const Regime regime = classify(alpha);
        derive_params(config.users, config.base, config.levels, alpha, 1);
        const SignalLayout layout =
            build_layout(regime, config.users, config.base, config.levels, alpha);
        const ChannelParams params = params_for(layout, alpha);
        VerifyOptions opts;
        opts.cap = config.cap;
        opts.corrupt_copy_map = config.corrupt_copy_map;
        const VerifyReport rep = verify_round_trip(layout, params, opts);

        const std::vector<std::string> head = {
            format_exact(alpha), std::string(to_string(regime)), std::to_string(config.users),
            std::to_string(config.base), std::to_string(config.levels),
            std::string(to_string(rep.mode)), str(rep.evaluations), str(rep.failures)};
        auto row = head;
        row.insert(row.end(), {rep.passed() ? "pass" : "fail", "", "", "", "", "", "", ""});
        add(t, row, config);

        for (const auto& ce : rep.counterexamples) {
            std::vector<std::string> msgs;
            for (const auto& m : ce.messages) {
                msgs.push_back(join_digits(m));
            }
            const std::string messages =
                ce.messages.empty() ? join_digits(ce.desired) : join_lines(msgs, " / ");
            row = head;
            row.insert(row.end(), {"counterexample", std::to_string(ce.receiver), messages,
                                   join_digits(ce.interference_sum), join_digits(ce.reduced),
                                   join_digits(ce.decoded), ce.reason,
                                   join_lines(ce.trace, " | ")});
            add(t, row, config);

            diag << "counterexample at alpha=" << format_exact(alpha) << " receiver "
                 << ce.receiver << ": " << ce.reason << "\n  messages: " << messages;
            if (!ce.interference_sum.empty()) {
                diag << "\n  interference sum: " << join_digits(ce.interference_sum);
            }
            diag << "\n  received (level 0 first): " << join_digits(ce.reduced)
                 << "\n  decoded: " << join_digits(ce.decoded) << '\n';
            for (const auto& line : ce.trace) {
                diag << "    " << line << '\n';
            }
        }
        counterexample = counterexample || !rep.passed();
    }
    return t;
}

Table cmd_sweep(const RunConfig& config)
{
    const auto alphas = alpha_values(config);
    SweepOptions opts;
    opts.users = config.users;
    opts.base = config.base;
    opts.levels = config.levels;
    opts.trials = config.trials;
    opts.seed = config.seed;
    opts.noise_stddev = noise_stddev(config);
    opts.path = config.measured ? RatePath::Measured : RatePath::Formula;
    opts.threads = config.threads;

    Table t = make_table({"alpha", "regime", "K", "Q", "M", "trials", "d_theory", "d_empirical",
                          "gap", "max_level_error", "seed", "d_measured", "alphabet_penalty",
                          "floor_penalty", "error"});
    for (const auto& pt : sweep(alphas, opts)) {
        std::string gap;
        if (pt.d_empirical) {
            gap = num(to_double(pt.d_theory) - *pt.d_empirical);
        }
        add(t,
            {format_exact(pt.alpha), std::string(to_string(pt.regime)), std::to_string(pt.users),
             std::to_string(pt.base), std::to_string(pt.levels), str(pt.trials),
             format_exact(pt.d_theory), num(pt.d_empirical), gap, num(pt.max_level_error),
             str(pt.seed), num(pt.d_measured), num(pt.alphabet_penalty), num(pt.floor_penalty),
             pt.error},
            config);
    }
    return t;
}

namespace {

void add_options(CLI::App& app, RunConfig& c, std::string& config_path)
{
    app.add_option("--config", config_path, "Flat key=value file with the same keys as the flags");
    app.add_option("--users", c.users, "Number of users K");
    app.add_option("--base", c.base, "Digit base Q");
    app.add_option("--levels", c.levels, "Levels M");
    app.add_option("--alpha", c.alpha, "Single alpha (decimal or p/q)");
    app.add_option("--alpha-grid", c.alpha_grid, "lo:hi:step or a,b,c");
    app.add_option("--trials", c.trials, "Monte-Carlo trials");
    app.add_option("--seed", c.seed, "64-bit seed");
    app.add_option("--out", c.out, "Output path (default: standard output)");
    app.add_option("--format", c.format, "csv | json");
    app.add_flag("--zero-noise", c.zero_noise, "Noise-free channel");
    app.add_option("--cap", c.cap, "Decoder-evaluation cap for verify");
    app.add_flag("--measured", c.measured, "Report d_empirical from the measured rate");
    app.add_option("--threads", c.threads, "Worker threads for Monte-Carlo runs");
    app.add_flag("--corrupt-copy-map", c.corrupt_copy_map,
                 "Test hook: corrupt the encoder's copy map in verify");
}

void parse_into(CLI::App& app, const std::vector<std::string>& args)
{
    std::vector<std::string> store;
    store.reserve(args.size() + 1);
    store.emplace_back("gdof");
    store.insert(store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : store) {
        argv.push_back(a.data());
    }
    app.parse(static_cast<int>(argv.size()), argv.data());
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key=value lines become --key=value arguments; '#' starts a comment.
std::vector<std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("cannot read config file '" + path + "'");
    }
    std::vector<std::string> args;
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        const auto hash = line.find('#');
        line = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidParameter(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key == "config") {
            throw InvalidParameter(path + ":" + std::to_string(lineno) +
                                   ": config files cannot include other config files");
        }
        args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return args;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    // Defaults, then the config file, then the flags: each later parse only
    // overwrites the fields it names.
    RunConfig c;
    std::string config_path;
    try {
        CLI::App pre{"gdof"};
        pre.allow_extras();
        pre.add_option("--config", config_path);
        parse_into(pre, args);
        if (!config_path.empty()) {
            CLI::App file_app{"gdof"};
            std::string ignored;
            add_options(file_app, c, ignored);
            parse_into(file_app, read_config(config_path));
        }
    } catch (const CLI::ParseError& e) {
        err << "gdof: error: config file: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "gdof: error: " << e.what() << '\n';
        return kExitConfig;
    }

    CLI::App app{"Layered-lattice GDOF calculator and simulator for the symmetric K-user "
                 "Gaussian interference channel",
                 "gdof"};
    app.set_version_flag("--version", GDOF_VERSION);
    app.add_option("command", c.command, "curve | simulate | verify | sweep")->required();
    add_options(app, c, config_path);
    try {
        parse_into(app, args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << GDOF_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gdof: error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        validate(c);
        Table table;
        bool counterexample = false;
        if (c.command == "curve") {
            table = cmd_curve(c);
        } else if (c.command == "simulate") {
            table = cmd_simulate(c, err);
        } else if (c.command == "verify") {
            table = cmd_verify(c, counterexample, err);
        } else {
            table = cmd_sweep(c);
        }

        std::ofstream file;
        std::ostream* sink = &out;
        if (!c.out.empty()) {
            file.open(c.out, std::ios::binary | std::ios::trunc);
            if (!file) {
                throw InvalidParameter("cannot open output file '" + c.out + "'");
            }
            sink = &file;
        }
        if (c.format == "json") {
            write_json(*sink, table);
        } else {
            write_csv(*sink, table);
        }
        sink->flush();
        if (!*sink) {
            throw InvalidParameter("failed writing output");
        }
        return counterexample ? kExitCounterexample : kExitOk;
    } catch (const Error& e) {
        err << "gdof: error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace gdof::cli
