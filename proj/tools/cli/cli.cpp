#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cev/asymptotics.hpp"
#include "cev/density.hpp"
#include "cev/errors.hpp"
#include "cev/greeks.hpp"
#include "cev/io.hpp"
#include "cev/oracle.hpp"
#include "cev/pricing.hpp"

namespace cev::cli {
namespace {

using io::format_number;

// Parameter flags shared by every subcommand. Flags given on the command line
// override values read from --params.
struct ParamFlags {
    std::string params_file;
    double spot = 0, strike = 0, rate = 0, delta_vol = 0, beta = 0, tau = 0;
    CLI::Option* o_spot = nullptr;
    CLI::Option* o_strike = nullptr;
    CLI::Option* o_rate = nullptr;
    CLI::Option* o_delta_vol = nullptr;
    CLI::Option* o_beta = nullptr;
    CLI::Option* o_tau = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--params", params_file, "JSON file with spot, strike, rate, delta_vol, beta, tau");
        o_spot = app->add_option("--spot", spot, "Spot price S");
        o_strike = app->add_option("--strike", strike, "Strike K");
        o_rate = app->add_option("--rate", rate, "Risk-free rate r");
        o_delta_vol = app->add_option("--delta-vol", delta_vol, "CEV volatility scale delta");
        o_beta = app->add_option("--beta", beta, "Elasticity beta in (0, 2)");
        o_tau = app->add_option("--tau", tau, "Time to maturity in years");
    }

    CevParams resolve() const {
        CevParams p;
        if (!params_file.empty()) {
            std::ifstream in(params_file);
            if (!in) {
                throw ValidationError("params", "cannot read " + params_file);
            }
            std::stringstream buf;
            buf << in.rdbuf();
            p = io::params_from_json(buf.str(), p);
        }
        if (o_spot->count()) p.spot = spot;
        if (o_strike->count()) p.strike = strike;
        if (o_rate->count()) p.rate = rate;
        if (o_delta_vol->count()) p.delta_vol = delta_vol;
        if (o_beta->count()) p.beta = beta;
        if (o_tau->count()) p.tau = tau;
        validate(p);
        return p;
    }
};

SeriesControl series_control() {
    SeriesControl ctl;
    if (const char* env = std::getenv("CEV_SERIES_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(tol > 0.0)) {
            throw ValidationError("CEV_SERIES_TOL", "expected a positive number");
        }
        ctl.rel_tol = tol;
    }
    validate(ctl);
    return ctl;
}

OptionKind parse_kind(const std::string& s) {
    return s == "put" ? OptionKind::Put : OptionKind::Call;
}

// Flat key/value record written as a JSON object or a two-line CSV.
using Record = std::vector<std::pair<std::string, double>>;

std::string record_json(const Record& r) {
    std::string out = "{";
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += '"' + r[i].first + "\":" + format_number(r[i].second);
    }
    return out + "}";
}

std::string records_csv(const std::vector<Record>& rows) {
    if (rows.empty()) return "";
    std::string out;
    for (std::size_t i = 0; i < rows.front().size(); ++i) {
        out += (i ? "," : "") + rows.front()[i].first;
    }
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out += (i ? "," : "") + format_number(r[i].second);
        }
        out += '\n';
    }
    return out;
}

std::string records_json(const std::vector<Record>& rows) {
    std::string out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += (i ? "," : "") + record_json(rows[i]);
    }
    return out + "]";
}

std::vector<double> parse_list(const std::string& text, const char* field) {
    std::vector<double> xs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double x = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') {
            throw ValidationError(field, "expected a comma-separated list of numbers");
        }
        xs.push_back(x);
    }
    if (xs.empty()) {
        throw ValidationError(field, "list is empty");
    }
    return xs;
}

struct VerifyRow {
    std::string check;
    double closed_form;
    double reference;
    double tolerance;
};

bool passes(const VerifyRow& r) {
    return std::abs(r.closed_form - r.reference) <= r.tolerance;
}

std::vector<VerifyRow> verify_rows(const CevParams& p, const SdeConfig& cfg, const SeriesControl& ctl) {
    std::vector<VerifyRow> rows;
    const GreeksReport call = full_report(p, OptionKind::Call, ctl);
    const GreeksReport put = full_report(p, OptionKind::Put, ctl);

    const McEstimate mc = mc_price(p, OptionKind::Call, cfg);
    rows.push_back({"mc_call", call.price, mc.mean, 3.0 * mc.std_error});

    auto with = [&](auto mutate) {
        return [=](double x) {
            CevParams q = p;
            mutate(q, x);
            return call_price(q, ctl);
        };
    };
    auto fd_tol = [](double ref) { return std::max(1e-4 * std::abs(ref), 1e-6); };
    const double fd_delta = fd_derivative(with([](CevParams& q, double x) { q.spot = x; }), p.spot, 1e-4 * p.spot, 1);
    const double fd_gamma = fd_derivative(with([](CevParams& q, double x) { q.spot = x; }), p.spot, 1e-3 * p.spot, 2);
    const double fd_theta = -fd_derivative(with([](CevParams& q, double x) { q.tau = x; }), p.tau, 1e-5, 1);
    const double scale = std::pow(p.spot, 1.0 - 0.5 * p.beta);
    const double fd_vega = fd_derivative(
        with([scale](CevParams& q, double s0) { q.delta_vol = s0 * scale; }), sigma0(p), 1e-5, 1);
    const double fd_rho = fd_derivative(with([](CevParams& q, double x) { q.rate = x; }), p.rate, 1e-6, 1);
    rows.push_back({"fd_delta", call.delta, fd_delta, fd_tol(fd_delta)});
    rows.push_back({"fd_gamma", call.gamma, fd_gamma, fd_tol(fd_gamma)});
    rows.push_back({"fd_theta", call.theta, fd_theta, fd_tol(fd_theta)});
    rows.push_back({"fd_vega", call.vega, fd_vega, fd_tol(fd_vega)});
    rows.push_back({"fd_rho", call.rho, fd_rho, fd_tol(fd_rho)});
    rows.push_back({"pde_residual_call", pde_residual(p, OptionKind::Call, ctl), 0.0, 1e-6 * p.spot});
    rows.push_back({"pde_residual_put", pde_residual(p, OptionKind::Put, ctl), 0.0, 1e-6 * p.spot});
    const double pv_strike = p.strike * std::exp(-p.rate * p.tau);
    rows.push_back({"parity", call.price - put.price, p.spot - pv_strike, 1e-10 * (p.spot + p.strike)});
    return rows;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form CEV option pricing, Greeks, densities and limit checks", "cev"};
    app.require_subcommand(1);

    // Empty means the subcommand's default: JSON, except table for limits and
    // CSV for smile.
    std::string format;

    auto* price_cmd = app.add_subcommand("price", "Call and put prices with the parity gap");
    ParamFlags price_flags;
    price_flags.attach(price_cmd);
    price_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* greeks_cmd = app.add_subcommand("greeks", "Price and Greeks for one option");
    ParamFlags greeks_flags;
    greeks_flags.attach(greeks_cmd);
    std::string kind = "call";
    std::string theta_convention = "t";
    greeks_cmd->add_option("--kind", kind)->check(CLI::IsMember({"call", "put"}));
    greeks_cmd->add_option("--theta-convention", theta_convention, "t: dV/dt, tau: dV/dtau")
        ->check(CLI::IsMember({"t", "tau"}));
    greeks_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* density_cmd = app.add_subcommand("density", "Risk-neutral density of S_T on a log grid");
    ParamFlags density_flags;
    density_flags.attach(density_cmd);
    double lo = 0, hi = 0;
    std::size_t n = 2000;
    auto* o_lo = density_cmd->add_option("--lo", lo, "Lower bound, default 1e-3 * spot");
    auto* o_hi = density_cmd->add_option("--hi", hi, "Upper bound, default 20 * spot");
    density_cmd->add_option("--n", n, "Number of grid points");
    density_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* limits_cmd = app.add_subcommand("limits", "Convergence checks for the asymptotic regimes");
    ParamFlags limits_flags;
    limits_flags.attach(limits_cmd);
    std::string case_id;
    double tol = 1e-3;
    std::string schedule_text;
    limits_cmd->add_option("--case", case_id, "a: tau->0, b: sigma->inf, c: K->inf, d: r->inf, e: T->inf")
        ->required()
        ->check(CLI::IsMember({"a", "b", "c", "d", "e"}));
    limits_cmd->add_option("--tol", tol, "Tolerance on the final error, scaled by 1 + |limit|");
    limits_cmd->add_option("--schedule", schedule_text, "Comma-separated values of the driven parameter");
    limits_cmd->add_option("--format", format)->check(CLI::IsMember({"table", "json", "csv"}));

    auto* verify_cmd = app.add_subcommand("verify", "Cross-check against Monte Carlo and finite differences");
    ParamFlags verify_flags;
    verify_flags.attach(verify_cmd);
    SdeConfig sde;
    verify_cmd->add_option("--paths", sde.n_paths, "Monte Carlo paths");
    verify_cmd->add_option("--steps", sde.n_steps, "Euler steps per path");
    verify_cmd->add_option("--seed", sde.seed, "Random seed");
    verify_cmd->add_option("--threads", sde.threads, "Worker threads");
    verify_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* smile_cmd = app.add_subcommand("smile", "Prices and Greeks across strikes");
    ParamFlags smile_flags;
    smile_flags.attach(smile_cmd);
    std::string strikes_text;
    smile_cmd->add_option("--strikes", strikes_text, "Comma-separated strikes")->required();
    smile_cmd->add_option("--theta-convention", theta_convention)->check(CLI::IsMember({"t", "tau"}));
    smile_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: args: " << e.what() << '\n';
        return 1;
    }

    try {
        const SeriesControl ctl = series_control();

        if (price_cmd->parsed()) {
            const CevParams p = price_flags.resolve();
            const double c = call_price(p, ctl);
            const double q = put_price(p, ctl);
            const double gap = c - q - (p.spot - p.strike * std::exp(-p.rate * p.tau));
            const Record r{{"call", c}, {"put", q}, {"parity_gap", gap}};
            out << (format == "csv" ? records_csv({r}) : record_json(r) + "\n");
        } else if (greeks_cmd->parsed()) {
            const CevParams p = greeks_flags.resolve();
            GreeksReport g = full_report(p, parse_kind(kind), ctl);
            if (theta_convention == "tau") g.theta = -g.theta;
            if (format == "csv") {
                out << records_csv({{{"price", g.price},
                                     {"delta", g.delta},
                                     {"gamma", g.gamma},
                                     {"theta", g.theta},
                                     {"vega", g.vega},
                                     {"rho", g.rho}}});
            } else {
                out << io::to_json(g) << '\n';
            }
        } else if (density_cmd->parsed()) {
            const CevParams p = density_flags.resolve();
            if (!o_lo->count()) lo = 1e-3 * p.spot;
            if (!o_hi->count()) hi = 20.0 * p.spot;
            if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("lo", "requires 0 < lo < hi");
            if (n < 2) throw ValidationError("n", "requires at least 2 points");
            const DensityGrid grid = density_grid(p, lo, hi, n, ctl);
            out << (format == "csv" ? io::to_csv(grid) : io::to_json(grid) + "\n");
        } else if (limits_cmd->parsed()) {
            const CevParams p = limits_flags.resolve();
            const LimitCase c = parse_limit_case(case_id);
            if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");
            const std::vector<double> schedule =
                schedule_text.empty() ? default_schedule(c, p) : parse_list(schedule_text, "schedule");
            if (schedule.size() < 4) throw ValidationError("schedule", "needs at least 4 points");
            const auto reports = verify_case(c, p, schedule, tol, ctl);
            if (format == "json") {
                out << io::to_json(reports) << '\n';
            } else if (format == "csv") {
                out << io::to_csv(reports);
            } else {
                out << io::to_table(reports);
            }
        } else if (verify_cmd->parsed()) {
            const CevParams p = verify_flags.resolve();
            if (sde.n_paths < 1) throw ValidationError("paths", "must be at least 1");
            if (sde.n_steps < 1) throw ValidationError("steps", "must be at least 1");
            if (!(p.tau > 0.0)) throw ValidationError("tau", "verify requires tau > 0");
            const auto rows = verify_rows(p, sde, ctl);
            if (format == "csv") {
                out << "check,closed_form,reference,tolerance,pass\n";
                for (const auto& r : rows) {
                    out << r.check << ',' << format_number(r.closed_form) << ',' << format_number(r.reference) << ','
                        << format_number(r.tolerance) << ',' << (passes(r) ? "true" : "false") << '\n';
                }
            } else {
                out << "{\"checks\":[";
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    const auto& r = rows[i];
                    out << (i ? "," : "") << "{\"check\":\"" << r.check
                        << "\",\"closed_form\":" << format_number(r.closed_form)
                        << ",\"reference\":" << format_number(r.reference)
                        << ",\"tolerance\":" << format_number(r.tolerance)
                        << ",\"pass\":" << (passes(r) ? "true" : "false") << "}";
                }
                out << "]}\n";
            }
        } else if (smile_cmd->parsed()) {
            const CevParams base = smile_flags.resolve();
            if (!(base.tau > 0.0)) throw ValidationError("tau", "smile requires tau > 0");
            std::vector<Record> rows;
            const double sign = theta_convention == "tau" ? -1.0 : 1.0;
            for (double k : parse_list(strikes_text, "strikes")) {
                CevParams p = base;
                p.strike = k;
                validate(p);
                const GreeksReport c = full_report(p, OptionKind::Call, ctl);
                const GreeksReport q = full_report(p, OptionKind::Put, ctl);
                rows.push_back({{"strike", k},
                                {"call", c.price},
                                {"put", q.price},
                                {"delta_C", c.delta},
                                {"delta_P", q.delta},
                                {"gamma", c.gamma},
                                {"theta_C", sign * c.theta},
                                {"theta_P", sign * q.theta},
                                {"vega", c.vega},
                                {"rho_C", c.rho},
                                {"rho_P", q.rho}});
            }
            out << (format == "json" ? records_json(rows) + "\n" : records_csv(rows));
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.field() << ": " << e.reason() << '\n';
        return 1;
    } catch (const NonConvergence& e) {
        err << "error: series: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: input: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: input: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace cev::cli
