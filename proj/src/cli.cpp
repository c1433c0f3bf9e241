#include "backlog/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "backlog/adjudicator.hpp"
#include "backlog/closed_forms.hpp"
#include "backlog/errors.hpp"
#include "backlog/identities.hpp"
#include "backlog/laplace.hpp"
#include "backlog/oracles.hpp"

namespace backlog::cli {

namespace {

enum class OutputFormat { Plain, Csv, Json };

struct PointOptions {
    double lambda = 1.0;
    std::int64_t production = 0;
    std::optional<double> t;
    std::vector<double> t_list;
    std::string format;
    std::string out_path;

    std::vector<double> times() const {
        std::vector<double> ts = t_list;
        if (t) ts.insert(ts.begin(), *t);
        if (ts.empty()) throw DomainError("no evaluation time given; use --t or --t-list");
        for (double v : ts) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("times must be finite and non-negative");
        }
        return ts;
    }
};

OutputFormat parse_format(const std::string& s) {
    if (s == "plain") return OutputFormat::Plain;
    if (s == "csv") return OutputFormat::Csv;
    return OutputFormat::Json;
}

InversionPrecision parse_precision(const std::string& s) {
    return s == "extended" ? InversionPrecision::Extended : InversionPrecision::Double;
}

void add_point_options(CLI::App* cmd, PointOptions& o, const std::string& default_format,
                       const std::vector<std::string>& formats) {
    cmd->add_option("--lambda", o.lambda, "demand rate lambda, events per unit time (> 0)")->required();
    cmd->add_option("--production", o.production, "production quantity P, units (integer >= 0)")->required();
    cmd->add_option("--t", o.t, "evaluation time, time units (>= 0)");
    cmd->add_option("--t-list", o.t_list, "comma-separated evaluation times, time units")->delimiter(',');
    o.format = default_format;
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
    cmd->add_option("--out", o.out_path, "write data to this path instead of standard output");
}

// Rows of already-formatted cells; strings are quoted in JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::pair<std::string, bool>>> rows;

    std::string render(OutputFormat format) const {
        std::ostringstream os;
        if (format == OutputFormat::Plain) {
            for (const auto& row : rows) os << row.back().first << '\n';
            return os.str();
        }
        if (format == OutputFormat::Csv) {
            for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
            os << '\n';
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].first;
                os << '\n';
            }
            return os.str();
        }
        os << '[';
        for (std::size_t r = 0; r < rows.size(); ++r) {
            os << (r ? ",\n  {" : "\n  {");
            for (std::size_t i = 0; i < columns.size(); ++i) {
                const auto& [text, quoted] = rows[r][i];
                os << (i ? ", " : "") << '"' << columns[i] << "\": ";
                if (quoted) {
                    os << '"' << text << '"';
                } else {
                    os << (text == "nan" || text == "inf" || text == "-inf" ? "null" : text);
                }
            }
            os << '}';
        }
        os << (rows.empty() ? "]\n" : "\n]\n");
        return os.str();
    }
};

std::pair<std::string, bool> num(double v) { return {format_double(v), false}; }
std::pair<std::string, bool> integer(std::int64_t v) { return {std::to_string(v), false}; }
std::pair<std::string, bool> str(std::string_view s) { return {std::string(s), true}; }

std::vector<CandidateFormula> candidates_from(const std::string& name) {
    if (name == "all") return {kAllCandidates.begin(), kAllCandidates.end()};
    return {*parse_candidate(name)};
}

std::vector<std::string> candidate_choices() {
    std::vector<std::string> c;
    for (auto cand : kAllCandidates) c.emplace_back(candidate_name(cand));
    c.emplace_back("all");
    return c;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Expected backlog under Poisson demand: closed forms, transforms, oracles and adjudication",
                 "backlog-lab"};
    app.require_subcommand(1, 1);

    // eval
    PointOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "expected backlog E[B(t)] (units) at the given times");
    add_point_options(eval, eval_opts, "plain", {"plain", "csv", "json"});

    // cumulative
    PointOptions cum_opts;
    std::string cum_candidate = "compact";
    auto* cumulative = app.add_subcommand("cumulative", "cumulative expected backlog (units x time) per candidate formula");
    add_point_options(cumulative, cum_opts, "plain", {"plain", "csv", "json"});
    cumulative->add_option("--candidate", cum_candidate, "candidate closed form")
        ->check(CLI::IsMember(candidate_choices()))
        ->capture_default_str();

    // invert
    PointOptions inv_opts;
    int inv_order = 14;
    std::string inv_precision = "double";
    std::string inv_image = "cumulative";
    std::int64_t inv_j = 0;
    auto* invert = app.add_subcommand("invert", "Gaver-Stehfest inversion of an analytic image at the given times");
    add_point_options(invert, inv_opts, "plain", {"plain", "csv", "json"});
    invert->add_option("--gs-order", inv_order, "number of Stehfest weights (even, 4..20; 4..40 if extended)")
        ->capture_default_str();
    invert->add_option("--gs-precision", inv_precision, "arithmetic for the Stehfest sum")
        ->check(CLI::IsMember({"double", "extended"}))
        ->capture_default_str();
    invert->add_option("--image", inv_image, "image to invert: cumulative (units x time), expected (units), "
                                             "backlog-prob (probability)")
        ->check(CLI::IsMember({"cumulative", "expected", "backlog-prob"}))
        ->capture_default_str();
    invert->add_option("--j", inv_j, "backlog magnitude j, units, for --image backlog-prob")->capture_default_str();

    // simulate
    PointOptions sim_opts;
    std::int64_t sim_paths = 100'000;
    std::uint64_t sim_seed = 0;
    unsigned sim_workers = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the cumulative expected backlog (units x time)");
    add_point_options(simulate, sim_opts, "csv", {"csv", "json"});
    simulate->add_option("--paths", sim_paths, "number of sample paths")->capture_default_str();
    simulate->add_option("--seed", sim_seed, "64-bit master seed (fallback: BACKLOG_LAB_SEED)")
        ->envname("BACKLOG_LAB_SEED")
        ->capture_default_str();
    simulate->add_option("--workers", sim_workers, "worker threads, 0 = all cores (does not affect results)");

    // identities
    std::string id_family = "all";
    int id_n_max = 30;
    int id_trials = 50;
    std::uint64_t id_seed = 0;
    std::string id_out;
    auto* identities = app.add_subcommand("identities", "exact rational checks of the double-sum and index-shift identities");
    identities->add_option("--family", id_family, "identity family")
        ->check(CLI::IsMember({"A1", "A2", "A3", "shift", "all"}))
        ->capture_default_str();
    identities->add_option("--n-max", id_n_max, "largest upper parameter n (1..50)")->capture_default_str();
    identities->add_option("--trials", id_trials, "random rational tables per n")->capture_default_str();
    identities->add_option("--seed", id_seed, "64-bit seed for the random tables (fallback: BACKLOG_LAB_SEED)")
        ->envname("BACKLOG_LAB_SEED")
        ->capture_default_str();
    identities->add_option("--out", id_out, "write data to this path instead of standard output");

    // adjudicate
    std::vector<double> adj_lambdas;
    std::vector<std::int64_t> adj_productions;
    std::vector<double> adj_times;
    std::string adj_candidate = "all";
    double adj_match_tol = kDefaultMatchTol;
    double adj_oracle_tol = kDefaultOracleTol;
    int adj_order = kAdjudicationInversion.order;
    std::string adj_precision = "extended";
    std::string adj_format = "csv";
    std::string adj_out;
    bool adj_summary = false;
    unsigned adj_workers = 0;
    auto* adjudicate_cmd = app.add_subcommand("adjudicate", "compare every candidate formula against the oracles on a grid");
    adjudicate_cmd->add_option("--lambda-list", adj_lambdas, "comma-separated demand rates, events per unit time")
        ->delimiter(',');
    adjudicate_cmd->add_option("--production-list", adj_productions, "comma-separated production quantities, units")
        ->delimiter(',');
    adjudicate_cmd->add_option("--t-list", adj_times, "comma-separated ascending times, time units")->delimiter(',');
    adjudicate_cmd->add_option("--candidate", adj_candidate, "candidate closed form")
        ->check(CLI::IsMember(candidate_choices()))
        ->capture_default_str();
    adjudicate_cmd->add_option("--match-tol", adj_match_tol, "absolute match tolerance, units x time")
        ->capture_default_str();
    adjudicate_cmd->add_option("--oracle-tol", adj_oracle_tol, "quadrature oracle tolerance, units x time")
        ->capture_default_str();
    adjudicate_cmd->add_option("--gs-order", adj_order, "number of Stehfest weights (even, 4..20; 4..40 if extended)")
        ->capture_default_str();
    adjudicate_cmd->add_option("--gs-precision", adj_precision, "arithmetic for the Stehfest sum")
        ->check(CLI::IsMember({"double", "extended"}))
        ->capture_default_str();
    adjudicate_cmd->add_option("--format", adj_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    adjudicate_cmd->add_option("--out", adj_out, "write data to this path instead of standard output");
    adjudicate_cmd->add_flag("--summary", adj_summary, "emit the per-candidate verdict table instead of rows");
    adjudicate_cmd->add_option("--workers", adj_workers, "worker threads, 0 = all cores (does not affect results)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitUsage;
    }

    std::string data;
    std::string out_path;
    int status = kExitOk;
    try {
        if (eval->parsed()) {
            const ModelParams params(eval_opts.lambda, eval_opts.production);
            Table table{{"lambda", "production", "t", "expected_backlog"}, {}};
            for (double t : eval_opts.times()) {
                table.rows.push_back({num(params.lambda()), integer(params.production()), num(t),
                                      num(expected_backlog(params, t))});
            }
            data = table.render(parse_format(eval_opts.format));
            out_path = eval_opts.out_path;
        } else if (cumulative->parsed()) {
            const ModelParams params(cum_opts.lambda, cum_opts.production);
            Table table{{"lambda", "production", "t", "candidate", "flags", "value"}, {}};
            for (double t : cum_opts.times()) {
                for (auto cand : candidates_from(cum_candidate)) {
                    const auto v = cumulative_expected_backlog(params, t, cand);
                    if (v.undefined_term) {
                        err << "warning: " << candidate_name(cand) << " at P=" << params.production()
                            << " contains a factorial of a negative integer; term taken as 0\n";
                    }
                    table.rows.push_back({num(params.lambda()), integer(params.production()), num(t),
                                          str(candidate_name(cand)),
                                          str(v.undefined_term ? "undefined-term" : ""), num(v.value)});
                }
            }
            data = table.render(parse_format(cum_opts.format));
            out_path = cum_opts.out_path;
        } else if (invert->parsed()) {
            const ModelParams params(inv_opts.lambda, inv_opts.production);
            const InversionConfig config{InversionMethod::GaverStehfest, inv_order, 1e-3, parse_precision(inv_precision)};
            config.validate();
            if (inv_j < 0) throw DomainError("--j must be non-negative");
            ImageFunction image;
            if (inv_image == "cumulative") {
                image = cumulative_backlog_image(params);
            } else if (inv_image == "expected") {
                image = expected_backlog_image(params);
            } else {
                image = backlog_prob_image(params, inv_j);
            }
            Table table{{"lambda", "production", "t", "image", "gs_order", "gs_value"}, {}};
            for (double t : inv_opts.times()) {
                table.rows.push_back({num(params.lambda()), integer(params.production()), num(t), str(inv_image),
                                      integer(inv_order), num(invert_gaver_stehfest(image, t, config))});
            }
            data = table.render(parse_format(inv_opts.format));
            out_path = inv_opts.out_path;
        } else if (simulate->parsed()) {
            const ModelParams params(sim_opts.lambda, sim_opts.production);
            const auto times = sim_opts.times();
            McConfig config;
            config.n_paths = sim_paths;
            config.seed = sim_seed;
            config.horizon = *std::max_element(times.begin(), times.end());
            config.workers = sim_workers;
            Table table{{"lambda", "production", "t", "paths", "seed", "ci_half_width", "reliable", "mean"}, {}};
            for (double t : times) {
                const auto est = monte_carlo_cumulative(params, t, config);
                if (!est.reliable) err << "warning: fewer than 100 paths; confidence interval unreliable\n";
                table.rows.push_back({num(params.lambda()), integer(params.production()), num(t), integer(sim_paths),
                                      {std::to_string(sim_seed), false}, num(est.abs_error_bound),
                                      {est.reliable ? "true" : "false", false}, num(est.value)});
            }
            data = table.render(parse_format(sim_opts.format));
            out_path = sim_opts.out_path;
        } else if (identities->parsed()) {
            std::vector<std::pair<std::string, IdentityFamily>> families;
            if (id_family == "A1" || id_family == "all") families.emplace_back("A1", IdentityFamily::A1);
            if (id_family == "A2" || id_family == "all") families.emplace_back("A2", IdentityFamily::A2);
            if (id_family == "A3" || id_family == "all") families.emplace_back("A3", IdentityFamily::A3);
            if (id_family == "shift" || id_family == "all") families.emplace_back("shift", IdentityFamily::IndexShift);
            std::ostringstream os;
            std::int64_t cases = 0;
            std::int64_t failed = 0;
            for (const auto& [name, family] : families) {
                const auto result = identity_sweep(family, id_n_max, id_trials, id_seed);
                cases += result.cases;
                failed += static_cast<std::int64_t>(result.failures.size());
                for (const auto& f : result.failures) os << "FAILED " << f << '\n';
            }
            if (failed == 0) {
                os << "all passed\n";
            } else {
                os << failed << " of " << cases << " failed\n";
                status = kExitVerificationFailed;
            }
            data = os.str();
            out_path = id_out;
        } else if (adjudicate_cmd->parsed()) {
            SweepGrid grid = SweepGrid::default_grid();
            if (!adj_lambdas.empty()) grid.lambdas = adj_lambdas;
            if (!adj_productions.empty()) grid.productions = adj_productions;
            if (!adj_times.empty()) grid.times = adj_times;
            const InversionConfig config{InversionMethod::GaverStehfest, adj_order, 1e-3, parse_precision(adj_precision)};
            const auto candidates = candidates_from(adj_candidate);
            const auto report = adjudicate(grid, candidates, adj_match_tol, adj_oracle_tol, config, adj_workers);
            const auto format = adj_format == "json" ? ReportFormat::Json : ReportFormat::Csv;
            data = adj_summary ? render_summary(report, format) : render_report(report, format);
            if (report.oracle_failures > 0) {
                err << "warning: " << report.oracle_failures << " grid points failed oracle certification\n";
            }
            out_path = adj_out;
        }
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << " (best estimate " << format_double(e.best_estimate()) << ")\n";
        return kExitAccuracy;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return kExitDomain;
    }

    if (out_path.empty()) {
        out << data;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << out_path << " for writing\n";
            return kExitUsage;
        }
        file << data;
    }
    return status;
}

}  // namespace backlog::cli
