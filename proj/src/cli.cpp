#include "posgood/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <limits>
#include <optional>
#include <ostream>

#include "posgood/errors.hpp"
#include "posgood/extensions.hpp"
#include "posgood/feasibility.hpp"
#include "posgood/io.hpp"
#include "posgood/ironing.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/oracle.hpp"
#include "posgood/verify.hpp"

namespace posgood {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string dist = "uniform(0,1)";
    std::string value = "0";
    std::string objective = "revenue";
    double lambda = 1.0;
    bool no_exclusion = false;
    bool nonneg_prices = false;
    double gamma = 0.5;
    std::string phi = "identity";
    bool suffering = false;
    double neg_status = std::numeric_limits<double>::quiet_NaN();
    std::size_t grid = 200;
    std::string out = ".";
    std::vector<std::string> dists;
    bool inject_fault = false;
    std::size_t oracle_types = 40;
    std::string mechanism_csv;
    std::string report_json;
};

struct Solved {
    std::optional<Mechanism> mech;
    std::string kind;
    json extra = json::object();
};

std::filesystem::path out_path(const RunConfig& c, const std::string& file) {
    std::filesystem::create_directories(c.out);
    return std::filesystem::path(c.out) / file;
}

void check_gamma(const RunConfig& c, const Mechanism& m) {
    if (c.gamma != 0.5 && m.allocation().has_pools())
        throw InapplicableCondition("gamma other than 1/2 with pooling is supported for cs --nonneg-prices only");
}

Solved solve(const RunConfig& c, const TypeDistribution& d, const ValueFunction& v) {
    Solved s;
    PhiTransform phi = parse_phi(c.phi);
    bool suffering = c.suffering || v.mode() == ValueMode::suffering;
    if (suffering) {
        if (v.mode() != ValueMode::suffering)
            throw InapplicableCondition("--suffering needs a value function with slope <= -1");
        if (c.objective != "revenue") throw InapplicableCondition("suffering mode solves revenue only");
        SufferingOptimum o = suffering_optimum(d, v);
        s.mech = o.mechanism;
        s.kind = "suffering";
        s.extra["single_good_revenue"] = o.single_good_revenue;
        s.extra["single_good_ratio"] = o.single_good_ratio;
        s.extra["cs_mode"] = to_string(o.cs_mode);
        return s;
    }
    if (!std::isnan(c.neg_status)) {
        if (c.objective != "revenue") throw InapplicableCondition("negative statuses are solved for revenue only");
        NegativeStatusOptimum o = negative_status_optimum(d, v, c.neg_status);
        s.mech = o.mechanism;
        s.kind = "negative-status";
        s.extra["threshold"] = o.threshold;
        s.extra["bound"] = o.bound;
        s.extra["exclusion_revenue"] = o.exclusion_revenue;
        s.extra["exclusion_consumer_surplus"] = o.exclusion_consumer_surplus;
        s.extra["revenue_delta"] = o.revenue_delta;
        s.extra["consumer_surplus_delta"] = o.consumer_surplus_delta;
        return s;
    }
    if (!phi.is_identity()) {
        if (c.objective != "revenue") throw InapplicableCondition("transformed statuses are solved for revenue only");
        PhiOptimum o = phi_transformed_optimum(d, v, phi);
        s.mech = o.mechanism;
        s.kind = "phi";
        s.extra["phi"] = phi.label();
        s.extra["phi_shape"] = to_string(phi.shape());
        check_gamma(c, *s.mech);
        return s;
    }
    if (c.objective == "revenue") {
        if (c.no_exclusion) {
            NoExclusionOptimum o = revmax_no_exclusion(d, v);
            s.mech = o.mechanism;
            s.kind = "no-exclusion";
        } else {
            ExclusionOptimum o = optimal_exclusion(d, v);
            s.mech = Mechanism(o.allocation, v, 0.0);
            s.kind = "exclusion";
        }
        check_gamma(c, *s.mech);
        return s;
    }
    if (c.objective == "cs") {
        if (c.nonneg_prices) {
            NonnegCsOptimum o = cs_max_nonneg_price(d, v, c.gamma);
            s.mech = o.mechanism;
            s.kind = o.branch == CsBranch::pooling ? "pooling" : "separation";
            s.extra["indifferent"] = o.indifferent;
        } else {
            s.mech = cs_max_budget_balanced(d, v);
            s.kind = "budget-balanced";
            check_gamma(c, *s.mech);
        }
        return s;
    }
    if (c.objective == "welfare") {
        SocialOptimum o = social_optimum(d, v, c.lambda, c.nonneg_prices);
        s.mech = o.mechanism;
        s.kind = "social";
        check_gamma(c, *s.mech);
        return s;
    }
    throw ParseError("unknown objective '" + c.objective + "'", 1, 1);
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
    TypeDistribution d = parse_distribution(c.dist);
    ValueFunction v = parse_value(c.value);
    if (c.grid < 2) throw DomainError("--grid must be at least 2");
    if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw DomainError("--gamma must lie in [0,1]");
    if (detect_regime(v, d) == ValueRegime::countervailing)
        throw InapplicableCondition("countervailing regime, unsupported");

    Solved s = solve(c, d, v);
    const Mechanism& m = *s.mech;
    EvalReport ev = evaluate(m, c.lambda);
    Regularity reg = classify(d);
    const StatusAllocation& a = m.allocation();

    CsvTable table;
    table.header = {"theta", "mass", "s", "p", "U"};
    double grev = 0.0, gcs = 0.0;
    for (std::size_t i = 0; i < c.grid; ++i) {
        double tau = (static_cast<double>(i) + 0.5) / static_cast<double>(c.grid);
        double theta = d.quantile(tau);
        double mass = 1.0 / static_cast<double>(c.grid);
        bool in = m.participates(theta);
        double st = in ? m.status(theta) : 0.0, p = in ? m.payment(theta) : 0.0, u = in ? m.utility(theta) : 0.0;
        table.rows.push_back({theta, mass, st, p, u});
    }
    // the check reads back the rounded table so a re-evaluation reproduces it exactly
    CsvTable back = parse_csv(to_csv(table));
    for (const auto& r : back.rows) {
        grev += r[1] * r[3];
        gcs += r[1] * r[4];
    }
    write_file(out_path(c, "mechanism.csv").string(), to_csv(table));

    bool ironed = a.has_pools() && s.kind != "pooling" && s.kind != "negative-status";
    if (ironed) {
        bool reverse = m.orientation() == Orientation::suffering;
        IroningResult ir = reverse ? iron_reverse(d, a.upper_quantile()) : iron(d, a.cutoff_quantile());
        CsvTable h;
        h.header = {"tau", "theta", "jtilde", "hull"};
        std::size_t stride = std::max<std::size_t>(1, ir.grid.size() / 512);
        for (std::size_t k = 0; k < ir.grid.size(); k += stride)
            h.rows.push_back({ir.grid[k], d.quantile(ir.grid[k]), ir.jtilde[k], ir.hull[k]});
        if ((ir.grid.size() - 1) % stride != 0)
            h.rows.push_back({ir.grid.back(), d.quantile(ir.grid.back()), ir.jtilde.back(), ir.hull.back()});
        write_file(out_path(c, "hull.csv").string(), to_csv(h));
    }

    json rep;
    rep["command"] = "solve";
    rep["distribution"] = d.describe();
    rep["value"] = v.label();
    rep["objective"] = c.objective;
    rep["lambda"] = c.lambda;
    rep["gamma"] = c.gamma;
    rep["mechanism"] = s.kind;
    rep["cutoff"] = m.cutoff();
    rep["cutoff_quantile"] = d.cdf(m.cutoff());
    rep["boundary_utility"] = m.boundary_utility();
    rep["revenue"] = ev.revenue;
    rep["consumer_surplus"] = ev.consumer_surplus;
    rep["welfare"] = ev.social_welfare;
    rep["exclusion_mass"] = ev.exclusion_mass;
    rep["allocation"] = a.describe();
    rep["flags"] = {{"ironed", ironed},
                    {"pooling", a.has_pools()},
                    {"exclusion", ev.exclusion_mass > 1e-12},
                    {"regular", reg.regular},
                    {"ifr", reg.ifr},
                    {"dfr", reg.dfr},
                    {"no_exclusion", c.no_exclusion},
                    {"nonneg_prices", c.nonneg_prices},
                    {"suffering", m.orientation() == Orientation::suffering},
                    {"negative_status", s.kind == "negative-status"}};
    for (auto& [k, val] : s.extra.items()) rep[k] = val;
    rep["grid_check"] = {{"n", c.grid}, {"revenue", grev}, {"consumer_surplus", gcs},
                         {"welfare", c.lambda * grev + gcs}};
    write_file(out_path(c, "report.json").string(), rep.dump(2) + "\n");

    out << "mechanism " << s.kind << "\n"
        << "cutoff " << fmt(m.cutoff()) << "\n"
        << "revenue " << fmt(ev.revenue) << "\n"
        << "consumer_surplus " << fmt(ev.consumer_surplus) << "\n"
        << "welfare " << fmt(ev.social_welfare) << "\n";
    return exit_ok;
}

int cmd_ratio(const RunConfig& c, std::ostream& out) {
    std::vector<std::string> names = c.dists;
    if (names.empty())
        names = {"uniform(0,1)", "exp(1)",   "power(0.25)", "power(0.5)", "power(1)",
                 "power(2)",     "power(4)", "pareto(2,1)", "pareto(3,1)"};
    std::string csv = "distribution,mode,R,maxR,ratio\n";
    out << "distribution        exclusion  no-exclusion\n";
    for (const auto& n : names) {
        TypeDistribution d = parse_distribution(n);
        SingleGoodOptimum sg = single_good_optimum(d, ValueFunction::zero());
        TwoLevelOptimum two = two_level_optimum(d);
        csv += d.describe() + ",exclusion," + fmt(sg.revenue) + "," + fmt(sg.max_revenue) + "," + fmt(sg.ratio) + "\n";
        csv += d.describe() + ",no-exclusion," + fmt(two.r2) + "," + fmt(two.max_revenue) + "," + fmt(two.ratio) + "\n";
        char line[128];
        std::snprintf(line, sizeof line, "%-18s  %9.6f  %12.6f\n", d.describe().c_str(), sg.ratio, two.ratio);
        out << line;
    }
    write_file(out_path(c, "ratio.csv").string(), csv);
    return exit_ok;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    VerifyOptions vo;
    vo.inject_fault = c.inject_fault;
    vo.oracle_types = c.oracle_types;
    VerifyReport r = run_verification(vo);
    json rep;
    rep["passed"] = r.passed();
    rep["checks"] = json::array();
    for (const auto& ch : r.checks) {
        rep["checks"].push_back(
            {{"name", ch.name}, {"status", to_string(ch.status)}, {"margin", ch.margin}, {"detail", ch.detail}});
        out << to_string(ch.status) << " " << ch.name;
        if (!ch.detail.empty()) out << " (" << ch.detail << ")";
        out << "\n";
    }
    write_file(out_path(c, "verify.json").string(), rep.dump(2) + "\n");
    return r.passed() ? exit_ok : exit_verify;
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.mechanism_csv.empty()) throw ParseError("eval needs --mechanism", 1, 1);
    CsvTable t = parse_csv(read_file(c.mechanism_csv));
    std::vector<std::string> want = {"theta", "mass", "s", "p", "U"};
    if (t.header != want) throw ParseError("mechanism table needs theta,mass,s,p,U", 1, 1);
    ValueFunction v = parse_value(c.value);
    DiscreteEconomy e;
    DiscreteMechanism dm;
    double rev = 0.0, cs = 0.0;
    for (const auto& r : t.rows) {
        e.types.push_back(r[0]);
        e.masses.push_back(r[1]);
        e.values.push_back(v(r[0]));
        e.slopes.push_back(v.slope(r[0]));
        bool in = !(r[2] == 0.0 && r[3] == 0.0 && r[4] == 0.0);
        dm.status.push_back(r[2]);
        dm.payment.push_back(r[3]);
        dm.participates.push_back(in ? 1 : 0);
        rev += r[1] * r[3];
        cs += r[1] * r[4];
    }
    e.validate();
    IcReport ic = ic_check(dm, e, 1e-6);
    json rep;
    rep["command"] = "eval";
    rep["revenue"] = rev;
    rep["consumer_surplus"] = cs;
    rep["welfare"] = c.lambda * rev + cs;
    rep["ic_worst_deviation"] = ic.worst_deviation;
    int code = exit_ok;
    if (!c.report_json.empty()) {
        json ref = json::parse(read_file(c.report_json));
        const json& g = ref.at("grid_check");
        double lam = ref.value("lambda", 1.0);
        double dr = std::fabs(g.at("revenue").get<double>() - rev);
        double dc = std::fabs(g.at("consumer_surplus").get<double>() - cs);
        double dw = std::fabs(g.at("welfare").get<double>() - (lam * rev + cs));
        double worst = std::max({dr, dc, dw});
        rep["report_difference"] = worst;
        rep["matches_report"] = worst <= 1e-9;
        if (worst > 1e-9) {
            err << "mechanism table differs from report by " << fmt(worst) << "\n";
            code = exit_verify;
        }
    }
    out << rep.dump(2) << "\n";
    return code;
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--dist", c.dist, "type distribution, e.g. uniform(0,1)");
    app->add_option("--value", c.value, "intrinsic value, e.g. linear(0.5,0.25)");
    app->add_option("--objective", c.objective, "revenue | cs | welfare")
        ->check(CLI::IsMember({"revenue", "cs", "welfare"}));
    app->add_option("--lambda", c.lambda, "weight on revenue in welfare");
    app->add_flag("--no-exclusion", c.no_exclusion, "serve every type");
    app->add_flag("--nonneg-prices", c.nonneg_prices, "forbid negative prices");
    app->add_option("--gamma", c.gamma, "tie share in the status definition");
    app->add_option("--phi", c.phi, "status transform: identity | pow(r)");
    app->add_flag("--suffering", c.suffering, "value falls with type (slope <= -1)");
    app->add_option("--neg-status", c.neg_status, "allow statuses down to -M (0 picks a default)");
    app->add_option("--grid", c.grid, "rows in mechanism.csv");
    app->add_option("--out", c.out, "output directory");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"positional good mechanisms"};
    app.set_config("--config", "", "config file (flags override it)");
    app.require_subcommand(1);
    add_common(&app, c);
    app.fallthrough();
    auto* solve = app.add_subcommand("solve", "optimal mechanism for one configuration");
    auto* ratio = app.add_subcommand("ratio", "single-good and two-level ratios across distributions");
    ratio->add_option("--dists", c.dists, "distributions to tabulate");
    auto* verify = app.add_subcommand("verify", "feasibility, IC, oracle and chain checks");
    verify->add_flag("--inject-fault", c.inject_fault, "add 0.05 to a status to exercise the failure path");
    verify->add_option("--oracle-types", c.oracle_types, "types in the exhaustive oracle check");
    auto* eval = app.add_subcommand("eval", "re-evaluate a mechanism table");
    eval->add_option("--mechanism", c.mechanism_csv, "mechanism.csv to read")->required();
    eval->add_option("--report", c.report_json, "report.json to compare against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_parse;
    }

    try {
        if (*solve) return cmd_solve(c, out);
        if (*ratio) return cmd_ratio(c, out);
        if (*verify) return cmd_verify(c, out);
        if (*eval) return cmd_eval(c, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const InapplicableCondition& e) {
        err << e.what() << "\n";
        return exit_inapplicable;
    } catch (const SizeGuardError& e) {
        err << e.what() << "\n";
        return exit_inapplicable;
    } catch (const InfeasibleAllocation& e) {
        err << "infeasible: " << e.what() << "\n";
        return exit_verify;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_parse;
    } catch (const nlohmann::json::exception& e) {
        err << "bad report: " << e.what() << "\n";
        return exit_parse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace posgood
