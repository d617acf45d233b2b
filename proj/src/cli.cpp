#include "pirtrade/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pirtrade/entropic_lp.hpp"
#include "pirtrade/envelope.hpp"
#include "pirtrade/explicit_bounds.hpp"
#include "pirtrade/protocol.hpp"
#include "pirtrade/tradeoff.hpp"

namespace pirtrade::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReportSpec {
    std::string format = "csv";
    int precision = 6;
    std::string out_path;
};

struct Context {
    ReportSpec spec;
    std::uint64_t budget = kDefaultVerifyBudget;
    std::ostringstream out;
    std::ostringstream err;
    int exit_code = kOk;

    bool json_mode() const { return spec.format == "json"; }
    std::string dec(const Rational& r) const { return r.decimal(spec.precision); }
    json num(const Rational& r) const { return json{{"exact", r.str()}, {"decimal", dec(r)}}; }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

Rational parse_rational(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": not a rational number: " + text);
    }
}

// ------------------------------------------------------------- achievable

const std::vector<std::string> kFamilyOrder = {"mds", "uncoded", "gmds", "prop3", "sunjafar", "cyclic:A", "cyclic:B"};

std::vector<TradeoffPoint> family_points(const std::string& family, const SystemParams& p) {
    if (family == "mds") return mds_points(p);
    if (family == "uncoded") return uncoded_points(p);
    if (family == "gmds") return gmds_points(p);
    if (family == "prop3") return prop3_points(p);
    if (family == "sunjafar") return {sun_jafar_point(p)};
    if (family == "cyclic:A") {
        p.require(2, 1);
        return {cyclic_transform_point(construction_a_point(p.messages), 2, p.servers)};
    }
    if (family == "cyclic:B") {
        p.require(2, 1);
        std::vector<TradeoffPoint> out;
        for (int t = 1; t <= p.messages; ++t) {
            if (p.messages % t != 0 || p.messages / t + 1 > p.servers) continue;
            out.push_back(cyclic_transform_point(construction_b_point(p.messages, t), p.messages / t + 1, p.servers));
        }
        return out;
    }
    throw UsageError("unknown family '" + family + "' (expected one of mds, uncoded, gmds, prop3, sunjafar, "
                     "cyclic:A, cyclic:B)");
}

void cmd_achievable(Context& ctx, const SystemParams& p, const std::string& families_arg) {
    auto requested = split_list(families_arg);
    if (requested.empty()) throw UsageError("--families must name at least one family");
    for (const auto& f : requested)
        if (std::find(kFamilyOrder.begin(), kFamilyOrder.end(), f) == kFamilyOrder.end()) family_points(f, p);

    std::vector<std::pair<std::string, TradeoffPoint>> points;
    for (const auto& f : kFamilyOrder) {
        if (std::find(requested.begin(), requested.end(), f) == requested.end()) continue;
        for (auto& pt : family_points(f, p)) points.emplace_back(f, std::move(pt));
    }
    std::vector<TradeoffPoint> bare;
    for (const auto& [f, pt] : points) bare.push_back(pt);
    const EnvelopeCurve hull = lower_hull(bare);

    if (ctx.json_mode()) {
        json j{{"command", "achievable"}, {"N", p.servers}, {"K", p.messages}};
        j["points"] = json::array();
        for (const auto& [f, pt] : points)
            j["points"].push_back({{"family", f}, {"label", pt.label_str()}, {"alpha", ctx.num(pt.alpha)},
                                   {"beta", ctx.num(pt.beta)}});
        j["hull"] = json::array();
        for (const auto& v : hull.vertices())
            j["hull"].push_back({{"label", v.label}, {"alpha", ctx.num(v.alpha)}, {"beta", ctx.num(v.beta)}});
        ctx.out << j.dump(2) << '\n';
        return;
    }
    ctx.out << "row,family,label,alpha,beta,alpha_exact,beta_exact\n";
    for (const auto& [f, pt] : points)
        ctx.out << "point," << f << ',' << csv_field(pt.label_str()) << ',' << ctx.dec(pt.alpha) << ','
                << ctx.dec(pt.beta) << ',' << pt.alpha.str() << ',' << pt.beta.str() << '\n';
    for (const auto& v : hull.vertices())
        ctx.out << "hull,," << csv_field(v.label) << ',' << ctx.dec(v.alpha) << ',' << ctx.dec(v.beta) << ','
                << v.alpha.str() << ',' << v.beta.str() << '\n';
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string construction;
    std::string base;
    int k = 0, n = 0, t = 0;
    int base_k = 0, base_n = 0, base_t = 0;
    int m = 0;
    std::string checks = "correctness,privacy,costs";
    bool no_tables = false;
};

std::pair<PirProtocol, TradeoffPoint> build_protocol(const std::string& kind, int k, int n, int t) {
    if (kind == "A") {
        if (k < 1) throw UsageError("construction A needs --k >= 1");
        return {build_construction_a(k), construction_a_point(k)};
    }
    if (kind == "B") {
        if (n < 2 || t < 1) throw UsageError("construction B needs --n >= 2 and --t >= 1");
        return {build_construction_b(n, t), construction_b_point(t * (n - 1), t)};
    }
    throw UsageError("unknown construction '" + kind + "' (expected A, B or cyclic)");
}

void cmd_simulate(Context& ctx, const SimulateArgs& a) {
    std::optional<std::pair<PirProtocol, TradeoffPoint>> built;
    if (a.construction == "cyclic") {
        if (a.base.empty()) throw UsageError("--construction cyclic needs --base A|B");
        auto base = build_protocol(a.base, a.base_k ? a.base_k : a.k, a.base_n ? a.base_n : a.n,
                                   a.base_t ? a.base_t : a.t);
        if (a.m < base.first.servers)
            throw UsageError("--m must be at least the base server count " + std::to_string(base.first.servers));
        built.emplace(cyclic_compose(base.first, a.m),
                      cyclic_transform_point(base.second, base.first.servers, a.m));
    } else {
        built.emplace(build_protocol(a.construction, a.k, a.n, a.t));
    }
    const PirProtocol& proto = built->first;
    const TradeoffPoint& expected = built->second;

    const auto checks = split_list(a.checks);
    for (const auto& c : checks)
        if (c != "correctness" && c != "privacy" && c != "costs")
            throw UsageError("unknown check '" + c + "' (expected correctness, privacy, costs)");
    auto wants = [&](const char* c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };

    json j{{"command", "simulate"}, {"protocol", proto.name}, {"N", proto.servers}, {"K", proto.messages()},
           {"L", proto.length()}};
    std::ostringstream csv;
    csv << "item,value_exact,value_decimal,status\n";
    bool all_ok = true;

    if (!a.no_tables || ctx.json_mode()) {
        const std::string tables = dump_tables(proto, ctx.budget);
        if (ctx.json_mode())
            j["tables"] = tables;
        else
            ctx.err << tables;
    }
    if (wants("correctness")) {
        const bool ok = verify_correctness(proto, ctx.budget);
        all_ok = all_ok && ok;
        j["correctness"] = ok;
        csv << "correctness,,," << (ok ? "pass" : "fail") << '\n';
    }
    if (wants("privacy")) {
        const bool ok = verify_privacy(proto, ctx.budget);
        all_ok = all_ok && ok;
        j["privacy"] = ok;
        csv << "privacy,,," << (ok ? "pass" : "fail") << '\n';
    }
    if (wants("costs")) {
        std::optional<CostReport> cost;
        std::string error;
        try {
            cost = measure_costs(proto, ctx.budget);
        } catch (const std::logic_error& e) {
            error = e.what();
        }
        if (!cost) {
            all_ok = false;
            j["costs"] = {{"error", error}};
            csv << "costs,,,fail\n";
            ctx.err << error << '\n';
        } else {
            const bool a_ok = cost->alpha_bar == expected.alpha;
            const bool b_ok = cost->beta_bar == expected.beta;
            all_ok = all_ok && a_ok && b_ok;
            j["costs"] = {{"alpha_bar", ctx.num(cost->alpha_bar)},
                          {"beta_bar", ctx.num(cost->beta_bar)},
                          {"expected_alpha", ctx.num(expected.alpha)},
                          {"expected_beta", ctx.num(expected.beta)},
                          {"match", a_ok && b_ok}};
            csv << "alpha_bar," << cost->alpha_bar.str() << ',' << ctx.dec(cost->alpha_bar) << ','
                << (a_ok ? "match" : "mismatch") << '\n';
            csv << "beta_bar," << cost->beta_bar.str() << ',' << ctx.dec(cost->beta_bar) << ','
                << (b_ok ? "match" : "mismatch") << '\n';
            for (std::size_t s = 0; s < cost->download_per_server.size(); ++s)
                csv << "download_server_" << (s + 1) << ',' << cost->download_per_server[s].str() << ','
                    << ctx.dec(cost->download_per_server[s]) << ",\n";
            for (std::size_t s = 0; s < cost->storage_per_server.size(); ++s)
                csv << "storage_server_" << (s + 1) << ',' << cost->storage_per_server[s] << ",,\n";
        }
    }
    j["passed"] = all_ok;
    if (ctx.json_mode())
        ctx.out << j.dump(2) << '\n';
    else
        ctx.out << csv.str();
    if (!all_ok) ctx.exit_code = kVerificationFailed;
}

// --------------------------------------------------------------------- lp

struct LpArgs {
    std::string a0 = "0";
    std::string b0 = "1";
    bool allow_large = false;
    std::string dump;
};

void lp_guard(int servers, int messages, bool allow_large) {
    if (servers > kDefaultLpServerLimit && !allow_large)
        throw GuardError("refusing the entropic LP for N=" + std::to_string(servers) + ", K=" +
                         std::to_string(messages) + ": the constraint count grows as O(K*N^8) and N > " +
                         std::to_string(kDefaultLpServerLimit) + " is not desk scale; pass --allow-large to override");
}

void cmd_lp(Context& ctx, const SystemParams& p, const LpArgs& a) {
    p.require(2, 1);
    lp_guard(p.servers, p.messages, a.allow_large);
    const Rational a0 = parse_rational(a.a0, "--a0");
    const Rational b0 = parse_rational(a.b0, "--b0");
    const LpProblem lp = build_lp(p.servers, p.messages, a0, b0);
    if (!a.dump.empty()) {
        std::ofstream f(a.dump);
        if (!f) throw UsageError("cannot write " + a.dump);
        f << lp_text(lp);
    }
    std::map<std::string, std::size_t> by_tag;
    for (const auto& c : lp.constraints) ++by_tag[c.tag];
    const LpSolution sol = solve_exact(lp);

    // Cross-check against the explicit bound when the weights are (N-m, m).
    std::optional<std::pair<int, Rational>> explicit_bound;
    for (int m = 1; m <= p.servers; ++m)
        if (a0 * Rational(m) == b0 * Rational(p.servers - m)) {
            const Rational scale = b0.is_zero() ? a0 / Rational(p.servers - m) : b0 / Rational(m);
            explicit_bound.emplace(m, scale * dunderline_B(p.servers, p.messages, m));
        }
    bool ok = sol.status == LpStatus::Optimal;
    if (ok && explicit_bound) ok = sol.value >= explicit_bound->second;

    const std::size_t census = variable_census(p.servers, p.messages).size();
    if (ctx.json_mode()) {
        json j{{"command", "lp"}, {"N", p.servers}, {"K", p.messages}, {"a0", ctx.num(a0)}, {"b0", ctx.num(b0)},
               {"status", to_string(sol.status)}};
        if (sol.status == LpStatus::Optimal) j["optimum"] = ctx.num(sol.value);
        j["variables_census"] = census;
        j["variables_free"] = lp.variables.size();
        j["constraints"] = lp.constraints.size();
        j["constraints_by_family"] = by_tag;
        j["rows_after_presolve"] = sol.stats.rows_after_presolve;
        j["columns_after_presolve"] = sol.stats.columns_after_presolve;
        j["pivots"] = sol.stats.pivots;
        j["degenerate_pivots"] = sol.stats.degenerate_pivots;
        if (explicit_bound)
            j["explicit_bound"] = {{"m", explicit_bound->first}, {"value", ctx.num(explicit_bound->second)},
                                   {"lp_dominates", ok}};
        ctx.out << j.dump(2) << '\n';
    } else {
        ctx.out << "key,value,decimal\n";
        ctx.out << "status," << to_string(sol.status) << ",\n";
        if (sol.status == LpStatus::Optimal)
            ctx.out << "optimum," << sol.value.str() << ',' << ctx.dec(sol.value) << '\n';
        ctx.out << "variables_census," << census << ",\n";
        ctx.out << "variables_free," << lp.variables.size() << ",\n";
        ctx.out << "constraints," << lp.constraints.size() << ",\n";
        for (const auto& [tag, n] : by_tag) ctx.out << "constraints_" << tag << ',' << n << ",\n";
        ctx.out << "rows_after_presolve," << sol.stats.rows_after_presolve << ",\n";
        ctx.out << "columns_after_presolve," << sol.stats.columns_after_presolve << ",\n";
        ctx.out << "pivots," << sol.stats.pivots << ",\n";
        ctx.out << "degenerate_pivots," << sol.stats.degenerate_pivots << ",\n";
        if (explicit_bound)
            ctx.out << "explicit_bound_m" << explicit_bound->first << ',' << explicit_bound->second.str() << ','
                    << ctx.dec(explicit_bound->second) << '\n';
    }
    if (!ok) ctx.exit_code = kVerificationFailed;
}

// ----------------------------------------------------------------- bounds

void cmd_bounds(Context& ctx, const SystemParams& p) {
    p.require(2, 2);
    const auto hps = lower_bound_halfplanes(p.servers, p.messages);
    std::vector<BoundResult> rows;
    for (int m = 1; m <= p.servers; ++m) rows.push_back(dunderline_result(p.servers, p.messages, m));
    for (int k = 1; k <= p.messages; ++k) rows.push_back(flat_bound(p.servers, p.messages, k));
    const Rational alpha0 = baseline_costs(p).alpha0;

    if (ctx.json_mode()) {
        json j{{"command", "bounds"}, {"N", p.servers}, {"K", p.messages}};
        j["bounds"] = json::array();
        for (const auto& r : rows) {
            json b{{"kind", r.kind == BoundKind::Flat ? "flat" : "dunderline"},
                   {"index", r.kind == BoundKind::Flat ? r.k : r.m},
                   {"alpha_weight", ctx.num(r.alpha_weight)},
                   {"beta_weight", ctx.num(r.beta_weight)},
                   {"value", ctx.num(r.value)},
                   {"provenance", r.provenance}};
            if (r.kind == BoundKind::Dunderline && r.m >= 2 && r.m <= p.servers - 1) {
                const auto c = constructed_coefficients(p.servers, p.messages, r.m);
                b["coefficients"] = c.str();
                b["coefficients_feasible"] = check_feasible(c);
            }
            j["bounds"].push_back(std::move(b));
        }
        j["halfplanes"] = json::array();
        for (const auto& h : hps)
            j["halfplanes"].push_back({{"ca", ctx.num(h.ca)}, {"cb", ctx.num(h.cb)}, {"rhs", ctx.num(h.rhs)},
                                       {"provenance", h.provenance}});
        ctx.out << j.dump(2) << '\n';
        return;
    }
    ctx.out << "kind,index,alpha_weight,beta_weight,value,value_exact,provenance\n";
    for (const auto& r : rows)
        ctx.out << (r.kind == BoundKind::Flat ? "flat" : "dunderline") << ','
                << (r.kind == BoundKind::Flat ? r.k : r.m) << ',' << r.alpha_weight.str() << ','
                << r.beta_weight.str() << ',' << ctx.dec(r.value) << ',' << r.value.str() << ','
                << csv_field(r.provenance) << '\n';
    ctx.out << "alpha0,0,1,0," << ctx.dec(alpha0) << ',' << alpha0.str() << ",storage floor\n";
}

// ------------------------------------------------------------------ curve

struct CurveArgs {
    int grid = 200;
    bool lp_refine = false;
    bool allow_large = false;
};

void cmd_curve(Context& ctx, const SystemParams& p, const CurveArgs& a) {
    p.require(2, 2);
    if (a.grid < 2) throw UsageError("--grid must be at least 2");
    const auto base = baseline_costs(p);

    std::vector<TradeoffPoint> achievable;
    for (const auto* f : {"mds", "uncoded", "gmds", "prop3", "sunjafar"})
        for (auto& pt : family_points(f, p)) achievable.push_back(std::move(pt));
    const EnvelopeCurve upper = lower_hull(achievable);

    auto hps = lower_bound_halfplanes(p.servers, p.messages);
    if (a.lp_refine) {
        lp_guard(p.servers, p.messages, a.allow_large);
        for (int m = 1; m <= p.servers; ++m)
            hps.emplace_back(Rational(p.servers - m), Rational(m),
                             lp_bound(p.servers, p.messages, Rational(p.servers - m), Rational(m)),
                             "lp(m=" + std::to_string(m) + ")");
    }
    const Rational hi(p.messages);
    const EnvelopeCurve lower = halfplane_envelope(hps, base.alpha0, hi, a.grid);
    const RatioCurve ratio = ratio_curve(upper, lower, a.grid);

    bool ok = true;
    for (const auto& s : ratio.samples) ok = ok && s.ratio >= Rational(1);

    if (ctx.json_mode()) {
        json j{{"command", "curve"}, {"N", p.servers}, {"K", p.messages}, {"grid", a.grid},
               {"lp_refine", a.lp_refine}};
        j["samples"] = json::array();
        for (const auto& s : ratio.samples)
            j["samples"].push_back({{"alpha", ctx.num(s.alpha)}, {"beta_upper", ctx.num(s.beta_upper)},
                                    {"beta_lower", ctx.num(s.beta_lower)}, {"ratio", ctx.num(s.ratio)}});
        j["max_ratio"] = ctx.num(ratio.max_ratio);
        j["argmax_alpha"] = ctx.num(ratio.argmax_alpha);
        j["upper_vertices"] = json::array();
        for (const auto& v : upper.vertices())
            j["upper_vertices"].push_back({{"alpha", ctx.num(v.alpha)}, {"beta", ctx.num(v.beta)}, {"label", v.label}});
        j["halfplanes"] = json::array();
        for (const auto& h : hps)
            j["halfplanes"].push_back({{"ca", ctx.num(h.ca)}, {"cb", ctx.num(h.cb)}, {"rhs", ctx.num(h.rhs)},
                                       {"provenance", h.provenance}});
        ctx.out << j.dump(2) << '\n';
    } else {
        ctx.out << "alpha,beta_upper,beta_lower,ratio,alpha_exact,beta_upper_exact,beta_lower_exact,ratio_exact\n";
        for (const auto& s : ratio.samples)
            ctx.out << ctx.dec(s.alpha) << ',' << ctx.dec(s.beta_upper) << ',' << ctx.dec(s.beta_lower) << ','
                    << ctx.dec(s.ratio) << ',' << s.alpha.str() << ',' << s.beta_upper.str() << ','
                    << s.beta_lower.str() << ',' << s.ratio.str() << '\n';
        ctx.err << "max_ratio=" << ctx.dec(ratio.max_ratio) << " (" << ratio.max_ratio.str()
                << ") at alpha=" << ctx.dec(ratio.argmax_alpha) << '\n';
    }
    if (!ok) {
        ctx.err << "ratio below 1 somewhere: upper curve is not above the lower bound\n";
        ctx.exit_code = kVerificationFailed;
    }
}

}  // namespace

std::optional<std::uint64_t> budget_from_env() {
    const char* raw = std::getenv(kBudgetEnv);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || raw[used] != '\0') throw std::invalid_argument(std::string(kBudgetEnv) + " is not an integer");
    return static_cast<std::uint64_t>(v);
}

Outcome run(const std::vector<std::string>& args, std::optional<std::uint64_t> budget) {
    Context ctx;
    if (budget) ctx.budget = *budget;

    CLI::App app{"Storage/download tradeoff toolkit for private information retrieval", "pirtrade"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", ctx.spec.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--precision", ctx.spec.precision, "Fractional digits for decimals")->check(CLI::Range(1, 100));
    app.add_option("--out", ctx.spec.out_path, "Write the report to this file");

    SystemParams params;
    auto add_nk = [&](CLI::App* sub, bool required) {
        auto* n = sub->add_option("--n", params.servers, "Number of servers N");
        auto* k = sub->add_option("--k", params.messages, "Number of messages K");
        if (required) {
            n->required();
            k->required();
        }
    };

    std::string families;
    auto* achievable = app.add_subcommand("achievable", "Achievable points and their lower convex hull");
    add_nk(achievable, true);
    achievable->add_option("--families", families, "Comma list: mds,uncoded,gmds,prop3,sunjafar,cyclic:A,cyclic:B")
        ->required();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Build a protocol and verify it exhaustively");
    simulate->add_option("--construction", sim.construction, "A, B or cyclic")->required();
    simulate->add_option("--k", sim.k, "Messages (construction A)");
    simulate->add_option("--n", sim.n, "Servers (construction B)");
    simulate->add_option("--t", sim.t, "Messages per group (construction B)");
    simulate->add_option("--base", sim.base, "Base construction for cyclic: A or B");
    simulate->add_option("--base-k", sim.base_k, "Base K for cyclic over A");
    simulate->add_option("--base-n", sim.base_n, "Base N for cyclic over B");
    simulate->add_option("--base-t", sim.base_t, "Base T for cyclic over B");
    simulate->add_option("--m", sim.m, "Target server count for cyclic");
    simulate->add_option("--checks", sim.checks, "Comma list: correctness,privacy,costs");
    simulate->add_flag("--no-tables", sim.no_tables, "Skip the storage/retrieval tables");

    LpArgs lpa;
    auto* lp = app.add_subcommand("lp", "Solve the relaxed entropic LP exactly");
    add_nk(lp, true);
    lp->add_option("--a0", lpa.a0, "Storage weight (rational)");
    lp->add_option("--b0", lpa.b0, "Download weight (rational)");
    lp->add_flag("--allow-large", lpa.allow_large, "Lift the N <= 5 guard");
    lp->add_option("--dump", lpa.dump, "Write the LP in text form to this path");

    auto* bounds = app.add_subcommand("bounds", "Explicit lower bounds and their halfplanes");
    add_nk(bounds, true);

    CurveArgs cva;
    auto* curve = app.add_subcommand("curve", "Upper hull, lower envelope and their ratio on a grid");
    add_nk(curve, true);
    curve->add_option("--grid", cva.grid, "Grid points over [alpha0, K]");
    curve->add_flag("--lp-refine", cva.lp_refine, "Add entropic LP halfplanes (slow)");
    curve->add_flag("--allow-large", cva.allow_large, "Lift the N <= 5 guard for --lp-refine");

    Outcome result;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        result.exit_code = app.exit(e, o, er) == 0 ? kOk : kUsage;
        result.out = o.str();
        result.err = er.str();
        return result;
    }

    try {
        if (*achievable)
            cmd_achievable(ctx, params, families);
        else if (*simulate)
            cmd_simulate(ctx, sim);
        else if (*lp)
            cmd_lp(ctx, params, lpa);
        else if (*bounds)
            cmd_bounds(ctx, params);
        else if (*curve)
            cmd_curve(ctx, params, cva);
    } catch (const GuardError& e) {
        ctx.err << "error: " << e.what() << '\n';
        ctx.exit_code = kResourceGuard;
        ctx.out.str("");
    } catch (const BudgetExceeded& e) {
        ctx.err << "error: " << e.what() << " (raise " << kBudgetEnv << " to allow more)\n";
        ctx.exit_code = kResourceGuard;
        ctx.out.str("");
    } catch (const std::invalid_argument& e) {
        ctx.err << "error: " << e.what() << '\n';
        ctx.exit_code = kUsage;
        ctx.out.str("");
    }

    result.exit_code = ctx.exit_code;
    result.err = ctx.err.str();
    if (!ctx.spec.out_path.empty() && result.exit_code != kUsage && result.exit_code != kResourceGuard) {
        std::ofstream f(ctx.spec.out_path, std::ios::binary);
        if (!f) {
            result.err += "error: cannot write " + ctx.spec.out_path + '\n';
            result.exit_code = kUsage;
            return result;
        }
        f << ctx.out.str();
    } else {
        result.out = ctx.out.str();
    }
    return result;
}

}  // namespace pirtrade::cli
