// pdi: command-line front end.
//
//   pdi params --c 1.005 [--s 2.95] [--scan --coef 0.75]
//   pdi search --c 1.005 --X 2000 --vartheta 0.05 --z 5 [--output w.jsonl]
//   pdi verify --suite all
//   pdi trace  --quantity L|I|Theta|moments|minsum ...
//
// Exit codes: 0 ok, 2 precondition or range failure, 3 resource cap,
// 4 verification failure, 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdi/pdi.hpp"

using namespace pdi;

namespace {

/// Reads JSON config files. Nested objects address subcommands; a top-level
/// "config" member (as embedded in every artifact) is unwrapped first.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) {
            // JSON-lines artifact: the header is the first line.
            j = json::parse(text.substr(0, text.find('\n')), nullptr, false);
            if (j.is_discarded()) throw CLI::ConversionError("config file is not JSON");
        }
        if (j.contains("config")) j = j["config"];
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto p = parents;
                p.push_back(it.key());
                flatten(*it, p, out);
                continue;
            }
            if (it->is_null()) continue;
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array())
                for (const auto& e : *it) item.inputs.push_back(scalar(e));
            else
                item.inputs.push_back(scalar(*it));
            out.push_back(item);
        }
    }
};

/// Output stream: a file, or stdout for "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw precondition_error("cannot open output file " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------------------
// params

struct ParamsConfig {
    double c = 0.0;
    std::optional<double> N;
    double X = 1e4;
    double A = default_A;
    double s = default_s;
    double coef = 0.75;
    bool scan = false;
    double grid_step = 0.01;
    std::string format = "json";
    std::string output = "-";

    json to_json() const {
        return {{"params",
                 {{"c", c}, {"N", optional_json(N)}, {"X", X}, {"A", A}, {"s", s}, {"coef", coef}, {"scan", scan},
                  {"grid-step", grid_step}, {"format", format}}}};
    }
};

int cmd_params(const ParamsConfig& cfg) {
    const double N = cfg.N.value_or(3.0 * std::pow(cfg.X, cfg.c));
    const auto p = derive_params(cfg.c, N, cfg.A, cfg.s);
    const auto range = check_theorem_range(cfg.c);
    const auto sf = sieve_functions(cfg.s);
    Sink sink(cfg.output);
    if (cfg.format == "csv") {
        CsvWriter w(sink.os(), cfg.to_json(), {"s", "objective"});
        const auto scan = scan_sieve_quality(cfg.coef, cfg.grid_step);
        for (const auto& pt : scan.points) w.row({pt.s, pt.objective});
    } else {
        json r = artifact_stamp(cfg.to_json());
        r["params"] = pdi::to_json(p);
        r["range_class"] = to_string(range);
        r["sieve_functions"] = {{"s", cfg.s},
                                {"f", sf.f},
                                {"F", sf.F},
                                {"objective_two_thirds", sf.f - 2.0 / 3.0 * sf.F},
                                {"objective_three_quarters", sf.f - 0.75 * sf.F},
                                {"objective_coef", sf.f - cfg.coef * sf.F}};
        if (cfg.scan) r["scan"] = pdi::to_json(scan_sieve_quality(cfg.coef, cfg.grid_step));
        sink.os() << r.dump(2) << '\n';
    }
    if (p.beta_exceeds_one_33rd())
        std::cerr << "note: beta = " << p.beta << " is not below 1/33\n";
    if (range == RangeClass::outside) {
        std::cerr << "c = " << cfg.c << " is outside the theorem range\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// search

struct SearchConfig {
    double c = 0.0;
    double X = 2000.0;
    std::optional<double> N, vartheta, z, D, tau;
    double A = default_A;
    double s = default_s;
    int k = default_kernel_order;
    double coef = 0.75;
    std::size_t witness_limit = default_witness_limit;
    std::size_t prime_cap = default_join_prime_cap;
    bool require_rough = true;
    bool pipeline = false;
    double fourier_T = 0.0;
    unsigned threads = 0;
    std::string output = "-";

    json to_json() const {
        // Threads and output are excluded: they do not change the numbers.
        return {{"search",
                 {{"c", c}, {"X", X}, {"N", optional_json(N)}, {"vartheta", optional_json(vartheta)},
                  {"z", optional_json(z)}, {"D", optional_json(D)}, {"tau", optional_json(tau)}, {"A", A}, {"s", s},
                  {"k", k}, {"coef", coef}, {"witness-limit", witness_limit}, {"prime-cap", prime_cap},
                  {"require-rough", require_rough}, {"pipeline", pipeline}, {"fourier-T", fourier_T}}}};
    }
};

ProblemInstance make_instance(double c, double X, std::optional<double> N, std::optional<double> vartheta,
                              std::optional<double> z, std::optional<double> D, std::optional<double> tau, double A,
                              double s) {
    require(c >= 1.0, "c must be >= 1");
    require(X >= 16.0, "X must be >= 16");
    // Parameters follow X; N only moves the target, so infeasible targets
    // still yield an (empty) search.
    const double n = N.value_or(3.0 * std::pow(X, c));
    auto in = ProblemInstance::from_params(derive_params(c, 3.0 * std::pow(X, c), A, s));
    in.X = X;
    in.N = n;
    const bool desk = vartheta || z || D || tau;
    if (vartheta) in.vartheta = *vartheta;
    if (z) in.z = *z;
    if (D) in.D = *D;
    if (tau) in.tau = *tau;
    if (vartheta) in.K = std::log(X) * std::log(X) / in.vartheta;
    in.asymptotic_regime = !desk && std::fabs(n - 3.0 * std::pow(X, c)) <= 1e-9 * n;
    return in;
}

int cmd_search(const SearchConfig& cfg) {
    const auto in = make_instance(cfg.c, cfg.X, cfg.N, cfg.vartheta, cfg.z, cfg.D, cfg.tau, cfg.A, cfg.s);
    // The witness search reads only the roughness filter; sieve weights are
    // built when the smoothed counts are asked for.
    auto primes = sieve_primes(static_cast<u64>(std::floor(in.X / 2.0)), static_cast<u64>(std::floor(in.X)));
    const auto ctx = cfg.pipeline ? ExpSumContext::build(in, std::move(primes))
                                  : ExpSumContext::build(in, std::move(primes),
                                                         RosserWeights::unit(SieveSign::plus, in.D, in.z),
                                                         RosserWeights::unit(SieveSign::minus, in.D, in.z));
    json summary{{"regime", in.regime()},
                 {"instance",
                  {{"c", in.c}, {"X", in.X}, {"N", in.N}, {"vartheta", in.vartheta}, {"z", in.z}, {"D", in.D},
                   {"tau", in.tau}, {"K", in.K}}}};
    const double lo = 4.0 * std::pow(in.X / 2.0, in.c), hi = 4.0 * std::pow(in.X, in.c);
    const bool feasible = in.N > lo - in.vartheta && in.N < hi + in.vartheta;
    summary["feasible"] = feasible;

    std::vector<Witness> ws;
    if (in.vartheta > 0.0 && ctx.size() > 0) {
        DirectOptions o;
        o.radius = in.vartheta;
        o.require_rough = cfg.require_rough;
        o.threads = cfg.threads;
        o.prime_cap = cfg.prime_cap;
        o.witness_limit = cfg.witness_limit;
        auto r = gamma_direct(ctx, o);
        ws = std::move(r.witnesses);
        summary["solutions"] = r.solutions;
        summary["ordered_hits"] = r.ordered_hits;
        summary["gamma_direct"] = r.value;
        summary["searched"] = pdi::to_json(r.volume);
    } else {
        summary["solutions"] = 0;
        summary["searched"] = pdi::to_json(SearchVolume{ctx.size(), 0, 0, 0, 0});
    }
    if (cfg.pipeline && ctx.size() > 0 && in.vartheta > 0.0) {
        PipelineOptions po;
        po.kernel_order = cfg.k;
        po.coefficient = cfg.coef;
        po.witness_limit = 0;
        po.threads = cfg.threads;
        po.prime_cap = cfg.prime_cap;
        po.fourier = cfg.fourier_T > 0.0;
        po.fourier_options.T = cfg.fourier_T;
        summary["pipeline"] = pdi::to_json(gamma_pipeline(ctx, po));
    }
    Sink sink(cfg.output);
    write_witness_stream(sink.os(), cfg.to_json(), ws, summary);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::string output = "-";
    json to_json() const { return {{"verify", {{"suite", suite}, {"seed", seed}}}}; }
};

int cmd_verify(const VerifyConfig& cfg) {
    const auto checks = run_suite(cfg.suite, cfg.seed);
    json r = artifact_stamp(cfg.to_json());
    json list = json::array();
    bool ok = true;
    for (const auto& c : checks) {
        list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        ok &= c.passed;
        std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    }
    r["checks"] = list;
    r["passed"] = ok;
    Sink sink(cfg.output);
    sink.os() << r.dump(2) << '\n';
    return ok ? 0 : 4;
}

// ---------------------------------------------------------------------------
// trace

struct TraceConfig {
    std::string quantity = "L";
    double c = 1.1;
    double X = 1000.0;
    std::optional<double> N, tau;
    double vartheta = 0.05;
    double z = 5.0;
    double D = 100.0;
    std::string sign = "plus";
    double t0 = 0.0;
    double t1 = 0.01;
    std::size_t points = 201;
    int k = default_kernel_order;
    int order = 2;
    std::vector<double> X_list{250.0, 500.0, 1000.0};
    std::string output = "-";

    json to_json() const {
        return {{"trace",
                 {{"quantity", quantity}, {"c", c}, {"X", X}, {"N", optional_json(N)}, {"tau", optional_json(tau)},
                  {"vartheta", vartheta}, {"z", z}, {"D", D}, {"sign", sign}, {"t0", t0}, {"t1", t1},
                  {"points", points}, {"k", k}, {"order", order}, {"X-list", X_list}}}};
    }
};

WeightSign parse_sign(const std::string& s) {
    if (s == "plus") return WeightSign::plus;
    if (s == "minus") return WeightSign::minus;
    if (s == "unsieved") return WeightSign::unsieved;
    throw precondition_error("unknown sign '" + s + "'");
}

int cmd_trace(const TraceConfig& cfg) {
    require(cfg.points >= 2, "trace: need at least two points");
    Sink sink(cfg.output);
    const json conf = cfg.to_json();
    const double span = cfg.t1 - cfg.t0;
    auto grid = [&](std::size_t i) { return cfg.t0 + span * static_cast<double>(i) / static_cast<double>(cfg.points - 1); };
    if (cfg.quantity == "L") {
        const auto in = make_instance(cfg.c, cfg.X, cfg.N, cfg.vartheta, cfg.z, cfg.D, cfg.tau, default_A, default_s);
        const auto ctx = ExpSumContext::build(in);
        const auto sign = parse_sign(cfg.sign);
        CsvWriter w(sink.os(), conf, {"t", "re_L", "im_L", "abs_L", "abs_M"});
        for (std::size_t i = 0; i < cfg.points; ++i) {
            const double t = grid(i);
            const cplx l = L_sum(ctx, sign, t);
            w.row({t, l.real(), l.imag(), std::abs(l), std::abs(main_term(ctx, sign, t))});
        }
    } else if (cfg.quantity == "I") {
        CsvWriter w(sink.os(), conf, {"alpha", "re_I", "im_I", "abs_I", "decay_bound"});
        const double C = 2.0 / (std::numbers::pi * cfg.c * std::pow(0.5, cfg.c - 1.0));
        for (std::size_t i = 0; i < cfg.points; ++i) {
            const double a = grid(i);
            const cplx v = I_integral(a, cfg.X, cfg.c);
            const double bound = a == 0.0 ? cfg.X / 2.0 : std::min(cfg.X / 2.0, C * std::pow(cfg.X, 1.0 - cfg.c) / std::fabs(a));
            w.row({a, v.real(), v.imag(), std::abs(v), bound});
        }
    } else if (cfg.quantity == "Theta") {
        const auto spec = KernelSpec::make(cfg.vartheta, cfg.k);
        CsvWriter w(sink.os(), conf, {"x", "Theta", "bound"});
        for (std::size_t i = 0; i < cfg.points; ++i) {
            const double x = grid(i);
            w.row({x, theta_fourier(spec, x), kernel_bound(spec, x).min()});
        }
    } else if (cfg.quantity == "moments") {
        CsvWriter w(sink.os(), conf, {"X", "moment", "reference", "ratio"});
        for (double X : cfg.X_list) {
            const auto in = make_instance(cfg.c, X, std::nullopt, cfg.vartheta, cfg.z, cfg.D, cfg.tau, default_A, default_s);
            const auto ctx = ExpSumContext::build(in);
            const auto m = unit_interval_moment(ctx, parse_sign(cfg.sign), cfg.order);
            w.row({X, m.value, m.reference, m.ratio});
        }
    } else if (cfg.quantity == "minsum") {
        CsvWriter w(sink.os(), conf, {"X", "lower", "upper", "reference", "upper_ratio"});
        for (double X : cfg.X_list) {
            const auto r = min_sum(static_cast<std::int64_t>(X), cfg.c);
            w.row({X, r.lower, r.upper, r.reference, r.upper_ratio()});
        }
    } else {
        throw precondition_error("trace: unknown quantity '" + cfg.quantity + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prime quadruples near N: parameters, search, verification and traces"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file; explicit flags take precedence");
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.fallthrough();

    ParamsConfig pc;
    auto* params = app.add_subcommand("params", "Derived parameters and the sieve-quality scan");
    params->add_option("--c", pc.c, "Exponent c")->required();
    params->add_option("--N", pc.N, "Target N (default 3 X^c)");
    params->add_option("--X", pc.X, "X used when N is not given")->capture_default_str();
    params->add_option("--A", pc.A, "Constant A")->capture_default_str();
    params->add_option("--s", pc.s, "Sieve quality s")->capture_default_str();
    params->add_option("--coef", pc.coef, "Coefficient of F(s) in the objective")->capture_default_str();
    params->add_flag("--scan", pc.scan, "Scan the objective over s in [2, 3]");
    params->add_option("--grid-step", pc.grid_step, "Scan step")->capture_default_str();
    params->add_option("--format", pc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    params->add_option("--output", pc.output, "Output path, - for stdout")->capture_default_str();

    SearchConfig sc;
    auto* search = app.add_subcommand("search", "Witness search and the weighted counts");
    search->add_option("--c", sc.c, "Exponent c")->required();
    search->add_option("--X", sc.X, "Primes range over (X/2, X]")->capture_default_str();
    search->add_option("--N", sc.N, "Target N (default 3 X^c)");
    search->add_option("--vartheta", sc.vartheta, "Window half width (default from A)");
    search->add_option("--z", sc.z, "Sifting limit z (default X^beta)");
    search->add_option("--D", sc.D, "Sieve level D (default from X)");
    search->add_option("--tau", sc.tau, "Near-zero range tau (default from X and c)");
    search->add_option("--A", sc.A, "Constant A")->capture_default_str();
    search->add_option("--s", sc.s, "Sieve quality s")->capture_default_str();
    search->add_option("--k", sc.k, "Kernel order")->capture_default_str();
    search->add_option("--coef", sc.coef, "Coefficient in W")->capture_default_str();
    search->add_option("--witness-limit", sc.witness_limit, "Witnesses to report")->capture_default_str();
    search->add_option("--prime-cap", sc.prime_cap, "Largest prime count for the join")->capture_default_str();
    search->add_flag("--require-rough,!--no-require-rough", sc.require_rough, "Require p + 2 coprime to P(z)");
    search->add_flag("--pipeline", sc.pipeline, "Also compute the smoothed counts, B and the prediction");
    search->add_option("--fourier-T", sc.fourier_T, "Fourier-side evaluation up to T (0 skips)")->capture_default_str();
    search->add_option("--threads", sc.threads, "Worker threads, 0 for all cores")->capture_default_str();
    search->add_option("--output", sc.output, "Output path, - for stdout")->capture_default_str();

    VerifyConfig vc;
    auto* verify = app.add_subcommand("verify", "Run invariant suites");
    verify->add_option("--suite", vc.suite, "sieve, kernel, expsum, gamma or all")
        ->check(CLI::IsMember({"sieve", "kernel", "expsum", "gamma", "all"}))
        ->capture_default_str();
    verify->add_option("--seed", vc.seed, "Seed for the sampled vector-sieve check")->capture_default_str();
    verify->add_option("--output", vc.output, "Output path, - for stdout")->capture_default_str();

    TraceConfig tc;
    auto* trace = app.add_subcommand("trace", "CSV traces");
    trace->add_option("--quantity", tc.quantity, "L, I, Theta, moments or minsum")
        ->check(CLI::IsMember({"L", "I", "Theta", "moments", "minsum"}))
        ->capture_default_str();
    trace->add_option("--c", tc.c, "Exponent c")->capture_default_str();
    trace->add_option("--X", tc.X, "X for L and I")->capture_default_str();
    trace->add_option("--N", tc.N, "Target N (default 3 X^c)");
    trace->add_option("--tau", tc.tau, "tau override");
    trace->add_option("--vartheta", tc.vartheta, "Window half width")->capture_default_str();
    trace->add_option("--z", tc.z, "Sifting limit")->capture_default_str();
    trace->add_option("--D", tc.D, "Sieve level")->capture_default_str();
    trace->add_option("--sign", tc.sign, "plus, minus or unsieved")
        ->check(CLI::IsMember({"plus", "minus", "unsieved"}))
        ->capture_default_str();
    trace->add_option("--t0", tc.t0, "Grid start (t, alpha or x)")->capture_default_str();
    trace->add_option("--t1", tc.t1, "Grid end")->capture_default_str();
    trace->add_option("--points", tc.points, "Grid points")->capture_default_str();
    trace->add_option("--k", tc.k, "Kernel order")->capture_default_str();
    trace->add_option("--order", tc.order, "Moment order, 2 or 4")->capture_default_str();
    trace->add_option("--X-list", tc.X_list, "X values for moments and minsum")->capture_default_str();
    trace->add_option("--output", tc.output, "Output path, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*params) return cmd_params(pc);
        if (*search) return cmd_search(sc);
        if (*verify) return cmd_verify(vc);
        if (*trace) return cmd_trace(tc);
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const resource_cap_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
