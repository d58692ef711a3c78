#include "cli.hpp"

#include "pdw/checks.hpp"
#include "pdw/error.hpp"
#include "pdw/lyapunov.hpp"
#include "pdw/matdist.hpp"
#include "pdw/parallel.hpp"
#include "pdw/report_io.hpp"
#include "pdw/walks.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace pdw::cli {

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string threads = "auto";
    std::string out = "-";
    std::string format;  // empty: command default
    std::string config;
};

struct Model {
    int d = 1;
    double alpha = 2.0;
    double beta = 5.0;
    ModelParams params() const { return {d, alpha, beta}; }
};

struct SampleOpts {
    Model m;
    std::string dist = "beta2";
    std::size_t n = 1000;
    bool matrices = false;
};

struct WalkOpts {
    Model m;
    int steps = 10;
    std::string kind = "cholesky";
    std::string construction = "recursive";
    std::string init = "ivw";
    std::string increments;
};

struct DufresneOpts {
    Model m;
    std::size_t n = 1000;
    double tail_tol = 1e-10;
    int max_terms = 0;
    std::string kind = "cholesky";
};

struct LyapunovOpts {
    Model m;
    std::string dist = "beta2";
    int steps = 2000;
    int replicas = 200;
    std::string method = "both";
    std::string kind = "sqrt";
};

struct VerifyOpts {
    std::vector<std::string> names;
    double scale = 1.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

SplitKind parse_kind(const std::string& s) { return s == "sqrt" ? SplitKind::SquareRoot : SplitKind::Cholesky; }

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

WalkInit parse_init(const std::string& s, int d) {
    if (s == "ivw") return WalkInit::inv_wishart();
    if (s == "identity") return WalkInit::identity();
    if (s.rfind("fixed:", 0) == 0) {
        const auto v = parse_list(s.substr(6));
        Mat m = Mat::Zero(d, d);
        if (static_cast<int>(v.size()) == d) {
            for (int i = 0; i < d; ++i) m(i, i) = v[i];
        } else if (static_cast<int>(v.size()) == d * d) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m(i, j) = v[i * d + j];
        } else {
            throw UsageError("fixed initial state needs d or d*d values");
        }
        return WalkInit::fixed(PosDef::from_matrix(m));
    }
    throw UsageError("--init must be ivw, identity or fixed:<values>");
}

void add_model(CLI::App* sub, Model& m) {
    sub->add_option("--d", m.d, "matrix dimension")->capture_default_str();
    sub->add_option("--alpha", m.alpha, "alpha parameter")->capture_default_str();
    sub->add_option("--beta", m.beta, "beta parameter")->capture_default_str();
}

ParamEcho base_echo(const Globals& g, const std::string& command, const std::string& format) {
    return {{"version", version()},  {"command", command},     {"seed", std::to_string(g.seed)},
            {"threads", g.threads},  {"format", format}};
}

void echo_model(ParamEcho& e, const Model& m) {
    e.emplace_back("d", std::to_string(m.d));
    e.emplace_back("alpha", num(m.alpha));
    e.emplace_back("beta", num(m.beta));
}

// Flat key=value config: keys naming global options go before the
// subcommand, the rest right after it, and only when the key is absent from
// the command line.
std::vector<std::string> apply_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");

    std::size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < args.size() && !sub; ++i) {
        for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) {
            if (s->get_name() == args[i]) {
                sub = s;
                sub_pos = i;
                break;
            }
        }
    }
    auto given = [&](const std::string& key) {
        for (const auto& a : args)
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> front, after;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config" || given(key)) continue;
        const std::string token = "--" + key + "=" + value;
        if (app.get_option_no_throw("--" + key)) {
            front.push_back(token);
        } else if (sub && sub->get_option_no_throw("--" + key)) {
            after.push_back(token);
        } else {
            throw UsageError("config key '" + key + "' is not an option of this command");
        }
    }
    std::vector<std::string> out = front;
    for (std::size_t i = 0; i < args.size(); ++i) {
        out.push_back(args[i]);
        if (i == sub_pos) out.insert(out.end(), after.begin(), after.end());
    }
    return out;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path != "-" && !path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

int cmd_sample(const Globals& g, const SampleOpts& o, std::ostream& os) {
    const std::string format = g.format.empty() ? "csv" : g.format;
    const Law law = parse_law(o.dist);
    const ModelParams p = o.m.params();
    if (law == Law::Wishart) require_shape(p.d, p.alpha, "alpha");
    else if (law == Law::InvWishart) require_shape(p.d, p.beta, "beta");
    else require_sampling(p);
    auto xs = parallel_generate<Mat>(o.n, g.seed, stream_group(100),
                                     [&](std::size_t, RngStream& rng) { return sample_law(law, p, rng).matrix(); });
    ParamEcho echo = base_echo(g, "sample", format);
    echo.emplace_back("dist", to_string(law));
    echo_model(echo, o.m);
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("matrices", o.matrices ? "true" : "false");
    const auto fs = std::vector<Functional>{Functional::trace(), Functional::log_det(), Functional::lambda_max(),
                                            Functional::lambda_min()};
    if (format == "csv") {
        write_csv_header(os, echo);
        os << "index";
        for (const auto& f : fs) os << "," << f.name();
        if (o.matrices)
            for (int i = 0; i < p.d; ++i)
                for (int j = 0; j < p.d; ++j) os << ",x_" << i << "_" << j;
        os << "\n" << std::setprecision(17);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const PosDef x = PosDef::from_matrix(xs[k]);
            os << k;
            for (const auto& f : fs) os << "," << f(x);
            if (o.matrices)
                for (int i = 0; i < p.d; ++i)
                    for (int j = 0; j < p.d; ++j) os << "," << xs[k](i, j);
            os << "\n";
        }
    } else {
        Json j;
        j["header"] = header_json(echo);
        Json arr = Json::array();
        for (const auto& m : xs) {
            const PosDef x = PosDef::from_matrix(m);
            Json row;
            for (const auto& f : fs) row[f.name()] = f(x);
            if (o.matrices) row["matrix"] = matrix_to_json(m);
            arr.push_back(row);
        }
        j["samples"] = arr;
        os << j.dump() << "\n";
    }
    return kPass;
}

int cmd_walk(const Globals& g, const WalkOpts& o, bool steps_given, std::ostream& os) {
    const std::string format = g.format.empty() ? "csv" : g.format;
    WalkConfig cfg;
    cfg.params = o.m.params();
    cfg.kind = parse_kind(o.kind);
    cfg.construction = o.construction == "closed" ? Construction::Closed : Construction::Recursive;
    cfg.init = parse_init(o.init, o.m.d);
    cfg.steps = o.steps;
    WalkTrace tr;
    if (!o.increments.empty()) {
        if (steps_given) throw UsageError("--increments and --steps are mutually exclusive");
        if (o.m.d != 1) throw UsageError("--increments is only available for d = 1");
        std::vector<PosDef> incs;
        for (double v : parse_list(o.increments)) incs.push_back(PosDef::scalar(v));
        cfg.steps = static_cast<int>(incs.size());
        cfg.validate();
        RngStream rng(g.seed, stream_group(101));
        tr = walk_from_increments(cfg, draw_initial(cfg, rng), incs);
    } else {
        RngStream rng(g.seed, stream_group(101));
        tr = simulate_walk(cfg, rng);
    }
    ParamEcho echo = base_echo(g, "walk", format);
    echo_model(echo, o.m);
    echo.emplace_back("steps", std::to_string(cfg.steps));
    echo.emplace_back("kind", to_string(cfg.kind));
    echo.emplace_back("construction", to_string(cfg.construction));
    echo.emplace_back("init", o.init);
    echo.emplace_back("increments", o.increments.empty() ? "beta2" : o.increments);
    if (format == "csv") {
        write_csv_header(os, echo);
        write_trace_csv(os, tr);
    } else {
        Json j;
        j["header"] = header_json(echo);
        j["trace"] = trace_to_json(tr);
        os << j.dump() << "\n";
    }
    return kPass;
}

int cmd_dufresne(const Globals& g, const DufresneOpts& o, std::ostream& os) {
    const std::string format = g.format.empty() ? "csv" : g.format;
    WalkConfig cfg;
    cfg.params = o.m.params();
    cfg.kind = parse_kind(o.kind);
    require_dufresne(cfg.params);
    const int max_terms = o.max_terms > 0 ? o.max_terms : default_dufresne_max_terms(cfg.params, o.tail_tol);
    auto res = parallel_generate<std::pair<Mat, int>>(o.n, g.seed, stream_group(102),
                                                      [&](std::size_t, RngStream& rng) {
                                                          auto r = dufresne_series_ex(cfg, o.tail_tol, max_terms, rng);
                                                          return std::make_pair(r.value.matrix(), r.terms);
                                                      });
    ParamEcho echo = base_echo(g, "dufresne", format);
    echo_model(echo, o.m);
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("tail_tol", num(o.tail_tol));
    echo.emplace_back("max_terms", std::to_string(max_terms));
    echo.emplace_back("kind", to_string(cfg.kind));
    if (format == "csv") {
        write_csv_header(os, echo);
        os << "index,trace,logdet,lambda_max,terms\n" << std::setprecision(17);
        for (std::size_t k = 0; k < res.size(); ++k) {
            const PosDef x = PosDef::from_matrix(res[k].first);
            os << k << "," << trace(x) << "," << log_det(x) << "," << lambda_max(x) << "," << res[k].second << "\n";
        }
    } else {
        Json j;
        j["header"] = header_json(echo);
        Json arr = Json::array();
        for (const auto& [m, terms] : res) arr.push_back({{"matrix", matrix_to_json(m)}, {"terms", terms}});
        j["samples"] = arr;
        os << j.dump() << "\n";
    }
    return kPass;
}

int cmd_lyapunov(const Globals& g, const LyapunovOpts& o, std::ostream& os) {
    const std::string format = g.format.empty() ? "json" : g.format;
    const Law law = parse_law(o.dist);
    const ModelParams p = o.m.params();
    std::vector<LyapunovReport> reps;
    if (o.method == "cholesky" || o.method == "both")
        reps.push_back(empirical_mu_cholesky(law, p, o.steps, o.replicas, g.seed));
    if (o.method == "eigen" || o.method == "both")
        reps.push_back(empirical_mu_eigen(law, p, parse_kind(o.kind), o.steps, o.replicas, g.seed + 1));
    ParamEcho echo = base_echo(g, "lyapunov", format);
    echo.emplace_back("dist", to_string(law));
    echo_model(echo, o.m);
    echo.emplace_back("steps", std::to_string(o.steps));
    echo.emplace_back("replicas", std::to_string(o.replicas));
    echo.emplace_back("method", o.method);
    echo.emplace_back("kind", o.kind);
    if (format == "csv") {
        write_csv_header(os, echo);
        os << "method,k,mu_hat,std_err,mu_closed\n" << std::setprecision(17);
        for (const auto& r : reps)
            for (int k = 0; k < p.d; ++k)
                os << r.method << "," << k + 1 << "," << r.mu_hat[k] << "," << r.std_err[k] << "," << r.mu_closed[k]
                   << "\n";
    } else {
        os << Json{{"header", header_json(echo)}}.dump() << "\n";
        for (const auto& r : reps) os << to_json(r).dump() << "\n";
    }
    return kPass;
}

int cmd_verify(const Globals& g, const VerifyOpts& o, std::ostream& os, std::ostream& err) {
    const std::string format = g.format.empty() ? "json" : g.format;
    std::vector<std::string> names;
    for (const auto& n : o.names) {
        if (n == "all") {
            for (const auto& d : default_check_names()) names.push_back(d);
        } else {
            const auto known = known_check_names();
            if (std::find(known.begin(), known.end(), n) == known.end()) throw UsageError("unknown check '" + n + "'");
            names.push_back(n);
        }
    }
    if (names.empty()) names = default_check_names();
    ParamEcho echo = base_echo(g, "verify", format);
    std::string joined;
    for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
    echo.emplace_back("checks", joined);
    echo.emplace_back("scale", num(o.scale));
    if (format == "csv") {
        write_csv_header(os, echo);
        os << "name,statistic,threshold,n1,n2,passed,seed\n";
    } else {
        os << Json{{"header", header_json(echo)}}.dump() << "\n";
    }
    bool all_passed = true;
    bool domain = false;
    for (const auto& n : names) {
        TestReport r;
        try {
            r = run_named_check(n, g.seed, o.scale);
        } catch (const DomainError& e) {
            r.name = n;
            r.seed = g.seed;
            r.details = std::string("domain error: ") + e.what();
            r.statistic = 2.0;
            domain = true;
        } catch (const Error& e) {
            r.name = n;
            r.seed = g.seed;
            r.details = std::string("error: ") + e.what();
            r.statistic = 2.0;
        }
        all_passed = all_passed && r.passed;
        if (format == "csv") {
            os << r.name << "," << r.statistic << "," << r.threshold << "," << r.n1 << "," << r.n2 << ","
               << (r.passed ? "true" : "false") << "," << r.seed << "\n";
        } else {
            os << to_json(r).dump() << "\n";
        }
        os.flush();
        if (!r.passed) err << "check " << r.name << " failed: " << r.details << "\n";
    }
    if (domain) return kDomain;
    return all_passed ? kPass : kCheckFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invariant random walks on positive definite matrices"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "64-bit seed (env POSDEFWALKS_SEED)")
        ->envname("POSDEFWALKS_SEED")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "thread count or 'auto'")
        ->check([](const std::string& s) -> std::string {
            if (s == "auto") return {};
            try {
                if (std::stoi(s) >= 1) return {};
            } catch (const std::exception&) {
            }
            return "threads must be a positive integer or 'auto'";
        })
        ->capture_default_str();
    app.add_option("--out", g.out, "output path ('-' for stdout)")->capture_default_str();
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", g.config, "flat key=value config file");

    SampleOpts so;
    auto* sample = app.add_subcommand("sample", "draw samples from a matrix law");
    sample->add_option("--dist", so.dist, "wishart, invwishart, beta1 or beta2")
        ->check(CLI::IsMember({"wishart", "invwishart", "beta1", "beta2"}))
        ->capture_default_str();
    add_model(sample, so.m);
    sample->add_option("--n", so.n, "number of samples")->capture_default_str();
    sample->add_flag("--matrices", so.matrices, "also write full matrices");

    WalkOpts wo;
    auto* walk = app.add_subcommand("walk", "simulate one walk trace");
    add_model(walk, wo.m);
    auto* steps_opt = walk->add_option("--steps", wo.steps, "number of steps")->capture_default_str();
    walk->add_option("--kind", wo.kind, "cholesky or sqrt")
        ->check(CLI::IsMember({"cholesky", "sqrt"}))
        ->capture_default_str();
    walk->add_option("--construction", wo.construction, "recursive or closed")
        ->check(CLI::IsMember({"recursive", "closed"}))
        ->capture_default_str();
    walk->add_option("--init", wo.init, "ivw, identity or fixed:<values>")->capture_default_str();
    walk->add_option("--increments", wo.increments, "comma-separated increments (d = 1)");

    DufresneOpts dopt;
    auto* duf = app.add_subcommand("dufresne", "sample the truncated Dufresne series");
    add_model(duf, dopt.m);
    duf->add_option("--n", dopt.n, "number of samples")->capture_default_str();
    duf->add_option("--tail-tol", dopt.tail_tol, "relative trace stopping tolerance")->capture_default_str();
    duf->add_option("--max-terms", dopt.max_terms, "term budget (0: automatic)")->capture_default_str();
    duf->add_option("--kind", dopt.kind, "cholesky or sqrt")
        ->check(CLI::IsMember({"cholesky", "sqrt"}))
        ->capture_default_str();

    LyapunovOpts lo;
    lo.m.alpha = 4.0;
    lo.m.beta = 8.0;
    auto* lyap = app.add_subcommand("lyapunov", "estimate Lyapunov exponents");
    lyap->add_option("--dist", lo.dist, "wishart, invwishart or beta2")
        ->check(CLI::IsMember({"wishart", "invwishart", "beta2"}))
        ->capture_default_str();
    add_model(lyap, lo.m);
    lyap->add_option("--steps", lo.steps, "steps per replica")->capture_default_str();
    lyap->add_option("--replicas", lo.replicas, "independent replicas")->capture_default_str();
    lyap->add_option("--method", lo.method, "cholesky, eigen or both")
        ->check(CLI::IsMember({"cholesky", "eigen", "both"}))
        ->capture_default_str();
    lyap->add_option("--kind", lo.kind, "splitting function of the eigenvalue method")
        ->check(CLI::IsMember({"cholesky", "sqrt"}))
        ->capture_default_str();

    VerifyOpts vo;
    auto* ver = app.add_subcommand("verify", "run verification checks");
    ver->add_option("checks", vo.names, "check names or 'all'");
    ver->add_option("--scale", vo.scale, "Monte Carlo sample-size factor in (0, 1]")->capture_default_str();

    std::vector<std::string> full;
    try {
        full = apply_config(args, app);
        std::vector<std::string> rev(full.rbegin(), full.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    if (g.threads != "auto") set_thread_count(std::stoi(g.threads));

    try {
        Output o(g.out, out);
        if (*sample) return cmd_sample(g, so, o.get());
        if (*walk) return cmd_walk(g, wo, steps_opt->count() > 0, o.get());
        if (*duf) return cmd_dufresne(g, dopt, o.get());
        if (*lyap) return cmd_lyapunov(g, lo, o.get());
        if (*ver) return cmd_verify(g, vo, o.get(), err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const NotPositiveDefinite& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const StepOverflow& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailure;
    }
    return kUsage;
}

}  // namespace pdw::cli
