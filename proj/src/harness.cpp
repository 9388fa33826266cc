#include "tase/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tase/errors.hpp"
#include "tase/stability.hpp"

namespace tase {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    const auto slash = s.find('/');
    if (slash != std::string::npos) return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

long parse_integer(const std::string& s) {
    const double v = parse_number(s);
    if (v != std::floor(v) || !std::isfinite(v)) throw ConfigError("not an integer: '" + s + "'");
    return static_cast<long>(v);
}

template <class T, class F>
std::vector<T> parse_list(const std::string& s, F&& conv) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) out.push_back(static_cast<T>(conv(item)));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

const std::vector<std::string> kProblemParams = {"M", "D", "eps", "a", "b", "tau", "kappa", "forcing", "bscale",
                                                 "lambda", "u0"};

// Opens cfg.out unless it is "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::string number_tag(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

nlohmann::json verdict_json(StabilityVerdict v, const SplitProblem& pr) {
    auto it = pr.params.find("kappa");
    if (it != pr.params.end()) v.kappa = it->second;
    return nlohmann::json::parse(v.to_json());
}

nlohmann::json extended(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

MethodSpec parse_method(const std::string& text) {
    MethodSpec m;
    m.name = text;
    if (text.rfind("trk", 0) == 0) {
        std::string rest = text.substr(3);
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            const std::string which = rest.substr(colon + 1);
            if (which == "J") m.matrix = OperatorMatrix::J0;
            else if (which != "A") throw ConfigError("method " + text + ": operator must be A or J");
            rest = rest.substr(0, colon);
        }
        if (rest != "2" && rest != "3" && rest != "4") throw ConfigError("unknown method " + text);
        m.kind = MethodSpec::Kind::Tase;
        m.p = std::stoi(rest);
        m.tableau = tableau_for_order(m.p);
        return m;
    }
    if (text == "ros2") {
        m.kind = MethodSpec::Kind::Row;
        m.row = ros2();
        return m;
    }
    if (text == "linimpl-euler") {
        m.kind = MethodSpec::Kind::Row;
        m.row = linear_implicit_euler();
        return m;
    }
    if (text.rfind("row:", 0) == 0) {
        m.kind = MethodSpec::Kind::Row;
        m.row = load_row_tableau(text.substr(4));
        return m;
    }
    if (text == "rk4") {
        m.kind = MethodSpec::Kind::Explicit;
        m.tableau = classic_rk4();
        m.p = 4;
        return m;
    }
    throw ConfigError("unknown method " + text);
}

IntegrationRun run_method(const SplitProblem& problem, const MethodSpec& method, double k, double t_end,
                          const IntegrateOptions& opts) {
    switch (method.kind) {
        case MethodSpec::Kind::Tase:
            return integrate(problem, TaseMethod{TaseOperator::standard(method.p), method.tableau, method.matrix}, k,
                             t_end, opts);
        case MethodSpec::Kind::Row: return row_integrate(problem, method.row, k, t_end, JacobianMode::Exact, opts);
        case MethodSpec::Kind::Explicit: return integrate_explicit(problem, method.tableau, k, t_end, opts);
    }
    throw ConfigError("unsupported method kind");
}

void set_option(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key), value = trim(raw_value);
    if (key == "problem") cfg.problem = value;
    else if (key == "method") cfg.method = value;
    else if (key == "methods") cfg.methods = split_list(value);
    else if (key == "k") cfg.k = parse_list<double>(value, parse_number);
    else if (key == "te") cfg.te = parse_number(value);
    else if (key == "p") cfg.p = parse_list<int>(value, parse_integer);
    else if (key == "q") cfg.q = parse_list<double>(value, parse_number);
    else if (key == "y") cfg.y = parse_list<double>(value, parse_number);
    else if (key == "ntheta") cfg.ntheta = static_cast<int>(parse_integer(value));
    else if (key == "out") cfg.out = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(value));
    else if (key == "horizon") cfg.horizon_steps = parse_integer(value);
    else if (key == "stride_space") cfg.stride_space = parse_integer(value);
    else if (key == "stride_time") cfg.stride_time = parse_integer(value);
    else if (key == "upsilon_lb") cfg.bounds.upsilon_lb = parse_number(value);
    else if (key == "upsilon_ub") cfg.bounds.upsilon_ub = parse_number(value);
    else if (key == "subblock") cfg.subblock = parse_list<long>(value, parse_integer);
    else if (key == "timing") cfg.timing = parse_integer(value) != 0;
    else if (key.rfind("param.", 0) == 0) cfg.params[key.substr(6)] = parse_number(value);
    else if (std::find(kProblemParams.begin(), kProblemParams.end(), key) != kProblemParams.end())
        cfg.params[key] = parse_number(value);
    else throw ConfigError("unknown option '" + key + "'");

    if (key == "ntheta" && cfg.ntheta < 16) throw ConfigError("ntheta must be at least 16");
    if (key == "k")
        for (double k : cfg.k)
            if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("step sizes must be positive and finite");
    if (key == "horizon" && cfg.horizon_steps < 1) throw ConfigError("horizon must be positive");
    if ((key == "stride_space" && cfg.stride_space < 1) || (key == "stride_time" && cfg.stride_time < 1))
        throw ConfigError("strides must be positive");
    if (key == "y")
        for (double y : cfg.y)
            if (!(y < 0.0)) throw ConfigError("diagram y values must be negative");
}

void parse_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        set_option(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    parse_config_text(cfg, ss.str());
}

SplitProblem build_problem(const ExperimentConfig& cfg) {
    auto params = cfg.params;
    if (cfg.te) params["te"] = *cfg.te;
    return make_problem(cfg.problem, params);
}

Splitting build_splitting(const ExperimentConfig& cfg, const SplitProblem& problem) {
    Splitting s(problem.A, problem.B());
    if (cfg.subblock.empty()) return s;
    std::vector<Eigen::Index> idx(cfg.subblock.begin(), cfg.subblock.end());
    return s.restrict(idx);
}

Vector reference_solution(const SplitProblem& problem, double t_end, double k_min) {
    if (problem.exact) return problem.exact(t_end);
    const Matrix J = problem.J0();
    const double radius = J.cwiseAbs().rowwise().sum().maxCoeff();
    double k_ref = k_min / 100.0;
    if (radius > 0.0) k_ref = std::min(k_ref, 1.0 / radius);
    const long n = std::max<long>(1, static_cast<long>(std::ceil((t_end - problem.t0) / k_ref)));
    IntegrateOptions opts;
    opts.store_every = 0;
    const IntegrationRun run = integrate_explicit(problem, classic_rk4(), (t_end - problem.t0) / n, t_end, opts);
    if (run.blew_up) throw NonFiniteState("reference solution blew up");
    return run.final_state;
}

double relative_error(const Vector& u, const Vector& ref) {
    const double nr = ref.norm();
    const double d = (u - ref).norm();
    return nr > 0.0 ? d / nr : d;
}

int cmd_integrate(const ExperimentConfig& cfg, std::ostream& os) {
    const SplitProblem pr = build_problem(cfg);
    const MethodSpec m = parse_method(cfg.method);
    if (cfg.k.size() != 1) throw ConfigError("integrate needs exactly one step size k");
    IntegrateOptions opts;
    opts.store_every = cfg.stride_time;
    const IntegrationRun run = run_method(pr, m, cfg.k[0], pr.te, opts);
    Output out(cfg.out, os);
    std::ostream& o = out.get();
    o << "t";
    for (Eigen::Index i = 0; i < pr.dim(); i += cfg.stride_space) o << ",u_" << i;
    o << "\n";
    for (std::size_t n = 0; n < run.times.size(); ++n) {
        o << format_double(run.times[n]);
        for (Eigen::Index i = 0; i < pr.dim(); i += cfg.stride_space) o << "," << format_double(run.states[n](i));
        o << "\n";
    }
    if (run.blew_up)
        o << "# status=blowup t=" << format_double(run.blowup_time) << " steps=" << run.steps << "\n";
    else
        o << "# status=ok steps=" << run.steps << " max_norm=" << format_double(run.max_norm) << "\n";
    return run.blew_up ? 2 : 0;
}

int cmd_certify(const ExperimentConfig& cfg, std::ostream& os) {
    using nlohmann::json;
    const SplitProblem pr = build_problem(cfg);
    const Splitting s = build_splitting(cfg, pr);
    json report;
    report["problem"] = pr.name;
    report["dim"] = s.dim();
    report["commuting"] = s.commuting();
    report["commutator_norm"] = s.commutator_norm();
    if (!cfg.subblock.empty()) report["subblock"] = cfg.subblock;
    json verdicts = json::array();
    if (s.commuting()) {
        report["path"] = "commuting";
        const auto pairs = common_eigenpairs(s);
        bool real_mu = true;
        std::vector<ModeRatio> ratios;
        json modes = json::array();
        for (const auto& m : pairs) {
            modes.push_back({{"lambda", m.lambda}, {"mu", {m.mu.real(), m.mu.imag()}}});
            if (std::abs(m.mu.imag()) > 1e-10 * std::max(1.0, std::abs(m.mu))) real_mu = false;
            ratios.push_back({m.lambda, m.mu.real()});
        }
        report["modes"] = modes;
        json kstar = json::object();
        for (int p : cfg.p) {
            const TaseOperator op = TaseOperator::standard(p);
            verdicts.push_back(verdict_json(check_thm45_unconditional(s, op), pr));
            if (real_mu) kstar["trk" + std::to_string(p)] = extended(kstar_real(op, ratios));
            for (double k : cfg.k) {
                verdicts.push_back(verdict_json(check_prop41(s, op, k), pr));
                verdicts.push_back(verdict_json(check_thm44(s, op, k), pr));
                verdicts.push_back(verdict_json(spectral_radius_check(s, op, k), pr));
            }
        }
        report["kstar"] = kstar;
    } else {
        report["path"] = "field-of-values";
        const auto gen = generalized_eigenvalues(s);
        for (double q : cfg.q) {
            const FovBoundary w = fov_q(s, q, cfg.ntheta);
            for (int p : cfg.p) {
                const TaseOperator op = TaseOperator::standard(p);
                auto [suff, nec] = check_thm55(s, op, q, w, gen);
                verdicts.push_back(verdict_json(suff, pr));
                if (q == cfg.q.front()) verdicts.push_back(verdict_json(nec, pr));
                for (double k : cfg.k) verdicts.push_back(verdict_json(check_thm53(s, op, k, q, w), pr));
            }
        }
        if (s.dim() <= 512)
            for (int p : cfg.p)
                for (double k : cfg.k)
                    verdicts.push_back(verdict_json(spectral_radius_check(s, TaseOperator::standard(p), k), pr));
    }
    report["verdicts"] = verdicts;
    Output out(cfg.out, os);
    out.get() << report.dump(2) << "\n";
    return 0;
}

KstarResult kstar_empirical(const SplitProblem& problem, const MethodSpec& method, long horizon_steps,
                            double k_start, double rel_tol) {
    KstarResult res;
    const double bound = 10.0 * (1.0 + problem.u0.cwiseAbs().maxCoeff());
    IntegrateOptions opts;
    opts.store_every = 0;
    opts.overflow_guard = bound;
    auto stable = [&](double k) {
        ++res.runs;
        IntegrationRun run;
        const double t_end = problem.t0 + k * static_cast<double>(horizon_steps);
        if (method.kind == MethodSpec::Kind::Tase)
            run = integrate_steps(problem,
                                  TaseMethod{TaseOperator::standard(method.p), method.tableau, method.matrix}, k,
                                  horizon_steps, opts);
        else
            run = run_method(problem, method, k, t_end, opts);
        return !run.blew_up && run.max_norm <= bound;
    };
    double lo, hi;
    if (stable(k_start)) {
        lo = k_start;
        hi = 2.0 * k_start;
        while (stable(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e4) {
                res.k_lo = lo;
                res.k_hi = INFINITY;
                return res;
            }
        }
    } else {
        hi = k_start;
        lo = 0.5 * k_start;
        while (!stable(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-12) throw NoBracket("kstar: unstable down to k = 1e-12");
        }
    }
    while ((hi - lo) > rel_tol * lo) {
        const double mid = 0.5 * (lo + hi);
        (stable(mid) ? lo : hi) = mid;
    }
    res.k_lo = lo;
    res.k_hi = hi;
    res.kstar = 0.5 * (lo + hi);
    return res;
}

int cmd_kstar(const ExperimentConfig& cfg, std::ostream& os) {
    const SplitProblem pr = build_problem(cfg);
    const std::vector<std::string> names = cfg.methods.empty() ? std::vector<std::string>{cfg.method} : cfg.methods;
    std::vector<MethodSpec> methods;
    for (const std::string& n : names) methods.push_back(parse_method(n));
    const double k0 = cfg.k.empty() ? 0.1 : cfg.k.front();
    Output out(cfg.out, os);
    out.get() << "method,kstar,k_lo,k_hi,runs\n";
    for (const MethodSpec& m : methods) {
        const KstarResult r = kstar_empirical(pr, m, cfg.horizon_steps, k0);
        out.get() << m.name << "," << (std::isinf(r.kstar) ? std::string("inf") : format_double(r.kstar)) << ","
                  << format_double(r.k_lo) << "," << (std::isinf(r.k_hi) ? std::string("inf") : format_double(r.k_hi))
                  << "," << r.runs << "\n";
    }
    return 0;
}

int cmd_diagram(const ExperimentConfig& cfg, std::ostream& os) {
    const bool to_dir = cfg.out != "-";
    if (to_dir) std::filesystem::create_directories(cfg.out);
    for (int p : cfg.p) {
        const TaseOperator op = TaseOperator::standard(p);
        for (double y : cfg.y) {
            const DiagramQuery q = std::isinf(y) ? DiagramQuery::limit(op) : DiagramQuery::at(op, y);
            const BoundaryCurve c = boundary(q, cfg.ntheta);
            if (to_dir) {
                const std::string path =
                    (std::filesystem::path(cfg.out) / ("diagram_p" + std::to_string(p) + "_y" + number_tag(y) + ".csv"))
                        .string();
                std::ofstream f(path);
                write_boundary_csv(f, c);
                os << path << "\n";
            } else {
                os << "# p=" << p << " y=" << number_tag(y) << "\n";
                write_boundary_csv(os, c);
            }
        }
    }
    // hat_t on a log grid for the function plot
    std::ostringstream ht;
    ht << "y";
    for (int p : cfg.p) ht << ",p" << p;
    ht << "\n";
    const int n = 401;
    for (int i = 0; i < n; ++i) {
        const double y = -std::pow(10.0, -8.0 + 16.0 * i / (n - 1));
        ht << format_double(y);
        for (int p : cfg.p) ht << "," << format_double(TaseOperator::standard(p).hat_t(y));
        ht << "\n";
    }
    if (to_dir) {
        const std::string path = (std::filesystem::path(cfg.out) / "hat_t.csv").string();
        std::ofstream f(path);
        f << ht.str();
        os << path << "\n";
    } else {
        os << "# hat_t\n" << ht.str();
    }
    return 0;
}

int cmd_fov(const ExperimentConfig& cfg, std::ostream& os) {
    const SplitProblem pr = build_problem(cfg);
    const Splitting s = build_splitting(cfg, pr);
    const bool to_dir = cfg.out != "-";
    if (to_dir) std::filesystem::create_directories(cfg.out);
    for (double q : cfg.q) {
        const FovBoundary w = fov_q(s, q, cfg.ntheta);
        if (to_dir) {
            const std::string path = (std::filesystem::path(cfg.out) / ("fov_q" + number_tag(q) + ".csv")).string();
            std::ofstream f(path);
            write_fov_csv(f, w);
            os << path << "\n";
        } else {
            os << "# q=" << number_tag(q) << "\n";
            write_fov_csv(os, w);
        }
    }
    const auto gen = generalized_eigenvalues(s);
    std::ostringstream mu;
    mu << "re,im\n";
    for (const cplx& z : gen) mu << format_double(z.real()) << "," << format_double(z.imag()) << "\n";
    if (to_dir) {
        const std::string path = (std::filesystem::path(cfg.out) / "mu.csv").string();
        std::ofstream f(path);
        f << mu.str();
        os << path << "\n";
    } else {
        os << "# generalized eigenvalues\n" << mu.str();
    }
    return 0;
}

std::vector<WorkPrecisionRow> work_precision_table(const SplitProblem& problem,
                                                   const std::vector<std::string>& methods,
                                                   const std::vector<double>& ks, double t_end) {
    if (ks.empty()) throw ConfigError("a list of step sizes is required");
    const double k_min = *std::min_element(ks.begin(), ks.end());
    const Vector ref = reference_solution(problem, t_end, k_min);
    std::vector<WorkPrecisionRow> rows;
    IntegrateOptions opts;
    opts.store_every = 0;
    for (const auto& name : methods) {
        const MethodSpec m = parse_method(name);
        double prev_err = NAN, prev_k = NAN;
        for (double k : ks) {
            const IntegrationRun run = run_method(problem, m, k, t_end, opts);
            WorkPrecisionRow row{m.name, k, INFINITY, run.stats.wall_seconds, run.stats.solves,
                                 run.stats.factorizations, NAN};
            if (!run.blew_up) row.error = relative_error(run.final_state, ref);
            if (!std::isnan(prev_err) && row.error > 0.0 && prev_err > 0.0 && std::isfinite(row.error))
                row.order = std::log(prev_err / row.error) / std::log(prev_k / k);
            prev_err = row.error;
            prev_k = k;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_work_precision_csv(std::ostream& out, const std::vector<WorkPrecisionRow>& rows, bool timing) {
    out << "method,k,error,wall_time,n_solves,n_factorizations,order\n";
    for (const auto& r : rows) {
        out << r.method << "," << format_double(r.k) << "," << format_double(r.error) << ","
            << format_double(timing ? r.wall_time : 0.0) << "," << r.solves << "," << r.factorizations << ","
            << (std::isnan(r.order) ? std::string("") : format_double(r.order)) << "\n";
    }
}

namespace {

int table_command(const ExperimentConfig& cfg, std::ostream& os, std::vector<std::string> methods) {
    const SplitProblem pr = build_problem(cfg);
    std::vector<double> ks = cfg.k;
    if (ks.empty()) ks = {0.1, 0.05, 0.025, 0.0125};
    std::sort(ks.begin(), ks.end(), std::greater<>());
    const auto rows = work_precision_table(pr, methods, ks, pr.te);
    Output out(cfg.out, os);
    write_work_precision_csv(out.get(), rows, cfg.timing);
    for (const auto& r : rows)
        if (!std::isfinite(r.error)) return 2;
    return 0;
}

}  // namespace

int cmd_convergence(const ExperimentConfig& cfg, std::ostream& os) {
    return table_command(cfg, os, cfg.methods.empty() ? std::vector<std::string>{cfg.method} : cfg.methods);
}

int cmd_work_precision(const ExperimentConfig& cfg, std::ostream& os) {
    return table_command(cfg, os,
                         cfg.methods.empty() ? std::vector<std::string>{"trk2", "trk3", "trk4", "ros2"} : cfg.methods);
}

}  // namespace tase
