// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tase/dense.hpp"
#include "tase/harness.hpp"
#include "tase/problems.hpp"
#include "tase/splitting.hpp"
#include "tase/stability.hpp"

using namespace tase;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, bool pass, const std::string& detail, double secs) {
    std::printf("%s  %-22s %s  [%.1f s]\n", pass ? "PASS" : "FAIL", name, detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void note(const std::string& s) { std::printf("        %s\n", s.c_str()); }

double bound_of(const SplitProblem& pr) { return 10.0 * (1.0 + pr.u0.cwiseAbs().maxCoeff()); }

bool bounded(const SplitProblem& pr, const IntegrationRun& r) { return !r.blew_up && r.max_norm <= bound_of(pr); }

const std::vector<double> kYs = {-1e-2, -1e-1, -1.0, -10.0, -1e2, -1e4};

// ---------------------------------------------------------------------------

void check_operator_limits() {
    const auto t0 = Clock::now();
    double m[5];
    for (int p = 2; p <= 4; ++p) {
        const TaseOperator op = TaseOperator::standard(p);
        m[p] = std::abs(rp(p, op.hat_t_limit()));
    }
    const bool ok = std::abs(m[2] - 0.5) < 1e-12 && m[3] <= 1e-3 && std::abs(m[4] - 0.27) <= 5e-3;
    const double secs = seconds_since(t0);
    report("operator-limits", ok && secs < 1.0,
           "|RT(inf)| p2=" + fmt("%.6f", m[2]) + " p3=" + fmt("%.2e", m[3]) + " p4=" + fmt("%.5f", m[4]), secs);
}

void check_hat_t_limits() {
    const auto t0 = Clock::now();
    const double h2 = TaseOperator::standard(2).hat_t_limit();
    const double h3 = TaseOperator::standard(3).hat_t_limit();
    const double h4 = TaseOperator::standard(4).hat_t_limit();
    const bool ok = std::abs(h2 + 1.0) < 1e-12 && std::abs(h3 + 1.5961) <= 1e-3 && std::abs(h4 + 1.5961) <= 1e-3;
    report("hat-t-limits", ok,
           "hat_t(-inf) p2=" + fmt("%.6f", h2) + " p3=" + fmt("%.6f", h3) + " p4=" + fmt("%.6f", h4),
           seconds_since(t0));
}

void check_commuting_kstar() {
    const auto t0 = Clock::now();
    const std::vector<ModeRatio> modes = {{-100, 0.5}, {-10, 1.2}, {-1, 1.5}};
    const double k2 = kstar_real(TaseOperator::standard(2), modes);
    const double k3 = kstar_real(TaseOperator::standard(3), modes);
    const SplitProblem ex = tase::example41(0.0);
    const auto mus = generalized_eigenvalues(Splitting(ex.A, ex.B()));
    const double mu_err = oracle::multiset_distance(mus, {0.5, 1.2, 1.5});
    const double e2 = kstar_empirical(ex, parse_method("trk2"), 20000).kstar;
    const double e3 = kstar_empirical(ex, parse_method("trk3"), 20000).kstar;
    const bool ok = std::abs(k2 - 7.8390e-01) <= 1e-4 && std::abs(k3 - 2.8428e-01) <= 1e-4 && mu_err <= 1e-10 &&
                    std::abs(e2 / k2 - 1.0) <= 0.05 && std::abs(e3 / k3 - 1.0) <= 0.05;
    const double secs = seconds_since(t0);
    report("commuting-3x3-kstar", ok && secs < 10.0,
           "k* p2=" + fmt("%.6f", k2) + " p3=" + fmt("%.6f", k3) + " mu err=" + fmt("%.1e", mu_err) +
               " empirical p2=" + fmt("%.5f", e2) + " p3=" + fmt("%.5f", e3),
           secs);
}

void check_commuting_runs() {
    const auto t0 = Clock::now();
    // unstable: relative error at te = 30 above 1; stable: below 1e-10 at the smallest k, below 1e-2 otherwise
    constexpr double kUnstable = 1.0, kStableSmall = 1e-10, kStable = 1e-2;
    const SplitProblem ex = tase::example41();
    const std::vector<double> ks = {1.8750, 9.3750e-01, 4.6875e-01, 2.3438e-01};
    const Vector ref = ex.exact(30.0);
    auto err = [&](const char* m, double k) {
        const IntegrationRun r = run_method(ex, parse_method(m), k, 30.0, IntegrateOptions{1e100, 0});
        return r.blew_up ? INFINITY : relative_error(r.final_state, ref);
    };
    bool ok = err("trk2", 1.8750) > kUnstable && err("trk2", 2.3438e-01) <= kStableSmall;
    for (double k : {1.8750, 9.3750e-01, 4.6875e-01}) ok = ok && err("trk3", k) > kUnstable;
    ok = ok && err("trk3", 2.3438e-01) <= kStableSmall;
    std::string detail = "errors A: ";
    for (double k : ks) detail += fmt("%.2e", err("trk2", k)) + "/" + fmt("%.2e", err("trk3", k)) + " ";
    for (double k : ks)
        for (const char* m : {"trk2:J", "trk3:J"}) ok = ok && err(m, k) <= (k < 0.3 ? kStableSmall : kStable);
    detail += "| max J error " + fmt("%.2e", std::max(err("trk2:J", 1.8750), err("trk3:J", 1.8750)));
    report("commuting-3x3-runs", ok, detail, seconds_since(t0));
}

void check_real_axis_thresholds() {
    const auto t0 = Clock::now();
    double r[5];
    for (int p = 2; p <= 4; ++p) r[p] = real_axis_endpoints(DiagramQuery::limit(TaseOperator::standard(p))).second;
    const bool ok = std::abs(r[2] - 1.0) <= 1e-4 && std::abs(r[3] - 0.5743) <= 1e-4 && std::abs(r[4] - 0.7445) <= 1e-4;
    report("real-axis-thresholds", ok,
           "mu* p2=" + fmt("%.6f", r[2]) + " p3=" + fmt("%.6f", r[3]) + " p4=" + fmt("%.6f", r[4]) +
               " (want 1, 0.5743, 0.7445 +- 1e-4)",
           seconds_since(t0));
}

void check_noncommuting_fov() {
    const auto t0 = Clock::now();
    const SplitProblem e = tase::example52();
    const Splitting blocks = Splitting(e.A, e.B()).restrict({0, 1});
    const StabilityVerdict v2 = check_thm53(blocks, TaseOperator::standard(2), 2.1e-01, 1.0, 720);
    const StabilityVerdict v3 = check_thm53(blocks, TaseOperator::standard(3), 1.45e-01, 1.0, 720);
    const bool ok = std::abs(blocks.lambda_min() + 10.0) < 1e-12 && v2.holds && v3.holds;
    report("noncommuting-3x3-fov", ok,
           "lambda1=" + fmt("%.3f", blocks.lambda_min()) + " margins p2=" + fmt("%.4f", v2.margin) +
               " p3=" + fmt("%.4f", v3.margin),
           seconds_since(t0));
}

void check_burgers() {
    const auto t0 = Clock::now();
    const int ntheta = 720;
    const double q = 1.0;
    bool ok = true;
    std::string detail;

    // kappa = 1 and kappa = 3 share mu(A, J) and W_q(-A, J)
    const SplitProblem b1 = tase::burgers(1024, 1e-2, 1.0);
    const Splitting sJ(b1.A, b1.J0());
    const auto muJ = generalized_eigenvalues(sJ);
    const FovBoundary wJ = fov_q(sJ, q, ntheta);
    const auto mu1 = kappa_transform(muJ, 1.0);
    double dist = INFINITY;
    for (const cplx& target : {cplx(-0.4875, 3.4130), cplx(-0.4875, -3.4130)}) {
        double best = INFINITY;
        for (const cplx& m : mu1) best = std::min(best, std::abs(m - target));
        dist = std::isinf(dist) ? best : std::max(dist, best);
    }
    ok = ok && dist <= 1e-3;
    detail += "mu dist=" + fmt("%.1e", dist);
    const Splitting s1(b1.A, b1.B());
    bool nec_fails = true;
    for (int p = 2; p <= 4; ++p) {
        const auto [suff, nec] = check_thm55(s1, TaseOperator::standard(p), q, kappa_transform(wJ, 1.0), mu1);
        nec_fails = nec_fails && !nec.holds;
    }
    ok = ok && nec_fails;
    detail += nec_fails ? " nec(k=1) fails" : " nec(k=1) HOLDS";

    auto sufficient = [&](const char* tag, const Splitting& s, const FovBoundary& w, const std::vector<cplx>& mu) {
        detail += std::string(" | suff ") + tag + " margins";
        for (int p = 2; p <= 4; ++p) {
            const auto [suff, nec] = check_thm55(s, TaseOperator::standard(p), q, w, mu);
            ok = ok && suff.holds && suff.margin > 0.0;
            detail += fmt(" %.4f", suff.margin);
        }
    };
    const SplitProblem b3 = tase::burgers(1024, 1e-2, 3.0);
    sufficient("eps=1e-2,kappa=3", Splitting(b3.A, b3.B()), kappa_transform(wJ, 3.0), kappa_transform(muJ, 3.0));
    const SplitProblem c1 = tase::burgers(1024, 1e-1, 1.0);
    const Splitting sc(c1.A, c1.B());
    sufficient("eps=1e-1,kappa=1", sc, fov_q(sc, q, ntheta), generalized_eigenvalues(sc));

    // TRK2 at k = 0.5 over [0, 20]
    IntegrateOptions o;
    o.store_every = 0;
    const MethodSpec trk2 = parse_method("trk2");
    const IntegrationRun r1 = run_method(b1, trk2, 0.5, 20.0, o);
    const IntegrationRun r3 = run_method(b3, trk2, 0.5, 20.0, o);
    const IntegrationRun rc = run_method(c1, trk2, 0.5, 20.0, o);
    ok = ok && r1.blew_up && bounded(b3, r3) && bounded(c1, rc);
    detail += " | trk2 k=0.5: kappa=1 " + (r1.blew_up ? "blow-up t=" + fmt("%.1f", r1.blowup_time) : "bounded") +
              ", kappa=3 max " + fmt("%.3f", r3.max_norm) + ", eps=1e-1 max " + fmt("%.3f", rc.max_norm);
    const double secs = seconds_since(t0);
    report("burgers", ok && secs < 300.0, detail, secs);
}

void check_fhn() {
    const auto t0 = Clock::now();
    const SplitProblem pr = fitzhugh_nagumo(1024, 0.01, -0.7, 0.8, 12.5, 1.2);
    const Splitting s(pr.A, pr.B());
    const FovBoundary w = fov_q(s, 1.0 / 3.0, 720);
    const auto mu = generalized_eigenvalues(s);
    bool ok = true;
    std::string detail = "suff q=1/3 margins";
    for (int p = 2; p <= 4; ++p) {
        const auto [suff, nec] = check_thm55(s, TaseOperator::standard(p), 1.0 / 3.0, w, mu);
        ok = ok && suff.holds;
        detail += fmt(" %.4f", suff.margin);
    }
    IntegrateOptions o;
    o.store_every = 0;
    const IntegrationRun r = run_method(pr, parse_method("trk4"), 0.5, 200.0, o);
    ok = ok && bounded(pr, r);
    detail += " | trk4 k=0.5 t<=200 max " + fmt("%.3f", r.max_norm) + (r.blew_up ? " BLOW-UP" : "");
    report("fhn", ok, detail, seconds_since(t0));
}

void check_fk() {
    const auto t0 = Clock::now();
    const SplitProblem pr = fisher_kolmogorov(100);
    bool ok = true;
    std::string detail = "bounds check margins";
    for (int p = 2; p <= 4; ++p) {
        const StabilityVerdict v = fk_stability_check(pr, TaseOperator::standard(p), INFINITY, NonlinearBounds{0.0, 1.5});
        ok = ok && v.holds;
        detail += fmt(" %.4f", v.margin);
    }
    IntegrateOptions o;
    o.store_every = 0;
    const IntegrationRun r = run_method(pr, parse_method("trk3"), 0.5, 20.0, o);
    ok = ok && bounded(pr, r);
    detail += " | trk3 k=0.5 max " + fmt("%.4f", r.max_norm);
    report("fisher-kolmogorov", ok, detail, seconds_since(t0));
}

// ---------------------------------------------------------------------------

bool prop_nesting() {
    bool ok = true;
    for (int p = 2; p <= 4; ++p) {
        const TaseOperator op = TaseOperator::standard(p);
        std::vector<DiagramQuery> qs;
        for (double y : kYs) qs.push_back(DiagramQuery::at(op, y));
        qs.push_back(DiagramQuery::limit(op));
        // each boundary (more negative y) lies inside every diagram with larger y
        for (std::size_t i = 1; i < qs.size(); ++i) {
            const BoundaryCurve c = boundary(qs[i], 720);
            for (std::size_t j = 0; j < i; ++j)
                for (const cplx& mu : c.points) ok = ok && diagram_slack(qs[j], mu) >= -1e-9;
        }
    }
    note(std::string("nesting on sampled boundaries (1e-9): ") + (ok ? "ok" : "VIOLATED"));
    return ok;
}

bool prop_homothety() {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-1.0, 3.0), im(-4.0, 4.0), ly(-3.0, 3.0);
    int mismatches = 0, checked = 0;
    for (int p = 2; p <= 4; ++p) {
        const TaseOperator op = TaseOperator::standard(p);
        for (int i = 0; i < 500; ++i) {
            const double y = -std::pow(10.0, ly(rng));
            const cplx mu(re(rng), im(rng));
            const double mag = std::abs(oracle::taylor_exp(p, op.hat_t(y) * (1.0 + mu)));
            if (std::abs(mag - 1.0) < 1e-9) continue;
            ++checked;
            if (in_diagram(DiagramQuery::at(op, y), mu) != (mag <= 1.0)) ++mismatches;
        }
    }
    note("homothety on 500 samples per p: " + std::to_string(mismatches) + " mismatches of " +
         std::to_string(checked));
    return mismatches == 0;
}

bool prop_spectral_mapping() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<double> w = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        Matrix Jm = Matrix::Zero(n, n);
        std::vector<double> c(n);
        const int bs = n / 2 + 1;
        const double c0 = u(rng);
        for (int i = 0; i < n; ++i) c[i] = i < bs ? c0 : u(rng);
        for (int i = 0; i < n; ++i) {
            Jm(i, i) = c[i];
            if (i + 1 < bs) Jm(i, i + 1) = 1.0;
        }
        Matrix U = Matrix::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) U(i, j) = u(rng);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix P = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) P(i, perm[i]) = 1.0;
        const Matrix X = P * U * Jm * U.inverse() * P.transpose();
        const auto ev = eig_general(oracle::matrix_poly(w, X)).values;
        std::vector<cplx> want;
        for (double ci : c) {
            double s = 0.0, t = 1.0;
            for (double wq : w) {
                s += wq * t;
                t *= ci;
            }
            want.push_back(s);
        }
        worst = std::max(worst, oracle::multiset_distance({ev.data(), ev.data() + ev.size()}, want));
    }
    note("spectral mapping with Jordan blocks: max multiset distance " + fmt("%.1e", worst) + " (1e-7)");
    return worst < 1e-7;
}

bool prop_prop41_vs_radius() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lk(-3.0, 0.5);
    int compared = 0, disagreements = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const oracle::CommutingPair c = oracle::random_commuting(5, rng);
        const Splitting s(c.A, c.B);
        const TaseOperator op = TaseOperator::standard(2 + trial % 3);
        const double k = std::pow(10.0, lk(rng));
        if (std::abs(spectral_radius(amplification_matrix(s, op, k)) - 1.0) <= 1e-9) continue;
        ++compared;
        if (check_prop41(s, op, k).holds != spectral_radius_check(s, op, k).holds) ++disagreements;
    }
    note("per-mode check vs spectral radius: " + std::to_string(disagreements) + " disagreements in " +
         std::to_string(compared) + " splittings");
    return disagreements == 0 && compared >= 95;
}

bool prop_fov() {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    int outside = 0;
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 4 + 3 * trial;
        Matrix X(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) X(i, j) = nd(rng);
        const FovBoundary w = fov(X, 360);
        const std::vector<cplx> poly(w.points.rbegin(), w.points.rend());
        const auto ev = eig_general(X).values;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (!oracle::in_hull(poly, ev(i), 1e-8)) ++outside;
    }
    // normal matrix: support values equal those of the spectrum
    const int n = 7;
    const Matrix Q = oracle::random_orthogonal(n, rng);
    Matrix B = Matrix::Zero(n, n);
    std::vector<cplx> spec = {-1.5};
    B(0, 0) = -1.5;
    const double ab[3][2] = {{0.5, 2.0}, {-2.0, 0.7}, {1.0, -0.3}};
    for (int b = 0; b < 3; ++b) {
        const int i = 1 + 2 * b;
        B(i, i) = B(i + 1, i + 1) = ab[b][0];
        B(i, i + 1) = ab[b][1];
        B(i + 1, i) = -ab[b][1];
        spec.push_back(cplx(ab[b][0], ab[b][1]));
        spec.push_back(cplx(ab[b][0], -ab[b][1]));
    }
    const FovBoundary w = fov(Matrix(Q * B * Q.transpose()), 720);
    double hull_err = 0.0;
    for (std::size_t j = 0; j < w.angles.size(); ++j) {
        const cplx e = std::polar(1.0, w.angles[j]);
        double best = -INFINITY;
        for (const cplx& z : spec) best = std::max(best, (e * z).real());
        hull_err = std::max(hull_err, std::abs((e * w.points[j]).real() - best));
    }
    note("FOV: " + std::to_string(outside) + " eigenvalues outside the hull; normal-matrix support error " +
         fmt("%.1e", hull_err) + " (1e-8)");
    return outside == 0 && hull_err < 1e-8;
}

double lsq_order(const SplitProblem& pr, int p, const std::vector<double>& ks) {
    IntegrateOptions o;
    o.store_every = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double k : ks) {
        const IntegrationRun r = integrate(pr, TaseMethod::trk(p), k, 1.0, o);
        const double x = std::log(k), y = std::log((r.final_state - pr.exact(1.0)).norm());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(ks.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool prop_orders() {
    const SplitProblem pr = forced_scalar(-2.0, 1.0);
    const std::vector<double> ks = {0.1, 0.05, 0.025, 0.0125};
    const double o2 = lsq_order(pr, 2, ks), o3 = lsq_order(pr, 3, ks), o4 = lsq_order(pr, 4, ks);
    const bool ok = std::abs(o2 - 2.0) <= 0.2 && std::abs(o3 - 3.0) <= 0.2 && std::abs(o4 - 4.0) <= 0.3;
    note("orders on k = 1/10..1/80: " + fmt("%.3f", o2) + " " + fmt("%.3f", o3) + " " + fmt("%.3f", o4) +
         " (want 2+-0.2, 3+-0.2, 4+-0.3)" + (ok ? "" : " VIOLATED"));
    return ok;
}

void check_property_suites() {
    const auto t0 = Clock::now();
    std::printf("        property suites:\n");
    bool ok = prop_nesting();
    ok = prop_homothety() && ok;
    ok = prop_spectral_mapping() && ok;
    ok = prop_prop41_vs_radius() && ok;
    ok = prop_fov() && ok;
    ok = prop_orders() && ok;
    report("property-suites", ok, "see lines above", seconds_since(t0));
}

void check_work_precision() {
    const auto t0 = Clock::now();
    const SplitProblem pr = forced_scalar(-2.0, 1.0);
    const std::vector<double> ks = {1.0 / 160, 1.0 / 320, 1.0 / 640, 1.0 / 1280};
    const auto rows = work_precision_table(pr, {"trk2", "trk3", "trk4", "ros2"}, ks, 1.0);
    bool ok = true;
    std::string detail = "forced scalar, k=1/160..1/1280, slope ranges";
    for (int p = 2; p <= 4; ++p) {
        const std::string name = "trk" + std::to_string(p);
        double prev = INFINITY, lo = INFINITY, hi = -INFINITY;
        for (const WorkPrecisionRow& r : rows) {
            if (r.method != name) continue;
            ok = ok && r.error < prev;
            prev = r.error;
            if (std::isnan(r.order)) continue;
            lo = std::min(lo, r.order);
            hi = std::max(hi, r.order);
            ok = ok && std::abs(r.order - p) <= 0.15;
        }
        detail += " " + name + " [" + fmt("%.3f", lo) + "," + fmt("%.3f", hi) + "]";
    }
    report("work-precision", ok, detail, seconds_since(t0));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    check_operator_limits();
    check_hat_t_limits();
    check_commuting_kstar();
    check_commuting_runs();
    check_real_axis_thresholds();
    check_noncommuting_fov();
    check_fk();
    check_property_suites();
    check_work_precision();
    check_burgers();
    check_fhn();
    std::printf("%d criteria failed, total %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
