#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tase/integrator.hpp"
#include "tase/problems.hpp"
#include "tase/rosenbrock.hpp"

namespace tase {

struct MethodSpec {
    enum class Kind { Tase, Row, Explicit };
    Kind kind = Kind::Tase;
    std::string name;
    int p = 2;
    OperatorMatrix matrix = OperatorMatrix::A;
    RowTableau row;
    ExplicitTableau tableau;
};

// trk2 | trk3 | trk4 | trkP:J | ros2 | linimpl-euler | row:<file> | rk4
MethodSpec parse_method(const std::string& text);

IntegrationRun run_method(const SplitProblem& problem, const MethodSpec& method, double k, double t_end,
                          const IntegrateOptions& opts = {});

struct ExperimentConfig {
    std::string problem = "ex41";
    std::map<std::string, double> params;
    std::string method = "trk2";
    std::vector<std::string> methods;          // convergence / workprec sweep
    std::vector<double> k;
    std::optional<double> te;
    std::vector<int> p = {2, 3, 4};
    std::vector<double> q = {1.0 / 3.0, 0.5, 1.0, 2.0};
    std::vector<double> y = {-1e-2, -1.0, -1e2, -INFINITY};
    int ntheta = 720;
    NonlinearBounds bounds;
    std::string out = "-";
    std::uint64_t seed = 0;
    long horizon_steps = 20000;
    long stride_space = 1;
    long stride_time = 1;
    std::vector<long> subblock;                // experimental: analyse only these indices
    bool timing = true;                        // include wall-time column
};

// Applies one key=value setting; throws ConfigError on bad keys or values.
void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Flat "key = value" lines, '#' comments.
void load_config_file(ExperimentConfig& cfg, const std::string& path);
void parse_config_text(ExperimentConfig& cfg, const std::string& text);

SplitProblem build_problem(const ExperimentConfig& cfg);
Splitting build_splitting(const ExperimentConfig& cfg, const SplitProblem& problem);

// Exact solution when known; otherwise classical RK4 with k_ref <= k_min / 100.
Vector reference_solution(const SplitProblem& problem, double t_end, double k_min);
double relative_error(const Vector& u, const Vector& ref);

std::string format_double(double v);

// Each command writes its documented output and returns the process exit code.
int cmd_integrate(const ExperimentConfig& cfg, std::ostream& out);
int cmd_certify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_kstar(const ExperimentConfig& cfg, std::ostream& out);
int cmd_diagram(const ExperimentConfig& cfg, std::ostream& out);
int cmd_fov(const ExperimentConfig& cfg, std::ostream& out);
int cmd_convergence(const ExperimentConfig& cfg, std::ostream& out);
int cmd_work_precision(const ExperimentConfig& cfg, std::ostream& out);

struct KstarResult {
    double kstar = INFINITY;       // +inf when no unstable step size was found
    double k_lo = 0.0, k_hi = 0.0;
    int runs = 0;
};

// Bisection on boundedness ||u_n||_inf <= 10 (1 + ||u_0||_inf) over a fixed step horizon.
KstarResult kstar_empirical(const SplitProblem& problem, const MethodSpec& method, long horizon_steps,
                            double k_start = 0.1, double rel_tol = 1e-3);

struct WorkPrecisionRow {
    std::string method;
    double k;
    double error;
    double wall_time;
    long solves;
    long factorizations;
    double order;                  // NaN for the first row of a method
};

std::vector<WorkPrecisionRow> work_precision_table(const SplitProblem& problem,
                                                   const std::vector<std::string>& methods,
                                                   const std::vector<double>& ks, double t_end);
void write_work_precision_csv(std::ostream& out, const std::vector<WorkPrecisionRow>& rows, bool timing);

}  // namespace tase
