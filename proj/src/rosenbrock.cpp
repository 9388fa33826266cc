#include "tase/rosenbrock.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "run_loop.hpp"
#include "tase/errors.hpp"

namespace tase {

void RowTableau::validate() const {
    if (s < 1 || alpha.rows() != s || alpha.cols() != s || gamma.rows() != s || gamma.cols() != s || b.size() != s)
        throw ConfigError("row tableau " + name + ": inconsistent dimensions");
    for (int i = 0; i < s; ++i) {
        if (!(gamma(i, i) > 0.0)) throw ConfigError("row tableau " + name + ": diagonal gamma must be positive");
        for (int j = i; j < s; ++j) {
            if (alpha(i, j) != 0.0) throw ConfigError("row tableau " + name + ": alpha must be strictly lower");
            if (j > i && gamma(i, j) != 0.0) throw ConfigError("row tableau " + name + ": gamma must be lower");
        }
    }
}

RowTableau ros2() {
    const double g = 1.0 + 1.0 / std::sqrt(2.0);
    RowTableau t;
    t.s = 2;
    t.name = "ros2";
    t.alpha = Matrix::Zero(2, 2);
    t.alpha(1, 0) = 1.0;
    t.gamma = Matrix::Zero(2, 2);
    t.gamma(0, 0) = t.gamma(1, 1) = g;
    t.gamma(1, 0) = -2.0 * g;
    t.b = Vector::Constant(2, 0.5);
    return t;
}

RowTableau linear_implicit_euler() {
    RowTableau t;
    t.s = 1;
    t.name = "linimpl-euler";
    t.alpha = Matrix::Zero(1, 1);
    t.gamma = Matrix::Ones(1, 1);
    t.b = Vector::Ones(1);
    return t;
}

RowTableau parse_row_tableau(const std::string& json_text) {
    using nlohmann::json;
    RowTableau t;
    try {
        const json j = json::parse(json_text);
        t.s = j.at("s").get<int>();
        t.name = j.value("name", std::string("row"));
        if (t.s < 1) throw ConfigError("row tableau: s must be positive");
        auto mat = [&](const char* key) {
            const auto rows = j.at(key).get<std::vector<std::vector<double>>>();
            if (static_cast<int>(rows.size()) != t.s) throw ConfigError(std::string("row tableau: bad ") + key);
            Matrix m(t.s, t.s);
            for (int r = 0; r < t.s; ++r) {
                if (static_cast<int>(rows[r].size()) != t.s) throw ConfigError(std::string("row tableau: bad ") + key);
                for (int c = 0; c < t.s; ++c) m(r, c) = rows[r][c];
            }
            return m;
        };
        t.alpha = mat("alpha");
        t.gamma = mat("gamma");
        const auto b = j.at("b").get<std::vector<double>>();
        t.b = Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("row tableau: ") + e.what());
    }
    t.validate();
    return t;
}

RowTableau load_row_tableau(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tableau file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_row_tableau(ss.str());
}

namespace {

class RowStepper {
public:
    RowStepper(const SplitProblem& pr, const RowTableau& tab, JacobianMode mode)
        : pr_(pr), tab_(tab), mode_(mode) {}

    Vector step(double t, const Vector& u, double k) {
        if (mode_ == JacobianMode::Exact || !have_J_) {
            J_ = mode_ == JacobianMode::Exact ? pr_.jacobian(t, u) : pr_.J0();
            have_J_ = true;
            lu_.clear();
        }
        if (k != k_) {
            lu_.clear();
            k_ = k;
        }
        Vector ft;
        if (!pr_.autonomous) {
            const double dt = 1e-6 * std::max(1.0, std::abs(t));
            ft = (pr_.f(t + dt, u) - pr_.f(t - dt, u)) / (2.0 * dt);
            f_evals += 2;
        }
        const int s = tab_.s;
        std::vector<Vector> K(s);
        for (int i = 0; i < s; ++i) {
            Vector U = u;
            Vector G = Vector::Zero(u.size());
            double ai = 0.0, gi = 0.0;
            for (int j = 0; j < i; ++j) {
                if (tab_.alpha(i, j) != 0.0) U.noalias() += tab_.alpha(i, j) * K[j];
                if (tab_.gamma(i, j) != 0.0) G.noalias() += tab_.gamma(i, j) * K[j];
                ai += tab_.alpha(i, j);
                gi += tab_.gamma(i, j);
            }
            gi += tab_.gamma(i, i);
            if (!U.allFinite()) throw NonFiniteState("non-finite stage value");
            Vector rhs = k * pr_.f(t + ai * k, U);
            ++f_evals;
            if (i > 0) rhs.noalias() += k * (J_ * G);
            if (!pr_.autonomous) rhs.noalias() += (gi * k * k) * ft;
            K[i] = factor(tab_.gamma(i, i)).solve(rhs);
            ++solves;
        }
        Vector next = u;
        for (int i = 0; i < s; ++i) next.noalias() += tab_.b(i) * K[i];
        if (!next.allFinite()) throw NonFiniteState("non-finite state");
        return next;
    }

    long f_evals = 0, solves = 0, factorizations = 0;

private:
    const Eigen::PartialPivLU<Matrix>& factor(double g) {
        auto it = lu_.find(g);
        if (it != lu_.end()) return it->second;
        Matrix M = -g * k_ * J_;
        M.diagonal().array() += 1.0;
        ++factorizations;
        auto& lu = lu_.emplace(g, Eigen::PartialPivLU<Matrix>(M)).first->second;
        if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
            throw SolveFailure("row_step: I - gamma k J is singular");
        return lu;
    }

    const SplitProblem& pr_;
    const RowTableau& tab_;
    JacobianMode mode_;
    Matrix J_;
    bool have_J_ = false;
    double k_ = NAN;
    std::map<double, Eigen::PartialPivLU<Matrix>> lu_;
};

}  // namespace

Vector row_step(const SplitProblem& problem, const RowTableau& tableau, double t, const Vector& u, double k,
                JacobianMode mode) {
    tableau.validate();
    RowStepper st(problem, tableau, mode);
    return st.step(t, u, k);
}

IntegrationRun row_integrate(const SplitProblem& problem, const RowTableau& tableau, double k, double t_end,
                             JacobianMode mode, const IntegrateOptions& opts) {
    tableau.validate();
    const auto start = std::chrono::steady_clock::now();
    RowStepper st(problem, tableau, mode);
    IntegrationRun run = detail::run_loop(problem, k, step_count(problem.t0, t_end, k), opts,
                                          [&](double t, const Vector& u) { return st.step(t, u, k); });
    run.stats.f_evals = st.f_evals;
    run.stats.solves = st.solves;
    run.stats.factorizations = st.factorizations;
    run.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace tase
