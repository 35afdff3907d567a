#include "gridfc/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace gridfc::lp {

namespace {

constexpr double kPivTol = 1e-9;   // entries below this never pivot
constexpr double kZeroStep = 1e-10;

enum class ColState : unsigned char { Basic, AtLower, AtUpper, FreeAtZero };

struct Eta {
    int pos;            // basis position replaced
    Eigen::VectorXd w;  // B_old^{-1} * entering column
};

struct SparseCol {
    std::vector<std::pair<int, double>> entries; // (row, coefficient)
};

class Simplex {
public:
    Simplex(const Problem& p, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
            const SimplexOptions& opts)
        : opts_(opts), n_(p.num_variables()), m_(p.num_constraints()) {
        build(p, lower, upper);
    }

    LpResult run() {
        LpResult res;
        if (bounds_inconsistent_) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        const long cap = opts_.max_iterations > 0
                             ? opts_.max_iterations
                             : 100000L + 10L * static_cast<long>(n_ + m_);

        // Phase 1: drive artificial infeasibility to zero.
        if (n_art_ > 0) {
            const LpStatus s1 = optimize(phase1_cost_, cap);
            res.iterations = iterations_;
            if (s1 == LpStatus::IterationLimit) {
                res.status = LpStatus::IterationLimit;
                return res;
            }
            const double infeas_tol = std::max(1e-6, opts_.feas_tol * (1.0 + rhs_.lpNorm<1>()));
            if (s1 != LpStatus::Optimal || artificial_level() > infeas_tol) {
                res.status = LpStatus::Infeasible;
                return res;
            }
            // Artificials may stay basic at zero but must never move again.
            for (int j = n_ + m_; j < total_; ++j) { lo_[j] = 0.0; up_[j] = 0.0; }
        }

        const LpStatus s2 = optimize(phase2_cost_, cap);
        res.iterations = iterations_;
        res.status = s2;
        res.x = extract();
        double obj = 0.0;
        for (int j = 0; j < n_; ++j) obj += original_cost_[j] * res.x[j];
        res.objective = obj;
        return res;
    }

private:
    void build(const Problem& p, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
        const int nt = n_ + m_;
        cols_.resize(static_cast<std::size_t>(nt));
        lo_.assign(static_cast<std::size_t>(nt), 0.0);
        up_.assign(static_cast<std::size_t>(nt), kInf);
        rhs_.resize(m_);

        original_cost_.assign(static_cast<std::size_t>(n_), 0.0);
        for (int j = 0; j < n_; ++j) original_cost_[j] = p.objective[static_cast<std::size_t>(j)];

        for (int j = 0; j < n_; ++j) {
            lo_[static_cast<std::size_t>(j)] = lower[j];
            up_[static_cast<std::size_t>(j)] = upper[j];
            if (lower[j] > upper[j] + 1e-12) bounds_inconsistent_ = true;
        }
        for (int i = 0; i < m_; ++i) {
            const Constraint& c = p.constraints[static_cast<std::size_t>(i)];
            rhs_[i] = c.rhs;
            for (const auto& [j, coef] : c.terms)
                if (coef != 0.0) cols_[static_cast<std::size_t>(j)].entries.push_back({i, coef});
            const int s = n_ + i;
            cols_[static_cast<std::size_t>(s)].entries.push_back({i, 1.0});
            switch (c.rel) {
                case Relation::LessEqual: lo_[static_cast<std::size_t>(s)] = 0.0; up_[static_cast<std::size_t>(s)] = kInf; break;
                case Relation::GreaterEqual: lo_[static_cast<std::size_t>(s)] = -kInf; up_[static_cast<std::size_t>(s)] = 0.0; break;
                case Relation::Equal: lo_[static_cast<std::size_t>(s)] = 0.0; up_[static_cast<std::size_t>(s)] = 0.0; break;
            }
        }
        if (bounds_inconsistent_) return;

        // Nonbasic start point: finite bound nearest zero, else free at zero.
        state_.assign(static_cast<std::size_t>(nt), ColState::AtLower);
        val_.assign(static_cast<std::size_t>(nt), 0.0);
        for (int j = 0; j < nt; ++j) set_nonbasic_start(j);

        // Residuals decide which rows need an artificial column. All slacks start
        // at zero, so the residual is what a basic slack would have to absorb.
        Eigen::VectorXd resid = rhs_;
        for (int j = 0; j < n_; ++j) {
            if (val_[static_cast<std::size_t>(j)] == 0.0) continue;
            for (const auto& [i, coef] : cols_[static_cast<std::size_t>(j)].entries)
                resid[i] -= coef * val_[static_cast<std::size_t>(j)];
        }
        basis_.assign(static_cast<std::size_t>(m_), -1);
        xb_ = Eigen::VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) {
            const int s = n_ + i;
            const double need = resid[i];
            if (need >= lo_[static_cast<std::size_t>(s)] && need <= up_[static_cast<std::size_t>(s)]) {
                basis_[static_cast<std::size_t>(i)] = s;
                state_[static_cast<std::size_t>(s)] = ColState::Basic;
                xb_[i] = need;
            } else {
                const double sign = need > 0.0 ? 1.0 : -1.0;
                const int a = nt + n_art_;
                cols_.push_back({{{i, sign}}});
                lo_.push_back(0.0);
                up_.push_back(kInf);
                state_.push_back(ColState::Basic);
                val_.push_back(0.0);
                basis_[static_cast<std::size_t>(i)] = a;
                xb_[i] = std::abs(need);
                ++n_art_;
            }
        }
        total_ = nt + n_art_;

        phase1_cost_.assign(static_cast<std::size_t>(total_), 0.0);
        for (int j = nt; j < total_; ++j) phase1_cost_[static_cast<std::size_t>(j)] = 1.0;

        double cmax = 1.0;
        for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(original_cost_[j]));
        cost_scale_ = cmax;
        phase2_cost_.assign(static_cast<std::size_t>(total_), 0.0);
        for (int j = 0; j < n_; ++j)
            phase2_cost_[static_cast<std::size_t>(j)] = original_cost_[j] / cost_scale_;

        refactor();
    }

    void set_nonbasic_start(int j) {
        const double l = lo_[static_cast<std::size_t>(j)], u = up_[static_cast<std::size_t>(j)];
        if (std::isfinite(l)) {
            state_[static_cast<std::size_t>(j)] = ColState::AtLower;
            val_[static_cast<std::size_t>(j)] = l;
        } else if (std::isfinite(u)) {
            state_[static_cast<std::size_t>(j)] = ColState::AtUpper;
            val_[static_cast<std::size_t>(j)] = u;
        } else {
            state_[static_cast<std::size_t>(j)] = ColState::FreeAtZero;
            val_[static_cast<std::size_t>(j)] = 0.0;
        }
    }

    double artificial_level() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= n_ + m_) s += std::abs(xb_[i]);
        return s;
    }

    void refactor() {
        if (m_ == 0) { etas_.clear(); return; }
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < m_; ++i)
            for (const auto& [r, coef] : cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])].entries)
                trip.emplace_back(r, i, coef);
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trip.begin(), trip.end());
        lu_.analyzePattern(B);
        lu_.factorize(B);
        if (lu_.info() != Eigen::Success)
            throw SimplexNumericError("singular or ill-conditioned basis during refactorization",
                                      basis_);
        etas_.clear();
        recompute_basics();
    }

    void recompute_basics() {
        if (m_ == 0) return;
        Eigen::VectorXd r = rhs_;
        for (int j = 0; j < total_; ++j) {
            if (state_[static_cast<std::size_t>(j)] == ColState::Basic) continue;
            const double v = val_[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            for (const auto& [i, coef] : cols_[static_cast<std::size_t>(j)].entries) r[i] -= coef * v;
        }
        xb_ = ftran(r);
    }

    Eigen::VectorXd ftran(Eigen::VectorXd v) {
        Eigen::VectorXd x = lu_.solve(v);
        for (const Eta& e : etas_) {
            const double xr = x[e.pos] / e.w[e.pos];
            x -= xr * e.w;
            x[e.pos] = xr;
        }
        return x;
    }

    Eigen::VectorXd btran(Eigen::VectorXd g) {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const double dot = it->w.dot(g);
            g[it->pos] = (g[it->pos] - (dot - it->w[it->pos] * g[it->pos])) / it->w[it->pos];
        }
        return lu_.transpose().solve(g);
    }

    // One simplex phase on the given cost vector.
    LpStatus optimize(const std::vector<double>& cost, long cap) {
        int stall = 0;
        bool bland = false;
        while (true) {
            if (iterations_ >= cap) return LpStatus::IterationLimit;

            Eigen::VectorXd y;
            if (m_ > 0) {
                Eigen::VectorXd cb(m_);
                for (int i = 0; i < m_; ++i) cb[i] = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
                y = btran(cb);
            }

            int q = -1;
            double best = 0.0;
            int dir = 0;
            for (int j = 0; j < total_; ++j) {
                const ColState st = state_[static_cast<std::size_t>(j)];
                if (st == ColState::Basic) continue;
                if (lo_[static_cast<std::size_t>(j)] == up_[static_cast<std::size_t>(j)]) continue; // fixed
                double d = cost[static_cast<std::size_t>(j)];
                if (m_ > 0)
                    for (const auto& [i, coef] : cols_[static_cast<std::size_t>(j)].entries) d -= coef * y[i];
                int cand_dir = 0;
                if ((st == ColState::AtLower || st == ColState::FreeAtZero) && d < -opts_.dual_tol)
                    cand_dir = +1;
                else if ((st == ColState::AtUpper || st == ColState::FreeAtZero) && d > opts_.dual_tol)
                    cand_dir = -1;
                if (cand_dir == 0) continue;
                if (bland) { q = j; dir = cand_dir; break; }
                if (std::abs(d) > best + 1e-15) { best = std::abs(d); q = j; dir = cand_dir; }
            }
            if (q < 0) return LpStatus::Optimal;

            Eigen::VectorXd w;
            if (m_ > 0) {
                Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
                for (const auto& [i, coef] : cols_[static_cast<std::size_t>(q)].entries) aq[i] = coef;
                w = ftran(aq);
            }

            // Two-pass (Harris) ratio test: first the relaxed blocking step with a
            // feasibility tolerance, then the largest pivot among blockers inside it.
            const double own_range = up_[static_cast<std::size_t>(q)] - lo_[static_cast<std::size_t>(q)];
            double t_relax = std::isfinite(own_range) ? own_range : kInf;
            const auto step_to_bound = [&](int i, double rate, bool relaxed) {
                const int bj = basis_[static_cast<std::size_t>(i)];
                const double tol = relaxed ? opts_.feas_tol : 0.0;
                double t;
                if (rate > 0.0) {
                    const double ub = up_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(ub)) return kInf;
                    t = (ub + tol - xb_[i]) / rate;
                } else {
                    const double lb = lo_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(lb)) return kInf;
                    t = (lb - tol - xb_[i]) / rate;
                }
                return std::max(t, 0.0);
            };
            for (int i = 0; i < m_; ++i) {
                const double rate = -dir * w[i];
                if (std::abs(rate) <= kPivTol) continue;
                t_relax = std::min(t_relax, step_to_bound(i, rate, true));
            }
            if (!std::isfinite(t_relax)) return LpStatus::Unbounded;

            int leave_pos = -1; // -1 = bound flip on the entering variable
            double t_best = std::isfinite(own_range) ? own_range : kInf;
            double leave_piv = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double rate = -dir * w[i];
                if (std::abs(rate) <= kPivTol) continue;
                const double t = step_to_bound(i, rate, false);
                if (t > t_relax) continue;
                bool take = false;
                if (leave_pos < 0) {
                    take = true;
                } else if (bland) {
                    take = basis_[static_cast<std::size_t>(i)] <
                           basis_[static_cast<std::size_t>(leave_pos)];
                } else {
                    take = std::abs(w[i]) > std::abs(leave_piv);
                }
                if (take) {
                    leave_pos = i;
                    leave_piv = w[i];
                    t_best = t;
                }
            }
            if (leave_pos < 0 && !std::isfinite(own_range)) return LpStatus::Unbounded;
            if (std::isfinite(own_range) && (leave_pos < 0 || own_range < t_best)) {
                leave_pos = -1;
                t_best = own_range;
            }

            ++iterations_;
            const double t = t_best;
            if (t < kZeroStep) {
                if (++stall >= opts_.stall_threshold) bland = true;
            } else {
                stall = 0;
                bland = false;
            }

            if (m_ > 0 && t > 0.0) xb_ -= dir * t * w;

            if (leave_pos < 0) {
                // bound flip, basis unchanged
                state_[static_cast<std::size_t>(q)] =
                    dir > 0 ? ColState::AtUpper : ColState::AtLower;
                val_[static_cast<std::size_t>(q)] =
                    dir > 0 ? up_[static_cast<std::size_t>(q)] : lo_[static_cast<std::size_t>(q)];
                continue;
            }

            const int lv = basis_[static_cast<std::size_t>(leave_pos)];
            const double rate = -dir * w[leave_pos];
            if (rate > 0.0) {
                state_[static_cast<std::size_t>(lv)] = ColState::AtUpper;
                val_[static_cast<std::size_t>(lv)] = up_[static_cast<std::size_t>(lv)];
            } else {
                state_[static_cast<std::size_t>(lv)] = ColState::AtLower;
                val_[static_cast<std::size_t>(lv)] = lo_[static_cast<std::size_t>(lv)];
            }
            const double enter_val = val_[static_cast<std::size_t>(q)] + dir * t;
            basis_[static_cast<std::size_t>(leave_pos)] = q;
            state_[static_cast<std::size_t>(q)] = ColState::Basic;
            xb_[leave_pos] = enter_val;

            if (std::abs(w[leave_pos]) <= kPivTol)
                throw SimplexNumericError("vanishing pivot element", basis_);
            etas_.push_back({leave_pos, std::move(w)});
            if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) refactor();
        }
    }

    Eigen::VectorXd extract() const {
        Eigen::VectorXd x(n_);
        for (int j = 0; j < n_; ++j) x[j] = val_[static_cast<std::size_t>(j)];
        for (int i = 0; i < m_; ++i) {
            const int bj = basis_[static_cast<std::size_t>(i)];
            if (bj < n_) x[bj] = xb_[i];
        }
        return x;
    }

    SimplexOptions opts_;
    int n_ = 0, m_ = 0, n_art_ = 0, total_ = 0;
    bool bounds_inconsistent_ = false;
    std::vector<SparseCol> cols_;
    std::vector<double> lo_, up_, val_;
    std::vector<ColState> state_;
    std::vector<double> original_cost_, phase1_cost_, phase2_cost_;
    double cost_scale_ = 1.0;
    Eigen::VectorXd rhs_, xb_;
    std::vector<int> basis_;
    std::vector<Eta> etas_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    long iterations_ = 0;
};

} // namespace

LpResult solve_lp(const Problem& p, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                  const SimplexOptions& opts) {
    p.validate();
    Simplex s(p, lower, upper, opts);
    return s.run();
}

LpResult solve_lp(const Problem& p, const SimplexOptions& opts) {
    const int n = p.num_variables();
    Eigen::VectorXd lo(n), up(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = p.variables[static_cast<std::size_t>(j)].lower;
        up[j] = p.variables[static_cast<std::size_t>(j)].upper;
    }
    return solve_lp(p, lo, up, opts);
}

} // namespace gridfc::lp
