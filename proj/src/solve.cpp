#include "gridfc/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace gridfc::lp {

std::string status_text(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleWithinGap: return "feasible_within_gap";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration_limit";
    }
    return "?";
}

namespace {

struct Node {
    long id = 0;
    int parent = -1;
    int branch_var = -1;
    double branch_lo = 0.0, branch_hi = 0.0;
    double bound = -kInf; ///< parent LP objective, a valid lower bound for the subtree
};

struct QueueEntry {
    double bound;
    long id;
    bool operator>(const QueueEntry& o) const {
        if (bound != o.bound) return bound > o.bound;
        return id > o.id;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const Problem& p, const SolveOptions& opts) : p_(p), opts_(opts) {
        const int n = p.num_variables();
        lo0_.resize(n);
        up0_.resize(n);
        for (int j = 0; j < n; ++j) {
            const auto& v = p.variables[static_cast<std::size_t>(j)];
            lo0_[j] = v.lower;
            up0_[j] = v.upper;
            if (v.integral) {
                ints_.push_back(j);
                if (std::isfinite(lo0_[j])) lo0_[j] = std::ceil(lo0_[j] - opts.int_tol);
                if (std::isfinite(up0_[j])) up0_[j] = std::floor(up0_[j] + opts.int_tol);
            }
        }
        sopts_.max_iterations = opts.limits.max_lp_iterations;
        sopts_.feas_tol = opts.feas_tol;
    }

    Solution run() {
        const auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        Solution sol;
        nodes_.push_back(Node{});
        open_.push({-kInf, 0});

        double inc_obj = kInf;
        Eigen::VectorXd inc_x;
        double global_bound = -kInf;
        long processed = 0;
        bool hit_limit = false, unbounded = false;

        while (!open_.empty()) {
            global_bound = open_.top().bound;
            if (std::isfinite(inc_obj)) {
                const double gb = std::min(global_bound, inc_obj);
                const double gap = relative_gap(inc_obj, gb);
                if (gap <= opts_.gap_tol) {
                    global_bound = gb;
                    break;
                }
            }
            if (processed >= opts_.limits.max_nodes ||
                (opts_.limits.max_time_s > 0.0 && elapsed() > opts_.limits.max_time_s)) {
                hit_limit = true;
                break;
            }

            const long id = open_.top().id;
            open_.pop();
            const Node node = nodes_[static_cast<std::size_t>(id)];
            if (std::isfinite(inc_obj) && node.bound >= inc_obj - prune_eps(inc_obj)) continue;

            Eigen::VectorXd lo = lo0_, up = up0_;
            apply_path(node, lo, up);
            LpResult r;
            try {
                r = solve_lp(p_, lo, up, sopts_);
            } catch (const SimplexNumericError&) {
                throw;
            }
            ++processed;
            lp_iters_ += r.iterations;

            if (r.status == LpStatus::Infeasible) continue;
            if (r.status == LpStatus::Unbounded) { unbounded = true; break; }
            if (r.status == LpStatus::IterationLimit) { hit_limit = true; break; }

            if (std::isfinite(inc_obj) && r.objective >= inc_obj - prune_eps(inc_obj)) continue;

            const int frac = most_fractional(r.x);
            if (frac < 0) {
                inc_obj = r.objective;
                inc_x = r.x;
                continue;
            }

            if (opts_.use_rounding_heuristic && processed % 32 == 1) {
                try_rounding(r.x, inc_obj, inc_x);
                if (std::isfinite(inc_obj) && r.objective >= inc_obj - prune_eps(inc_obj)) continue;
            }

            const double xf = r.x[frac];
            const long left = add_node(id, frac, lo0_[frac], std::floor(xf), r.objective);
            const long right = add_node(id, frac, std::ceil(xf), up0_[frac], r.objective);
            open_.push({r.objective, left});
            open_.push({r.objective, right});
        }

        sol.nodes = processed;
        sol.lp_iterations = lp_iters_;
        if (unbounded) {
            sol.status = SolveStatus::Unbounded;
            sol.bound = -kInf;
            sol.objective = -kInf;
            return sol;
        }

        if (open_.empty()) global_bound = std::isfinite(inc_obj) ? inc_obj : kInf;
        global_bound = std::min(global_bound, inc_obj);

        if (!std::isfinite(inc_obj)) {
            sol.status = hit_limit ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
            sol.bound = global_bound;
            sol.objective = std::numeric_limits<double>::quiet_NaN();
            sol.gap = kInf;
            return sol;
        }

        sol.x = inc_x;
        sol.objective = inc_obj;
        sol.bound = global_bound;
        sol.gap = relative_gap(inc_obj, global_bound);
        if (hit_limit && sol.gap > opts_.gap_tol)
            sol.status = SolveStatus::IterationLimit;
        else if (sol.gap <= 1e-9)
            sol.status = SolveStatus::Optimal;
        else
            sol.status = SolveStatus::FeasibleWithinGap;
        return sol;
    }

private:
    static double relative_gap(double obj, double bound) {
        if (!std::isfinite(bound)) return kInf;
        return (obj - bound) / std::max(1e-10, std::abs(obj));
    }
    double prune_eps(double inc) const { return 1e-9 * (1.0 + std::abs(inc)); }

    long add_node(long parent, int var, double blo, double bhi, double bound) {
        Node n;
        n.id = static_cast<long>(nodes_.size());
        n.parent = static_cast<int>(parent);
        n.branch_var = var;
        n.branch_lo = blo;
        n.branch_hi = bhi;
        n.bound = bound;
        nodes_.push_back(n);
        return n.id;
    }

    void apply_path(const Node& node, Eigen::VectorXd& lo, Eigen::VectorXd& up) const {
        const Node* cur = &node;
        while (cur->branch_var >= 0) {
            // Deeper decisions are applied first; they can only be tighter.
            lo[cur->branch_var] = std::max(lo[cur->branch_var], cur->branch_lo);
            up[cur->branch_var] = std::min(up[cur->branch_var], cur->branch_hi);
            cur = &nodes_[static_cast<std::size_t>(cur->parent)];
        }
    }

    int most_fractional(const Eigen::VectorXd& x) const {
        int best = -1;
        double best_frac = opts_.int_tol;
        for (int j : ints_) {
            const double f = std::abs(x[j] - std::round(x[j]));
            if (f > best_frac + 1e-15) {
                best_frac = f;
                best = j;
            }
        }
        return best;
    }

    void try_rounding(const Eigen::VectorXd& x, double& inc_obj, Eigen::VectorXd& inc_x) {
        // nearest rounding first, then rounding fractional values up (the latter
        // keeps covering-style constraints satisfiable)
        for (const bool ceil_frac : {false, true}) {
            Eigen::VectorXd lo = lo0_, up = up0_;
            for (int j : ints_) {
                double v = ceil_frac ? std::ceil(x[j] - opts_.int_tol) : std::round(x[j]);
                v = std::min(std::max(v, lo0_[j]), up0_[j]);
                lo[j] = v;
                up[j] = v;
            }
            LpResult r = solve_lp(p_, lo, up, sopts_);
            lp_iters_ += r.iterations;
            if (r.status == LpStatus::Optimal && r.objective < inc_obj) {
                inc_obj = r.objective;
                inc_x = r.x;
            }
            if (r.status == LpStatus::Optimal && !ceil_frac) break;
        }
    }

    const Problem& p_;
    SolveOptions opts_;
    SimplexOptions sopts_;
    Eigen::VectorXd lo0_, up0_;
    std::vector<int> ints_;
    std::vector<Node> nodes_;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> open_;
    long lp_iters_ = 0;
};

} // namespace

Solution solve(const Problem& p, const SolveOptions& opts) {
    p.validate();
    BranchAndBound bnb(p, opts);
    return bnb.run();
}

} // namespace gridfc::lp
