#include <algorithm>
#include <limits>

#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"

namespace tiramisu::ilp {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

struct Searcher {
    const IlpModel& m;
    const SolveOptions& opts;
    std::vector<int> value;           // -1 unknown
    std::vector<std::vector<int>> occ;  // var -> constraint indices
    std::vector<int> obj_coef;          // per var (0 when absent)
    long long nodes = 0;
    bool budget_hit = false;

    long long best_obj = kInf;  // minimized internally
    std::vector<int> best_assign;

    explicit Searcher(const IlpModel& model, const SolveOptions& o) : m(model), opts(o) {
        value.assign(m.num_vars(), -1);
        occ.assign(m.num_vars(), {});
        obj_coef.assign(m.num_vars(), 0);
        for (size_t ci = 0; ci < m.constraints.size(); ++ci)
            for (const auto& t : m.constraints[ci].terms)
                occ[t.var].push_back(static_cast<int>(ci));
        for (const auto& t : m.objective)
            obj_coef[t.var] += m.maximize ? -t.coef : t.coef;
    }

    // Bound-consistency pass over constraints touching `dirty` vars (all when
    // dirty is empty). Returns false on conflict; appends forced vars to trail.
    bool propagate(std::vector<int>& trail) {
        std::vector<int> pending;
        for (size_t i = 0; i < m.constraints.size(); ++i) pending.push_back(static_cast<int>(i));
        while (!pending.empty()) {
            int ci = pending.back();
            pending.pop_back();
            const auto& c = m.constraints[ci];
            long long lo = 0, hi = 0;
            for (const auto& t : c.terms) {
                int v = value[t.var];
                if (v >= 0) {
                    lo += static_cast<long long>(t.coef) * v;
                    hi += static_cast<long long>(t.coef) * v;
                } else {
                    lo += std::min(0, t.coef);
                    hi += std::max(0, t.coef);
                }
            }
            bool need_le = c.sense != Sense::Ge;  // sum <= rhs applies
            bool need_ge = c.sense != Sense::Le;  // sum >= rhs applies
            if (need_le && lo > c.rhs) return false;
            if (need_ge && hi < c.rhs) return false;
            for (const auto& t : c.terms) {
                if (value[t.var] >= 0) continue;
                // Try forcing: if one choice breaks the constraint, take the other.
                long long lo1 = lo - std::min(0, t.coef) + t.coef;  // var = 1
                long long hi0 = hi - std::max(0, t.coef);           // var = 0
                int forced = -1;
                if (need_le && lo1 > c.rhs) forced = 0;
                if (need_ge && hi0 < c.rhs) {
                    if (forced == 0) return false;
                    forced = 1;
                }
                long long hi1 = hi - std::max(0, t.coef) + t.coef;
                long long lo0 = lo - std::min(0, t.coef);
                if (need_le && lo0 > c.rhs) {
                    if (forced == 0) return false;
                    forced = 1;
                }
                if (need_ge && hi1 < c.rhs) {
                    if (forced == 1) return false;
                    forced = 0;
                }
                if (forced >= 0) {
                    value[t.var] = forced;
                    trail.push_back(t.var);
                    for (int oc : occ[t.var]) pending.push_back(oc);
                }
            }
        }
        return true;
    }

    long long lower_bound() const {
        long long lb = 0;
        for (size_t v = 0; v < value.size(); ++v) {
            if (value[v] >= 0)
                lb += static_cast<long long>(obj_coef[v]) * value[v];
            else
                lb += std::min(0, obj_coef[v]);
        }
        return lb;
    }

    // Prefer variables adjacent to already-assigned ones; deterministic.
    int pick_branch_var() const {
        int best = -1, best_score = -1;
        for (size_t v = 0; v < value.size(); ++v) {
            if (value[v] >= 0) continue;
            int score = 0;
            for (int ci : occ[v]) {
                for (const auto& t : m.constraints[ci].terms)
                    if (value[t.var] >= 0) {
                        ++score;
                        break;
                    }
            }
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(v);
            }
        }
        return best;
    }

    void search() {
        if (++nodes > opts.node_budget) {
            budget_hit = true;
            return;
        }
        std::vector<int> trail;
        if (!propagate(trail)) {
            undo(trail);
            return;
        }
        if (lower_bound() >= best_obj) {
            undo(trail);
            return;
        }
        int var = pick_branch_var();
        if (var < 0) {
            long long obj = 0;
            for (size_t v = 0; v < value.size(); ++v)
                obj += static_cast<long long>(obj_coef[v]) * value[v];
            if (obj < best_obj) {
                best_obj = obj;
                best_assign = value;
            }
            undo(trail);
            return;
        }
        // Explore the objective-friendly value first.
        int first = obj_coef[var] > 0 ? 0 : 1;
        for (int val : {first, 1 - first}) {
            if (budget_hit) break;
            value[var] = val;
            search();
            value[var] = -1;
        }
        undo(trail);
    }

    void undo(std::vector<int>& trail) {
        for (int v : trail) value[v] = -1;
    }
};

}  // namespace

IlpSolution solve(const IlpModel& model, const SolveOptions& opts) {
    Searcher s(model, opts);
    s.search();
    IlpSolution sol;
    if (s.best_assign.empty() && s.best_obj == kInf) {
        sol.status = s.budget_hit ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
        return sol;
    }
    sol.status = s.budget_hit ? SolveStatus::IterationLimit : SolveStatus::Optimal;
    sol.assignment = s.best_assign;
    long long obj = 0;
    for (const auto& t : model.objective)
        obj += static_cast<long long>(t.coef) * sol.assignment[t.var];
    sol.objective = obj;
    return sol;
}

}  // namespace tiramisu::ilp
