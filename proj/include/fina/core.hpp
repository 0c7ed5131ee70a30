#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fina {

// A control action. Scalar for the HVAC application (a setpoint in °F),
// but stored as a vector so preference distances can use Euclidean norms.
struct Action {
    std::vector<double> value;

    Action() = default;
    explicit Action(double scalar) : value{scalar} {}
    explicit Action(std::vector<double> v) : value(std::move(v)) {}

    std::size_t dim() const { return value.size(); }
    double scalar() const {
        if (value.size() != 1)
            throw std::logic_error("Action::scalar: action is not one-dimensional");
        return value[0];
    }

    friend bool operator==(const Action& a, const Action& b) { return a.value == b.value; }
    // Lexicographic order on coordinates; this is the canonical tie-break order.
    friend bool operator<(const Action& a, const Action& b) {
        return std::lexicographical_compare(a.value.begin(), a.value.end(),
                                            b.value.begin(), b.value.end());
    }
};

inline double distance(const Action& a, const Action& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("distance: action dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.value.size(); ++i) {
        const double d = a.value[i] - b.value[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// One human's set of preferred actions at a time step.
struct PreferenceProfile {
    std::vector<Action> preferred_actions;

    PreferenceProfile() = default;
    explicit PreferenceProfile(std::vector<Action> actions)
        : preferred_actions(std::move(actions)) {
        if (preferred_actions.empty())
            throw std::invalid_argument("PreferenceProfile: empty preference set");
        const std::size_t d = preferred_actions.front().dim();
        for (const auto& a : preferred_actions)
            if (a.dim() != d)
                throw std::invalid_argument("PreferenceProfile: mixed action dimensions");
    }
    explicit PreferenceProfile(double scalar) : PreferenceProfile({Action{scalar}}) {}
};

// Finite ordered action set the selector chooses from. Deduplicated and kept
// in canonical (lexicographic) order so argmin tie-breaking is deterministic.
class CandidateSet {
  public:
    explicit CandidateSet(std::vector<Action> actions) {
        if (actions.empty())
            throw std::invalid_argument("CandidateSet: empty candidate set");
        std::sort(actions.begin(), actions.end());
        actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
        const std::size_t d = actions.front().dim();
        for (const auto& a : actions)
            if (a.dim() != d)
                throw std::invalid_argument("CandidateSet: mixed action dimensions");
        actions_ = std::move(actions);
    }

    const std::vector<Action>& actions() const { return actions_; }
    std::size_t size() const { return actions_.size(); }
    const Action& operator[](std::size_t i) const { return actions_[i]; }

  private:
    std::vector<Action> actions_;
};

// Sliding window of the last T adverse-effect samples, oldest first.
class AdverseHistory {
  public:
    explicit AdverseHistory(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0)
            throw std::invalid_argument("AdverseHistory: capacity must be positive");
    }

    void push(double sample) {
        if (!(sample >= 0.0))
            throw std::invalid_argument("AdverseHistory: negative sample");
        if (samples_.size() == capacity_) samples_.pop_front();
        samples_.push_back(sample);
    }

    std::size_t size() const { return samples_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return samples_.empty(); }
    double operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double> samples() const { return {samples_.begin(), samples_.end()}; }

  private:
    std::size_t capacity_;
    std::deque<double> samples_;
};

// Weights for the tradeoff formulations. alpha/beta weight the instantaneous
// versus long-term terms; epsilon caps the relative deviation in approach 4.
struct FinaParams {
    double lambda = 1.0;
    double alpha = 0.5;
    double beta = 0.5;
    double epsilon = 0.5;
    // Approach 5's budget constraint: true uses the window plus the candidate's
    // own adverse effect, false uses the historical window alone.
    bool budget_uses_updated_history = true;

    void validate() const {
        if (lambda < 0 || alpha < 0 || beta < 0 || epsilon < 0)
            throw std::invalid_argument("FinaParams: weights must be nonnegative");
        if (alpha + beta <= 0)
            throw std::invalid_argument("FinaParams: alpha + beta must be positive");
    }
};

// Chosen action plus solver diagnostics.
struct Decision {
    Action action;
    double objective = 0.0;
    std::vector<double> adverse_effects;
    bool feasible = true;
    std::optional<double> aux_budget;               // B (approaches 2 and 5)
    std::optional<std::vector<double>> aux_budgets; // b (approach 3)
    std::optional<double> aux_y;                    // y (approaches 4 and 5)
};

// Max distance from the action to the human's preferred actions.
inline double adverse_effect(const Action& action, const PreferenceProfile& profile) {
    double worst = 0.0;
    for (const auto& pref : profile.preferred_actions)
        worst = std::max(worst, distance(pref, action));
    return worst;
}

inline std::vector<double> adverse_effect_vector(const Action& action,
                                                 const std::vector<PreferenceProfile>& profiles) {
    if (profiles.empty())
        throw std::invalid_argument("adverse_effect_vector: no profiles");
    std::vector<double> v;
    v.reserve(profiles.size());
    for (const auto& p : profiles) v.push_back(adverse_effect(action, p));
    return v;
}

// Recency-weighted accumulation over the window: (1/T') sum_j (j/T') s_j,
// with T' the current length. The oldest sample (j = 0) gets zero weight.
inline double history_accumulate(const AdverseHistory& history) {
    const std::size_t n = history.size();
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        acc += (static_cast<double>(j) / static_cast<double>(n)) * history[j];
    return acc / static_cast<double>(n);
}

namespace detail {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double l2_deviation_from_mean(const std::vector<double>& v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s);
}

// Objective of approach 1 at one action: ||v - mean 1||_2 + lambda |mean|.
inline double approach1_objective(const std::vector<double>& v, double lambda) {
    const double m = mean(v);
    return l2_deviation_from_mean(v, m) + lambda * std::abs(m);
}

// Reciprocal-fairness value of an updated accumulation vector:
// y = 1 + (1/N) sum ((u_n - ubar)/ubar)^2, with y = 1 when ubar = 0.
// Also reports the max relative deviation used by approach 4's constraint.
struct FairnessValue {
    double y;
    double max_relative_deviation;
};

inline FairnessValue reciprocal_fairness(const std::vector<double>& u) {
    const double ubar = mean(u);
    if (ubar == 0.0) return {1.0, 0.0};
    double sum = 0.0, worst = 0.0;
    for (double x : u) {
        const double rel = std::abs(x - ubar) / ubar;
        sum += rel * rel;
        worst = std::max(worst, rel);
    }
    return {1.0 + sum / static_cast<double>(u.size()), worst};
}

inline void check_history_length(const std::vector<double>& u, std::size_t n,
                                 const char* where) {
    if (u.size() != n)
        throw std::invalid_argument(std::string(where) + ": history length != profile count");
}

} // namespace detail

// Approach 1: minimize the spread of instantaneous adverse effects around
// their mean, plus a lambda-weighted penalty on the mean itself.
inline Decision select_approach1(const CandidateSet& candidates,
                                 const std::vector<PreferenceProfile>& profiles,
                                 const FinaParams& params) {
    if (profiles.empty())
        throw std::invalid_argument("select_approach1: no profiles");
    Decision best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& a : candidates.actions()) {
        const auto v = adverse_effect_vector(a, profiles);
        const double obj = detail::approach1_objective(v, params.lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best = Decision{a, obj, v, true, {}, {}, {}};
        }
    }
    return best;
}

// Approach 2: minimize the budget B that caps every human's instantaneous
// adverse effect shifted by their accumulated history. Closed form:
// B(a) = max_n (v_n(a) + u_n).
inline Decision select_approach2(const CandidateSet& candidates,
                                 const std::vector<PreferenceProfile>& profiles,
                                 const std::vector<double>& u) {
    detail::check_history_length(u, profiles.size(), "select_approach2");
    Decision best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& a : candidates.actions()) {
        const auto v = adverse_effect_vector(a, profiles);
        double budget = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n)
            budget = std::max(budget, v[n] + u[n]);
        if (budget < best_obj) {
            best_obj = budget;
            best = Decision{a, budget, v, true, budget, {}, {}};
        }
    }
    return best;
}

// Approach 3: weighted sum of the approach-1 term and the history-weighted
// per-human budgets. The inner minimization over b attains b = v(a), so the
// objective is alpha * J1(a) + beta * u . v(a).
inline Decision select_approach3(const CandidateSet& candidates,
                                 const std::vector<PreferenceProfile>& profiles,
                                 const std::vector<double>& u,
                                 const FinaParams& params) {
    detail::check_history_length(u, profiles.size(), "select_approach3");
    Decision best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& a : candidates.actions()) {
        const auto v = adverse_effect_vector(a, profiles);
        double inner = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n) inner += u[n] * v[n];
        const double obj =
            params.alpha * detail::approach1_objective(v, params.lambda) + params.beta * inner;
        if (obj < best_obj) {
            best_obj = obj;
            best = Decision{a, obj, v, true, {}, v, {}};
        }
    }
    return best;
}

// Approach 4: minimize the reciprocal fairness index y of the updated
// accumulations u_n + v_n(a), subject to every relative deviation staying
// within epsilon. If no candidate satisfies the constraint, the candidate
// with the smallest max relative deviation is returned flagged infeasible.
inline Decision select_approach4(const CandidateSet& candidates,
                                 const std::vector<PreferenceProfile>& profiles,
                                 const std::vector<double>& u_hist,
                                 const FinaParams& params) {
    detail::check_history_length(u_hist, profiles.size(), "select_approach4");
    Decision best_feasible, best_fallback;
    double best_y = std::numeric_limits<double>::infinity();
    double best_dev = std::numeric_limits<double>::infinity();
    bool any_feasible = false;
    for (const auto& a : candidates.actions()) {
        const auto v = adverse_effect_vector(a, profiles);
        std::vector<double> u(v.size());
        for (std::size_t n = 0; n < v.size(); ++n) u[n] = u_hist[n] + v[n];
        const auto fv = detail::reciprocal_fairness(u);
        if (fv.max_relative_deviation <= params.epsilon) {
            if (fv.y < best_y) {
                best_y = fv.y;
                best_feasible = Decision{a, fv.y, v, true, {}, {}, fv.y};
            }
            any_feasible = true;
        }
        if (fv.max_relative_deviation < best_dev) {
            best_dev = fv.max_relative_deviation;
            best_fallback = Decision{a, fv.y, v, false, {}, {}, fv.y};
        }
    }
    return any_feasible ? best_feasible : best_fallback;
}

// Approach 5: weighted tradeoff between the reciprocal fairness index and
// the adverse-effect budget, both evaluated on the updated accumulations.
inline Decision select_approach5(const CandidateSet& candidates,
                                 const std::vector<PreferenceProfile>& profiles,
                                 const std::vector<double>& u_hist,
                                 const FinaParams& params) {
    detail::check_history_length(u_hist, profiles.size(), "select_approach5");
    Decision best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& a : candidates.actions()) {
        const auto v = adverse_effect_vector(a, profiles);
        std::vector<double> u(v.size());
        for (std::size_t n = 0; n < v.size(); ++n) u[n] = u_hist[n] + v[n];
        const auto fv = detail::reciprocal_fairness(u);
        double budget = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n) {
            const double shift = params.budget_uses_updated_history ? u[n] : u_hist[n];
            budget = std::max(budget, v[n] + shift);
        }
        const double obj = params.alpha * fv.y + params.beta * budget;
        if (obj < best_obj) {
            best_obj = obj;
            best = Decision{a, obj, v, true, budget, {}, fv.y};
        }
    }
    return best;
}

// Componentwise mean of the desired actions, clamped to the legal range.
inline Action baseline_mean(const std::vector<Action>& desired, double lo = 60.0,
                            double hi = 80.0) {
    if (desired.empty())
        throw std::invalid_argument("baseline_mean: empty desired list");
    const std::size_t d = desired.front().dim();
    std::vector<double> acc(d, 0.0);
    for (const auto& a : desired) {
        if (a.dim() != d)
            throw std::invalid_argument("baseline_mean: action dimension mismatch");
        for (std::size_t i = 0; i < d; ++i) acc[i] += a.value[i];
    }
    for (double& x : acc) x = std::clamp(x / static_cast<double>(desired.size()), lo, hi);
    return Action{acc};
}

struct RoundRobinResult {
    Action action;
    std::size_t next_turn;
};

inline RoundRobinResult baseline_round_robin(const std::vector<Action>& desired,
                                             std::size_t turn) {
    if (desired.empty())
        throw std::invalid_argument("baseline_round_robin: empty desired list");
    return {desired[turn % desired.size()], turn + 1};
}

// Static weighted sum of the desired actions (weights normalized internally).
inline Action baseline_weighted(const std::vector<Action>& desired,
                                const std::vector<double>& weights, double lo = 60.0,
                                double hi = 80.0) {
    if (desired.empty())
        throw std::invalid_argument("baseline_weighted: empty desired list");
    if (weights.size() != desired.size())
        throw std::invalid_argument("baseline_weighted: weight count mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0)
            throw std::invalid_argument("baseline_weighted: negative weight");
        total += w;
    }
    if (total <= 0)
        throw std::invalid_argument("baseline_weighted: weights sum to zero");
    const std::size_t d = desired.front().dim();
    std::vector<double> acc(d, 0.0);
    for (std::size_t n = 0; n < desired.size(); ++n) {
        if (desired[n].dim() != d)
            throw std::invalid_argument("baseline_weighted: action dimension mismatch");
        for (std::size_t i = 0; i < d; ++i)
            acc[i] += (weights[n] / total) * desired[n].value[i];
    }
    for (double& x : acc) x = std::clamp(x, lo, hi);
    return Action{acc};
}

} // namespace fina
