// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fail. Comparison criteria use five pre-registered
// master seeds (1..5) and the 1 °F grid candidate mode, the closest finite
// analog of optimizing over the continuous 60-80 °F action range.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fina/config.hpp"
#include "fina/harness.hpp"
#include "oracle.hpp"

using namespace fina;

namespace {

int failures = 0;

void report(int number, const char* label, bool ok) {
    std::printf("criterion %d (%s): %s\n", number, label, ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct RandomInstance {
    CandidateSet candidates;
    std::vector<PreferenceProfile> profiles;
    std::vector<double> u;
    FinaParams params;
};

RandomInstance make_instance(std::mt19937_64& rng) {
    const std::size_t n_humans = 2 + rng() % 4; // N in [2,5]
    const std::size_t n_cands = 2 + rng() % 9;  // |A| in [2,10]
    std::vector<PreferenceProfile> profiles;
    std::vector<double> u;
    for (std::size_t n = 0; n < n_humans; ++n) {
        std::vector<Action> prefs;
        const std::size_t g = 1 + rng() % 3;
        for (std::size_t i = 0; i < g; ++i)
            prefs.emplace_back(static_cast<double>(rng() % 200) / 10.0);
        profiles.emplace_back(prefs);
        u.push_back(static_cast<double>(rng() % 200) / 10.0);
    }
    std::vector<Action> acts;
    for (std::size_t i = 0; i < n_cands; ++i)
        acts.emplace_back(static_cast<double>(rng() % 200) / 10.0);
    FinaParams p;
    p.lambda = static_cast<double>(rng() % 30) / 10.0;
    p.alpha = static_cast<double>(rng() % 20) / 10.0 + 0.05;
    p.beta = static_cast<double>(rng() % 20) / 10.0 + 0.05;
    p.epsilon = static_cast<double>(rng() % 20) / 10.0;
    return {CandidateSet{std::move(acts)}, std::move(profiles), std::move(u), p};
}

// --- criteria 1 and 2: brute-force oracle agreement -------------------------

void criteria_oracle() {
    std::mt19937_64 rng(2024);
    bool match = true;
    bool closed_form = true;
    const auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const auto inst = make_instance(rng);
        const auto& c = inst.candidates;

        match &= select_approach1(c, inst.profiles, inst.params).action ==
                 c[oracle::approach1(c, inst.profiles, inst.params.lambda).index];

        const auto d2 = select_approach2(c, inst.profiles, inst.u);
        const auto o2 = oracle::approach2(c, inst.profiles, inst.u);
        match &= d2.action == c[o2.index];
        closed_form &= d2.aux_budget.has_value() && *d2.aux_budget == o2.objective;

        match &= select_approach3(c, inst.profiles, inst.u, inst.params).action ==
                 c[oracle::approach3(c, inst.profiles, inst.u, inst.params.alpha,
                                     inst.params.beta, inst.params.lambda)
                       .index];

        const auto d4 = select_approach4(c, inst.profiles, inst.u, inst.params);
        const auto o4 = oracle::approach4(c, inst.profiles, inst.u, inst.params.epsilon);
        match &= d4.action == c[o4.index] && d4.feasible == o4.feasible;

        match &= select_approach5(c, inst.profiles, inst.u, inst.params).action ==
                 c[oracle::approach5(c, inst.profiles, inst.u, inst.params.alpha,
                                     inst.params.beta)
                       .index];
    }
    const double elapsed = ms_since(t0);
    report(1, "all five selectors match the brute-force oracle on 1000 random instances",
           match && elapsed < 5000.0);
    report(2, "approach2 budget equals the closed-form min over candidates of max(v+u)",
           closed_form);
}

// --- criterion 3: metric unit values ----------------------------------------

void criterion_metric_units() {
    bool ok = std::fabs(cov({1, 2, 3}) - 0.5) <= 1e-12;
    ok &= std::fabs(fairness_index({1, 2, 3}) - 0.8) <= 1e-12;
    ok &= fairness_index({7.5, 7.5, 7.5, 7.5}) == 1.0;
    AdverseHistory h(4);
    for (int i = 0; i < 4; ++i) h.push(1.0);
    ok &= std::fabs(history_accumulate(h) - 0.375) <= 1e-12;
    report(3, "CoV, fairness index and history accumulation unit values", ok);
}

// --- criteria 4 and 5: seeded strategy comparisons --------------------------

ExperimentConfig comparison_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.master_seed = seed;
    cfg.candidate_mode = CandidateMode::parse("grid:1");
    return cfg;
}

const StrategySummary& find(const ComparisonReport& report, Strategy s) {
    for (const auto& run : report.runs)
        if (run.summary.strategy == to_string(s)) return run.summary;
    throw std::logic_error("strategy missing from comparison");
}

void criteria_comparison(const std::vector<ComparisonReport>& reports, double elapsed_ms) {
    const std::vector<Strategy> fina_approaches{Strategy::Approach1, Strategy::Approach2,
                                                Strategy::Approach3, Strategy::Approach4,
                                                Strategy::Approach5};
    int pass_a = 0, pass_b = 0, pass_c = 0, pass_d = 0, pass_reduction = 0;
    for (const auto& rep : reports) {
        const auto& a2 = find(rep, Strategy::Approach2);
        const auto& a5 = find(rep, Strategy::Approach5);
        const auto& mean = find(rep, Strategy::Mean);
        const auto& rr = find(rep, Strategy::RoundRobin);
        const auto& weighted = find(rep, Strategy::Weighted);

        if (a2.avg_cov_u < mean.avg_cov_u && a2.avg_cov_u < rr.avg_cov_u &&
            a5.avg_cov_u < mean.avg_cov_u && a5.avg_cov_u < rr.avg_cov_u)
            ++pass_a;

        bool lowest_jsd = true;
        for (Strategy s : {Strategy::Approach1, Strategy::Approach3, Strategy::Approach4,
                           Strategy::Approach5, Strategy::Mean, Strategy::RoundRobin})
            lowest_jsd &= a2.sr_jsd <= find(rep, s).sr_jsd;
        if (lowest_jsd) ++pass_b;

        bool fi_dominates = true;
        for (Strategy s : fina_approaches)
            fi_dominates &= find(rep, s).avg_fi_u >= mean.avg_fi_u &&
                            find(rep, s).avg_fi_u >= rr.avg_fi_u;
        if (fi_dominates) ++pass_c;

        bool best_overlap = true;
        for (Strategy s : {Strategy::Approach1, Strategy::Approach3, Strategy::Approach4,
                           Strategy::Mean})
            best_overlap &= a2.tdiff_overlap_pct >= find(rep, s).tdiff_overlap_pct;
        if (best_overlap) ++pass_d;

        double best_cov = find(rep, fina_approaches.front()).avg_cov_u;
        for (Strategy s : fina_approaches)
            best_cov = std::min(best_cov, find(rep, s).avg_cov_u);
        // target: 60% below the weighted baseline, tolerance 10 points
        if (1.0 - best_cov / weighted.avg_cov_u >= 0.50) ++pass_reduction;
    }
    std::printf("  comparison sub-results over 5 seeds: cov_u ordering %d/5, lowest jsd %d/5, "
                "fi_u dominance %d/5, best overlap %d/5 (need 4/5 each), runtime %.1f ms\n",
                pass_a, pass_b, pass_c, pass_d, elapsed_ms);
    report(4, "ordinal strategy comparison holds on at least 4 of 5 seeds",
           pass_a >= 4 && pass_b >= 4 && pass_c >= 4 && pass_d >= 4 && elapsed_ms < 60000.0);
    report(5, "best approach cuts average history CoV at least half below the weighted baseline",
           pass_reduction == 5);
}

// --- criterion 6: simulation invariants --------------------------------------

// Replays the thermal dynamics substep by substep from the trace inputs,
// checking the thermostat never jumps between heating and cooling without an
// idle step and that the replayed temperatures match the recorded ones.
bool replay_thermal(const RunResult& run, const ExperimentConfig& cfg) {
    const auto N = static_cast<std::size_t>(cfg.num_humans);
    HouseState house;
    house.rooms.assign(N, RoomState{cfg.initial_indoor_c, HvacMode::Idle, 0.0});
    const auto nsub = static_cast<int>(std::round(cfg.sampling_period_s / cfg.thermal.dt_s));
    for (const auto& row : run.trace) {
        std::vector<double> heats(N);
        for (std::size_t n = 0; n < N; ++n)
            heats[n] = cfg.occupants.heat_w(row.activities[n], house.rooms[n].indoor_temp_c);
        const double setpoint_c = fahrenheit_to_celsius(row.applied_f);
        for (int s = 0; s < nsub; ++s) {
            const auto before = house;
            house.outdoor_temp_c = cfg.outdoor_temp_c;
            house = step(house, setpoint_c, cfg.thermal, heats);
            for (std::size_t n = 0; n < N; ++n) {
                const auto prev = before.rooms[n].mode;
                const auto next = house.rooms[n].mode;
                const auto active = [](HvacMode m) { return m != HvacMode::Idle; };
                if (active(prev) && active(next) && prev != next) return false;
            }
        }
        for (std::size_t n = 0; n < N; ++n) {
            if (std::fabs(house.rooms[n].indoor_temp_c - row.indoor_c[n]) > 1e-9) return false;
            if (house.rooms[n].mode != row.modes[n]) return false;
        }
    }
    return true;
}

void criterion_invariants(const ComparisonReport& seed1, const ExperimentConfig& cfg) {
    // determinism: identical config yields byte-identical traces
    ExperimentConfig dcfg = cfg;
    dcfg.strategy = Strategy::Approach3;
    std::stringstream first, second;
    write_trace_csv(first, run_experiment(dcfg), 3);
    write_trace_csv(second, run_experiment(dcfg), 3);
    bool ok = first.str() == second.str();

    for (const auto& run : seed1.runs) ok &= replay_thermal(run, cfg);

    // bounded temperature after the warmup transient
    const auto warmup = static_cast<std::size_t>(cfg.window);
    for (const auto& run : seed1.runs)
        for (std::size_t k = warmup; k < run.trace.size(); ++k)
            for (double t : run.trace[k].indoor_c) ok &= t > 5.0 && t < 35.0;

    // conflict gating: with no disagreement every strategy applies the same setpoint
    const auto& ref = seed1.runs.front().trace;
    for (const auto& run : seed1.runs) {
        ok &= run.trace.size() == ref.size();
        for (std::size_t k = 0; k < ref.size() && ok; ++k) {
            std::vector<double> present;
            for (const auto& d : ref[k].desired_f)
                if (d) present.push_back(*d);
            const bool conflict = !present.empty() &&
                                  !std::all_of(present.begin(), present.end(), [&](double x) {
                                      return x == present.front();
                                  });
            if (!present.empty() && !conflict)
                ok &= run.trace[k].applied_f == ref[k].applied_f;
        }
    }
    report(6, "determinism, thermostat hysteresis, bounded temperature, conflict gating", ok);
}

// --- criterion 7: trace self-consistency --------------------------------------

void criterion_self_consistency(const ComparisonReport& seed1, const ExperimentConfig& cfg) {
    const auto N = static_cast<std::size_t>(cfg.num_humans);
    const auto warmup = static_cast<std::size_t>(cfg.window);
    bool ok = true;
    for (const auto& run : seed1.runs) {
        std::vector<AdverseHistory> hist(N, AdverseHistory(static_cast<std::size_t>(cfg.window)));
        for (std::size_t k = 0; k < run.trace.size(); ++k) {
            const auto& row = run.trace[k];
            for (std::size_t n = 0; n < N; ++n) {
                if (row.v_f[n]) hist[n].push(*row.v_f[n]);
                if (k >= warmup)
                    ok &= std::fabs(row.u[n] - history_accumulate(hist[n])) <= 1e-9;
            }
            if (k >= warmup) {
                ok &= std::fabs(row.fi_u - 1.0 / (1.0 + row.cov_u * row.cov_u)) <= 1e-12;
                ok &= std::fabs(row.fi_sr - 1.0 / (1.0 + row.cov_sr * row.cov_sr)) <= 1e-12;
            }
        }
    }
    report(7, "trace u matches recomputed history and FI matches 1/(1+CoV^2)", ok);
}

} // namespace

int main() {
    criteria_oracle();
    criterion_metric_units();

    std::vector<ComparisonReport> reports;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        reports.push_back(compare_strategies(comparison_config(seed), all_strategies()));
    const double elapsed_ms = ms_since(t0);
    criteria_comparison(reports, elapsed_ms);

    criterion_invariants(reports.front(), comparison_config(1));
    criterion_self_consistency(reports.front(), comparison_config(1));

    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
