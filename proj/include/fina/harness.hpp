#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fina/activity.hpp"
#include "fina/config.hpp"
#include "fina/core.hpp"
#include "fina/metrics.hpp"
#include "fina/thermal.hpp"

namespace fina {

struct TraceRow {
    int sample = 0;
    double time_s = 0.0;
    std::vector<Activity> activities;
    std::vector<std::optional<double>> desired_f; // absent humans have none
    double applied_f = 0.0;
    std::vector<std::optional<double>> v_f; // pushed adverse effects, absent = none
    std::vector<double> u;
    std::vector<std::optional<double>> sr; // none until the human has samples
    std::vector<double> indoor_c;
    std::vector<HvacMode> modes;
    double fi_u = 1.0, cov_u = 0.0, fi_sr = 1.0, cov_sr = 0.0;
    bool feasible = true;
    std::optional<double> aux_budget;
    std::optional<double> aux_y;
};

struct StrategySummary {
    std::string strategy;
    double tdiff_overlap_pct = 0.0;
    double sr_jsd = 0.0;
    double avg_fi_u = 0.0;
    double avg_cov_u = 0.0;
    double avg_fi_sr = 0.0;
    double avg_cov_sr = 0.0;
};

struct RunResult {
    std::string strategy;
    std::vector<TraceRow> trace;
    StrategySummary summary;
};

struct ComparisonReport {
    std::vector<RunResult> runs;
};

// Histogram conventions for the summary statistics (configurable here,
// fixed for the reported tables): 1 °F bins over [0, 20] for |T_diff|,
// 5-point bins over [0, 100] for SR.
struct SummaryBinning {
    double tdiff_max_f = 20.0;
    std::size_t tdiff_bins = 20;
    std::size_t sr_bins = 20;
};

inline StrategySummary summarize(const std::vector<TraceRow>& trace,
                                 const ExperimentConfig& cfg, const SummaryBinning& bins);

namespace detail {

inline std::vector<ActivitySchedule> build_schedules(const ExperimentConfig& cfg,
                                                     int horizon_days) {
    std::vector<ActivitySchedule> schedules;
    if (cfg.schedules.file) {
        std::ifstream in(*cfg.schedules.file);
        if (!in) throw ConfigError("cannot open schedule file: " + *cfg.schedules.file);
        auto templates = read_schedule_csv(in);
        for (int n = 0; n < cfg.num_humans; ++n) {
            auto it = templates.find(n);
            if (it == templates.end())
                throw ConfigError("schedule file has no rows for human " + std::to_string(n));
            schedules.push_back(ActivitySchedule::realize(
                it->second, derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n)),
                horizon_days));
        }
    } else {
        for (int n = 0; n < cfg.num_humans; ++n)
            schedules.push_back(ActivitySchedule::generate(
                cfg.schedules.archetypes[static_cast<std::size_t>(n)],
                derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n)), horizon_days));
    }
    return schedules;
}

inline CandidateSet build_candidates(const ExperimentConfig& cfg,
                                     const std::vector<double>& desired_f) {
    std::vector<Action> actions;
    if (cfg.candidate_mode.grid) {
        for (double t = cfg.action_min_f; t <= cfg.action_max_f + 1e-9;
             t += cfg.candidate_mode.grid_step)
            actions.emplace_back(std::min(t, cfg.action_max_f));
    } else {
        for (double t : desired_f) actions.emplace_back(t);
    }
    return CandidateSet{std::move(actions)};
}

inline double outdoor_at(const ExperimentConfig& cfg, double time_s) {
    if (cfg.outdoor_daily_swing_c == 0.0) return cfg.outdoor_temp_c;
    constexpr double day_s = 86400.0;
    return cfg.outdoor_temp_c +
           cfg.outdoor_daily_swing_c * std::sin(2.0 * M_PI * time_s / day_s);
}

} // namespace detail

// Runs one strategy closed-loop: schedule -> desired setpoints -> decision ->
// thermal integration -> history and metric updates, one row per control period.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto N = static_cast<std::size_t>(cfg.num_humans);
    const double horizon_s = cfg.samples * cfg.sampling_period_s;
    const int horizon_days = static_cast<int>(std::ceil(horizon_s / 86400.0)) + 1;
    const auto schedules = detail::build_schedules(cfg, horizon_days);

    HouseState house;
    house.rooms.assign(N, RoomState{cfg.initial_indoor_c, HvacMode::Idle, 0.0});
    house.outdoor_temp_c = cfg.outdoor_temp_c;

    std::vector<AdverseHistory> histories(N, AdverseHistory(static_cast<std::size_t>(cfg.window)));
    std::vector<double> weights = cfg.weights;
    if (weights.empty()) weights.assign(N, 1.0);

    double applied_f = cfg.initial_applied_f;
    std::size_t rr_turn = 0;

    RunResult result;
    result.strategy = to_string(cfg.strategy);
    result.trace.reserve(static_cast<std::size_t>(cfg.samples));

    const auto nsub = static_cast<int>(std::round(cfg.sampling_period_s / cfg.thermal.dt_s));

    for (int k = 0; k < cfg.samples; ++k) {
        const double time_s = k * cfg.sampling_period_s;
        TraceRow row;
        row.sample = k;
        row.time_s = time_s;
        row.activities.resize(N);
        row.desired_f.resize(N);
        row.v_f.resize(N);

        std::vector<std::size_t> present;
        std::vector<double> desired_present;
        for (std::size_t n = 0; n < N; ++n) {
            const Activity act = schedules[n].at(time_s);
            row.activities[n] = act;
            if (auto sp = cfg.setpoints.desired_setpoint(act)) {
                row.desired_f[n] = *sp;
                present.push_back(n);
                desired_present.push_back(*sp);
            }
        }

        const bool conflict =
            !desired_present.empty() &&
            !std::all_of(desired_present.begin(), desired_present.end(),
                         [&](double d) { return d == desired_present.front(); });

        if (desired_present.empty()) {
            // Everyone away: hold the previous setpoint.
        } else if (!conflict) {
            applied_f = desired_present.front();
        } else {
            std::vector<Action> desired_actions;
            for (double d : desired_present) desired_actions.emplace_back(d);
            switch (cfg.strategy) {
                case Strategy::Mean:
                    applied_f =
                        baseline_mean(desired_actions, cfg.action_min_f, cfg.action_max_f)
                            .scalar();
                    break;
                case Strategy::RoundRobin: {
                    auto rr = baseline_round_robin(desired_actions, rr_turn);
                    applied_f = rr.action.scalar();
                    rr_turn = rr.next_turn;
                    break;
                }
                case Strategy::Weighted: {
                    std::vector<double> w;
                    for (std::size_t n : present) w.push_back(weights[n]);
                    applied_f = baseline_weighted(desired_actions, w, cfg.action_min_f,
                                                  cfg.action_max_f)
                                    .scalar();
                    break;
                }
                default: {
                    std::vector<PreferenceProfile> profiles;
                    std::vector<double> u_present;
                    for (std::size_t i = 0; i < present.size(); ++i) {
                        profiles.emplace_back(desired_present[i]);
                        u_present.push_back(history_accumulate(histories[present[i]]));
                    }
                    const auto candidates = detail::build_candidates(cfg, desired_present);
                    Decision d;
                    switch (cfg.strategy) {
                        case Strategy::Approach1:
                            d = select_approach1(candidates, profiles, cfg.fina);
                            break;
                        case Strategy::Approach2:
                            d = select_approach2(candidates, profiles, u_present);
                            break;
                        case Strategy::Approach3:
                            d = select_approach3(candidates, profiles, u_present, cfg.fina);
                            break;
                        case Strategy::Approach4:
                            d = select_approach4(candidates, profiles, u_present, cfg.fina);
                            break;
                        default:
                            d = select_approach5(candidates, profiles, u_present, cfg.fina);
                            break;
                    }
                    applied_f = d.action.scalar();
                    row.feasible = d.feasible;
                    row.aux_budget = d.aux_budget;
                    row.aux_y = d.aux_y;
                    break;
                }
            }
        }
        row.applied_f = applied_f;

        // Record adverse effects for present humans only; Away slots add no sample.
        for (std::size_t n : present) {
            const double v = std::abs(applied_f - *row.desired_f[n]);
            row.v_f[n] = v;
            histories[n].push(v);
        }

        // Advance the house through the control period.
        const double setpoint_c = fahrenheit_to_celsius(applied_f);
        std::vector<double> heats(N);
        for (std::size_t n = 0; n < N; ++n)
            heats[n] = cfg.occupants.heat_w(row.activities[n], house.rooms[n].indoor_temp_c);
        for (int s = 0; s < nsub; ++s) {
            house.outdoor_temp_c = detail::outdoor_at(cfg, time_s + s * cfg.thermal.dt_s);
            house = step(house, setpoint_c, cfg.thermal, heats);
        }

        row.indoor_c.resize(N);
        row.modes.resize(N);
        row.u.resize(N);
        row.sr.resize(N);
        std::vector<double> sr_values;
        for (std::size_t n = 0; n < N; ++n) {
            row.indoor_c[n] = house.rooms[n].indoor_temp_c;
            row.modes[n] = house.rooms[n].mode;
            row.u[n] = history_accumulate(histories[n]);
            if (!histories[n].empty()) {
                row.sr[n] = satisfaction_rate(histories[n], cfg.satisfaction_threshold_f);
                sr_values.push_back(*row.sr[n]);
            }
        }
        row.cov_u = cov(row.u);
        row.fi_u = 1.0 / (1.0 + row.cov_u * row.cov_u);
        if (!sr_values.empty()) {
            row.cov_sr = cov(sr_values);
            row.fi_sr = 1.0 / (1.0 + row.cov_sr * row.cov_sr);
        }
        result.trace.push_back(std::move(row));
    }

    result.summary = summarize(result.trace, cfg, SummaryBinning{});
    result.summary.strategy = result.strategy;
    return result;
}

// Post-warmup summary statistics; warmup is the first full window.
inline StrategySummary summarize(const std::vector<TraceRow>& trace,
                                 const ExperimentConfig& cfg, const SummaryBinning& bins) {
    StrategySummary s;
    const auto N = static_cast<std::size_t>(cfg.num_humans);
    const auto warmup = static_cast<std::size_t>(cfg.window);
    if (trace.size() <= warmup)
        throw std::invalid_argument("summarize: trace shorter than warmup window");

    std::vector<std::vector<double>> tdiff(N), sr(N);
    std::size_t rows = 0;
    for (std::size_t k = warmup; k < trace.size(); ++k) {
        const auto& row = trace[k];
        s.avg_fi_u += row.fi_u;
        s.avg_cov_u += row.cov_u;
        s.avg_fi_sr += row.fi_sr;
        s.avg_cov_sr += row.cov_sr;
        ++rows;
        for (std::size_t n = 0; n < N; ++n) {
            if (row.v_f[n]) tdiff[n].push_back(*row.v_f[n]);
            if (row.sr[n]) sr[n].push_back(*row.sr[n]);
        }
    }
    s.avg_fi_u /= static_cast<double>(rows);
    s.avg_cov_u /= static_cast<double>(rows);
    s.avg_fi_sr /= static_cast<double>(rows);
    s.avg_cov_sr /= static_cast<double>(rows);

    std::vector<Histogram> tdiff_h, sr_h;
    for (std::size_t n = 0; n < N; ++n) {
        tdiff_h.push_back(Histogram::collect(tdiff[n], 0.0, bins.tdiff_max_f, bins.tdiff_bins));
        sr_h.push_back(Histogram::collect(sr[n], 0.0, 100.0, bins.sr_bins));
    }
    if (N >= 2) {
        s.tdiff_overlap_pct = histogram_overlap(tdiff_h);
        s.sr_jsd = jsd(sr_h);
    } else {
        s.tdiff_overlap_pct = 100.0;
        s.sr_jsd = 0.0;
    }
    return s;
}

// Runs every strategy on identical realized schedules and initial conditions.
inline ComparisonReport compare_strategies(const ExperimentConfig& base,
                                           const std::vector<Strategy>& strategies) {
    if (strategies.size() < 2)
        throw ConfigError("compare_strategies: need at least two strategies");
    ComparisonReport report;
    for (Strategy s : strategies) {
        ExperimentConfig cfg = base;
        cfg.strategy = s;
        report.runs.push_back(run_experiment(cfg));
    }
    return report;
}

// --- output ---------------------------------------------------------------

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "nan"; }

} // namespace detail

inline void write_trace_csv(std::ostream& out, const RunResult& run, std::size_t num_humans) {
    out << "sample,time_s";
    for (std::size_t n = 0; n < num_humans; ++n) out << ",activity_" << n;
    for (std::size_t n = 0; n < num_humans; ++n) out << ",desired_f_" << n;
    out << ",applied_f";
    for (std::size_t n = 0; n < num_humans; ++n) out << ",v_f_" << n;
    for (std::size_t n = 0; n < num_humans; ++n) out << ",u_" << n;
    for (std::size_t n = 0; n < num_humans; ++n) out << ",sr_" << n;
    for (std::size_t n = 0; n < num_humans; ++n) out << ",indoor_c_" << n;
    for (std::size_t n = 0; n < num_humans; ++n) out << ",mode_" << n;
    out << ",fi_u,cov_u,fi_sr,cov_sr,feasible,aux_budget,aux_y\n";
    for (const auto& row : run.trace) {
        out << row.sample << ',' << detail::fmt(row.time_s);
        for (auto a : row.activities) out << ',' << to_string(a);
        for (const auto& d : row.desired_f) out << ',' << detail::fmt(d);
        out << ',' << detail::fmt(row.applied_f);
        for (const auto& v : row.v_f) out << ',' << detail::fmt(v);
        for (double u : row.u) out << ',' << detail::fmt(u);
        for (const auto& sr : row.sr) out << ',' << detail::fmt(sr);
        for (double t : row.indoor_c) out << ',' << detail::fmt(t);
        for (auto m : row.modes) out << ',' << to_string(m);
        out << ',' << detail::fmt(row.fi_u) << ',' << detail::fmt(row.cov_u) << ','
            << detail::fmt(row.fi_sr) << ',' << detail::fmt(row.cov_sr) << ','
            << (row.feasible ? 1 : 0) << ',' << detail::fmt(row.aux_budget) << ','
            << detail::fmt(row.aux_y) << '\n';
    }
}

// Reads a trace written by write_trace_csv; human count is inferred from the
// header. Used by the `metrics` subcommand to recompute summaries from disk.
inline RunResult read_trace_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        throw std::invalid_argument("trace CSV: empty file");
    std::size_t num_humans = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ','))
            if (col.rfind("activity_", 0) == 0) ++num_humans;
    }
    if (num_humans == 0)
        throw std::invalid_argument("trace CSV: no activity columns in header");

    RunResult run;
    std::string line;
    auto opt_num = [](const std::string& s) -> std::optional<double> {
        if (s == "nan") return std::nullopt;
        return std::stod(s);
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        const std::size_t expected = 3 + 7 * num_humans + 7;
        if (f.size() != expected)
            throw std::invalid_argument("trace CSV: bad row width");
        TraceRow row;
        std::size_t i = 0;
        row.sample = std::stoi(f[i++]);
        row.time_s = std::stod(f[i++]);
        for (std::size_t n = 0; n < num_humans; ++n)
            row.activities.push_back(activity_from_string(f[i++]));
        for (std::size_t n = 0; n < num_humans; ++n) row.desired_f.push_back(opt_num(f[i++]));
        row.applied_f = std::stod(f[i++]);
        for (std::size_t n = 0; n < num_humans; ++n) row.v_f.push_back(opt_num(f[i++]));
        for (std::size_t n = 0; n < num_humans; ++n) row.u.push_back(std::stod(f[i++]));
        for (std::size_t n = 0; n < num_humans; ++n) row.sr.push_back(opt_num(f[i++]));
        for (std::size_t n = 0; n < num_humans; ++n) row.indoor_c.push_back(std::stod(f[i++]));
        for (std::size_t n = 0; n < num_humans; ++n) {
            const std::string& m = f[i++];
            row.modes.push_back(m == "heating" ? HvacMode::Heating
                                : m == "cooling" ? HvacMode::Cooling
                                                 : HvacMode::Idle);
        }
        row.fi_u = std::stod(f[i++]);
        row.cov_u = std::stod(f[i++]);
        row.fi_sr = std::stod(f[i++]);
        row.cov_sr = std::stod(f[i++]);
        row.feasible = f[i++] == "1";
        row.aux_budget = opt_num(f[i++]);
        row.aux_y = opt_num(f[i++]);
        run.trace.push_back(std::move(row));
    }
    return run;
}

inline nlohmann::json summary_json(const ComparisonReport& report) {
    nlohmann::json j = nlohmann::json::object();
    nlohmann::json strategies = nlohmann::json::array();
    for (const auto& run : report.runs) {
        strategies.push_back({{"strategy", run.summary.strategy},
                              {"tdiff_overlap_pct", run.summary.tdiff_overlap_pct},
                              {"sr_jsd", run.summary.sr_jsd},
                              {"avg_fi_u", run.summary.avg_fi_u},
                              {"avg_cov_u", run.summary.avg_cov_u},
                              {"avg_fi_sr", run.summary.avg_fi_sr},
                              {"avg_cov_sr", run.summary.avg_cov_sr}});
    }
    j["strategies"] = strategies;
    return j;
}

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void emit_outputs(const ComparisonReport& report, const ExperimentConfig& cfg) {
    if (report.runs.empty())
        throw ConfigError("emit_outputs: no runs to write");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output.dir, ec);
    if (ec) throw OutputError("cannot create output dir: " + cfg.output.dir);
    if (cfg.output.format == "csv" || cfg.output.format == "both") {
        for (const auto& run : report.runs) {
            const auto path = fs::path(cfg.output.dir) / ("trace_" + run.strategy + ".csv");
            std::ofstream out(path);
            if (!out) throw OutputError("cannot write " + path.string());
            write_trace_csv(out, run, static_cast<std::size_t>(cfg.num_humans));
        }
    }
    if (cfg.output.format == "json" || cfg.output.format == "both") {
        const auto path = fs::path(cfg.output.dir) / "summary.json";
        std::ofstream out(path);
        if (!out) throw OutputError("cannot write " + path.string());
        out << summary_json(report).dump(2) << '\n';
    }
}

} // namespace fina
