#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fina/rng.hpp"

namespace fina {

enum class Activity { Sleeping, Relaxing, DomesticWork, WorkFromHome, Away };

inline const char* to_string(Activity a) {
    switch (a) {
        case Activity::Sleeping: return "sleeping";
        case Activity::Relaxing: return "relaxing";
        case Activity::DomesticWork: return "domestic_work";
        case Activity::WorkFromHome: return "work_from_home";
        case Activity::Away: return "away";
    }
    throw std::logic_error("to_string: bad Activity");
}

inline Activity activity_from_string(const std::string& s) {
    if (s == "sleeping") return Activity::Sleeping;
    if (s == "relaxing") return Activity::Relaxing;
    if (s == "domestic_work") return Activity::DomesticWork;
    if (s == "work_from_home") return Activity::WorkFromHome;
    if (s == "away") return Activity::Away;
    throw std::invalid_argument("unknown activity: " + s);
}

// Activity -> desired setpoint (°F). Away means no preference.
struct SetpointTable {
    double sleeping = 62.0;
    double relaxing = 77.0;
    double domestic_work = 72.0;
    double work_from_home = 67.0;

    std::optional<double> desired_setpoint(Activity a) const {
        switch (a) {
            case Activity::Sleeping: return sleeping;
            case Activity::Relaxing: return relaxing;
            case Activity::DomesticWork: return domestic_work;
            case Activity::WorkFromHome: return work_from_home;
            case Activity::Away: return std::nullopt;
        }
        throw std::logic_error("desired_setpoint: bad Activity");
    }
};

inline std::optional<double> desired_setpoint(Activity a, const SetpointTable& table = {}) {
    return table.desired_setpoint(a);
}

enum class Archetype { Routine, Intermediate, Random };

inline const char* to_string(Archetype a) {
    switch (a) {
        case Archetype::Routine: return "routine";
        case Archetype::Intermediate: return "intermediate";
        case Archetype::Random: return "random";
    }
    throw std::logic_error("to_string: bad Archetype");
}

inline Archetype archetype_from_string(const std::string& s) {
    if (s == "routine") return Archetype::Routine;
    if (s == "intermediate") return Archetype::Intermediate;
    if (s == "random") return Archetype::Random;
    throw std::invalid_argument("unknown archetype: " + s);
}

constexpr int kHoursPerDay = 24;
constexpr int kHoursPerWeek = 7 * kHoursPerDay;
constexpr double kSecondsPerHour = 3600.0;

// One hourly slot of a weekly pattern; the realized activity is drawn
// uniformly from `choices` (a single choice means the slot is fixed).
struct WeeklySlot {
    int day = 0;        // 0 = Monday
    int start_hour = 0; // inclusive
    int end_hour = 0;   // exclusive
    std::vector<Activity> choices;
};

struct WeeklyTemplate {
    std::vector<WeeklySlot> slots;

    // Slots must tile every day [0, 24) exactly once.
    void validate() const {
        std::vector<int> covered(kHoursPerWeek, 0);
        for (const auto& s : slots) {
            if (s.day < 0 || s.day > 6 || s.start_hour < 0 || s.end_hour > 24 ||
                s.start_hour >= s.end_hour)
                throw std::invalid_argument("WeeklyTemplate: bad slot bounds");
            if (s.choices.empty())
                throw std::invalid_argument("WeeklyTemplate: slot with no admissible activity");
            for (int h = s.start_hour; h < s.end_hour; ++h)
                ++covered[s.day * kHoursPerDay + h];
        }
        for (int h = 0; h < kHoursPerWeek; ++h)
            if (covered[h] != 1)
                throw std::invalid_argument("WeeklyTemplate: slots do not tile the week (hour " +
                                            std::to_string(h) + " covered " +
                                            std::to_string(covered[h]) + " times)");
    }

    const WeeklySlot& slot_at(int week_hour) const {
        for (const auto& s : slots)
            if (s.day == week_hour / kHoursPerDay && week_hour % kHoursPerDay >= s.start_hour &&
                week_hour % kHoursPerDay < s.end_hour)
                return s;
        throw std::logic_error("WeeklyTemplate: uncovered hour");
    }
};

namespace detail {

inline Activity base_activity(Archetype /*archetype*/, int day, int hour) {
    const bool weekend = day >= 5;
    if (hour <= 6 || hour == 23) return Activity::Sleeping;
    if (hour == 7 || hour == 17 || hour == 18) return Activity::DomesticWork;
    if (hour >= 8 && hour <= 16) return weekend ? Activity::Relaxing : Activity::WorkFromHome;
    return Activity::Relaxing; // 19-22
}

inline std::vector<Activity> alternative_pool(Activity primary) {
    std::vector<Activity> pool{Activity::Sleeping, Activity::Relaxing, Activity::DomesticWork,
                               Activity::WorkFromHome, Activity::Away};
    pool.erase(std::remove(pool.begin(), pool.end(), primary), pool.end());
    return pool;
}

} // namespace detail

// Builds the archetype's weekly pattern. Routine is the fixed template;
// Intermediate opens ~30% of slots to one alternative; Random opens ~70%
// of slots to one or two alternatives.
inline WeeklyTemplate make_weekly_template(Archetype archetype, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 0));
    double open_fraction = 0.0;
    int max_extra = 0;
    if (archetype == Archetype::Intermediate) {
        open_fraction = 0.30;
        max_extra = 1;
    } else if (archetype == Archetype::Random) {
        open_fraction = 0.70;
        max_extra = 2;
    }
    WeeklyTemplate tpl;
    for (int day = 0; day < 7; ++day) {
        for (int hour = 0; hour < kHoursPerDay; ++hour) {
            WeeklySlot slot{day, hour, hour + 1,
                            {detail::base_activity(archetype, day, hour)}};
            const bool open = max_extra > 0 &&
                              static_cast<double>(bounded(rng, 1000)) < open_fraction * 1000.0;
            if (open) {
                auto pool = detail::alternative_pool(slot.choices.front());
                const int extra = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(max_extra)));
                for (int k = 0; k < extra; ++k) {
                    const auto idx = bounded(rng, pool.size());
                    slot.choices.push_back(pool[idx]);
                    pool.erase(pool.begin() + static_cast<long>(idx));
                }
            }
            tpl.slots.push_back(std::move(slot));
        }
    }
    tpl.validate();
    return tpl;
}

// Realized hourly activities over a fixed horizon. Immutable once built.
class ActivitySchedule {
  public:
    static ActivitySchedule realize(const WeeklyTemplate& tpl, std::uint64_t seed,
                                    int horizon_days) {
        if (horizon_days < 1)
            throw std::invalid_argument("ActivitySchedule: horizon must be >= 1 day");
        tpl.validate();
        ActivitySchedule sched;
        sched.horizon_days_ = horizon_days;
        std::mt19937_64 rng(derive_seed(seed, 1));
        sched.realized_.reserve(static_cast<std::size_t>(horizon_days) * kHoursPerDay);
        // Realized once per week-hour so a slot keeps its draw across the week
        // and the Routine archetype repeats exactly.
        std::vector<Activity> week(kHoursPerWeek);
        const int weeks = (horizon_days * kHoursPerDay + kHoursPerWeek - 1) / kHoursPerWeek;
        for (int w = 0; w < weeks; ++w) {
            for (int h = 0; h < kHoursPerWeek; ++h) {
                const auto& slot = tpl.slot_at(h);
                week[h] = slot.choices.size() == 1
                              ? slot.choices.front()
                              : slot.choices[bounded(rng, slot.choices.size())];
            }
            for (int h = 0; h < kHoursPerWeek; ++h) {
                if (static_cast<int>(sched.realized_.size()) >= horizon_days * kHoursPerDay)
                    break;
                sched.realized_.push_back(week[h]);
            }
        }
        return sched;
    }

    static ActivitySchedule generate(Archetype archetype, std::uint64_t seed, int horizon_days) {
        return realize(make_weekly_template(archetype, seed), seed, horizon_days);
    }

    int horizon_days() const { return horizon_days_; }
    double horizon_seconds() const { return horizon_days_ * kHoursPerDay * kSecondsPerHour; }

    // Activity of the half-open hourly slot containing `time_s`.
    Activity at(double time_s) const {
        if (time_s < 0 || time_s >= horizon_seconds())
            throw std::out_of_range("ActivitySchedule: time outside horizon");
        const auto hour = static_cast<std::size_t>(time_s / kSecondsPerHour);
        return realized_[hour];
    }

    const std::vector<Activity>& realized() const { return realized_; }

  private:
    int horizon_days_ = 0;
    std::vector<Activity> realized_;
};

// --- weekly template CSV -----------------------------------------------
// Columns: human_id,day_of_week,start_hour,end_hour,activity,alternatives
// with alternatives '|'-separated (empty for a fixed slot).

inline void write_schedule_csv(std::ostream& out,
                               const std::map<int, WeeklyTemplate>& templates) {
    out << "human_id,day_of_week,start_hour,end_hour,activity,alternatives\n";
    for (const auto& [human, tpl] : templates) {
        for (const auto& slot : tpl.slots) {
            out << human << ',' << slot.day << ',' << slot.start_hour << ',' << slot.end_hour
                << ',' << to_string(slot.choices.front()) << ',';
            for (std::size_t i = 1; i < slot.choices.size(); ++i) {
                if (i > 1) out << '|';
                out << to_string(slot.choices[i]);
            }
            out << '\n';
        }
    }
}

inline std::map<int, WeeklyTemplate> read_schedule_csv(std::istream& in) {
    std::map<int, WeeklyTemplate> templates;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("schedule CSV: empty file");
    if (line != "human_id,day_of_week,start_hour,end_hour,activity,alternatives")
        throw std::invalid_argument("schedule CSV: bad header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() == 5) fields.emplace_back(); // empty alternatives
        if (fields.size() != 6)
            throw std::invalid_argument("schedule CSV: bad row: " + line);
        WeeklySlot slot;
        slot.day = std::stoi(fields[1]);
        slot.start_hour = std::stoi(fields[2]);
        slot.end_hour = std::stoi(fields[3]);
        slot.choices.push_back(activity_from_string(fields[4]));
        std::stringstream alts(fields[5]);
        std::string alt;
        while (std::getline(alts, alt, '|'))
            if (!alt.empty()) slot.choices.push_back(activity_from_string(alt));
        templates[std::stoi(fields[0])].slots.push_back(std::move(slot));
    }
    for (auto& [human, tpl] : templates) tpl.validate();
    return templates;
}

} // namespace fina
