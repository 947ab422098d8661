#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtc/chain.hpp"

namespace mtc {

enum class Knob { J1 = 0, Delta1, J2, Delta2, InterJ, InterDelta };
inline constexpr int knob_count = 6;

enum class Cadence { EveryPeriod, EveryOtherPeriod };

// Stage curves return values in product units (value * T).
using Curve = std::function<Complex(double)>;

struct KnobCurve {
    Knob knob;
    Curve curve;
};

struct Stage {
    std::string name;
    int duration_periods = 0;
    Cadence cadence = Cadence::EveryPeriod;
    std::vector<KnobCurve> curves;
    std::vector<KnobCurve> deformations;
    bool deformable = false;

    double progress(int period_in_stage) const;
    bool owns(Knob k) const;
    Complex value(Knob k, double s) const;
};

using KnobValues = std::array<std::optional<Complex>, knob_count>;

struct StageSchedule {
    std::vector<Stage> stages;

    int total_periods() const;
    std::vector<Knob> owned() const;
    // Knobs a stage does not own hold the value of the latest stage that did.
    KnobValues values_at(int stage, double s) const;
    KnobValues initial_values() const;
    double continuity_defect() const;
    StageSchedule prefix(int n_stages) const;
};

// Writes the chain-local knobs (J1, Delta1, J2, Delta2) into the first two bonds.
ChainSpec apply_knobs(const ChainSpec& base, const KnobValues& v);

struct StepThreeProfile {
    std::function<double(double)> fa, fb, fc;

    static StepThreeProfile cosine();
    static StepThreeProfile mixed();
};

Curve step1_curve(Knob k);
Curve step2_curve(Knob k);
Curve step3_curve(Knob k, const StepThreeProfile& f);

Stage make_stage1(int periods);
Stage make_stage2(int periods);
Stage make_stage3(int periods, const StepThreeProfile& f);

StageSchedule canonical_schedule(const ChainSpec& base, int periods_per_step,
                                 const StepThreeProfile& f = StepThreeProfile::cosine());

enum class DeformationTarget { DeltaJ2, DeltaDelta2, DeltaDelta1 };

StageSchedule apply_deformation(const StageSchedule& schedule, DeformationTarget which, Curve curve);

// The deformation curve set of the fidelity study.
StageSchedule apply_reference_deformations(const StageSchedule& schedule);

std::string to_string(Knob k);

}  // namespace mtc
