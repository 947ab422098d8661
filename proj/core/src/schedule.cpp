#include "mtc/schedule.hpp"

#include <cmath>
#include <numbers>

namespace mtc {

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

}  // namespace

std::string to_string(Knob k)
{
    switch (k) {
    case Knob::J1: return "J1";
    case Knob::Delta1: return "Delta1";
    case Knob::J2: return "J2";
    case Knob::Delta2: return "Delta2";
    case Knob::InterJ: return "inter_J";
    case Knob::InterDelta: return "inter_Delta";
    }
    return "";
}

double Stage::progress(int p) const
{
    const int q = cadence == Cadence::EveryOtherPeriod ? 2 * (p / 2) : p;
    return static_cast<double>(q) / static_cast<double>(duration_periods);
}

bool Stage::owns(Knob k) const
{
    for (const auto& c : curves)
        if (c.knob == k) return true;
    return false;
}

Complex Stage::value(Knob k, double s) const
{
    Complex v = 0.0;
    for (const auto& c : curves)
        if (c.knob == k) v += c.curve(s);
    for (const auto& d : deformations)
        if (d.knob == k) v += d.curve(s);
    return v;
}

int StageSchedule::total_periods() const
{
    int n = 0;
    for (const auto& st : stages) n += st.duration_periods;
    return n;
}

std::vector<Knob> StageSchedule::owned() const
{
    std::vector<Knob> out;
    for (int k = 0; k < knob_count; ++k)
        for (const auto& st : stages)
            if (st.owns(static_cast<Knob>(k))) {
                out.push_back(static_cast<Knob>(k));
                break;
            }
    return out;
}

KnobValues StageSchedule::values_at(int stage, double s) const
{
    KnobValues v;
    for (int j = 0; j <= stage && j < static_cast<int>(stages.size()); ++j)
        for (int k = 0; k < knob_count; ++k)
            if (stages[j].owns(static_cast<Knob>(k)))
                v[k] = stages[j].value(static_cast<Knob>(k), j == stage ? s : 1.0);
    return v;
}

KnobValues StageSchedule::initial_values() const
{
    if (stages.empty()) return {};
    return values_at(0, 0.0);
}

double StageSchedule::continuity_defect() const
{
    double worst = 0.0;
    for (int j = 1; j < static_cast<int>(stages.size()); ++j) {
        const KnobValues before = values_at(j - 1, 1.0);
        for (int k = 0; k < knob_count; ++k) {
            if (!stages[j].owns(static_cast<Knob>(k)) || !before[k]) continue;
            worst = std::max(worst, std::abs(stages[j].value(static_cast<Knob>(k), 0.0) - *before[k]));
        }
    }
    return worst;
}

StageSchedule StageSchedule::prefix(int n_stages) const
{
    if (n_stages < 0 || n_stages > static_cast<int>(stages.size()))
        throw InvalidInput("prefix: stage count out of range");
    StageSchedule out;
    for (int j = 0; j < n_stages; ++j) out.stages.push_back(stages[j]);
    return out;
}

ChainSpec apply_knobs(const ChainSpec& base, const KnobValues& v)
{
    ChainSpec s = base;
    const double t = base.period;
    auto put = [&](Knob k, std::vector<Complex>& arr, int bond) {
        if (!v[static_cast<int>(k)]) return;
        if (bond >= static_cast<int>(arr.size()))
            throw InvalidInput("schedule owns " + to_string(k) + " but the chain has too few bonds");
        arr[bond] = *v[static_cast<int>(k)] / t;
    };
    put(Knob::J1, s.hopping, 0);
    put(Knob::Delta1, s.pairing, 0);
    put(Knob::J2, s.hopping, 1);
    put(Knob::Delta2, s.pairing, 1);
    return s;
}

StepThreeProfile StepThreeProfile::cosine()
{
    auto f = [](double s) { return std::cos(pi * (1.0 - s)); };
    return {f, f, f};
}

StepThreeProfile StepThreeProfile::mixed()
{
    return {[](double s) { return 1.0 - 2.0 * std::cos(0.5 * pi * s); },
            [](double s) { return 2.0 * s - 1.0; },
            [](double s) { return std::cos(pi * (1.0 - s)); }};
}

Curve step1_curve(Knob k)
{
    switch (k) {
    case Knob::J1: return [](double s) { return Complex(pi + pi * std::sin(0.5 * pi * s)); };
    case Knob::Delta1: return [](double s) { return Complex(pi - pi * std::sin(0.5 * pi * s)); };
    case Knob::J2:
    case Knob::Delta2: return [](double s) { return Complex(pi * std::cos(0.5 * pi * s)); };
    default: throw InvalidInput("step 1 has no curve for " + to_string(k));
    }
}

Curve step2_curve(Knob k)
{
    switch (k) {
    case Knob::J1: return [](double s) { return Complex(pi + pi * std::cos(0.5 * pi * s)); };
    case Knob::Delta1: return [](double s) { return Complex(pi * std::cos(0.5 * pi * s) - pi); };
    case Knob::J2: return [](double s) { return I * pi * std::sin(0.5 * pi * s); };
    case Knob::Delta2: return [](double s) { return -I * pi * std::sin(0.5 * pi * s); };
    default: throw InvalidInput("step 2 has no curve for " + to_string(k));
    }
}

Curve step3_curve(Knob k, const StepThreeProfile& f)
{
    const double amp = pi / std::numbers::sqrt2;
    switch (k) {
    case Knob::J1: return [](double) { return Complex(pi); };
    case Knob::Delta1: return [fa = f.fa](double s) { return Complex(pi * fa(s)); };
    case Knob::J2:
        return [amp, fb = f.fb](double s) { return amp * std::polar(1.0, 0.25 * pi) * (1.0 - I * fb(s)); };
    case Knob::Delta2:
        return [amp, fc = f.fc](double s) { return amp * std::polar(1.0, -0.25 * pi) * (1.0 + I * fc(s)); };
    default: throw InvalidInput("step 3 has no curve for " + to_string(k));
    }
}

namespace {

Stage chain_stage(std::string name, int periods, Cadence cadence, const std::function<Curve(Knob)>& curve)
{
    Stage st{std::move(name), periods, cadence, {}, {}, false};
    for (Knob k : {Knob::J1, Knob::Delta1, Knob::J2, Knob::Delta2}) st.curves.push_back({k, curve(k)});
    return st;
}

}  // namespace

Stage make_stage1(int periods) { return chain_stage("step1", periods, Cadence::EveryPeriod, step1_curve); }

Stage make_stage2(int periods) { return chain_stage("step2", periods, Cadence::EveryPeriod, step2_curve); }

Stage make_stage3(int periods, const StepThreeProfile& f)
{
    Stage st = chain_stage("step3", periods, Cadence::EveryOtherPeriod,
                           [&](Knob k) { return step3_curve(k, f); });
    st.deformable = true;
    return st;
}

StageSchedule canonical_schedule(const ChainSpec& base, int periods_per_step, const StepThreeProfile& f)
{
    base.validate();
    if (periods_per_step < 1) throw InvalidInput("schedule.periods_per_step: must be >= 1");
    if (base.n_sites < 4) throw InvalidInput("chain.N: the braiding schedule needs N >= 4");
    StageSchedule s;
    for (int rep = 0; rep < 2; ++rep) {
        s.stages.push_back(make_stage1(periods_per_step));
        s.stages.push_back(make_stage2(periods_per_step));
        s.stages.push_back(make_stage3(periods_per_step, f));
    }
    for (std::size_t j = 3; j < s.stages.size(); ++j) s.stages[j].name += "_repeat";
    return s;
}

StageSchedule apply_deformation(const StageSchedule& schedule, DeformationTarget which, Curve curve)
{
    if (std::abs(curve(0.0)) > 1e-12 || std::abs(curve(1.0)) > 1e-12)
        throw InvalidInput("deformation curve must vanish at s = 0 and s = 1");
    const Knob k = which == DeformationTarget::DeltaJ2       ? Knob::J2
                   : which == DeformationTarget::DeltaDelta2 ? Knob::Delta2
                                                             : Knob::Delta1;
    StageSchedule out = schedule;
    for (auto& st : out.stages)
        if (st.deformable) st.deformations.push_back({k, curve});
    return out;
}

StageSchedule apply_reference_deformations(const StageSchedule& schedule)
{
    StageSchedule s = apply_deformation(schedule, DeformationTarget::DeltaJ2, [](double x) {
        return Complex(0.23, 0.13) * std::sin(pi * x);
    });
    s = apply_deformation(s, DeformationTarget::DeltaDelta2,
                          [](double x) { return -Complex(0.09, 0.15) * std::sin(pi * x); });
    return apply_deformation(s, DeformationTarget::DeltaDelta1,
                             [](double x) { return Complex(-0.18 * (x - x * x)); });
}

}  // namespace mtc
