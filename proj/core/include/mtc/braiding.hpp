#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtc/schedule.hpp"
#include "mtc/spectrum.hpp"

namespace mtc {

struct ProtocolOptions {
    int record_every = 1;
    EdgeModeOptions edge{};
    double leakage_abort = 0.05;
    // leakage against the instantaneous edge span at each record; costs one dense
    // propagator per record
    bool instantaneous_leakage = true;
    // many-body overlap with the ideal final state; transports all 2N modes
    bool state_overlap = false;
};

struct CorrelationRecord {
    long period = 0;
    double aa = 0, bb = 0, ab = 0, ba = 0;
    double leakage = 0;
};

struct FidelityReport {
    double theta = 0;
    double overlap = 0;
    double normalized_fidelity = 0;
};

FidelityReport normalized_fidelity(double theta);

// Angle of the planar rotation K (rows: initial pair, cols: evolved pair).
double rotation_angle(const Eigen::Matrix2d& k);

struct ProtocolResult {
    std::vector<CorrelationRecord> records;
    std::vector<double> stage_end_theta;
    FidelityReport report;
    Eigen::Matrix2d final_block = Eigen::Matrix2d::Identity();
    double final_leakage = 0;
    double max_leakage = 0;
    bool leakage_flag = false;
    double max_pair_defect = 0;
    std::vector<double> stage_end_block_defect;  // |K^T K - I| at each stage end
    ModeVector left_a, left_b;
    ModeVector init_left_a, init_left_b, init_right_a, init_right_b;
    std::optional<FidelityReport> state;  // overlap from the full Gaussian state
};

struct EdgePair {
    ModeVector left_a, left_b, right_a, right_b;
};

// Edge-mode pair gamma^A = (zero + pi)/sqrt2, gamma^B = R gamma^A on both edges.
EdgePair initial_edge_pair(const OrthogonalPropagator& r, const EdgeModeOptions& opt);

// Pure Gaussian state as 2N orthonormal columns, paired (0,1), (2,3), ...
// with <i gamma(col 2k) gamma(col 2k+1)> = +1.
// Edge pairs first: (LA, RA), (LB, RB); bulk planes (u, R u) of the Floquet
// vacuum after.
Matrix floquet_vacuum_pairs(const OrthogonalPropagator& r, const EdgePair& ep);

// |<psi1|psi2>| for two pure Gaussian states in the pair-column form.
double gaussian_overlap(const Matrix& pairs1, const Matrix& pairs2);

// Pairs after the ideal rotation by theta in the (LA, LB) plane; the edge
// columns are 0 and 2.
Matrix ideal_rotated_pairs(const Matrix& pairs, double theta);

// Initial spec of a run: base with the owned knobs at stage 0, s = 0.
ChainSpec protocol_start(const StageSchedule& schedule, const ChainSpec& base);

ProtocolResult run_protocol(const StageSchedule& schedule, const ChainSpec& base,
                            const ProtocolOptions& opt = {});

struct DisorderSpec {
    double d_hopping = 0.1;
    double d_pairing = 0.1;
    double d_mu1 = 0.1;
    double d_mu2 = 0.1;
    double h2_mean = 0.025;
    double d_h2 = 0.01;
    int realizations = 100;
    std::uint64_t master_seed = 0;

    void validate() const;
};

ChainSpec apply_disorder(const ChainSpec& spec, const DisorderSpec& d, int realization_index);

struct EnsembleResult {
    std::vector<ProtocolResult> runs;  // records trimmed to the final one
    double mean_aa = 0, mean_bb = 0, mean_ab = 0, mean_ba = 0;
    double mean_theta = 0;
    int flagged = 0;
};

EnsembleResult disorder_ensemble(const StageSchedule& schedule, const ChainSpec& base, const DisorderSpec& d,
                                 const ProtocolOptions& opt, int threads = 1);

struct MultiwireOptions {
    bool inter_wire_coupling = true;
    EdgeModeOptions edge{};
};

struct MultiwireReport {
    // rows: initial [A_l, B_l, A_l+1, B_l+1]; cols: evolved, same order
    Eigen::Matrix4d overlaps = Eigen::Matrix4d::Zero();
    double max_cross_wire_weight = 0;
    int total_periods = 0;

    double a_next_to_minus_b() const { return -overlaps(1, 2); }
    double b_next_to_a() const { return overlaps(0, 3); }
    double a_to_a_next() const { return overlaps(2, 0); }
    double b_to_b_next() const { return overlaps(3, 1); }
};

StageSchedule multiwire_schedule(int periods_per_step, bool inter_wire_coupling = true);

MultiwireReport multiwire_protocol(const std::vector<ChainSpec>& wires, int l, int periods_per_step,
                                   const MultiwireOptions& opt = {});

}  // namespace mtc
