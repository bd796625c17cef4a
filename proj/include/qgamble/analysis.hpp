// analysis.hpp
// Closed-form cheating-gain formulas, the exact branch-enumeration oracle,
// Monte Carlo estimators and grid sweeps.
//
// Conventions: theta is the polar Bloch angle of Alice's state, so that
// |j> = cos(theta/2)|0> + sin(theta/2)|1> in the z-x plane. Gains are Alice's
// expected coins per round under the default payouts unless a
// ProtocolParams says otherwise.

#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "qgamble/strategies.hpp"
#include "qgamble/strategy.hpp"
#include "qgamble/types.hpp"

namespace qgamble {

struct Constants {
    double p;            // cos^2(pi/8)
    double loss_payout;  // p/(1-p) = 3 + 2 sqrt2
    double alpha;        // cos(pi/8) sin(pi/8) = sqrt2/4
};

Constants constants();

/// Per-round expected gain split by where it comes from.
struct GainBreakdown {
    double normal_term = 0.0;  // normal rounds
    double detect_term = 0.0;  // check rounds that catch Alice (always <= 0)
    double pass_term = 0.0;    // check rounds Alice survives
    double total = 0.0;
};

/// Exact expected gain of sending the plane state |j(theta)> every round and
/// always claiming `claim`, with honest Bob:
///   (1-r)[|<0~|j>|^2 (-1) + |<1~|j>|^2 L] - r|<1|j>|^2 R + r|<0|j>|^2 (L-1)/2
/// for a Zero claim, and the |0> <-> |0bar> mirror image for ZeroBar.
/// Evaluated in closed trigonometric form, independent of the state engine.
GainBreakdown exact_cheat_gain(double theta, double r, double R, StateLabel claim);

/// Worst-case bound on Alice's gain when claiming `claim` for state j:
/// L - (r/2)|<1|j>|^2 R (Zero) or L - (r/2)|<1bar|j>|^2 R (ZeroBar). The
/// r/2 factor is the lower bound on Alice's posterior that Bob stored the
/// qubit.
double posterior_discounted_bound(const PureQubit& j, double r, double R, StateLabel claim);

/// Small-theta bound alpha/(1-p) theta - (rR/4) theta^2 + 3r.
double linearized_gain_bound(double theta, double r, double R);

struct Optimum {
    double theta_star;
    double g_max;
};

/// Closed-form maximizer of the linearized bound:
/// theta* = 2 alpha / ((1-p) r R), g_max = alpha^2/(1-p)^2 / (rR) + 3r.
Optimum linearized_optimum(double r, double R);

/// Golden-section maximization of the linearized bound over [0, pi/4].
Optimum numeric_linearized_optimum(double r, double R, double tol = 1e-12);

struct CheckRateOptimum {
    double r_star;  // alpha / ((1-p) sqrt(3R))
    double g_cap;   // 2 sqrt3 alpha / ((1-p) sqrt R)
};

/// Check rate minimizing the linearized optimum for a given penalty.
CheckRateOptimum optimal_check_rate(double R);

/// Alice's Bayesian posterior that Bob did not measure, given his guess:
/// (r/2) / ((r/2) + (1-r) q) with q = |<0~|j>|^2 for a Zero guess and
/// |<1~|j>|^2 for ZeroBar.
double unmeasured_posterior(double theta, double r, StateLabel guess);
double unmeasured_posterior(const PureQubit& j, double r, StateLabel guess);

// --- exact oracle -----------------------------------------------------------

/// Observable content of one round.
struct TranscriptKey {
    RoundType round_type;
    StateLabel bob_guess;
    StateLabel alice_claim;
    CheckResult check_result;
    double transfer;

    auto tie() const { return std::tie(round_type, bob_guess, alice_claim, check_result, transfer); }
    friend bool operator<(const TranscriptKey& a, const TranscriptKey& b) { return a.tie() < b.tie(); }
    friend bool operator==(const TranscriptKey& a, const TranscriptKey& b) { return a.tie() == b.tie(); }
};

using TranscriptDistribution = std::map<TranscriptKey, double>;

struct OracleResult {
    TranscriptDistribution transcript;
    GainBreakdown gain;
    double normal_round_gain = 0.0;  // expectation conditional on a normal round
    double check_fail_probability = 0.0;  // conditional on a check round
};

/// Exact expectation against honest Bob by enumerating every branch: the
/// preparation mixture, the noise channel, normal vs check, Bob's outcome or
/// random guess, Alice's measurement outcome and Bob's verification outcome.
OracleResult oracle_enumerate(const AliceModel& model, const ProtocolParams& params);

/// Throws std::invalid_argument for strategies that expose no finite model.
GainBreakdown oracle_expected_gain(const AliceStrategy& alice, const ProtocolParams& params);

/// Largest absolute difference between two transcript distributions over the
/// union of their supports.
double max_abs_difference(const TranscriptDistribution& a, const TranscriptDistribution& b);

// --- sampling ---------------------------------------------------------------

struct MonteCarloEstimate {
    double mean;
    double std_error;  // sample standard deviation / sqrt(n)
    std::uint64_t n;
};

/// Per-round gain estimate from a session ledger. Requires at least 2 rounds.
MonteCarloEstimate monte_carlo_gain(const SessionStats& stats);

/// Session with its own stream seeded by derive_stream_seed(master, index).
SessionStats run_seeded_session(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params,
                                std::uint64_t n_rounds, std::uint64_t master_seed, std::uint64_t index);

// --- sweeps -----------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, std::size_t n);

struct SweepRow {
    CheatPoint point;
    StateLabel claim;  // label actually claimed (resolves Nearest)
    GainBreakdown gain;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // theta-major, then phi, then claim policy
    std::size_t best = 0;        // index of the largest total gain
};

/// Oracle gain of fixed_state_cheat at every grid point against honest Bob
/// with check rate r and penalty R.
SweepResult sweep_cheat_gain(double r, double R, const std::vector<double>& theta_grid,
                             const std::vector<double>& phi_grid, const std::vector<ClaimPolicy>& claims);

}  // namespace qgamble
