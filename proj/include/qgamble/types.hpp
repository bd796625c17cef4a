// types.hpp
// Protocol vocabulary shared by the engine, strategies and analysis.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qgamble/qubit.hpp"

namespace qgamble {

/// The two legal states. Zero is |0> verified with S_z, ZeroBar is |0bar>
/// verified with S_x.
enum class StateLabel { Zero, ZeroBar };
enum class RoundType { Normal, Check };
enum class CheckResult { Pass, Fail, NotApplicable };

std::string to_string(StateLabel l);
std::string to_string(RoundType t);
std::string to_string(CheckResult c);
std::optional<StateLabel> parse_state_label(const std::string& s);

inline StateLabel flip(StateLabel l) { return l == StateLabel::Zero ? StateLabel::ZeroBar : StateLabel::Zero; }
inline int index(StateLabel l) { return l == StateLabel::Zero ? 0 : 1; }

/// The legal state carrying `l`.
PureQubit legal_state(StateLabel l);
/// Basis in which a claim of `l` is verified; Plus is the pass outcome.
const MeasurementBasis& verification_basis(StateLabel l);

/// Raised when a party acts on a subsystem it does not hold, or measures
/// out of turn.
class ProtocolViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// p = cos^2(pi/8), the optimal probability of telling |0> from |0bar>.
double optimal_guess_probability();
/// p/(1-p) = 3 + 2 sqrt2.
double default_loss_payout();

struct ProtocolParams {
    double check_rate = 0.01;                         // r
    double penalty = 1e4;                             // R
    double loss_payout = default_loss_payout();       // paid to Alice when Bob guesses wrong
    double win_payout = 1.0;                          // paid to Bob when he guesses right
    double noise = 0.0;                               // Pauli channel strength
    double abort_threshold = 1.0;                     // empirical check-fail rate that aborts a session

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

struct RoundRecord {
    RoundType round_type = RoundType::Normal;
    StateLabel bob_guess = StateLabel::Zero;
    StateLabel alice_claim = StateLabel::Zero;
    CheckResult check_result = CheckResult::NotApplicable;
    double transfer = 0.0;  // positive = paid to Alice
    std::optional<Outcome> bob_measurement_outcome;
};

/// Settlement rule: -R on a failed check, otherwise -win_payout when Bob's
/// guess matches the claim and +loss_payout when it does not.
double settle(const ProtocolParams& params, StateLabel guess, StateLabel claim, CheckResult check);

/// Aggregated ledger of a session. Merging is associative.
struct SessionStats {
    std::uint64_t rounds = 0;
    double alice_gain_total = 0.0;
    double alice_gain_sq_total = 0.0;  // sum of squared transfers, for the standard error
    std::uint64_t check_rounds = 0;
    std::uint64_t check_fails = 0;
    std::uint64_t normal_rounds = 0;
    std::uint64_t bob_wins = 0;  // normal rounds won by Bob
    bool aborted = false;

    double bob_gain_total() const { return -alice_gain_total; }
    void record(const RoundRecord& rec);
    SessionStats& operator+=(const SessionStats& other);
};

}  // namespace qgamble
