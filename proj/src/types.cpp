#include "qgamble/types.hpp"

#include <cmath>
#include <numbers>

namespace qgamble {

std::string to_string(StateLabel l) { return l == StateLabel::Zero ? "zero" : "zerobar"; }

std::string to_string(RoundType t) { return t == RoundType::Normal ? "normal" : "check"; }

std::string to_string(CheckResult c) {
    switch (c) {
        case CheckResult::Pass: return "pass";
        case CheckResult::Fail: return "fail";
        case CheckResult::NotApplicable: return "na";
    }
    return "?";
}

std::optional<StateLabel> parse_state_label(const std::string& s) {
    if (s == "zero" || s == "Zero" || s == "0") return StateLabel::Zero;
    if (s == "zerobar" || s == "ZeroBar" || s == "0bar") return StateLabel::ZeroBar;
    return std::nullopt;
}

PureQubit legal_state(StateLabel l) { return l == StateLabel::Zero ? ket_zero() : ket_zero_bar(); }

const MeasurementBasis& verification_basis(StateLabel l) { return l == StateLabel::Zero ? basis_z() : basis_x(); }

double optimal_guess_probability() {
    const double c = std::cos(std::numbers::pi / 8);
    return c * c;
}

double default_loss_payout() {
    const double p = optimal_guess_probability();
    return p / (1.0 - p);
}

void ProtocolParams::validate() const {
    auto fail = [](const std::string& field, const std::string& rule) {
        throw std::invalid_argument(field + " must satisfy " + rule);
    };
    if (!(check_rate > 0.0 && check_rate < 1.0)) fail("check_rate (r)", "0 < r < 1");
    if (!(penalty > 0.0) || !std::isfinite(penalty)) fail("penalty (R)", "R > 0");
    if (!(loss_payout > 0.0) || !std::isfinite(loss_payout)) fail("loss_payout", "> 0");
    if (!(win_payout > 0.0) || !std::isfinite(win_payout)) fail("win_payout", "> 0");
    if (!(noise >= 0.0 && noise < 1.0)) fail("noise", "0 <= noise < 1");
    if (!(abort_threshold >= 0.0 && abort_threshold <= 1.0)) fail("abort_threshold", "0 <= threshold <= 1");
}

double settle(const ProtocolParams& params, StateLabel guess, StateLabel claim, CheckResult check) {
    if (check == CheckResult::Fail) return -params.penalty;
    return guess == claim ? -params.win_payout : params.loss_payout;
}

void SessionStats::record(const RoundRecord& rec) {
    ++rounds;
    alice_gain_total += rec.transfer;
    alice_gain_sq_total += rec.transfer * rec.transfer;
    if (rec.round_type == RoundType::Check) {
        ++check_rounds;
        if (rec.check_result == CheckResult::Fail) ++check_fails;
    } else {
        ++normal_rounds;
        if (rec.bob_guess == rec.alice_claim) ++bob_wins;
    }
}

SessionStats& SessionStats::operator+=(const SessionStats& other) {
    rounds += other.rounds;
    alice_gain_total += other.alice_gain_total;
    alice_gain_sq_total += other.alice_gain_sq_total;
    check_rounds += other.check_rounds;
    check_fails += other.check_fails;
    normal_rounds += other.normal_rounds;
    bob_wins += other.bob_wins;
    aborted = aborted || other.aborted;
    return *this;
}

}  // namespace qgamble
