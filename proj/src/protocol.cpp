#include "qgamble/protocol.hpp"

#include <stdexcept>

namespace qgamble {

std::optional<Pauli> sample_noise(double eps, Rng& rng) {
    if (eps <= 0.0) return std::nullopt;
    const double u = rng.uniform();
    if (u >= eps) return std::nullopt;
    const double third = eps / 3.0;
    if (u < third) return Pauli::X;
    if (u < 2.0 * third) return Pauli::Y;
    return Pauli::Z;
}

PureQubit apply_noise(const PureQubit& s, double eps, Rng& rng) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("apply_noise: eps outside [0, 1]");
    const auto p = sample_noise(eps, rng);
    return p ? apply_pauli(s, *p) : s;
}

RoundRecord run_round(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params, Rng& rng) {
    if (bob.check_rate() != params.check_rate) {
        throw std::invalid_argument("run_round: Bob's check rate differs from params.check_rate");
    }

    Preparation prep = alice.prepare(rng);
    QuantumLink link(prep.reg, prep.bob_side);
    if (const auto p = sample_noise(params.noise, rng)) link.apply_to_bob(*p);

    RoundRecord rec;
    const bool is_check = rng.bernoulli(params.check_rate);
    rec.round_type = is_check ? RoundType::Check : RoundType::Normal;

    BobSide bob_side(link);
    if (is_check) bob_side.lock();
    const BobMove move = bob.play(bob_side, is_check, rng);
    rec.bob_guess = move.guess;
    rec.bob_measurement_outcome = move.outcome;

    AliceSide alice_side(link);
    rec.alice_claim = alice.claim(prep.memo, rec.bob_guess, alice_side, rng);

    if (is_check) {
        bob_side.unlock();
        rec.check_result = bob.verify(bob_side, rec.alice_claim, rng);
        if (rec.check_result == CheckResult::NotApplicable) {
            throw ProtocolViolation("check round verification returned no result");
        }
    } else {
        rec.check_result = CheckResult::NotApplicable;
    }
    rec.transfer = settle(params, rec.bob_guess, rec.alice_claim, rec.check_result);
    return rec;
}

SessionStats run_session(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params,
                         std::uint64_t n_rounds, Rng& rng, const RoundObserver& observer) {
    if (n_rounds < 1) throw std::invalid_argument("run_session: n_rounds must be >= 1");
    params.validate();
    SessionStats stats;
    for (std::uint64_t i = 0; i < n_rounds; ++i) {
        const RoundRecord rec = run_round(alice, bob, params, rng);
        stats.record(rec);
        if (observer) observer(rec);
        if (rec.round_type == RoundType::Check && stats.check_rounds >= kAbortMinCheckRounds &&
            static_cast<double>(stats.check_fails) > params.abort_threshold * static_cast<double>(stats.check_rounds)) {
            stats.aborted = true;
            break;
        }
    }
    return stats;
}

}  // namespace qgamble
