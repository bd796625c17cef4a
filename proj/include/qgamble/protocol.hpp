// protocol.hpp
// Round and session execution for the two-state gambling protocol.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qgamble/rng.hpp"
#include "qgamble/strategy.hpp"
#include "qgamble/types.hpp"

namespace qgamble {

/// Number of check rounds observed before the abort rule may fire.
inline constexpr std::uint64_t kAbortMinCheckRounds = 100;

/// Draw from the noise channel: nullopt with probability 1 - eps, otherwise
/// one of X, Y, Z uniformly.
std::optional<Pauli> sample_noise(double eps, Rng& rng);

/// Single-qubit Pauli channel of strength eps.
PureQubit apply_noise(const PureQubit& s, double eps, Rng& rng);

/// Plays one round.
///
/// Order of events: Alice prepares and designates Bob's subsystem, the noise
/// channel acts on that subsystem, Bob decides between a normal and a check
/// round, Bob announces a guess (measuring first in a normal round), Alice
/// announces her claim, and in a check round Bob verifies the claim before
/// settlement. Throws ProtocolViolation when a strategy touches a subsystem
/// it does not hold, or std::invalid_argument when Bob's check rate differs
/// from params.check_rate.
RoundRecord run_round(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params, Rng& rng);

using RoundObserver = std::function<void(const RoundRecord&)>;

/// Runs up to n_rounds rounds, stopping early when the abort rule fires:
/// at least kAbortMinCheckRounds check rounds and an observed fail
/// fraction above params.abort_threshold.
SessionStats run_session(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params,
                         std::uint64_t n_rounds, Rng& rng, const RoundObserver& observer = {});

}  // namespace qgamble
