// strategies.hpp
// Concrete players: honest Alice and Bob, fixed-state and ensemble cheats,
// and the delayed-measurement entanglement attack.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "qgamble/strategy.hpp"

namespace qgamble {

/// Alice strategy driven entirely by a finite AliceModel. Every built-in
/// Alice is one of these, so the exact oracle can enumerate all of them.
class ModelAlice final : public AliceStrategy {
public:
    ModelAlice(AliceModel model, std::string description);

    Preparation prepare(Rng& rng) const override;
    StateLabel claim(std::size_t memo, StateLabel bob_guess, AliceSide& side, Rng& rng) const override;
    const AliceModel* model() const override { return &model_; }
    std::string describe() const override { return description_; }

private:
    AliceModel model_;
    std::vector<double> cumulative_;
    std::string description_;
};

/// Measures {|0~>,|1~>} in normal rounds; in check rounds stores the qubit,
/// guesses uniformly and verifies the claim in its eigenbasis.
class HonestBob final : public BobStrategy {
public:
    explicit HonestBob(double check_rate);

    double check_rate() const override { return check_rate_; }
    BobMove play(BobSide& qubit, bool is_check, Rng& rng) const override;
    CheckResult verify(BobSide& qubit, StateLabel claim, Rng& rng) const override;
    std::string describe() const override;

private:
    double check_rate_;
};

enum class ClaimPolicy { FixedZero, FixedZeroBar, Nearest };

std::string to_string(ClaimPolicy c);
std::optional<ClaimPolicy> parse_claim_policy(const std::string& s);

/// A fixed cheating state |j> at Bloch angles (theta, phi) plus the rule for
/// what Alice claims it was.
struct CheatPoint {
    double theta = 0.0;
    double phi = 0.0;
    ClaimPolicy claim_policy = ClaimPolicy::FixedZero;

    /// Throws std::invalid_argument unless theta in [0, pi] and phi in [0, 2pi).
    void validate() const;
    PureQubit state() const;
};

/// Label whose legal state has the larger overlap with s; ties go to Zero.
StateLabel nearest_label(const PureQubit& s);

/// Measurement choice per announced guess and the outcome-to-claim table.
struct EntangledPolicy {
    std::array<MeasurementBasis, 2> basis_for_guess;  // indexed by index(bob_guess)
    StateLabel on_plus = StateLabel::Zero;
    StateLabel on_minus = StateLabel::ZeroBar;

    static EntangledPolicy constant(const MeasurementBasis& basis, StateLabel on_plus = StateLabel::Zero,
                                    StateLabel on_minus = StateLabel::ZeroBar);
};

/// (|0>_A|0>_B + |1>_A|0bar>_B)/sqrt2: measuring A in S_z leaves Bob with
/// an equal mixture of the two legal states.
TwoQubitPure entangled_attack_state();

/// Normalized |0> + |0bar> and |0> - |0bar>.
PureQubit ket_alpha();
PureQubit ket_beta();

ModelAlice honest_alice();
HonestBob honest_bob(double check_rate);
ModelAlice fixed_state_cheat(const CheatPoint& point);
ModelAlice ensemble_cheat(const Ensemble& ensemble, const std::vector<StateLabel>& claims);
ModelAlice entangled_cheat(const EntangledPolicy& policy);
/// Same attack on an arbitrary shared state; Bob receives subsystem B.
ModelAlice entangled_cheat(const TwoQubitPure& state, const EntangledPolicy& policy);

/// Bob's state distribution after Alice acts on her subsystem for a given
/// announced guess (no noise, Bob not yet measured), with the claim attached
/// to each member.
struct InducedEnsemble {
    Ensemble ensemble;
    std::vector<StateLabel> claims;
};
InducedEnsemble induced_ensemble(const AliceModel& model, StateLabel bob_guess);

/// Bloch vector of Bob's state before anyone measures, averaged over the
/// preparation mixture.
BlochVector declared_bob_bloch(const AliceModel& model);

}  // namespace qgamble
