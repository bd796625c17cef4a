#include "qgamble/strategy.hpp"

namespace qgamble {

QuantumLink::QuantumLink(const Register& reg, Subsystem bob_side) : bob_side_(bob_side) {
    if (const auto* q = std::get_if<PureQubit>(&reg)) {
        bob_ = *q;
    } else {
        joint_ = std::get<TwoQubitPure>(reg);
    }
}

std::optional<Subsystem> QuantumLink::alice_side() const {
    if (joint_ || alice_) return other(bob_side_);
    return std::nullopt;
}

void QuantumLink::apply_to_bob(Pauli p) {
    if (joint_) {
        joint_ = apply_pauli(*joint_, bob_side_, p);
    } else {
        bob_ = apply_pauli(*bob_, p);
    }
}

Outcome QuantumLink::measure(Party who, const MeasurementBasis& basis, Rng& rng) {
    if (joint_) {
        const Subsystem target = who == Party::Bob ? bob_side_ : other(bob_side_);
        const auto m = measure_subsystem(*joint_, target, basis, rng);
        joint_.reset();
        if (who == Party::Bob) {
            bob_ = basis.state(m.outcome);
            alice_ = m.remaining;
        } else {
            alice_ = basis.state(m.outcome);
            bob_ = m.remaining;
        }
        return m.outcome;
    }
    auto& mine = who == Party::Bob ? bob_ : alice_;
    if (!mine) throw ProtocolViolation("measurement on a subsystem the party does not hold");
    const auto m = qgamble::measure(*mine, basis, rng);
    mine = m.post_state;
    return m.outcome;
}

BlochVector QuantumLink::bob_bloch() const {
    if (joint_) return reduced_bloch(*joint_, bob_side_);
    return bloch_from_state(*bob_);
}

Outcome AliceSide::measure(Subsystem which, const MeasurementBasis& basis, Rng& rng) {
    const auto mine = link_.alice_side();
    if (!mine) throw ProtocolViolation("Alice holds no subsystem");
    if (which != *mine) throw ProtocolViolation("Alice attempted to measure Bob's subsystem");
    return link_.measure(Party::Alice, basis, rng);
}

Outcome BobSide::measure(const MeasurementBasis& basis, Rng& rng) {
    if (locked_) throw ProtocolViolation("Bob measured a stored check qubit before the claim");
    return link_.measure(Party::Bob, basis, rng);
}

}  // namespace qgamble
