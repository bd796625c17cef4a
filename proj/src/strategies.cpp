#include "qgamble/strategies.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qgamble {

ModelAlice::ModelAlice(AliceModel model, std::string description)
    : model_(std::move(model)), description_(std::move(description)) {
    if (model_.empty()) throw std::invalid_argument("ModelAlice: empty model");
    double acc = 0.0;
    for (const auto& b : model_) {
        if (!(b.weight >= 0.0)) throw std::invalid_argument("ModelAlice: negative branch weight");
        acc += b.weight;
        cumulative_.push_back(acc);
    }
    if (std::abs(acc - 1.0) > kStateTolerance) throw std::invalid_argument("ModelAlice: branch weights do not sum to 1");
    for (const auto& b : model_) {
        if (std::holds_alternative<PureQubit>(b.reg)) {
            for (const auto& plan : b.plan) {
                if (plan.basis) throw std::invalid_argument("ModelAlice: measurement planned without a retained subsystem");
            }
        }
    }
}

Preparation ModelAlice::prepare(Rng& rng) const {
    std::size_t k = 0;
    if (model_.size() > 1) {
        const double u = rng.uniform() * cumulative_.back();
        while (k + 1 < model_.size() && u >= cumulative_[k]) ++k;
    }
    return {model_[k].reg, model_[k].bob_side, k};
}

StateLabel ModelAlice::claim(std::size_t memo, StateLabel bob_guess, AliceSide& side, Rng& rng) const {
    const ClaimPlan& plan = model_.at(memo).plan[static_cast<std::size_t>(index(bob_guess))];
    if (!plan.basis) return plan.on_plus;
    const auto mine = side.held();
    if (!mine) throw ProtocolViolation("ModelAlice: planned measurement but no subsystem retained");
    return side.measure(*mine, *plan.basis, rng) == Outcome::Plus ? plan.on_plus : plan.on_minus;
}

HonestBob::HonestBob(double check_rate) : check_rate_(check_rate) {
    if (!(check_rate > 0.0 && check_rate < 1.0)) throw std::invalid_argument("honest_bob: check_rate must be in (0, 1)");
}

BobMove HonestBob::play(BobSide& qubit, bool is_check, Rng& rng) const {
    if (is_check) return {rng.bernoulli(0.5) ? StateLabel::Zero : StateLabel::ZeroBar, std::nullopt};
    const Outcome o = qubit.measure(basis_optimal(), rng);
    return {o == Outcome::Plus ? StateLabel::Zero : StateLabel::ZeroBar, o};
}

CheckResult HonestBob::verify(BobSide& qubit, StateLabel claim, Rng& rng) const {
    return qubit.measure(verification_basis(claim), rng) == Outcome::Plus ? CheckResult::Pass : CheckResult::Fail;
}

std::string HonestBob::describe() const {
    std::ostringstream os;
    os << "honest_bob(r=" << check_rate_ << ")";
    return os.str();
}

std::string to_string(ClaimPolicy c) {
    switch (c) {
        case ClaimPolicy::FixedZero: return "zero";
        case ClaimPolicy::FixedZeroBar: return "zerobar";
        case ClaimPolicy::Nearest: return "nearest";
    }
    return "?";
}

std::optional<ClaimPolicy> parse_claim_policy(const std::string& s) {
    if (s == "zero") return ClaimPolicy::FixedZero;
    if (s == "zerobar") return ClaimPolicy::FixedZeroBar;
    if (s == "nearest") return ClaimPolicy::Nearest;
    return std::nullopt;
}

void CheatPoint::validate() const {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw std::invalid_argument("theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) throw std::invalid_argument("phi must lie in [0, 2pi)");
}

PureQubit CheatPoint::state() const { return state_from_bloch(theta, phi); }

StateLabel nearest_label(const PureQubit& s) {
    const double to_zero = overlap(ket_zero(), s);
    const double to_zero_bar = overlap(ket_zero_bar(), s);
    return to_zero + kStateTolerance >= to_zero_bar ? StateLabel::Zero : StateLabel::ZeroBar;
}

EntangledPolicy EntangledPolicy::constant(const MeasurementBasis& basis, StateLabel on_plus, StateLabel on_minus) {
    return {{basis, basis}, on_plus, on_minus};
}

TwoQubitPure entangled_attack_state() {
    const double h = std::numbers::sqrt2 / 2;
    // |0>|0> + |1>(|0>+|1>)/sqrt2, over sqrt2
    return TwoQubitPure({h, 0.0, 0.5, 0.5});
}

PureQubit ket_alpha() {
    const double h = std::numbers::sqrt2 / 2;
    return PureQubit::normalized(1.0 + h, h);
}

PureQubit ket_beta() {
    const double h = std::numbers::sqrt2 / 2;
    return PureQubit::normalized(1.0 - h, -h);
}

ModelAlice honest_alice() {
    AliceModel m;
    for (StateLabel l : {StateLabel::Zero, StateLabel::ZeroBar}) {
        m.push_back({0.5, legal_state(l), Subsystem::B, {ClaimPlan::fixed(l), ClaimPlan::fixed(l)}});
    }
    return ModelAlice(std::move(m), "honest_alice");
}

HonestBob honest_bob(double check_rate) { return HonestBob(check_rate); }

ModelAlice fixed_state_cheat(const CheatPoint& point) {
    point.validate();
    const PureQubit j = point.state();
    StateLabel label = StateLabel::Zero;
    switch (point.claim_policy) {
        case ClaimPolicy::FixedZero: label = StateLabel::Zero; break;
        case ClaimPolicy::FixedZeroBar: label = StateLabel::ZeroBar; break;
        case ClaimPolicy::Nearest: label = nearest_label(j); break;
    }
    std::ostringstream os;
    os << "fixed_state_cheat(theta=" << point.theta << ",phi=" << point.phi << ",claim=" << to_string(point.claim_policy)
       << ")";
    return ModelAlice({{1.0, j, Subsystem::B, {ClaimPlan::fixed(label), ClaimPlan::fixed(label)}}}, os.str());
}

ModelAlice ensemble_cheat(const Ensemble& ensemble, const std::vector<StateLabel>& claims) {
    if (claims.size() != ensemble.entries().size()) {
        throw std::invalid_argument("ensemble_cheat: one claim label per ensemble member required");
    }
    AliceModel m;
    for (std::size_t i = 0; i < claims.size(); ++i) {
        const auto& e = ensemble.entries()[i];
        m.push_back({e.weight, e.state, Subsystem::B, {ClaimPlan::fixed(claims[i]), ClaimPlan::fixed(claims[i])}});
    }
    return ModelAlice(std::move(m), "ensemble_cheat(" + std::to_string(claims.size()) + " members)");
}

ModelAlice entangled_cheat(const TwoQubitPure& state, const EntangledPolicy& policy) {
    AliceBranch b{1.0, state, Subsystem::B, {}};
    for (std::size_t g = 0; g < 2; ++g) {
        b.plan[g] = ClaimPlan{policy.basis_for_guess[g], policy.on_plus, policy.on_minus};
    }
    return ModelAlice({b}, "entangled_cheat(" + policy.basis_for_guess[0].label() + "," +
                               policy.basis_for_guess[1].label() + ";plus->" + to_string(policy.on_plus) +
                               ",minus->" + to_string(policy.on_minus) + ")");
}

ModelAlice entangled_cheat(const EntangledPolicy& policy) { return entangled_cheat(entangled_attack_state(), policy); }

InducedEnsemble induced_ensemble(const AliceModel& model, StateLabel bob_guess) {
    std::vector<EnsembleEntry> entries;
    std::vector<StateLabel> claims;
    for (const auto& b : model) {
        const ClaimPlan& plan = b.plan[static_cast<std::size_t>(index(bob_guess))];
        if (const auto* q = std::get_if<PureQubit>(&b.reg)) {
            entries.push_back({b.weight, *q});
            claims.push_back(plan.on_plus);
            continue;
        }
        const auto& joint = std::get<TwoQubitPure>(b.reg);
        if (!plan.basis) {
            throw std::invalid_argument("induced_ensemble: entangled branch without a measurement leaves Bob mixed");
        }
        for (const auto& br : subsystem_branches(joint, other(b.bob_side), *plan.basis)) {
            if (!br.remaining) continue;
            entries.push_back({b.weight * br.probability, *br.remaining});
            claims.push_back(br.outcome == Outcome::Plus ? plan.on_plus : plan.on_minus);
        }
    }
    return {Ensemble(std::move(entries)), std::move(claims)};
}

BlochVector declared_bob_bloch(const AliceModel& model) {
    BlochVector sum;
    for (const auto& b : model) {
        if (const auto* q = std::get_if<PureQubit>(&b.reg)) {
            sum = sum + b.weight * bloch_from_state(*q);
        } else {
            sum = sum + b.weight * reduced_bloch(std::get<TwoQubitPure>(b.reg), b.bob_side);
        }
    }
    return sum;
}

}  // namespace qgamble
