// strategy.hpp
// Player interfaces and the access-controlled quantum link between them.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qgamble/qubit.hpp"
#include "qgamble/rng.hpp"
#include "qgamble/types.hpp"

namespace qgamble {

enum class Party { Alice, Bob };

/// What Alice puts on the line: a single qubit (all of it goes to Bob) or a
/// two-qubit state of which Bob receives `bob_side`.
using Register = std::variant<PureQubit, TwoQubitPure>;

/// Engine-owned quantum state shared by the two parties for one round.
///
/// Each party may only measure the subsystem it holds. A measurement on one
/// half of an entangled register collapses it into two single-qubit states.
class QuantumLink {
public:
    QuantumLink(const Register& reg, Subsystem bob_side);

    Subsystem bob_side() const { return bob_side_; }
    /// Subsystem Alice kept, if any.
    std::optional<Subsystem> alice_side() const;

    void apply_to_bob(Pauli p);
    Outcome measure(Party who, const MeasurementBasis& basis, Rng& rng);

    /// Bloch vector of Bob's (possibly reduced) state.
    BlochVector bob_bloch() const;

private:
    std::optional<TwoQubitPure> joint_;
    std::optional<PureQubit> bob_;
    std::optional<PureQubit> alice_;
    Subsystem bob_side_;
};

/// Alice's handle on the link. Measuring anything but her own subsystem
/// raises ProtocolViolation.
class AliceSide {
public:
    explicit AliceSide(QuantumLink& link) : link_(link) {}
    std::optional<Subsystem> held() const { return link_.alice_side(); }
    Outcome measure(Subsystem which, const MeasurementBasis& basis, Rng& rng);

private:
    QuantumLink& link_;
};

/// Bob's handle on the qubit he received. While locked (check rounds,
/// before Alice's claim) any measurement raises ProtocolViolation.
class BobSide {
public:
    explicit BobSide(QuantumLink& link) : link_(link) {}
    Outcome measure(const MeasurementBasis& basis, Rng& rng);
    void lock() { locked_ = true; }
    void unlock() { locked_ = false; }
    bool locked() const { return locked_; }

private:
    QuantumLink& link_;
    bool locked_ = false;
};

struct Preparation {
    Register reg;
    Subsystem bob_side = Subsystem::B;
    std::size_t memo = 0;  // private to the strategy
};

/// How Alice turns Bob's guess into a claim within one preparation branch.
/// With no basis the claim is `on_plus`; otherwise she measures her
/// subsystem and claims `on_plus` or `on_minus` by outcome.
struct ClaimPlan {
    std::optional<MeasurementBasis> basis;
    StateLabel on_plus = StateLabel::Zero;
    StateLabel on_minus = StateLabel::Zero;

    static ClaimPlan fixed(StateLabel l) { return {std::nullopt, l, l}; }
};

struct AliceBranch {
    double weight = 1.0;
    Register reg;
    Subsystem bob_side = Subsystem::B;
    std::array<ClaimPlan, 2> plan;  // indexed by index(bob_guess)
};

/// Finite description of an Alice strategy: enough for exact enumeration.
using AliceModel = std::vector<AliceBranch>;

class AliceStrategy {
public:
    virtual ~AliceStrategy() = default;
    virtual Preparation prepare(Rng& rng) const = 0;
    virtual StateLabel claim(std::size_t memo, StateLabel bob_guess, AliceSide& side, Rng& rng) const = 0;
    /// Exact branch structure, or nullptr when the strategy has none.
    virtual const AliceModel* model() const { return nullptr; }
    virtual std::string describe() const = 0;
};

struct BobMove {
    StateLabel guess;
    std::optional<Outcome> outcome;  // set when Bob measured
};

class BobStrategy {
public:
    virtual ~BobStrategy() = default;
    virtual double check_rate() const = 0;
    virtual BobMove play(BobSide& qubit, bool is_check, Rng& rng) const = 0;
    virtual CheckResult verify(BobSide& qubit, StateLabel claim, Rng& rng) const = 0;
    virtual std::string describe() const = 0;
};

}  // namespace qgamble
