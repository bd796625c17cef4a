#include "qgamble/qubit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgamble {

namespace {

bool finite(const Amplitude& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

constexpr double kPhaseCutoff = 1e-9;

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

PureQubit::PureQubit(Amplitude amp0, Amplitude amp1) : amp0_(amp0), amp1_(amp1) {
    if (!finite(amp0) || !finite(amp1)) {
        throw std::invalid_argument("PureQubit: non-finite amplitude");
    }
    const double n = std::norm(amp0) + std::norm(amp1);
    if (std::abs(n - 1.0) > kStateTolerance) {
        throw std::invalid_argument("PureQubit: amplitudes not normalized (|a|^2+|b|^2 = " + std::to_string(n) + ")");
    }
    canonicalize();
}

PureQubit::PureQubit(Amplitude amp0, Amplitude amp1, Unchecked) : amp0_(amp0), amp1_(amp1) { canonicalize(); }

PureQubit PureQubit::normalized(Amplitude amp0, Amplitude amp1) {
    if (!finite(amp0) || !finite(amp1)) {
        throw std::invalid_argument("PureQubit::normalized: non-finite amplitude");
    }
    const double n = std::sqrt(std::norm(amp0) + std::norm(amp1));
    if (n == 0.0) {
        throw std::invalid_argument("PureQubit::normalized: zero vector");
    }
    return PureQubit(amp0 / n, amp1 / n, Unchecked{});
}

void PureQubit::canonicalize() {
    const Amplitude& ref = std::abs(amp0_) > kPhaseCutoff ? amp0_ : amp1_;
    const double mag = std::abs(ref);
    if (mag == 0.0) return;
    const Amplitude phase = std::conj(ref) / mag;
    amp0_ *= phase;
    amp1_ *= phase;
    // Remove rounding residue from the reference amplitude.
    if (std::abs(amp0_) > kPhaseCutoff) {
        amp0_ = Amplitude(std::abs(amp0_), 0.0);
    } else {
        amp1_ = Amplitude(std::abs(amp1_), 0.0);
    }
}

Amplitude PureQubit::inner(const PureQubit& other) const {
    return std::conj(amp0_) * other.amp0_ + std::conj(amp1_) * other.amp1_;
}

std::string to_string(Outcome o) { return o == Outcome::Plus ? "plus" : "minus"; }

std::string to_string(Pauli p) {
    switch (p) {
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
        case Pauli::Z: return "Z";
    }
    return "?";
}

MeasurementBasis::MeasurementBasis(PureQubit plus, PureQubit minus, std::string label)
    : plus_(plus), minus_(minus), label_(std::move(label)) {
    if (std::abs(plus_.inner(minus_)) > kStateTolerance) {
        throw std::invalid_argument("MeasurementBasis '" + label_ + "': basis vectors not orthogonal");
    }
}

MeasurementBasis MeasurementBasis::from_bloch(double polar, double azimuth, std::string label) {
    return MeasurementBasis(state_from_bloch(polar, azimuth), state_from_bloch(std::numbers::pi - polar, azimuth + std::numbers::pi),
                            std::move(label));
}

TwoQubitPure::TwoQubitPure(const std::array<Amplitude, 4>& amps) : amps_(amps) {
    double n = 0.0;
    for (const auto& a : amps_) {
        if (!finite(a)) throw std::invalid_argument("TwoQubitPure: non-finite amplitude");
        n += std::norm(a);
    }
    if (std::abs(n - 1.0) > kStateTolerance) {
        throw std::invalid_argument("TwoQubitPure: amplitudes not normalized");
    }
}

TwoQubitPure TwoQubitPure::normalized(const std::array<Amplitude, 4>& amps) {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    n = std::sqrt(n);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("TwoQubitPure::normalized: degenerate vector");
    std::array<Amplitude, 4> scaled{};
    for (std::size_t i = 0; i < 4; ++i) scaled[i] = amps[i] / n;
    return TwoQubitPure(scaled);
}

TwoQubitPure TwoQubitPure::product(const PureQubit& a, const PureQubit& b) {
    return TwoQubitPure::normalized({a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
}

Ensemble::Ensemble(std::vector<EnsembleEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("Ensemble: no entries");
    double total = 0.0;
    for (const auto& e : entries_) {
        if (!(e.weight >= 0.0)) throw std::invalid_argument("Ensemble: negative weight");
        total += e.weight;
    }
    if (std::abs(total - 1.0) > kStateTolerance) {
        throw std::invalid_argument("Ensemble: weights sum to " + std::to_string(total));
    }
}

PureQubit ket_zero() { return PureQubit(1.0, 0.0); }
PureQubit ket_one() { return PureQubit(0.0, 1.0); }
PureQubit ket_zero_bar() { return PureQubit(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2); }
PureQubit ket_one_bar() { return PureQubit(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2); }
PureQubit ket_zero_tilde() { return PureQubit(std::cos(std::numbers::pi / 8), -std::sin(std::numbers::pi / 8)); }
PureQubit ket_one_tilde() { return PureQubit(std::sin(std::numbers::pi / 8), std::cos(std::numbers::pi / 8)); }

const MeasurementBasis& basis_z() {
    static const MeasurementBasis b(ket_zero(), ket_one(), "S_z");
    return b;
}

const MeasurementBasis& basis_x() {
    static const MeasurementBasis b(ket_zero_bar(), ket_one_bar(), "S_x");
    return b;
}

const MeasurementBasis& basis_optimal() {
    static const MeasurementBasis b(ket_zero_tilde(), ket_one_tilde(), "optimal");
    return b;
}

PureQubit state_from_bloch(double polar, double azimuth) {
    const double c = std::cos(polar / 2);
    const double s = std::sin(polar / 2);
    // Polar angles outside [0, pi] can make c negative; fold the sign into the phase.
    return PureQubit::normalized(Amplitude(c, 0.0), std::polar(s, azimuth));
}

BlochVector bloch_from_state(const PureQubit& s) {
    const Amplitude rho01 = s.amp0() * std::conj(s.amp1());
    return {2.0 * rho01.real(), -2.0 * rho01.imag(), std::norm(s.amp0()) - std::norm(s.amp1())};
}

double overlap(const PureQubit& a, const PureQubit& b) {
    const double v = std::norm(a.inner(b));
    return v > 1.0 ? 1.0 : v;
}

Measurement measure(const PureQubit& s, const MeasurementBasis& basis, Rng& rng) {
    const Outcome o = rng.uniform() < overlap(basis.plus(), s) ? Outcome::Plus : Outcome::Minus;
    return {o, basis.state(o)};
}

std::array<SubsystemBranch, 2> subsystem_branches(const TwoQubitPure& s, Subsystem which,
                                                  const MeasurementBasis& basis) {
    auto branch = [&](Outcome o) -> SubsystemBranch {
        const PureQubit& u = basis.state(o);
        Amplitude c0;
        Amplitude c1;
        if (which == Subsystem::A) {
            c0 = std::conj(u[0]) * s.at(0, 0) + std::conj(u[1]) * s.at(1, 0);
            c1 = std::conj(u[0]) * s.at(0, 1) + std::conj(u[1]) * s.at(1, 1);
        } else {
            c0 = std::conj(u[0]) * s.at(0, 0) + std::conj(u[1]) * s.at(0, 1);
            c1 = std::conj(u[0]) * s.at(1, 0) + std::conj(u[1]) * s.at(1, 1);
        }
        const double p = std::norm(c0) + std::norm(c1);
        if (p <= 0.0) return {o, 0.0, std::nullopt};
        return {o, p, PureQubit::normalized(c0, c1)};
    };
    auto plus = branch(Outcome::Plus);
    auto minus = branch(Outcome::Minus);
    // Renormalize so the pair sums to one exactly up to a single rounding.
    const double total = plus.probability + minus.probability;
    plus.probability /= total;
    minus.probability = 1.0 - plus.probability;
    return {plus, minus};
}

SubsystemMeasurement measure_subsystem(const TwoQubitPure& s, Subsystem which, const MeasurementBasis& basis,
                                       Rng& rng) {
    const auto branches = subsystem_branches(s, which, basis);
    const auto& hit = rng.uniform() < branches[0].probability ? branches[0] : branches[1];
    return {hit.outcome, *hit.remaining};
}

BlochVector reduced_bloch(const TwoQubitPure& s, Subsystem which) {
    // rho_kl = sum_m psi(k,m) conj(psi(l,m)) with m the traced-out index.
    auto amp = [&](int mine, int traced) { return which == Subsystem::A ? s.at(mine, traced) : s.at(traced, mine); };
    Amplitude rho00 = 0.0;
    Amplitude rho11 = 0.0;
    Amplitude rho01 = 0.0;
    for (int m = 0; m < 2; ++m) {
        rho00 += std::norm(amp(0, m));
        rho11 += std::norm(amp(1, m));
        rho01 += amp(0, m) * std::conj(amp(1, m));
    }
    return {2.0 * rho01.real(), -2.0 * rho01.imag(), rho00.real() - rho11.real()};
}

BlochVector ensemble_average_bloch(const Ensemble& e) {
    BlochVector sum;
    for (const auto& entry : e.entries()) sum = sum + entry.weight * bloch_from_state(entry.state);
    return sum;
}

namespace {

std::array<Amplitude, 2> pauli_action(Pauli which, Amplitude a0, Amplitude a1) {
    const Amplitude i(0.0, 1.0);
    switch (which) {
        case Pauli::X: return {a1, a0};
        case Pauli::Y: return {-i * a1, i * a0};
        case Pauli::Z: return {a0, -a1};
    }
    return {a0, a1};
}

}  // namespace

PureQubit apply_pauli(const PureQubit& s, Pauli which) {
    const auto out = pauli_action(which, s[0], s[1]);
    return PureQubit::normalized(out[0], out[1]);
}

TwoQubitPure apply_pauli(const TwoQubitPure& s, Subsystem target, Pauli which) {
    std::array<Amplitude, 4> out{};
    for (int fixed = 0; fixed < 2; ++fixed) {
        if (target == Subsystem::B) {
            const auto r = pauli_action(which, s.at(fixed, 0), s.at(fixed, 1));
            out[static_cast<std::size_t>(2 * fixed)] = r[0];
            out[static_cast<std::size_t>(2 * fixed + 1)] = r[1];
        } else {
            const auto r = pauli_action(which, s.at(0, fixed), s.at(1, fixed));
            out[static_cast<std::size_t>(fixed)] = r[0];
            out[static_cast<std::size_t>(2 + fixed)] = r[1];
        }
    }
    return TwoQubitPure::normalized(out);
}

}  // namespace qgamble
