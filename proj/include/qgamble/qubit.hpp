// qubit.hpp
// Exact one- and two-qubit pure states, Bloch vectors and projective measurement.
//
// Mixed states never appear as density matrices: they are carried either as
// ensembles of pure states or as the Bloch vector of a reduced state.

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qgamble/rng.hpp"

namespace qgamble {

using Amplitude = std::complex<double>;

/// Tolerance for construction-time invariants (normalization, orthogonality).
inline constexpr double kStateTolerance = 1e-12;
/// Tolerance for comparing derived quantities.
inline constexpr double kDerivedTolerance = 1e-9;

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    double dot(const BlochVector& other) const { return x * other.x + y * other.y + z * other.z; }

    friend BlochVector operator+(BlochVector a, const BlochVector& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend BlochVector operator*(double s, const BlochVector& v) { return {s * v.x, s * v.y, s * v.z}; }
};

/// Normalized single-qubit pure state a|0> + b|1>.
///
/// The global phase is fixed on construction: amp0 is made real and
/// non-negative whenever |amp0| > 1e-9, otherwise amp1 is. Two states are
/// physically equal iff their canonical amplitudes agree.
class PureQubit {
public:
    /// Throws std::invalid_argument unless the amplitudes are finite and
    /// |a|^2 + |b|^2 = 1 within kStateTolerance.
    PureQubit(Amplitude amp0, Amplitude amp1);

    /// Rescales an arbitrary non-zero vector to unit norm.
    static PureQubit normalized(Amplitude amp0, Amplitude amp1);

    const Amplitude& amp0() const { return amp0_; }
    const Amplitude& amp1() const { return amp1_; }
    const Amplitude& operator[](int i) const { return i == 0 ? amp0_ : amp1_; }

    /// <this|other>
    Amplitude inner(const PureQubit& other) const;

private:
    struct Unchecked {};
    PureQubit(Amplitude amp0, Amplitude amp1, Unchecked);
    void canonicalize();

    Amplitude amp0_;
    Amplitude amp1_;
};

enum class Outcome { Plus, Minus };
enum class Subsystem { A, B };
enum class Pauli { X, Y, Z };

inline Subsystem other(Subsystem s) { return s == Subsystem::A ? Subsystem::B : Subsystem::A; }
std::string to_string(Outcome o);
std::string to_string(Pauli p);

/// Orthonormal pair defining a projective qubit measurement.
class MeasurementBasis {
public:
    /// Throws std::invalid_argument if |<plus|minus>| > kStateTolerance.
    MeasurementBasis(PureQubit plus, PureQubit minus, std::string label);

    /// Basis whose plus vector has Bloch angles (polar, azimuth).
    static MeasurementBasis from_bloch(double polar, double azimuth, std::string label);

    const PureQubit& plus() const { return plus_; }
    const PureQubit& minus() const { return minus_; }
    const PureQubit& state(Outcome o) const { return o == Outcome::Plus ? plus_ : minus_; }
    const std::string& label() const { return label_; }

private:
    PureQubit plus_;
    PureQubit minus_;
    std::string label_;
};

/// Joint pure state of two qubits, amplitudes ordered |00>,|01>,|10>,|11>.
/// The first index belongs to subsystem A, the second to B.
class TwoQubitPure {
public:
    explicit TwoQubitPure(const std::array<Amplitude, 4>& amps);
    static TwoQubitPure normalized(const std::array<Amplitude, 4>& amps);
    static TwoQubitPure product(const PureQubit& a, const PureQubit& b);

    const std::array<Amplitude, 4>& amps() const { return amps_; }
    /// Amplitude of |a>_A |b>_B.
    const Amplitude& at(int a, int b) const { return amps_[static_cast<std::size_t>(2 * a + b)]; }

private:
    std::array<Amplitude, 4> amps_;
};

struct EnsembleEntry {
    double weight;
    PureQubit state;
};

/// Probability mixture of pure states; weights non-negative and summing to 1.
class Ensemble {
public:
    explicit Ensemble(std::vector<EnsembleEntry> entries);
    const std::vector<EnsembleEntry>& entries() const { return entries_; }

private:
    std::vector<EnsembleEntry> entries_;
};

// Named states and bases of the protocol.
PureQubit ket_zero();
PureQubit ket_one();
PureQubit ket_zero_bar();    // (|0> + |1>)/sqrt2
PureQubit ket_one_bar();     // (|0> - |1>)/sqrt2
PureQubit ket_zero_tilde();  // Bloch vector (z - x)/sqrt2
PureQubit ket_one_tilde();   // Bloch vector (x - z)/sqrt2
const MeasurementBasis& basis_z();
const MeasurementBasis& basis_x();
/// Minimum-error discrimination basis {|0~>, |1~>} for |0> versus |0bar>.
const MeasurementBasis& basis_optimal();

PureQubit state_from_bloch(double polar, double azimuth);
BlochVector bloch_from_state(const PureQubit& s);

/// |<a|b>|^2
double overlap(const PureQubit& a, const PureQubit& b);

struct Measurement {
    Outcome outcome;
    PureQubit post_state;
};
Measurement measure(const PureQubit& s, const MeasurementBasis& basis, Rng& rng);

/// One outcome of measuring a subsystem of a two-qubit state. `remaining` is
/// the collapsed state of the other subsystem and is empty when the outcome
/// has zero probability.
struct SubsystemBranch {
    Outcome outcome;
    double probability;
    std::optional<PureQubit> remaining;
};

/// Exact branch table for measuring `which` in `basis`: index 0 is Plus.
std::array<SubsystemBranch, 2> subsystem_branches(const TwoQubitPure& s, Subsystem which,
                                                  const MeasurementBasis& basis);

struct SubsystemMeasurement {
    Outcome outcome;
    PureQubit remaining;
};
SubsystemMeasurement measure_subsystem(const TwoQubitPure& s, Subsystem which, const MeasurementBasis& basis,
                                       Rng& rng);

BlochVector reduced_bloch(const TwoQubitPure& s, Subsystem which);
BlochVector ensemble_average_bloch(const Ensemble& e);

PureQubit apply_pauli(const PureQubit& s, Pauli which);
TwoQubitPure apply_pauli(const TwoQubitPure& s, Subsystem target, Pauli which);

}  // namespace qgamble
