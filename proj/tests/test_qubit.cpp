#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qgamble/qubit.hpp"
#include "qgamble/strategies.hpp"
#include "test_support.hpp"

using namespace qgamble;
using qgamble::test::random_qubit;
using qgamble::test::random_two_qubit;

namespace {

constexpr double kPi = std::numbers::pi;
const double kP = std::cos(kPi / 8) * std::cos(kPi / 8);

/// Physical equality: |<a|b>| = 1.
bool same_state(const PureQubit& a, const PureQubit& b, double tol = 1e-12) { return std::abs(overlap(a, b) - 1.0) <= tol; }

}  // namespace

TEST_CASE("state_from_bloch places the named states") {
    const auto north = state_from_bloch(0.0, 0.0);
    CHECK(std::abs(north.amp0() - Amplitude(1.0)) < 1e-15);
    CHECK(std::abs(north.amp1()) < 1e-15);

    const auto plus_x = state_from_bloch(kPi / 2, 0.0);
    CHECK(std::abs(plus_x.amp0() - Amplitude(1 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(plus_x.amp1() - Amplitude(1 / std::sqrt(2.0))) < 1e-15);

    const auto tilde0 = state_from_bloch(kPi / 4, kPi);
    CHECK(std::abs(tilde0.amp0() - Amplitude(std::cos(kPi / 8))) < 1e-12);
    CHECK(std::abs(tilde0.amp1() - Amplitude(-std::sin(kPi / 8))) < 1e-12);
    const auto b = bloch_from_state(tilde0);
    CHECK(std::abs(b.x + 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(b.y) < 1e-12);
    CHECK(std::abs(b.z - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(same_state(tilde0, ket_zero_tilde()));
}

TEST_CASE("bloch_from_state on basis states") {
    const auto z = bloch_from_state(ket_zero());
    CHECK(z.x == 0.0);
    CHECK(z.z == 1.0);
    const auto xp = bloch_from_state(ket_zero_bar());
    CHECK(std::abs(xp.x - 1.0) < 1e-15);
    CHECK(std::abs(xp.z) < 1e-15);
    const auto xm = bloch_from_state(ket_one_bar());
    CHECK(std::abs(xm.x + 1.0) < 1e-15);
    const auto t1 = bloch_from_state(ket_one_tilde());
    CHECK(std::abs(t1.x - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(t1.z + 1 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("overlap examples") {
    CHECK(std::abs(overlap(ket_zero(), ket_zero_bar()) - 0.5) < 1e-15);
    CHECK(std::abs(overlap(ket_zero_tilde(), ket_zero()) - kP) < 1e-15);
    CHECK(std::abs(overlap(ket_zero_tilde(), ket_zero()) - 0.8535534) < 1e-7);
    CHECK(overlap(ket_one(), ket_zero()) == 0.0);
    // Optimal guessing succeeds equally on both legal states.
    CHECK(std::abs(overlap(ket_one_tilde(), ket_zero_bar()) - kP) < 1e-15);
    CHECK(std::abs(overlap(ket_one_tilde(), ket_one()) - kP) < 1e-15);
}

TEST_CASE("global phase convention") {
    const Amplitude i(0.0, 1.0);
    const PureQubit s(i / std::sqrt(2.0), -i / std::sqrt(2.0));
    CHECK(s.amp0().imag() == 0.0);
    CHECK(s.amp0().real() > 0.0);
    CHECK(std::abs(s.amp1() - Amplitude(-1 / std::sqrt(2.0))) < 1e-15);
    const PureQubit one(0.0, -i);
    CHECK(one.amp1() == Amplitude(1.0, 0.0));
}

TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(PureQubit(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PureQubit(std::nan(""), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PureQubit::normalized(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementBasis(ket_zero(), ket_zero_bar(), "bad"), std::invalid_argument);
    CHECK_THROWS_AS(TwoQubitPure({1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Ensemble({{0.7, ket_zero()}, {0.7, ket_one()}}), std::invalid_argument);
    CHECK_THROWS_AS(Ensemble({{1.5, ket_zero()}, {-0.5, ket_one()}}), std::invalid_argument);
    CHECK_THROWS_AS(Ensemble({}), std::invalid_argument);
}

TEST_CASE("measure follows the Born rule") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto m = measure(ket_zero(), basis_z(), rng);
        REQUIRE(m.outcome == Outcome::Plus);
        CHECK(same_state(m.post_state, ket_zero()));
    }
    const int n = 200000;
    int plus_bar = 0;
    int plus_opt = 0;
    for (int i = 0; i < n; ++i) {
        plus_bar += measure(ket_zero_bar(), basis_z(), rng).outcome == Outcome::Plus;
        const auto m = measure(ket_zero(), basis_optimal(), rng);
        plus_opt += m.outcome == Outcome::Plus;
        if (m.outcome == Outcome::Minus) CHECK(same_state(m.post_state, ket_one_tilde()));
    }
    CHECK(std::abs(plus_bar / double(n) - 0.5) < 5 * std::sqrt(0.25 / n));
    CHECK(std::abs(plus_opt / double(n) - kP) < 5 * std::sqrt(kP * (1 - kP) / n));
}

TEST_CASE("measure_subsystem on the entangled attack state") {
    const TwoQubitPure psi = entangled_attack_state();

    const auto z = subsystem_branches(psi, Subsystem::A, basis_z());
    CHECK(std::abs(z[0].probability - 0.5) < 1e-12);
    CHECK(same_state(*z[0].remaining, ket_zero()));
    CHECK(same_state(*z[1].remaining, ket_zero_bar()));

    const auto x = subsystem_branches(psi, Subsystem::A, basis_x());
    CHECK(std::abs(x[0].probability - (2 + std::sqrt(2.0)) / 4) < 1e-12);
    CHECK(std::abs(x[0].probability - 0.8535534) < 1e-7);
    // |alpha> built from raw amplitudes: |0> + (|0>+|1>)/sqrt2.
    const auto alpha = PureQubit::normalized(1 + 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    const auto beta = PureQubit::normalized(1 - 1 / std::sqrt(2.0), -1 / std::sqrt(2.0));
    CHECK(same_state(*x[0].remaining, alpha));
    CHECK(same_state(*x[1].remaining, beta));

    Rng rng(3);
    int plus = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto m = measure_subsystem(psi, Subsystem::A, basis_x(), rng);
        plus += m.outcome == Outcome::Plus;
        CHECK(same_state(m.remaining, m.outcome == Outcome::Plus ? alpha : beta));
    }
    const double p = (2 + std::sqrt(2.0)) / 4;
    CHECK(std::abs(plus / double(n) - p) < 5 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("measuring half of a product state leaves the other half alone") {
    const auto prod = TwoQubitPure::product(ket_zero(), ket_zero_bar());
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto basis = MeasurementBasis::from_bloch(rng.uniform() * kPi, rng.uniform() * 2 * kPi, "random");
        for (const auto& br : subsystem_branches(prod, Subsystem::A, basis)) {
            if (br.remaining) CHECK(same_state(*br.remaining, ket_zero_bar()));
        }
        CHECK(same_state(measure_subsystem(prod, Subsystem::A, basis, rng).remaining, ket_zero_bar()));
    }
}

TEST_CASE("reduced_bloch examples") {
    const auto b = reduced_bloch(entangled_attack_state(), Subsystem::B);
    CHECK(std::abs(b.x - 0.5) < 1e-12);
    CHECK(std::abs(b.y) < 1e-12);
    CHECK(std::abs(b.z - 0.5) < 1e-12);

    const auto prod = reduced_bloch(TwoQubitPure({1.0, 0.0, 0.0, 0.0}), Subsystem::B);
    CHECK(std::abs(prod.z - 1.0) < 1e-12);

    const double h = 1 / std::sqrt(2.0);
    const auto singlet = reduced_bloch(TwoQubitPure({0.0, h, -h, 0.0}), Subsystem::B);
    CHECK(singlet.norm() < 1e-12);

    // Alice's side of the attack state: |0>,|1> each with weight 1/2 and
    // coherence <0|0bar>/2.
    const auto a = reduced_bloch(entangled_attack_state(), Subsystem::A);
    CHECK(std::abs(a.x - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(a.z) < 1e-12);
}

TEST_CASE("ensemble_average_bloch examples") {
    const auto legal = ensemble_average_bloch(Ensemble({{0.5, ket_zero()}, {0.5, ket_zero_bar()}}));
    CHECK(std::abs(legal.x - 0.5) < 1e-12);
    CHECK(std::abs(legal.z - 0.5) < 1e-12);

    const double w = (2 + std::sqrt(2.0)) / 4;
    const auto ab = ensemble_average_bloch(Ensemble({{w, ket_alpha()}, {1 - w, ket_beta()}}));
    CHECK(std::abs(ab.x - 0.5) < 1e-12);
    CHECK(std::abs(ab.y) < 1e-12);
    CHECK(std::abs(ab.z - 0.5) < 1e-12);
    // alpha and beta sit at +-(x+z)/sqrt2.
    const auto ba = bloch_from_state(ket_alpha());
    const auto bb = bloch_from_state(ket_beta());
    CHECK(std::abs(ba.x - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(ba.z - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(bb.x + 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(bb.z + 1 / std::sqrt(2.0)) < 1e-12);

    const auto single = ensemble_average_bloch(Ensemble({{1.0, ket_zero()}}));
    CHECK(single.z == 1.0);
}

TEST_CASE("apply_pauli examples") {
    CHECK(same_state(apply_pauli(ket_zero(), Pauli::X), ket_one()));
    CHECK(same_state(apply_pauli(ket_zero_bar(), Pauli::Z), ket_one_bar()));
    CHECK(std::abs(overlap(apply_pauli(ket_zero(), Pauli::Z), ket_zero()) - 1.0) < 1e-15);
    CHECK(same_state(apply_pauli(ket_zero(), Pauli::Y), ket_one()));
}

// --- properties over random states ------------------------------------------

TEST_CASE("property: normalization is preserved") {
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        const auto s = random_qubit(rng);
        auto norm = [](const PureQubit& q) { return std::norm(q.amp0()) + std::norm(q.amp1()); };
        CHECK(std::abs(norm(s) - 1.0) <= 1e-12);
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) CHECK(std::abs(norm(apply_pauli(s, p)) - 1.0) <= 1e-12);
        const auto j = random_two_qubit(rng);
        for (Subsystem w : {Subsystem::A, Subsystem::B}) {
            for (const auto& br : subsystem_branches(j, w, basis_optimal())) {
                if (br.remaining) CHECK(std::abs(norm(*br.remaining) - 1.0) <= 1e-12);
            }
            const auto flipped = apply_pauli(j, w, Pauli::Y);
            double n2 = 0.0;
            for (const auto& a : flipped.amps()) n2 += std::norm(a);
            CHECK(std::abs(n2 - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("property: Bloch round trip and unit norm") {
    Rng rng(102);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_qubit(rng);
        const auto b = bloch_from_state(s);
        CHECK(std::abs(b.norm() - 1.0) <= 1e-9);
        const double polar = std::acos(std::clamp(b.z, -1.0, 1.0));
        const double azimuth = std::atan2(b.y, b.x);
        const auto b2 = bloch_from_state(state_from_bloch(polar, azimuth));
        CHECK(std::abs(b2.x - b.x) <= 1e-9);
        CHECK(std::abs(b2.y - b.y) <= 1e-9);
        CHECK(std::abs(b2.z - b.z) <= 1e-9);
    }
}

TEST_CASE("property: Pauli operators are involutions") {
    Rng rng(103);
    for (int i = 0; i < 300; ++i) {
        const auto s = random_qubit(rng);
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) CHECK(same_state(apply_pauli(apply_pauli(s, p), p), s));
    }
}

TEST_CASE("property: Born probabilities sum to one") {
    Rng rng(104);
    for (int i = 0; i < 500; ++i) {
        const auto s = random_qubit(rng);
        const auto basis = MeasurementBasis::from_bloch(rng.uniform() * kPi, rng.uniform() * 2 * kPi, "random");
        CHECK(std::abs(overlap(basis.plus(), s) + overlap(basis.minus(), s) - 1.0) <= 1e-12);
        const auto j = random_two_qubit(rng);
        const auto br = subsystem_branches(j, Subsystem::B, basis);
        CHECK(std::abs(br[0].probability + br[1].probability - 1.0) <= 1e-12);
    }
}

TEST_CASE("property: measurement order on the two halves commutes") {
    Rng rng(105);
    for (int i = 0; i < 300; ++i) {
        const auto j = random_two_qubit(rng);
        const auto ba = MeasurementBasis::from_bloch(rng.uniform() * kPi, rng.uniform() * 2 * kPi, "a");
        const auto bb = MeasurementBasis::from_bloch(rng.uniform() * kPi, rng.uniform() * 2 * kPi, "b");
        double a_first[2][2] = {};
        double b_first[2][2] = {};
        for (const auto& x : subsystem_branches(j, Subsystem::A, ba)) {
            if (!x.remaining) continue;
            const int ia = x.outcome == Outcome::Plus ? 0 : 1;
            a_first[ia][0] = x.probability * overlap(bb.plus(), *x.remaining);
            a_first[ia][1] = x.probability * overlap(bb.minus(), *x.remaining);
        }
        for (const auto& y : subsystem_branches(j, Subsystem::B, bb)) {
            if (!y.remaining) continue;
            const int ib = y.outcome == Outcome::Plus ? 0 : 1;
            b_first[0][ib] = y.probability * overlap(ba.plus(), *y.remaining);
            b_first[1][ib] = y.probability * overlap(ba.minus(), *y.remaining);
        }
        for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) CHECK(std::abs(a_first[u][v] - b_first[u][v]) <= 1e-12);
        }
    }
}

TEST_CASE("property: no-signaling and the ensemble condition") {
    Rng rng(106);
    for (int i = 0; i < 300; ++i) {
        const auto j = random_two_qubit(rng);
        const auto rho_b = reduced_bloch(j, Subsystem::B);
        CHECK(rho_b.norm() <= 1.0 + 1e-12);
        for (int k = 0; k < 3; ++k) {
            const auto basis = MeasurementBasis::from_bloch(rng.uniform() * kPi, rng.uniform() * 2 * kPi, "alice");
            std::vector<EnsembleEntry> entries;
            for (const auto& br : subsystem_branches(j, Subsystem::A, basis)) {
                if (br.remaining) entries.push_back({br.probability, *br.remaining});
            }
            const auto avg = ensemble_average_bloch(Ensemble(entries));
            CHECK(std::abs(avg.x - rho_b.x) <= 1e-12);
            CHECK(std::abs(avg.y - rho_b.y) <= 1e-12);
            CHECK(std::abs(avg.z - rho_b.z) <= 1e-12);
        }
    }
}

TEST_CASE("property: ensemble average is linear in the weights") {
    Rng rng(107);
    for (int i = 0; i < 300; ++i) {
        const auto s1 = random_qubit(rng);
        const auto s2 = random_qubit(rng);
        const double w = rng.uniform();
        const auto mix = ensemble_average_bloch(Ensemble({{w, s1}, {1 - w, s2}}));
        const auto expect = w * bloch_from_state(s1) + (1 - w) * bloch_from_state(s2);
        CHECK(std::abs(mix.x - expect.x) <= 1e-12);
        CHECK(std::abs(mix.y - expect.y) <= 1e-12);
        CHECK(std::abs(mix.z - expect.z) <= 1e-12);
    }
}
