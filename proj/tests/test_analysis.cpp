#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qgamble/analysis.hpp"
#include "qgamble/golden_section.hpp"
#include "qgamble/protocol.hpp"

using namespace qgamble;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

ProtocolParams params_with(double r, double R, double noise = 0.0) {
    ProtocolParams p;
    p.check_rate = r;
    p.penalty = R;
    p.noise = noise;
    return p;
}

}  // namespace

TEST_CASE("constants") {
    const auto k = constants();
    CHECK(std::abs(k.p - (2 + kSqrt2) / 4) < 1e-15);
    CHECK(std::abs(k.p - 0.85355339) < 1e-8);
    CHECK(std::abs(k.loss_payout - (3 + 2 * kSqrt2)) < 1e-12);
    CHECK(std::abs(k.alpha - kSqrt2 / 4) < 1e-15);
    CHECK(std::abs(k.alpha / (1 - k.p) - (1 + kSqrt2)) < 1e-12);
}

TEST_CASE("exact cheat gain examples") {
    const auto honest = exact_cheat_gain(0.0, 0.01, 1e3, StateLabel::Zero);
    CHECK(std::abs(honest.total - 0.01 * (1 + kSqrt2)) < 1e-12);
    CHECK(std::abs(honest.total - 0.02414214) < 1e-8);
    CHECK(std::abs(honest.normal_term) < 1e-12);
    CHECK(honest.detect_term == 0.0);

    const auto wrong = exact_cheat_gain(kPi / 2, 0.01, 1e3, StateLabel::Zero);
    CHECK(std::abs(wrong.detect_term + 5.0) < 1e-12);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform() * kPi / 2;
        const double r = 0.001 + 0.5 * rng.uniform();
        const double R = 1 + 1e4 * rng.uniform();
        const auto a = exact_cheat_gain(theta, r, R, StateLabel::Zero);
        const auto b = exact_cheat_gain(kPi / 2 - theta, r, R, StateLabel::ZeroBar);
        CHECK(std::abs(a.total - b.total) < 1e-9);
        CHECK(a.detect_term <= 0.0);
        CHECK(std::abs(a.total - (a.normal_term + a.detect_term + a.pass_term)) < 1e-12);
    }
    CHECK_THROWS_AS(exact_cheat_gain(0.1, 0.0, 1e3, StateLabel::Zero), std::invalid_argument);
}

TEST_CASE("exact cheat gain agrees with the oracle") {
    for (double R : {10.0, 1e3, 1e4}) {
        for (double theta : linspace(0.0, kPi, 41)) {
            for (auto claim : {StateLabel::Zero, StateLabel::ZeroBar}) {
                const auto policy = claim == StateLabel::Zero ? ClaimPolicy::FixedZero : ClaimPolicy::FixedZeroBar;
                const auto oracle = oracle_expected_gain(fixed_state_cheat({theta, 0.0, policy}), params_with(0.03, R));
                const auto closed = exact_cheat_gain(theta, 0.03, R, claim);
                CHECK(std::abs(oracle.total - closed.total) < 1e-12 * std::max(1.0, R / 1e3));
                CHECK(std::abs(oracle.detect_term - closed.detect_term) < 1e-12 * std::max(1.0, R / 1e3));
                CHECK(std::abs(oracle.normal_term - closed.normal_term) < 1e-12);
            }
        }
    }
}

TEST_CASE("oracle on honest play") {
    const auto res = oracle_enumerate(*honest_alice().model(), params_with(0.01, 1e4));
    CHECK(std::abs(res.normal_round_gain) < 1e-12);
    CHECK(std::abs(res.gain.total - 0.01 * (1 + kSqrt2)) < 1e-12);
    CHECK(res.check_fail_probability == 0.0);
    double mass = 0.0;
    for (const auto& [k, p] : res.transcript) mass += p;
    CHECK(std::abs(mass - 1.0) < 1e-12);

    const auto noisy = oracle_enumerate(*honest_alice().model(), params_with(0.1, 100.0, 0.3));
    CHECK(std::abs(noisy.check_fail_probability - 0.2) < 1e-12);

    class Opaque final : public AliceStrategy {
    public:
        Preparation prepare(Rng&) const override { return {ket_zero(), Subsystem::B, 0}; }
        StateLabel claim(std::size_t, StateLabel, AliceSide&, Rng&) const override { return StateLabel::Zero; }
        std::string describe() const override { return "opaque"; }
    };
    CHECK_THROWS_AS(oracle_expected_gain(Opaque{}, params_with(0.1, 10.0)), std::invalid_argument);
}

TEST_CASE("oracle and Monte Carlo agree") {
    struct Case {
        ModelAlice alice;
        double r, R, noise;
    };
    const std::vector<Case> cases = {
        {honest_alice(), 0.05, 100.0, 0.0},
        {honest_alice(), 0.2, 10.0, 0.1},
        {fixed_state_cheat({0.2, 0.0, ClaimPolicy::FixedZero}), 0.05, 100.0, 0.0},
        {fixed_state_cheat({1.0, 2.0, ClaimPolicy::Nearest}), 0.1, 20.0, 0.05},
        {entangled_cheat(EntangledPolicy::constant(basis_x())), 0.05, 50.0, 0.0},
        {entangled_cheat(EntangledPolicy{{basis_z(), basis_x()}}), 0.1, 10.0, 0.1},
    };
    std::uint64_t idx = 0;
    for (const auto& c : cases) {
        const auto p = params_with(c.r, c.R, c.noise);
        const double exact = oracle_expected_gain(c.alice, p).total;
        const auto mc = monte_carlo_gain(run_seeded_session(c.alice, honest_bob(c.r), p, 200000, 99, idx++));
        CHECK(std::abs(mc.mean - exact) <= 4 * mc.std_error);
    }
}

TEST_CASE("monte_carlo_gain") {
    SessionStats one;
    one.rounds = 1;
    CHECK_THROWS_AS(monte_carlo_gain(one), std::invalid_argument);

    SessionStats s;
    s.rounds = 4;
    s.alice_gain_total = 1 + 2 + 3 + 4;
    s.alice_gain_sq_total = 1 + 4 + 9 + 16;
    const auto e = monte_carlo_gain(s);
    CHECK(e.mean == 2.5);
    // sample variance 5/3
    CHECK(std::abs(e.std_error - std::sqrt(5.0 / 3.0 / 4.0)) < 1e-15);

    const auto alice = honest_alice();
    const auto bob = honest_bob(0.01);
    const auto a = monte_carlo_gain(run_seeded_session(alice, bob, params_with(0.01, 1e4), 10000, 5, 0));
    const auto b = monte_carlo_gain(run_seeded_session(alice, bob, params_with(0.01, 1e4), 10000, 5, 0));
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("linearized bound and its optimum") {
    CHECK(linearized_gain_bound(0.0, 0.02, 1e3) == doctest::Approx(0.06).epsilon(1e-14));
    const auto opt = linearized_optimum(0.01, 1e4);
    CHECK(std::abs(opt.g_max - ((1 + kSqrt2) * (1 + kSqrt2) / 100 + 0.03)) < 1e-12);
    CHECK(std::abs(opt.g_max - 0.08828427) < 1e-8);
    CHECK(std::abs(opt.theta_star - 2 * (1 + kSqrt2) / 100) < 1e-12);
    CHECK(std::abs(linearized_gain_bound(opt.theta_star, 0.01, 1e4) - opt.g_max) < 1e-12);

    const auto at_star = linearized_gain_bound(0.0346409, 0.0139385, 1e4);
    CHECK(std::abs(at_star - 0.08363) < 1e-5);

    double prev = 1e9;
    for (double R : {10.0, 100.0, 1e3, 1e4, 1e5}) {
        const double g = linearized_optimum(0.01, R).g_max;
        CHECK(g < prev);
        prev = g;
    }

    for (double r : {0.005, 0.0139385, 0.05}) {
        for (double R : {1e3, 1e4, 1e5}) {
            const auto closed = linearized_optimum(r, R);
            if (closed.theta_star > kPi / 4) continue;  // outside the search bracket
            const auto numeric = numeric_linearized_optimum(r, R);
            CHECK(std::abs(numeric.theta_star - closed.theta_star) < 1e-9);
            CHECK(std::abs(numeric.g_max - closed.g_max) < 1e-9);
        }
    }
}

TEST_CASE("golden section search") {
    const auto m = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
    CHECK(std::abs(m.argmax - 0.3) < 1e-9);
    CHECK(m.iterations > 0);
    CHECK_THROWS_AS(golden_section_maximize([](double x) { return x; }, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("linearized bound holds for small angles only") {
    for (auto [r, R] : {std::pair{0.01, 1e3}, std::pair{0.0139385, 1e4}}) {
        for (double theta : linspace(0.0, 0.08, 1000)) {
            CHECK(linearized_gain_bound(theta, r, R) >= exact_cheat_gain(theta, r, R, StateLabel::Zero).total);
        }
        // Beyond the small-angle regime the dropped second-order term wins.
        CHECK(linearized_gain_bound(0.2, r, R) < exact_cheat_gain(0.2, r, R, StateLabel::Zero).total);
    }
}

TEST_CASE("optimal check rate") {
    const auto c = optimal_check_rate(1e4);
    CHECK(std::abs(c.r_star - (1 + kSqrt2) / std::sqrt(3e4)) < 1e-15);
    CHECK(std::abs(c.r_star - 0.0139385) < 1e-7);
    CHECK(std::abs(c.g_cap - 2 * std::sqrt(3.0) * (1 + kSqrt2) / 100) < 1e-12);
    CHECK(std::abs(c.g_cap - 0.0836308110070411) < 1e-12);
    CHECK(std::abs(optimal_check_rate(1e2).g_cap / c.g_cap - 10.0) < 1e-9);
    for (double R : {50.0, 1e2, 1e3, 1e4, 1e6}) {
        const auto o = optimal_check_rate(R);
        CHECK(std::abs(o.g_cap - linearized_optimum(o.r_star, R).g_max) < 1e-12);
        CHECK(std::abs(optimal_check_rate(4 * R).g_cap - o.g_cap / 2) < 1e-12);
    }
    CHECK_THROWS_AS(optimal_check_rate(0.0), std::invalid_argument);
}

TEST_CASE("posterior that Bob stored the qubit") {
    const double expect = 0.05 / (0.05 + 0.9 * (2 + kSqrt2) / 4);
    CHECK(std::abs(unmeasured_posterior(0.0, 0.1, StateLabel::Zero) - expect) < 1e-15);
    CHECK(std::abs(unmeasured_posterior(0.0, 0.1, StateLabel::Zero) - 0.0611098) < 1e-6);
    CHECK(std::abs(unmeasured_posterior(ket_zero(), 0.1, StateLabel::Zero) - expect) < 1e-15);
    CHECK(unmeasured_posterior(0.3, 1e-9, StateLabel::ZeroBar) < 1e-8);

    // Overlap 1 with the conditioning vector is the minimum: (r/2)/(1 - r/2).
    const double r = 0.2;
    const double at_tilde = unmeasured_posterior(ket_zero_tilde(), r, StateLabel::Zero);
    CHECK(std::abs(at_tilde - (r / 2) / (1 - r / 2)) < 1e-12);
    for (double theta : linspace(0.0, kPi, 200)) {
        for (auto g : {StateLabel::Zero, StateLabel::ZeroBar}) {
            const double f = unmeasured_posterior(theta, r, g);
            CHECK(f >= r / 2 - 1e-15);
            CHECK(f >= at_tilde - 1e-15);
            CHECK(std::abs(f - unmeasured_posterior(state_from_bloch(theta, 0.0), r, g)) < 1e-12);
        }
    }
}

TEST_CASE("posterior-discounted bound") {
    const double L = 3 + 2 * kSqrt2;
    CHECK(std::abs(posterior_discounted_bound(ket_one(), 0.02, 1e3, StateLabel::Zero) - (L - 10.0)) < 1e-12);
    CHECK(std::abs(posterior_discounted_bound(ket_zero(), 0.02, 1e3, StateLabel::Zero) - L) < 1e-12);
    CHECK(std::abs(posterior_discounted_bound(ket_zero(), 0.02, 1e3, StateLabel::ZeroBar) - (L - 5.0)) < 1e-12);
}

TEST_CASE("max_abs_difference covers both supports") {
    const TranscriptKey a{RoundType::Normal, StateLabel::Zero, StateLabel::Zero, CheckResult::NotApplicable, -1.0};
    const TranscriptKey b{RoundType::Check, StateLabel::Zero, StateLabel::Zero, CheckResult::Pass, -1.0};
    CHECK(max_abs_difference({{a, 0.5}}, {{a, 0.5}}) == 0.0);
    CHECK(max_abs_difference({{a, 0.5}}, {{a, 0.25}, {b, 0.75}}) == 0.75);
    CHECK(max_abs_difference({}, {{b, 0.1}}) == 0.1);
}

TEST_CASE("sweep") {
    CHECK_THROWS_AS(sweep_cheat_gain(0.01, 1e4, {}, {0.0}, {ClaimPolicy::FixedZero}), std::invalid_argument);
    CHECK(linspace(0.0, 1.0, 0).empty());
    CHECK(linspace(0.0, 1.0, 1) == std::vector<double>{0.0});
    CHECK(linspace(0.0, kPi / 4, 7).back() == kPi / 4);

    const auto rs = optimal_check_rate(1e4);
    const auto thetas = linspace(0.0, kPi / 4, 50);
    const std::vector<double> phis = {0.0, kPi / 4, kPi / 2};
    const std::vector<ClaimPolicy> claims = {ClaimPolicy::FixedZero, ClaimPolicy::FixedZeroBar};
    const auto s = sweep_cheat_gain(rs.r_star, 1e4, thetas, phis, claims);
    REQUIRE(s.rows.size() == 50 * 3 * 2);
    CHECK(s.rows[1].point.claim_policy == ClaimPolicy::FixedZeroBar);
    CHECK(s.rows[2].point.phi == kPi / 4);
    CHECK(s.rows[6].point.theta == thetas[1]);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < 6; ++k) {
            if (s.rows[t * 6 + k].gain.total > s.rows[t * 6 + best].gain.total) best = k;
        }
        CHECK(s.rows[t * 6 + best].point.phi == 0.0);
    }
    CHECK(s.rows[s.best].gain.total <= 0.0920);
    const double step = thetas[1] - thetas[0];
    CHECK(std::abs(s.rows[s.best].point.theta - linearized_optimum(rs.r_star, 1e4).theta_star) <= step);
}
