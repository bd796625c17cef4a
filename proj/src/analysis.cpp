#include "qgamble/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgamble/golden_section.hpp"
#include "qgamble/protocol.hpp"

namespace qgamble {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

void require_rates(double r, double R) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("check rate r must lie in (0, 1)");
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("penalty R must be positive");
}

}  // namespace

Constants constants() {
    const double c = std::cos(kPi / 8);
    const double s = std::sin(kPi / 8);
    const double p = c * c;
    return {p, p / (1.0 - p), c * s};
}

GainBreakdown exact_cheat_gain(double theta, double r, double R, StateLabel claim) {
    require_rates(r, R);
    const double L = constants().loss_payout;
    const double tilde0 = sq(std::cos(kPi / 8 + theta / 2));  // |<0~|j>|^2
    const double tilde1 = sq(std::sin(kPi / 8 + theta / 2));  // |<1~|j>|^2
    double win = 0.0;   // probability Bob's measured guess matches the claim
    double caught = 0.0;
    if (claim == StateLabel::Zero) {
        win = tilde0;
        caught = sq(std::sin(theta / 2));
    } else {
        win = tilde1;
        caught = 0.5 * (1.0 - std::sin(theta));
    }
    GainBreakdown g;
    g.normal_term = (1.0 - r) * (-win + (1.0 - win) * L);
    g.detect_term = -r * caught * R;
    g.pass_term = r * (1.0 - caught) * 0.5 * (L - 1.0);
    g.total = g.normal_term + g.detect_term + g.pass_term;
    return g;
}

double posterior_discounted_bound(const PureQubit& j, double r, double R, StateLabel claim) {
    require_rates(r, R);
    const double caught = overlap(claim == StateLabel::Zero ? ket_one() : ket_one_bar(), j);
    return constants().loss_payout - 0.5 * r * caught * R;
}

double linearized_gain_bound(double theta, double r, double R) {
    const Constants k = constants();
    return k.alpha / (1.0 - k.p) * theta - r * R / 4.0 * theta * theta + 3.0 * r;
}

Optimum linearized_optimum(double r, double R) {
    require_rates(r, R);
    const Constants k = constants();
    const double slope = k.alpha / (1.0 - k.p);
    return {2.0 * slope / (r * R), slope * slope / (r * R) + 3.0 * r};
}

Optimum numeric_linearized_optimum(double r, double R, double tol) {
    require_rates(r, R);
    // Near the peak the bound is flat to within double rounding; compare in long double.
    const Constants k = constants();
    const long double slope = static_cast<long double>(k.alpha) / (1.0L - static_cast<long double>(k.p));
    const long double curvature = static_cast<long double>(r) * static_cast<long double>(R) / 4.0L;
    auto bound = [&](double t) {
        const long double x = t;
        return slope * x - curvature * x * x + 3.0L * static_cast<long double>(r);
    };
    const auto m = golden_section_maximize(bound, 0.0, kPi / 4, tol);
    return {m.argmax, m.value};
}

CheckRateOptimum optimal_check_rate(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("penalty R must be positive");
    const Constants k = constants();
    const double slope = k.alpha / (1.0 - k.p);
    return {slope / std::sqrt(3.0 * R), 2.0 * std::sqrt(3.0) * slope / std::sqrt(R)};
}

double unmeasured_posterior(double theta, double r, StateLabel guess) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("check rate r must lie in (0, 1)");
    const double q = guess == StateLabel::Zero ? sq(std::cos(kPi / 8 + theta / 2)) : sq(std::sin(kPi / 8 + theta / 2));
    return (r / 2) / (r / 2 + (1.0 - r) * q);
}

double unmeasured_posterior(const PureQubit& j, double r, StateLabel guess) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("check rate r must lie in (0, 1)");
    const double q = overlap(guess == StateLabel::Zero ? ket_zero_tilde() : ket_one_tilde(), j);
    return (r / 2) / (r / 2 + (1.0 - r) * q);
}

namespace {

/// Accumulates weighted transcript outcomes.
class Tally {
public:
    explicit Tally(const ProtocolParams& params) : params_(params) {}

    void add(double prob, RoundType type, StateLabel guess, StateLabel claim, CheckResult check) {
        if (prob <= 0.0) return;
        const double t = settle(params_, guess, claim, check);
        result_.transcript[{type, guess, claim, check, t}] += prob;
        if (type == RoundType::Normal) {
            result_.gain.normal_term += prob * t;
        } else if (check == CheckResult::Fail) {
            result_.gain.detect_term += prob * t;
        } else {
            result_.gain.pass_term += prob * t;
        }
    }

    OracleResult finish() {
        auto& g = result_.gain;
        g.total = g.normal_term + g.detect_term + g.pass_term;
        result_.normal_round_gain = g.normal_term / (1.0 - params_.check_rate);
        double fail = 0.0;
        for (const auto& [k, p] : result_.transcript) {
            if (k.check_result == CheckResult::Fail) fail += p;
        }
        result_.check_fail_probability = fail / params_.check_rate;
        return std::move(result_);
    }

private:
    const ProtocolParams& params_;
    OracleResult result_;
};

StateLabel guess_for(Outcome o) { return o == Outcome::Plus ? StateLabel::Zero : StateLabel::ZeroBar; }

/// Bob's state (single qubit) or the joint register after noise.
struct NoisyBranch {
    double prob;
    Register reg;
};

std::vector<NoisyBranch> noise_branches(const AliceBranch& b, double eps) {
    std::vector<NoisyBranch> out;
    out.push_back({1.0 - eps, b.reg});
    if (eps <= 0.0) return out;
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        if (const auto* q = std::get_if<PureQubit>(&b.reg)) {
            out.push_back({eps / 3.0, apply_pauli(*q, p)});
        } else {
            out.push_back({eps / 3.0, apply_pauli(std::get<TwoQubitPure>(b.reg), b.bob_side, p)});
        }
    }
    return out;
}

/// Claim distribution given Alice's state (if she retained one) and her plan.
template <typename Emit>
void resolve_claim(const ClaimPlan& plan, const std::optional<PureQubit>& alice_state, double prob, Emit&& emit) {
    if (!plan.basis) {
        emit(prob, plan.on_plus);
        return;
    }
    if (!alice_state) throw std::invalid_argument("oracle: planned measurement without a retained subsystem");
    const double plus = overlap(plan.basis->plus(), *alice_state);
    emit(prob * plus, plan.on_plus);
    emit(prob * (1.0 - plus), plan.on_minus);
}

void enumerate_normal(const AliceBranch& b, const Register& reg, double prob, Tally& tally) {
    const MeasurementBasis& bob_basis = basis_optimal();
    auto settle_guess = [&](double p_outcome, Outcome o, const std::optional<PureQubit>& alice_state) {
        const StateLabel guess = guess_for(o);
        resolve_claim(b.plan[static_cast<std::size_t>(index(guess))], alice_state, prob * p_outcome,
                      [&](double p, StateLabel claim) {
                          tally.add(p, RoundType::Normal, guess, claim, CheckResult::NotApplicable);
                      });
    };
    if (const auto* q = std::get_if<PureQubit>(&reg)) {
        const double plus = overlap(bob_basis.plus(), *q);
        settle_guess(plus, Outcome::Plus, std::nullopt);
        settle_guess(1.0 - plus, Outcome::Minus, std::nullopt);
        return;
    }
    for (const auto& br : subsystem_branches(std::get<TwoQubitPure>(reg), b.bob_side, bob_basis)) {
        if (br.remaining) settle_guess(br.probability, br.outcome, br.remaining);
    }
}

void enumerate_check(const AliceBranch& b, const Register& reg, double prob, Tally& tally) {
    for (StateLabel guess : {StateLabel::Zero, StateLabel::ZeroBar}) {
        const double p_guess = prob * 0.5;
        const ClaimPlan& plan = b.plan[static_cast<std::size_t>(index(guess))];
        auto verify = [&](double p, StateLabel claim, const PureQubit& bob_state) {
            const double pass = overlap(verification_basis(claim).plus(), bob_state);
            tally.add(p * pass, RoundType::Check, guess, claim, CheckResult::Pass);
            tally.add(p * (1.0 - pass), RoundType::Check, guess, claim, CheckResult::Fail);
        };
        if (const auto* q = std::get_if<PureQubit>(&reg)) {
            if (plan.basis) throw std::invalid_argument("oracle: planned measurement without a retained subsystem");
            verify(p_guess, plan.on_plus, *q);
            continue;
        }
        const auto& joint = std::get<TwoQubitPure>(reg);
        if (plan.basis) {
            for (const auto& br : subsystem_branches(joint, other(b.bob_side), *plan.basis)) {
                if (!br.remaining) continue;
                verify(p_guess * br.probability, br.outcome == Outcome::Plus ? plan.on_plus : plan.on_minus,
                       *br.remaining);
            }
        } else {
            // Alice never measures; Bob's verification acts on the joint state.
            const StateLabel claim = plan.on_plus;
            const auto br = subsystem_branches(joint, b.bob_side, verification_basis(claim));
            tally.add(p_guess * br[0].probability, RoundType::Check, guess, claim, CheckResult::Pass);
            tally.add(p_guess * br[1].probability, RoundType::Check, guess, claim, CheckResult::Fail);
        }
    }
}

}  // namespace

OracleResult oracle_enumerate(const AliceModel& model, const ProtocolParams& params) {
    params.validate();
    Tally tally(params);
    const double r = params.check_rate;
    for (const auto& b : model) {
        for (const auto& nb : noise_branches(b, params.noise)) {
            const double w = b.weight * nb.prob;
            if (w <= 0.0) continue;
            enumerate_normal(b, nb.reg, w * (1.0 - r), tally);
            enumerate_check(b, nb.reg, w * r, tally);
        }
    }
    return tally.finish();
}

GainBreakdown oracle_expected_gain(const AliceStrategy& alice, const ProtocolParams& params) {
    const AliceModel* model = alice.model();
    if (!model) throw std::invalid_argument("oracle: strategy '" + alice.describe() + "' has no enumerable model");
    return oracle_enumerate(*model, params).gain;
}

double max_abs_difference(const TranscriptDistribution& a, const TranscriptDistribution& b) {
    double worst = 0.0;
    for (const auto& [k, p] : a) {
        const auto it = b.find(k);
        worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, p] : b) {
        if (!a.contains(k)) worst = std::max(worst, std::abs(p));
    }
    return worst;
}

MonteCarloEstimate monte_carlo_gain(const SessionStats& stats) {
    if (stats.rounds < 2) throw std::invalid_argument("monte_carlo_gain: need at least 2 rounds");
    const double n = static_cast<double>(stats.rounds);
    const double mean = stats.alice_gain_total / n;
    const double var = std::max(0.0, (stats.alice_gain_sq_total - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), stats.rounds};
}

SessionStats run_seeded_session(const AliceStrategy& alice, const BobStrategy& bob, const ProtocolParams& params,
                                std::uint64_t n_rounds, std::uint64_t master_seed, std::uint64_t index) {
    Rng rng(derive_stream_seed(master_seed, index));
    return run_session(alice, bob, params, n_rounds, rng);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    if (n == 0) return out;
    if (n == 1) return {lo};
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

SweepResult sweep_cheat_gain(double r, double R, const std::vector<double>& theta_grid,
                             const std::vector<double>& phi_grid, const std::vector<ClaimPolicy>& claims) {
    if (theta_grid.empty() || phi_grid.empty() || claims.empty()) {
        throw std::invalid_argument("sweep_cheat_gain: grids must be non-empty");
    }
    ProtocolParams params;
    params.check_rate = r;
    params.penalty = R;
    SweepResult out;
    out.rows.reserve(theta_grid.size() * phi_grid.size() * claims.size());
    for (double theta : theta_grid) {
        for (double phi : phi_grid) {
            for (ClaimPolicy policy : claims) {
                const CheatPoint point{theta, phi, policy};
                const ModelAlice alice = fixed_state_cheat(point);
                const auto& plan = alice.model()->front().plan[0];
                out.rows.push_back({point, plan.on_plus, oracle_enumerate(*alice.model(), params).gain});
                if (out.rows.back().gain.total > out.rows[out.best].gain.total) out.best = out.rows.size() - 1;
            }
        }
    }
    return out;
}

}  // namespace qgamble
