#include "qgamble/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qgamble/analysis.hpp"
#include "qgamble/protocol.hpp"
#include "qgamble/strategies.hpp"

namespace qgamble::cli {

namespace {

constexpr double kPi = std::numbers::pi;
/// Monte Carlo agreement band, in standard errors.
constexpr double kSigmaBand = 4.0;
/// Slack allowed above g_cap for the sweep cap check (fraction of g_cap).
constexpr double kLinearizationSlack = 0.10;

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"honest", Command::Honest}, {"cheat", Command::Cheat},   {"sweep", Command::Sweep},
    {"entangle", Command::Entangle}, {"verify", Command::Verify},
};

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

std::string json_scalar(const Scalar& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return format_double(x);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else return json_escape(x);
        },
        v);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_scalar(const Scalar& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return std::isfinite(x) ? format_double(x) : "";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else return csv_field(x);
        },
        v);
}

ProtocolParams make_params(const RunConfig& cfg) {
    ProtocolParams p;
    p.check_rate = cfg.check_rate();
    p.penalty = cfg.R;
    p.noise = cfg.noise;
    p.abort_threshold = cfg.abort_threshold;
    p.validate();
    return p;
}

MeasurementBasis parse_basis(const std::string& token) {
    if (token == "z") return basis_z();
    if (token == "x") return basis_x();
    if (token == "opt") return basis_optimal();
    std::size_t used = 0;
    double angle = 0.0;
    try {
        angle = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ConfigError("policy: unknown basis '" + token + "' (use z, x, opt or a plane angle)");
    }
    if (used != token.size() || !std::isfinite(angle)) throw ConfigError("policy: bad basis angle '" + token + "'");
    return MeasurementBasis::from_bloch(angle, 0.0, "plane(" + format_double(angle) + ")");
}

std::vector<std::string> split_pair(const std::string& s, const std::string& field) {
    const auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos) {
        throw ConfigError(field + ": expected two comma-separated entries, got '" + s + "'");
    }
    return {s.substr(0, comma), s.substr(comma + 1)};
}

EntangledPolicy make_policy(const RunConfig& cfg) {
    const auto bases = split_pair(cfg.policy, "policy");
    const auto labels = split_pair(cfg.table, "table");
    const auto on_plus = parse_state_label(labels[0]);
    const auto on_minus = parse_state_label(labels[1]);
    if (!on_plus || !on_minus) throw ConfigError("table: labels must be zero or zerobar");
    return {{parse_basis(bases[0]), parse_basis(bases[1])}, *on_plus, *on_minus};
}

void echo_config(const RunConfig& cfg, ResultDocument& doc) {
    doc.command = to_string(cfg.command);
    auto& c = doc.config;
    c.emplace_back("command", doc.command);
    c.emplace_back("seed", static_cast<std::int64_t>(cfg.seed));
    c.emplace_back("rounds", static_cast<std::int64_t>(cfg.rounds));
    c.emplace_back("r", cfg.check_rate());
    c.emplace_back("r_defaulted", !cfg.r.has_value());
    c.emplace_back("R", cfg.R);
    c.emplace_back("noise", cfg.noise);
    c.emplace_back("abort_threshold", cfg.abort_threshold);
    c.emplace_back("theta", cfg.theta);
    c.emplace_back("phi", cfg.phi);
    c.emplace_back("claim", cfg.claim);
    c.emplace_back("policy", cfg.policy);
    c.emplace_back("table", cfg.table);
    c.emplace_back("theta_points", static_cast<std::int64_t>(cfg.theta_points));
}

void add_mc(ResultDocument& doc, const std::string& name, const MonteCarloEstimate& mc) {
    doc.metrics.push_back({name, mc.mean, mc.std_error});
}

/// Probability that Bob's normal-round guess matches the claim.
double oracle_normal_win_probability(const OracleResult& o, double r) {
    double win = 0.0;
    for (const auto& [k, p] : o.transcript) {
        if (k.round_type == RoundType::Normal && k.bob_guess == k.alice_claim) win += p;
    }
    return win / (1.0 - r);
}

void session_metrics(ResultDocument& doc, const SessionStats& stats, const OracleResult& oracle, double r,
                     bool check_win_rate) {
    doc.metrics.push_back({"rounds", static_cast<double>(stats.rounds), std::nullopt});
    doc.metrics.push_back({"normal_rounds", static_cast<double>(stats.normal_rounds), std::nullopt});
    doc.metrics.push_back({"check_rounds", static_cast<double>(stats.check_rounds), std::nullopt});
    doc.metrics.push_back({"check_fails", static_cast<double>(stats.check_fails), std::nullopt});
    doc.metrics.push_back({"aborted", stats.aborted ? 1.0 : 0.0, std::nullopt});
    doc.metrics.push_back({"alice_gain_total", stats.alice_gain_total, std::nullopt});
    doc.metrics.push_back({"bob_gain_total", stats.bob_gain_total(), std::nullopt});
    doc.checks.push_back(make_check("zero_sum_ledger", stats.alice_gain_total + stats.bob_gain_total(), 0.0, 0.0));

    if (stats.normal_rounds > 1) {
        const double n = static_cast<double>(stats.normal_rounds);
        const double w = static_cast<double>(stats.bob_wins) / n;
        const double se = std::sqrt(std::max(w * (1.0 - w), 0.0) / n);
        doc.metrics.push_back({"win_rate", w, se});
        const double expected = oracle_normal_win_probability(oracle, r);
        doc.metrics.push_back({"oracle_win_probability", expected, std::nullopt});
        if (check_win_rate) {
            doc.checks.push_back(make_check("win_rate_vs_oracle", w, expected, kSigmaBand * se));
        }
    }
    const auto mc = monte_carlo_gain(stats);
    add_mc(doc, "mc_gain_per_round", mc);
    doc.metrics.push_back({"oracle_gain_per_round", oracle.gain.total, std::nullopt});
    if (!stats.aborted) {
        doc.checks.push_back(make_check("mc_gain_vs_oracle", mc.mean, oracle.gain.total, kSigmaBand * mc.std_error));
    }
}

void add_breakdown(ResultDocument& doc, const std::string& prefix, const GainBreakdown& g) {
    doc.metrics.push_back({prefix + "_normal_term", g.normal_term, std::nullopt});
    doc.metrics.push_back({prefix + "_detect_term", g.detect_term, std::nullopt});
    doc.metrics.push_back({prefix + "_pass_term", g.pass_term, std::nullopt});
    doc.metrics.push_back({prefix + "_total", g.total, std::nullopt});
}

void run_honest(const RunConfig& cfg, ResultDocument& doc) {
    const ProtocolParams params = make_params(cfg);
    const ModelAlice alice = honest_alice();
    const HonestBob bob = honest_bob(params.check_rate);
    const SessionStats stats = run_seeded_session(alice, bob, params, cfg.rounds, cfg.seed, 0);
    const OracleResult oracle = oracle_enumerate(*alice.model(), params);
    doc.metrics.push_back({"optimal_guess_probability", optimal_guess_probability(), std::nullopt});
    session_metrics(doc, stats, oracle, params.check_rate, true);
    doc.metrics.push_back({"oracle_normal_round_gain", oracle.normal_round_gain, std::nullopt});
    if (params.noise == 0.0) {
        doc.checks.push_back(make_check("honest_never_fails", static_cast<double>(stats.check_fails), 0.0, 0.0));
        doc.checks.push_back(
            make_check("honest_baseline_gain", oracle.gain.total, params.check_rate * (1.0 + std::numbers::sqrt2), 1e-12));
    }
}

void run_cheat(const RunConfig& cfg, ResultDocument& doc) {
    const ProtocolParams params = make_params(cfg);
    const CheatPoint point{cfg.theta, cfg.phi, *parse_claim_policy(cfg.claim)};
    const ModelAlice alice = fixed_state_cheat(point);
    const HonestBob bob = honest_bob(params.check_rate);
    const OracleResult oracle = oracle_enumerate(*alice.model(), params);
    const StateLabel claim = alice.model()->front().plan[0].on_plus;
    doc.config.emplace_back("resolved_claim", to_string(claim));
    add_breakdown(doc, "oracle", oracle.gain);

    if (params.noise == 0.0) {
        if (cfg.phi == 0.0) {
            const GainBreakdown closed = exact_cheat_gain(cfg.theta, params.check_rate, params.penalty, claim);
            add_breakdown(doc, "closed_form", closed);
            doc.checks.push_back(make_check("closed_form_vs_oracle", closed.total, oracle.gain.total, 1e-12));
        }
        doc.checks.push_back(make_check("posterior_discounted_bound", oracle.gain.total,
                                        posterior_discounted_bound(point.state(), params.check_rate, params.penalty, claim),
                                        0.0, "le"));
    }
    const auto cap = optimal_check_rate(params.penalty);
    doc.metrics.push_back({"g_cap", cap.g_cap, std::nullopt});
    doc.metrics.push_back({"r_star", cap.r_star, std::nullopt});
    const SessionStats stats = run_seeded_session(alice, bob, params, cfg.rounds, cfg.seed, 0);
    session_metrics(doc, stats, oracle, params.check_rate, true);
}

void run_sweep(const RunConfig& cfg, ResultDocument& doc) {
    const double r = cfg.check_rate();
    const auto thetas = linspace(0.0, kPi / 4, cfg.theta_points);
    const std::vector<double> phis = {0.0, kPi / 4, kPi / 2};
    const SweepResult sweep = sweep_cheat_gain(r, cfg.R, thetas, phis, {ClaimPolicy::FixedZero, ClaimPolicy::FixedZeroBar});

    doc.table.columns = {"theta", "phi", "claim", "total", "normal_term", "detect_term", "pass_term"};
    double closed_diff = 0.0;
    for (const auto& row : sweep.rows) {
        doc.table.rows.push_back({row.point.theta, row.point.phi, to_string(row.claim), row.gain.total,
                                  row.gain.normal_term, row.gain.detect_term, row.gain.pass_term});
        if (row.point.phi == 0.0) {
            const double closed = exact_cheat_gain(row.point.theta, r, cfg.R, row.claim).total;
            closed_diff = std::max(closed_diff, std::abs(closed - row.gain.total));
        }
    }
    const auto cap = optimal_check_rate(cfg.R);
    const auto opt = linearized_optimum(r, cfg.R);
    const auto& best = sweep.rows[sweep.best];
    doc.metrics.push_back({"max_gain", best.gain.total, std::nullopt});
    doc.metrics.push_back({"theta_at_max", best.point.theta, std::nullopt});
    doc.metrics.push_back({"phi_at_max", best.point.phi, std::nullopt});
    doc.metrics.push_back({"theta_star", opt.theta_star, std::nullopt});
    doc.metrics.push_back({"g_max_linearized", opt.g_max, std::nullopt});
    doc.metrics.push_back({"g_cap", cap.g_cap, std::nullopt});
    doc.metrics.push_back({"r_star", cap.r_star, std::nullopt});
    doc.checks.push_back(make_check("closed_form_vs_oracle_max_diff", closed_diff, 0.0, 1e-12));
    doc.checks.push_back(make_check("max_gain_below_cap_with_slack", best.gain.total,
                                    cap.g_cap * (1.0 + kLinearizationSlack), 0.0, "le"));

    // For every theta, the best (phi, claim) must sit in the z-x plane.
    double worst_plane_gap = 0.0;
    const std::size_t per_theta = phis.size() * 2;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        double in_plane = -std::numeric_limits<double>::infinity();
        double off_plane = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < per_theta; ++k) {
            const auto& row = sweep.rows[t * per_theta + k];
            double& slot = row.point.phi == 0.0 ? in_plane : off_plane;
            slot = std::max(slot, row.gain.total);
        }
        worst_plane_gap = std::max(worst_plane_gap, off_plane - in_plane);
    }
    doc.checks.push_back(make_check("zx_plane_dominance", worst_plane_gap, 0.0, 1e-12, "le"));
}

void run_entangle(const RunConfig& cfg, ResultDocument& doc) {
    const ProtocolParams params = make_params(cfg);
    const OracleResult honest = oracle_enumerate(*honest_alice().model(), params);
    doc.metrics.push_back({"honest_gain_per_round", honest.gain.total, std::nullopt});

    const std::vector<std::pair<StateLabel, StateLabel>> tables = {{StateLabel::Zero, StateLabel::ZeroBar},
                                                                   {StateLabel::ZeroBar, StateLabel::Zero},
                                                                   {StateLabel::Zero, StateLabel::Zero},
                                                                   {StateLabel::ZeroBar, StateLabel::ZeroBar}};
    doc.table.columns = {"basis_if_zero", "basis_if_zerobar", "claim_on_plus", "claim_on_minus", "total",
                         "normal_term", "detect_term", "pass_term"};

    // Family: every pair of z-x plane bases on a 12-angle grid, per guess.
    const auto angles = linspace(0.0, kPi, 13);
    double family_max = -std::numeric_limits<double>::infinity();
    std::string family_argmax;
    double sx_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        for (std::size_t j = 0; j + 1 < angles.size(); ++j) {
            const auto b0 = MeasurementBasis::from_bloch(angles[i], 0.0, "plane(" + format_double(angles[i]) + ")");
            const auto b1 = MeasurementBasis::from_bloch(angles[j], 0.0, "plane(" + format_double(angles[j]) + ")");
            for (const auto& [on_plus, on_minus] : tables) {
                const ModelAlice alice = entangled_cheat(EntangledPolicy{{b0, b1}, on_plus, on_minus});
                const GainBreakdown g = oracle_enumerate(*alice.model(), params).gain;
                doc.table.rows.push_back({angles[i], angles[j], to_string(on_plus), to_string(on_minus), g.total,
                                          g.normal_term, g.detect_term, g.pass_term});
                if (g.total > family_max) {
                    family_max = g.total;
                    family_argmax = alice.describe();
                }
                if (i == 6 && j == 6) sx_worst = std::max(sx_worst, g.total);  // angle pi/2 is S_x
            }
        }
    }
    doc.metrics.push_back({"family_max_gain", family_max, std::nullopt});
    doc.config.emplace_back("family_argmax", family_argmax);
    doc.metrics.push_back({"family_excess_over_honest", family_max - honest.gain.total, std::nullopt});
    doc.metrics.push_back({"sx_best_table_gain", sx_worst, std::nullopt});

    const ModelAlice sz = entangled_cheat(EntangledPolicy::constant(basis_z()));
    const double diff = max_abs_difference(oracle_enumerate(*sz.model(), params).transcript, honest.transcript);
    doc.checks.push_back(make_check("sz_attack_equals_honest_transcript", diff, 0.0, 1e-12));
    if (params.penalty >= 100.0) {
        doc.checks.push_back(make_check("sx_attack_gain_negative", sx_worst, 0.0, 0.0, "le"));
    }

    const ModelAlice chosen = entangled_cheat(make_policy(cfg));
    doc.config.emplace_back("policy_description", chosen.describe());
    const OracleResult oracle = oracle_enumerate(*chosen.model(), params);
    add_breakdown(doc, "policy_oracle", oracle.gain);
    const SessionStats stats =
        run_seeded_session(chosen, honest_bob(params.check_rate), params, cfg.rounds, cfg.seed, 0);
    session_metrics(doc, stats, oracle, params.check_rate, true);
}

void run_verify(const RunConfig& cfg, ResultDocument& doc) {
    const double R = cfg.R;
    const double r = cfg.check_rate();
    const Constants k = constants();

    doc.metrics.push_back({"p", k.p, std::nullopt});
    doc.metrics.push_back({"loss_payout", k.loss_payout, std::nullopt});
    doc.metrics.push_back({"alpha", k.alpha, std::nullopt});

    // Closed-form gain against the enumeration oracle.
    const auto thetas = linspace(0.0, kPi / 2, 100);
    for (const auto& [rr, RR] : std::vector<std::pair<double, double>>{{r, R}, {0.01, 1e3}}) {
        ProtocolParams params;
        params.check_rate = rr;
        params.penalty = RR;
        double worst = 0.0;
        double bound_gap = -std::numeric_limits<double>::infinity();
        for (double th : thetas) {
            for (ClaimPolicy c : {ClaimPolicy::FixedZero, ClaimPolicy::FixedZeroBar}) {
                const ModelAlice alice = fixed_state_cheat({th, 0.0, c});
                const StateLabel claim = alice.model()->front().plan[0].on_plus;
                const double oracle = oracle_enumerate(*alice.model(), params).gain.total;
                worst = std::max(worst, std::abs(exact_cheat_gain(th, rr, RR, claim).total - oracle));
                bound_gap = std::max(bound_gap, oracle - posterior_discounted_bound(state_from_bloch(th, 0.0), rr, RR, claim));
            }
        }
        const std::string tag = "(r=" + format_double(rr) + ",R=" + format_double(RR) + ")";
        doc.checks.push_back(make_check("closed_form_vs_oracle" + tag, worst, 0.0, 1e-12));
        doc.checks.push_back(make_check("posterior_discounted_bound" + tag, bound_gap, 0.0, 0.0, "le"));
    }

    // Symmetry under |0> <-> |0bar>.
    double sym = 0.0;
    for (double th : thetas) {
        sym = std::max(sym, std::abs(exact_cheat_gain(th, r, R, StateLabel::Zero).total -
                                     exact_cheat_gain(kPi / 2 - th, r, R, StateLabel::ZeroBar).total));
    }
    doc.checks.push_back(make_check("claim_reflection_symmetry", sym, 0.0, 1e-12));

    // Linearized optimum: golden-section against the closed form.
    const Optimum closed = linearized_optimum(r, R);
    const Optimum numeric = numeric_linearized_optimum(r, R);
    doc.checks.push_back(make_check("golden_section_theta_star", numeric.theta_star, closed.theta_star, 1e-9));
    doc.checks.push_back(make_check("golden_section_g_max", numeric.g_max, closed.g_max, 1e-9));

    for (double RR : {1e1, 1e2, 1e3, 1e4, 1e6}) {
        const auto cap = optimal_check_rate(RR);
        doc.checks.push_back(make_check("cap_identity(R=" + format_double(RR) + ")",
                                        linearized_optimum(cap.r_star, RR).g_max, cap.g_cap, 1e-12));
    }
    doc.checks.push_back(
        make_check("cap_inverse_sqrt_scaling", optimal_check_rate(1e2).g_cap / optimal_check_rate(1e4).g_cap, 10.0, 1e-9));

    // Posterior lower bound.
    double fu_gap = std::numeric_limits<double>::infinity();
    for (double th : linspace(0.0, kPi, 100)) {
        for (double rr : linspace(0.005, 0.995, 100)) {
            for (StateLabel g : {StateLabel::Zero, StateLabel::ZeroBar}) {
                fu_gap = std::min(fu_gap, unmeasured_posterior(th, rr, g) - rr / 2);
            }
        }
    }
    doc.checks.push_back(make_check("posterior_at_least_half_r", fu_gap, 0.0, 1e-15, "ge"));

    // Honest baselines.
    ProtocolParams params;
    params.check_rate = r;
    params.penalty = R;
    const OracleResult honest = oracle_enumerate(*honest_alice().model(), params);
    doc.checks.push_back(make_check("honest_normal_round_gain", honest.normal_round_gain, 0.0, 1e-12));
    doc.checks.push_back(make_check("honest_gain_per_round", honest.gain.total, r * (1.0 + std::numbers::sqrt2), 1e-12));

    // Optimal discrimination over 360 plane bases.
    double best = 0.0;
    for (int i = 0; i < 360; ++i) {
        const double a = 2.0 * kPi * i / 360.0;
        const auto b = MeasurementBasis::from_bloch(a, 0.0, "grid");
        best = std::max(best, 0.5 * overlap(b.plus(), ket_zero()) + 0.5 * overlap(b.minus(), ket_zero_bar()));
    }
    doc.checks.push_back(make_check("optimal_measurement_grid_max", best, k.p, 1e-9));

    // Ensemble condition for the two decompositions of Bob's state.
    const double h = (2.0 + std::numbers::sqrt2) / 4.0;
    const BlochVector target{0.5, 0.0, 0.5};
    for (const auto& [name, e] : std::vector<std::pair<std::string, Ensemble>>{
             {"legal_pair", Ensemble({{0.5, ket_zero()}, {0.5, ket_zero_bar()}})},
             {"alpha_beta", Ensemble({{h, ket_alpha()}, {1.0 - h, ket_beta()}})}}) {
        const BlochVector v = ensemble_average_bloch(e);
        const double d = std::max({std::abs(v.x - target.x), std::abs(v.y - target.y), std::abs(v.z - target.z)});
        doc.checks.push_back(make_check("ensemble_bloch_" + name, d, 0.0, 1e-12));
    }

    const ModelAlice sz = entangled_cheat(EntangledPolicy::constant(basis_z()));
    doc.checks.push_back(make_check("sz_attack_equals_honest_transcript",
                                    max_abs_difference(oracle_enumerate(*sz.model(), params).transcript, honest.transcript),
                                    0.0, 1e-12));

    // Sweep cap at the optimal check rate.
    const auto cap = optimal_check_rate(R);
    const SweepResult sweep =
        sweep_cheat_gain(cap.r_star, R, linspace(0.0, kPi / 4, cfg.theta_points), {0.0, kPi / 4, kPi / 2},
                         {ClaimPolicy::FixedZero, ClaimPolicy::FixedZeroBar});
    doc.metrics.push_back({"sweep_max_gain", sweep.rows[sweep.best].gain.total, std::nullopt});
    doc.metrics.push_back({"g_cap", cap.g_cap, std::nullopt});
    doc.checks.push_back(make_check("sweep_max_below_cap_with_slack", sweep.rows[sweep.best].gain.total,
                                    cap.g_cap * (1.0 + kLinearizationSlack), 0.0, "le"));

    // One sampled cross-check.
    const ModelAlice alice = honest_alice();
    const SessionStats stats = run_seeded_session(alice, honest_bob(r), params, cfg.rounds, cfg.seed, 0);
    const auto mc = monte_carlo_gain(stats);
    add_mc(doc, "honest_mc_gain_per_round", mc);
    doc.checks.push_back(make_check("honest_mc_vs_oracle", mc.mean, honest.gain.total, kSigmaBand * mc.std_error));
}

CLI::Validator open_unit_interval() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (const std::exception&) {
                return "not a number";
            }
            return (v > 0.0 && v < 1.0) ? "" : "Value " + s + " not in open interval (0, 1)";
        },
        "in (0, 1)");
}

CLI::Validator positive() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (const std::exception&) {
                return "not a number";
            }
            return (v > 0.0 && std::isfinite(v)) ? "" : "Value " + s + " must be positive";
        },
        "> 0");
}

CLI::Validator half_open(double lo, double hi) {
    return CLI::Validator(
        [lo, hi](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (const std::exception&) {
                return "not a number";
            }
            return (v >= lo && v < hi) ? "" : "Value " + s + " not in [" + format_double(lo) + ", " + format_double(hi) + ")";
        },
        "in [lo, hi)");
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [name, cmd] : kCommands) {
        if (cmd == c) return name;
    }
    return "?";
}

double RunConfig::check_rate() const { return r ? *r : optimal_check_rate(R).r_star; }

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (rounds < 2) fail("rounds: must be at least 2");
    if (!(R > 0.0) || !std::isfinite(R)) fail("R: must be positive");
    const double rate = check_rate();
    if (!(rate > 0.0 && rate < 1.0)) fail("r: must lie in (0, 1), got " + format_double(rate));
    if (!(noise >= 0.0 && noise < 1.0)) fail("noise: must lie in [0, 1)");
    if (!(abort_threshold >= 0.0 && abort_threshold <= 1.0)) fail("abort_threshold: must lie in [0, 1]");
    if (!(theta >= 0.0 && theta <= kPi)) fail("theta: must lie in [0, pi], got " + format_double(theta));
    if (!(phi >= 0.0 && phi < 2.0 * kPi)) fail("phi: must lie in [0, 2pi), got " + format_double(phi));
    if (!parse_claim_policy(claim)) fail("claim: must be zero, zerobar or nearest");
    if (theta_points < 1) fail("theta_points: must be at least 1");
    make_policy(*this);
}

Check make_check(std::string name, double lhs, double rhs, double tolerance, std::string relation) {
    bool pass = false;
    if (relation == "abs_diff") {
        pass = std::abs(lhs - rhs) <= tolerance;
    } else if (relation == "le") {
        pass = lhs <= rhs + tolerance;
    } else if (relation == "ge") {
        pass = lhs >= rhs - tolerance;
    } else {
        throw std::invalid_argument("make_check: unknown relation " + relation);
    }
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) pass = false;
    return {std::move(name), lhs, rhs, tolerance, std::move(relation), pass};
}

bool ResultDocument::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::string& message) {
    RunConfig cfg;
    CLI::App app{"Simulator and cheating-bound analyzer for two-state quantum gambling"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Flat key=value file with the same keys as the flags; flags take precedence");

    std::map<std::string, Command> commands(kCommands.begin(), kCommands.end());
    app.add_option("command", cfg.command, "honest | cheat | sweep | entangle | verify")
        ->required()
        ->transform(CLI::CheckedTransformer(commands));
    app.add_option("--seed", cfg.seed, "Master seed");
    app.add_option("--rounds", cfg.rounds, "Rounds per Monte Carlo session")->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()));
    double r = 0.0;
    auto* r_opt = app.add_option("--r", r, "Check rate (default: optimal rate for R)")->check(open_unit_interval());
    app.add_option("--R", cfg.R, "Penalty for a failed check")->check(positive());
    app.add_option("--noise", cfg.noise, "Pauli noise strength on Bob's qubit")->check(half_open(0.0, 1.0));
    app.add_option("--abort-threshold", cfg.abort_threshold, "Check-fail rate that aborts a session")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--theta", cfg.theta, "Polar Bloch angle of the cheating state")->check(CLI::Range(0.0, kPi));
    app.add_option("--phi", cfg.phi, "Azimuthal Bloch angle of the cheating state")->check(half_open(0.0, 2.0 * kPi));
    app.add_option("--claim", cfg.claim, "Claim policy")->check(CLI::IsMember({"zero", "zerobar", "nearest"}));
    app.add_option("--policy", cfg.policy, "Entangled attack bases for guesses Zero,ZeroBar (z, x, opt or angle)");
    app.add_option("--table", cfg.table, "Entangled attack claims for outcomes plus,minus");
    app.add_option("--theta-points", cfg.theta_points, "Theta grid size for sweeps")->check(CLI::PositiveNumber);
    std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}};
    app.add_option("--format", cfg.format, "json | csv")->transform(CLI::CheckedTransformer(formats));
    std::string output;
    auto* out_opt = app.add_option("--output", output, "Write the result here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        message = app.help();
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        message = kVersion;
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    if (r_opt->count() > 0) cfg.r = r;
    if (out_opt->count() > 0) cfg.output = output;
    cfg.validate();
    return cfg;
}

ResultDocument run(const RunConfig& config) {
    config.validate();
    ResultDocument doc;
    echo_config(config, doc);
    switch (config.command) {
        case Command::Honest: run_honest(config, doc); break;
        case Command::Cheat: run_cheat(config, doc); break;
        case Command::Sweep: run_sweep(config, doc); break;
        case Command::Entangle: run_entangle(config, doc); break;
        case Command::Verify: run_verify(config, doc); break;
    }
    return doc;
}

std::string serialize(const ResultDocument& doc, Format format) {
    std::ostringstream os;
    if (format == Format::Json) {
        os << "{\"version\":" << json_escape(doc.version) << ",\"command\":" << json_escape(doc.command) << ",\"config\":{";
        for (std::size_t i = 0; i < doc.config.size(); ++i) {
            os << (i ? "," : "") << json_escape(doc.config[i].first) << ":" << json_scalar(doc.config[i].second);
        }
        os << "},\"metrics\":[";
        for (std::size_t i = 0; i < doc.metrics.size(); ++i) {
            const auto& m = doc.metrics[i];
            os << (i ? "," : "") << "{\"name\":" << json_escape(m.name) << ",\"value\":" << format_double(m.value);
            if (m.std_error) os << ",\"std_error\":" << format_double(*m.std_error);
            os << "}";
        }
        os << "],\"checks\":[";
        for (std::size_t i = 0; i < doc.checks.size(); ++i) {
            const auto& c = doc.checks[i];
            os << (i ? "," : "") << "{\"name\":" << json_escape(c.name) << ",\"lhs\":" << format_double(c.lhs)
               << ",\"rhs\":" << format_double(c.rhs) << ",\"tolerance\":" << format_double(c.tolerance)
               << ",\"relation\":" << json_escape(c.relation) << ",\"pass\":" << (c.pass ? "true" : "false") << "}";
        }
        os << "],\"table\":{\"columns\":[";
        for (std::size_t i = 0; i < doc.table.columns.size(); ++i) {
            os << (i ? "," : "") << json_escape(doc.table.columns[i]);
        }
        os << "],\"rows\":[";
        for (std::size_t i = 0; i < doc.table.rows.size(); ++i) {
            os << (i ? "," : "") << "[";
            for (std::size_t j = 0; j < doc.table.rows[i].size(); ++j) {
                os << (j ? "," : "") << json_scalar(doc.table.rows[i][j]);
            }
            os << "]";
        }
        os << "]},\"all_passed\":" << (doc.all_passed() ? "true" : "false") << "}\n";
        return os.str();
    }

    if (!doc.table.columns.empty()) {
        os << "# " << doc.version << " config:";
        for (const auto& [key, value] : doc.config) os << " " << key << "=" << csv_scalar(value);
        os << "\n";
        for (std::size_t i = 0; i < doc.table.columns.size(); ++i) os << (i ? "," : "") << csv_field(doc.table.columns[i]);
        os << "\n";
        for (const auto& row : doc.table.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_scalar(row[j]);
            os << "\n";
        }
        return os.str();
    }
    os << "kind,name,value,std_error,reference,tolerance,relation,pass\n";
    for (const auto& [key, value] : doc.config) os << "config," << csv_field(key) << "," << csv_scalar(value) << ",,,,,\n";
    for (const auto& m : doc.metrics) {
        os << "metric," << csv_field(m.name) << "," << format_double(m.value) << ","
           << (m.std_error ? format_double(*m.std_error) : "") << ",,,,\n";
    }
    for (const auto& c : doc.checks) {
        os << "check," << csv_field(c.name) << "," << format_double(c.lhs) << ",," << format_double(c.rhs) << ","
           << format_double(c.tolerance) << "," << c.relation << "," << (c.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

int main_entry(int argc, const char* const* argv, std::string& out, std::string& err) {
    std::optional<RunConfig> cfg;
    try {
        std::string message;
        cfg = parse_args(argc, argv, message);
        if (!cfg) {
            out = message + "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        err = std::string("configuration error: ") + e.what() + "\n";
        return 2;
    }

    ResultDocument doc;
    try {
        doc = run(*cfg);
    } catch (const ConfigError& e) {
        err = std::string("configuration error: ") + e.what() + "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err = std::string("configuration error: ") + e.what() + "\n";
        return 2;
    }
    const std::string text = serialize(doc, cfg->format);
    if (cfg->output) {
        std::ofstream f(*cfg->output, std::ios::binary);
        if (!f) {
            err = "cannot open output file " + *cfg->output + "\n";
            return 2;
        }
        f << text;
    } else {
        out = text;
    }
    for (const auto& c : doc.checks) {
        if (!c.pass) err += "check failed: " + c.name + "\n";
    }
    return doc.all_passed() ? 0 : 1;
}

}  // namespace qgamble::cli
