#include "nlslab/exponent_lab.hpp"

#include <algorithm>

#include "nlslab/error.hpp"

namespace nlslab::exponents {

namespace {

using C = Comparator;

const Rational kHalf{1, 2};

bool compare(const Rational& lhs, Comparator cmp, const Rational& rhs) {
    switch (cmp) {
        case C::less: return lhs < rhs;
        case C::less_equal: return lhs <= rhs;
        case C::equal: return lhs == rhs;
        case C::not_equal: return lhs != rhs;
        case C::greater: return lhs > rhs;
    }
    return false;
}

// Upper bound alpha-dependent on d: 4/(d-1), or none for d = 1.
std::optional<Rational> energy_critical_power(int d) {
    if (d == 1) return std::nullopt;
    return Rational(4, d - 1);
}

void require_critical_range(const ProblemParams& params, const char* op) {
    if (params.regime == Regime::subcritical) {
        throw InvalidInput(std::string(op) + ": requires 4/d <= alpha, got alpha = " +
                           to_string(params.alpha) + " < 4/d = " + to_string(Rational(4, params.d)));
    }
}

// Shared by the critical, perturbed and theta variants: conditions on
// (1/q, 1/r, 1/q~, 1/r~) that only depend on the four reciprocals.
void check_open_box(ConstraintReport& report, const Rational& inv_q, const Rational& inv_r,
                    const Rational& inv_qt, const Rational& inv_rt) {
    report.check("0 < 1/q", 0, C::less, inv_q);
    report.check("1/q < 1/2", inv_q, C::less, kHalf);
    report.check("0 < 1/r", 0, C::less, inv_r);
    report.check("1/r < 1/2", inv_r, C::less, kHalf);
    report.check("0 < 1/q~", 0, C::less, inv_qt);
    report.check("1/q~ < 1/2", inv_qt, C::less, kHalf);
    report.check("0 < 1/r~", 0, C::less, inv_rt);
    report.check("1/r~ < 1/2", inv_rt, C::less, kHalf);
}

void check_ratio_conditions(ConstraintReport& report, int d, const Rational& inv_q,
                            const Rational& inv_r, const Rational& inv_qt, const Rational& inv_rt) {
    if (d < 3) return;
    report.check("1/q + 1/q~ < 1", inv_q + inv_qt, C::less, 1);
    // r / r~ = (1/r~) / (1/r); 1/r > 0 is checked separately, guard the division.
    const Rational ratio = inv_r != 0 ? inv_rt / inv_r : Rational(0);
    report.check("(d-2)/d < r/r~", Rational(d - 2, d), C::less, ratio);
    report.check("r/r~ < d/(d-2)", ratio, C::less, Rational(d, d - 2));
}

void check_non_endpoint(ConstraintReport& report, int d, const Rational& inv_q,
                        const Rational& inv_r, const Rational& inv_qt, const Rational& inv_rt) {
    const Rational half_d(d, 2);
    report.check("1/q + d/r < d/2", inv_q + d * inv_r, C::less, half_d);
    report.check("1/q~ + d/r~ < d/2", inv_qt + d * inv_rt, C::less, half_d);
}

void check_scaling(ConstraintReport& report, int d, const Rational& inv_q, const Rational& inv_r,
                   const Rational& inv_qt, const Rational& inv_rt, const Rational& s) {
    const Rational half_d(d, 2);
    report.check("2/q + d/r = d/2 - s", 2 * inv_q + d * inv_r, C::equal, half_d - s);
    report.check("2/q + d/r + 2/q~ + d/r~ = d", 2 * inv_q + d * inv_r + 2 * inv_qt + d * inv_rt,
                 C::equal, Rational(d));
}

Rational lower_bound_max(const std::vector<NamedBound>& bounds) {
    return std::max_element(bounds.begin(), bounds.end(),
                            [](const auto& a, const auto& b) { return a.value < b.value; })
        ->value;
}

Rational upper_bound_min(const std::vector<NamedBound>& bounds) {
    return std::min_element(bounds.begin(), bounds.end(),
                            [](const auto& a, const auto& b) { return a.value < b.value; })
        ->value;
}

StrichartzTuple closed_form_critical(const ProblemParams& params, const Rational& r) {
    const Rational& a = params.alpha;
    const int d = params.d;
    StrichartzTuple t;
    t.inv_r = inverse(r);
    t.inv_q = inverse(a) - Rational(d) / (2 * r);
    t.inv_q_tilde = -inverse(a) + (a + 1) * d / (2 * r);
    t.inv_r_tilde = 1 - (a + 1) / r;
    t.s = critical_regularity(params);
    t.kind = TupleKind::critical;
    return t;
}

Construction<AuxPair> aux_from(const ProblemParams& params, const Rational& inv_q,
                               const Rational& inv_r, Strictness strictness) {
    const Rational& a = params.alpha;
    AuxPair pair;
    pair.inv_l = a * params.d * inv_r / 4;
    pair.inv_p = kHalf - a * inv_r / 2;
    pair.strictness = strictness;
    pair.inv_q = inv_q;
    pair.inv_r = inv_r;
    return {pair, verify_tuple(pair, params)};
}

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::subcritical: return "subcritical";
        case Regime::boundary: return "boundary";
        case Regime::scattering: return "scattering";
    }
    return "unknown";
}

ProblemParams ProblemParams::make(int d, const Rational& alpha) {
    if (d < 1) throw InvalidInput("d must be a positive integer, got " + std::to_string(d));
    if (alpha <= 0) throw InvalidInput("alpha must be positive, got " + to_string(alpha));
    if (auto cap = energy_critical_power(d); cap && alpha >= *cap) {
        throw InvalidInput("alpha = " + to_string(alpha) + " violates alpha < 4/(d-1) = " +
                           to_string(*cap));
    }
    const Rational mass_critical(4, d);
    ProblemParams p;
    p.d = d;
    p.alpha = alpha;
    if (alpha < mass_critical) {
        p.regime = Regime::subcritical;
    } else if (alpha == mass_critical) {
        p.regime = Regime::boundary;
    } else {
        p.regime = Regime::scattering;
    }
    return p;
}

std::string_view symbol(Comparator cmp) {
    switch (cmp) {
        case C::less: return "<";
        case C::less_equal: return "<=";
        case C::equal: return "=";
        case C::not_equal: return "!=";
        case C::greater: return ">";
    }
    return "?";
}

void ConstraintReport::check(std::string label, const Rational& lhs, Comparator cmp,
                             const Rational& rhs) {
    checks_.push_back({std::move(label), lhs, cmp, rhs, compare(lhs, cmp, rhs)});
}

bool ConstraintReport::feasible() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const auto& c) { return c.satisfied; });
}

std::optional<std::string> ConstraintReport::first_violation() const {
    for (const auto& c : checks_) {
        if (!c.satisfied) return c.label;
    }
    return std::nullopt;
}

const ConstraintCheck* ConstraintReport::find(std::string_view label) const {
    for (const auto& c : checks_) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

Rational critical_regularity(const ProblemParams& params) {
    return (params.alpha * params.d - 4) / (2 * params.alpha);
}

Construction<SubcriticalPair> subcritical_pair(const ProblemParams& params) {
    if (params.regime != Regime::subcritical) {
        throw InvalidInput("subcritical_pair: requires alpha < 4/d, got alpha = " +
                           to_string(params.alpha) + " >= 4/d = " + to_string(Rational(4, params.d)));
    }
    SubcriticalPair pair;
    pair.inv_q = params.d * params.alpha / (4 * (params.alpha + 2));
    pair.inv_r = inverse(params.alpha + 2);
    return {pair, verify_tuple(pair, params)};
}

RInterval feasible_r_interval(const ProblemParams& params) {
    require_critical_range(params, "feasible_r_interval");
    const Rational& a = params.alpha;
    const int d = params.d;
    RInterval iv;
    iv.lower.push_back({"alpha*d/2", a * d / 2});
    iv.lower.push_back({"2", Rational(2)});
    iv.lower.push_back({"alpha(alpha+1)d/(alpha+2)", a * (a + 1) * d / (a + 2)});
    iv.lower.push_back({"alpha+1", a + 1});
    if (d >= 3) iv.lower.push_back({"(d-2)/d+alpha+1", Rational(d - 2, d) + a + 1});

    // alpha d/(2 - alpha) is only a constraint while 2 - alpha > 0.
    if (a < 2) iv.upper.push_back({"alpha*d/(2-alpha)", a * d / (2 - a)});
    iv.upper.push_back({"alpha(alpha+1)d/2", a * (a + 1) * d / 2});
    iv.upper.push_back({"2(alpha+1)", 2 * (a + 1)});
    iv.upper.push_back({"alpha(alpha+1)d/(alpha*d-2)", a * (a + 1) * d / (a * d - 2)});
    if (d >= 3) iv.upper.push_back({"d/(d-2)+alpha+1", Rational(d, d - 2) + a + 1});

    iv.lo = lower_bound_max(iv.lower);
    iv.hi = upper_bound_min(iv.upper);
    return iv;
}

Construction<StrichartzTuple> critical_tuple(const ProblemParams& params, std::optional<Rational> r) {
    require_critical_range(params, "critical_tuple");
    const Rational chosen = r ? *r : feasible_r_interval(params).midpoint();
    if (chosen <= 0) throw InvalidInput("critical_tuple: r must be positive");
    StrichartzTuple t = closed_form_critical(params, chosen);
    return {t, verify_tuple(t, params)};
}

Construction<StrichartzTuple> perturbed_tuple(const StrichartzTuple& base,
                                              const ProblemParams& params,
                                              const Rational& epsilon) {
    require_critical_range(params, "perturbed_tuple");
    if (epsilon < 0) throw InvalidInput("perturbed_tuple: epsilon must be >= 0");
    if (base.inv_q <= 0) throw InvalidInput("perturbed_tuple: base tuple has 1/q <= 0");
    if (epsilon == 0) {
        StrichartzTuple same = base;
        same.kind = TupleKind::critical;
        return {same, verify_tuple(same, params)};
    }
    const int d = params.d;
    const Rational q_eps = base.q() + epsilon;
    const Rational beta = Rational(d, 2) * (1 - base.inv_r - base.inv_r_tilde);
    StrichartzTuple t;
    t.inv_q = inverse(q_eps);
    t.inv_r = base.inv_r;
    t.inv_q_tilde = beta - t.inv_q;
    t.inv_r_tilde = base.inv_r_tilde;
    t.s = Rational(d, 2) - 2 * t.inv_q - d * t.inv_r;
    t.kind = TupleKind::perturbed;
    return {t, verify_tuple(t, params)};
}

Rational feasible_epsilon(const StrichartzTuple& base, const ProblemParams& params,
                          const Rational& start) {
    if (start <= 0) throw InvalidInput("feasible_epsilon: start must be positive");
    Rational eps = start;
    for (int i = 0; i < 200; ++i) {
        if (perturbed_tuple(base, params, eps).report.feasible()) return eps;
        eps /= 2;
    }
    throw InvalidInput("feasible_epsilon: no feasible perturbation found; is the base tuple valid?");
}

Construction<ThetaTuple> theta_tuple(const StrichartzTuple& base, const ProblemParams& params,
                                     const Rational& theta) {
    if (params.regime != Regime::scattering) {
        throw InvalidInput("theta_tuple: requires 4/d < alpha < 4/(d-1), got alpha = " +
                           to_string(params.alpha));
    }
    if (theta <= 0 || theta > 1) {
        throw InvalidInput("theta_tuple: theta must lie in (0, 1], got " + to_string(theta));
    }
    const Rational& a = params.alpha;
    ThetaTuple t;
    t.theta = theta;
    t.inv_q = base.inv_q;
    t.inv_r = base.inv_r;
    // 1/q~' = (alpha+1) theta/q and 1/r~' = (alpha+1)(theta/r + 2(1-theta)/(alpha d)).
    t.inv_q_tilde = 1 - (a + 1) * theta * base.inv_q;
    t.inv_r_tilde = 1 - (a + 1) * (theta * base.inv_r + 2 * (1 - theta) / (a * params.d));
    return {t, verify_tuple(t, params)};
}

Rational max_feasible_theta(const StrichartzTuple& base, const ProblemParams& params,
                            const Rational& resolution) {
    if (resolution <= 0 || resolution >= 1) {
        throw InvalidInput("max_feasible_theta: resolution must lie in (0, 1)");
    }
    if (!verify_tuple(base, params).feasible()) {
        throw InvalidInput("max_feasible_theta: base tuple is infeasible");
    }
    Rational step = resolution;
    for (int i = 0; i < 200; ++i) {
        const Rational theta = 1 - step;
        if (theta_tuple(base, params, theta).report.feasible()) return theta;
        step /= 2;
    }
    throw InvalidInput("max_feasible_theta: no feasible theta below 1");
}

Construction<AuxPair> auxiliary_pair(const ProblemParams& params, const StrichartzTuple& tuple,
                                     Strictness strictness) {
    return aux_from(params, tuple.inv_q, tuple.inv_r, strictness);
}

Construction<AuxPair> auxiliary_pair(const ProblemParams& params, const ThetaTuple& tuple,
                                     Strictness strictness) {
    return aux_from(params, tuple.inv_q, tuple.inv_r, strictness);
}

ConstraintReport verify_tuple(const SubcriticalPair& pair, const ProblemParams& params) {
    ConstraintReport report;
    const int d = params.d;
    const Rational& a = params.alpha;
    report.check("0 <= 1/q", 0, C::less_equal, pair.inv_q);
    report.check("1/q <= 1/2", pair.inv_q, C::less_equal, kHalf);
    report.check("0 <= 1/r", 0, C::less_equal, pair.inv_r);
    report.check("1/r <= 1/2", pair.inv_r, C::less_equal, kHalf);
    report.check("2/q + d/r = d/2", 2 * pair.inv_q + d * pair.inv_r, C::equal, Rational(d, 2));
    if (d == 2) {
        report.check("(q,d) != (2,2)", pair.inv_q, C::not_equal, kHalf);
    } else {
        report.check("(q,d) != (2,2)", Rational(d), C::not_equal, Rational(2));
    }
    report.check("1/q' > (alpha+1)/q", conjugate_reciprocal(pair.inv_q), C::greater,
                 (a + 1) * pair.inv_q);
    report.check("1/r' = (alpha+1)/r", conjugate_reciprocal(pair.inv_r), C::equal,
                 (a + 1) * pair.inv_r);
    return report;
}

ConstraintReport verify_tuple(const StrichartzTuple& t, const ProblemParams& params) {
    ConstraintReport report;
    const int d = params.d;
    const Rational& a = params.alpha;
    const Rational s_crit = critical_regularity(params);

    check_open_box(report, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_ratio_conditions(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_non_endpoint(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_scaling(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde, t.s);

    const Rational qt_conj = conjugate_reciprocal(t.inv_q_tilde);
    const Rational strichartz_sum = a * t.inv_q + a * d * t.inv_r / 2;
    if (t.kind == TupleKind::critical) {
        report.check("s = (alpha*d-4)/(2*alpha)", t.s, C::equal, s_crit);
        report.check("0 <= s", 0, C::less_equal, t.s);
        report.check("1/q~' = (alpha+1)/q", qt_conj, C::equal, (a + 1) * t.inv_q);
        report.check("alpha/q + alpha*d/(2r) = 1", strichartz_sum, C::equal, 1);
    } else {
        report.check("s_eps > s", t.s, C::greater, s_crit);
        report.check("0 < s", 0, C::less, t.s);
        report.check("1/q~' > (alpha+1)/q", qt_conj, C::greater, (a + 1) * t.inv_q);
        report.check("alpha/q + alpha*d/(2r) < 1", strichartz_sum, C::less, 1);
    }
    report.check("s < 1/2", t.s, C::less, kHalf);
    report.check("1/r~' = (alpha+1)/r", conjugate_reciprocal(t.inv_r_tilde), C::equal,
                 (a + 1) * t.inv_r);
    report.check("alpha/r < 1", a * t.inv_r, C::less, 1);
    return report;
}

ConstraintReport verify_tuple(const ThetaTuple& t, const ProblemParams& params) {
    ConstraintReport report;
    const int d = params.d;
    const Rational& a = params.alpha;
    report.check("0 < theta", 0, C::less, t.theta);
    report.check("theta <= 1", t.theta, C::less_equal, 1);
    check_open_box(report, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_ratio_conditions(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_non_endpoint(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde);
    check_scaling(report, d, t.inv_q, t.inv_r, t.inv_q_tilde, t.inv_r_tilde,
                  critical_regularity(params));
    report.check("1/((alpha+1)q~_theta') = theta/q_theta",
                 conjugate_reciprocal(t.inv_q_tilde) / (a + 1), C::equal, t.theta * t.inv_q);
    report.check("1/((alpha+1)r~_theta') = theta/r_theta + 2(1-theta)/(alpha*d)",
                 conjugate_reciprocal(t.inv_r_tilde) / (a + 1), C::equal,
                 t.theta * t.inv_r + 2 * (1 - t.theta) / (a * d));
    report.check("alpha/q + alpha*d/(2r) = 1", a * t.inv_q + a * d * t.inv_r / 2, C::equal, 1);
    report.check("alpha/r < 1", a * t.inv_r, C::less, 1);
    return report;
}

ConstraintReport verify_tuple(const AuxPair& pair, const ProblemParams& params) {
    ConstraintReport report;
    const int d = params.d;
    const Rational& a = params.alpha;
    report.check("0 < 1/l", 0, C::less, pair.inv_l);
    report.check("1/l < 1/2", pair.inv_l, C::less, kHalf);
    report.check("0 < 1/p", 0, C::less, pair.inv_p);
    report.check("1/p <= 1/2", pair.inv_p, C::less_equal, kHalf);
    report.check("2/l + d/p = d/2", 2 * pair.inv_l + d * pair.inv_p, C::equal, Rational(d, 2));
    report.check("1/p' = 1/p + alpha/r", conjugate_reciprocal(pair.inv_p), C::equal,
                 pair.inv_p + a * pair.inv_r);
    const Rational rhs = pair.inv_l + a * pair.inv_q;
    if (pair.strictness == Strictness::strict) {
        report.check("1/l' > 1/l + alpha/q", conjugate_reciprocal(pair.inv_l), C::greater, rhs);
    } else {
        report.check("1/l' = 1/l + alpha/q", conjugate_reciprocal(pair.inv_l), C::equal, rhs);
    }
    return report;
}

nlohmann::json to_json(const ConstraintReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : report.checks()) {
        rows.push_back({{"constraint", c.label},
                        {"lhs", to_string(c.lhs)},
                        {"cmp", std::string(symbol(c.cmp))},
                        {"rhs", to_string(c.rhs)},
                        {"ok", c.satisfied}});
    }
    return {{"feasible", report.feasible()}, {"constraints", rows}};
}

namespace {

std::string exponent_text(const Rational& inv) {
    if (inv == 0) return "inf";
    return to_string(inverse(inv));
}

}  // namespace

nlohmann::json to_json(const StrichartzTuple& t) {
    return {{"kind", t.kind == TupleKind::critical ? "critical" : "perturbed"},
            {"q", exponent_text(t.inv_q)},
            {"r", exponent_text(t.inv_r)},
            {"q_tilde", exponent_text(t.inv_q_tilde)},
            {"r_tilde", exponent_text(t.inv_r_tilde)},
            {"s", to_string(t.s)}};
}

nlohmann::json to_json(const ThetaTuple& t) {
    return {{"theta", to_string(t.theta)},
            {"q_theta", exponent_text(t.inv_q)},
            {"r_theta", exponent_text(t.inv_r)},
            {"q_tilde_theta", exponent_text(t.inv_q_tilde)},
            {"r_tilde_theta", exponent_text(t.inv_r_tilde)}};
}

nlohmann::json to_json(const AuxPair& pair) {
    return {{"l", exponent_text(pair.inv_l)},
            {"p", exponent_text(pair.inv_p)},
            {"strictness", pair.strictness == Strictness::strict ? "strict" : "equality"}};
}

nlohmann::json to_json(const SubcriticalPair& pair) {
    return {{"q", exponent_text(pair.inv_q)}, {"r", exponent_text(pair.inv_r)}};
}

nlohmann::json to_json(const RInterval& iv) {
    auto bounds = [](const std::vector<NamedBound>& list) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& b : list) out.push_back({{"bound", b.label}, {"value", to_string(b.value)}});
        return out;
    };
    return {{"r_lo", to_string(iv.lo)},
            {"r_hi", to_string(iv.hi)},
            {"lower_bounds", bounds(iv.lower)},
            {"upper_bounds", bounds(iv.upper)}};
}

}  // namespace nlslab::exponents
