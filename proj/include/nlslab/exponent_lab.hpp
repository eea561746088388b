#pragma once

// Exact construction and verification of the admissible exponent systems used
// by the well-posedness and scattering arguments for NLS on R^d x T.
//
// Exponents are carried as reciprocals (1/q, 1/r, ...) so that infeasible
// candidates with 1/q <= 0 can still be represented and reported. Every
// operation returns its value together with a ConstraintReport produced by
// re-evaluating the raw (in)equalities, never the closed forms used to build
// the value.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nlslab/rational.hpp"

namespace nlslab::exponents {

enum class Regime {
    subcritical,  // 0 < alpha < 4/d
    boundary,     // alpha = 4/d
    scattering,   // 4/d < alpha < 4/(d-1)
};

using nlslab::to_string;
std::string_view to_string(Regime regime);

struct ProblemParams {
    int d = 1;
    Rational alpha;
    Regime regime = Regime::subcritical;

    /// Classifies alpha; rejects d < 1, alpha <= 0 and alpha >= 4/(d-1).
    static ProblemParams make(int d, const Rational& alpha);
};

enum class Comparator { less, less_equal, equal, not_equal, greater };

std::string_view symbol(Comparator cmp);

struct ConstraintCheck {
    std::string label;
    Rational lhs;
    Comparator cmp = Comparator::equal;
    Rational rhs;
    bool satisfied = false;
};

class ConstraintReport {
public:
    void check(std::string label, const Rational& lhs, Comparator cmp, const Rational& rhs);

    bool feasible() const;
    const std::vector<ConstraintCheck>& checks() const { return checks_; }
    /// Label of the first failing check, if any.
    std::optional<std::string> first_violation() const;
    const ConstraintCheck* find(std::string_view label) const;

private:
    std::vector<ConstraintCheck> checks_;
};

template <typename T>
struct Construction {
    T value;
    ConstraintReport report;
};

struct SubcriticalPair {
    Rational inv_q;
    Rational inv_r;

    Rational q() const { return inverse(inv_q); }
    Rational r() const { return inverse(inv_r); }
};

enum class TupleKind {
    critical,   // equality 1/q~' = (alpha+1)/q, s fixed by (alpha, d)
    perturbed,  // strict 1/q~' > (alpha+1)/q, s_eps > s
};

struct StrichartzTuple {
    Rational inv_q;
    Rational inv_r;
    Rational inv_q_tilde;
    Rational inv_r_tilde;
    Rational s;
    TupleKind kind = TupleKind::critical;

    Rational q() const { return inverse(inv_q); }
    Rational r() const { return inverse(inv_r); }
    Rational q_tilde() const { return inverse(inv_q_tilde); }
    Rational r_tilde() const { return inverse(inv_r_tilde); }
};

struct ThetaTuple {
    Rational theta;
    Rational inv_q;
    Rational inv_r;
    Rational inv_q_tilde;
    Rational inv_r_tilde;

    Rational q() const { return inverse(inv_q); }
    Rational r() const { return inverse(inv_r); }
    Rational q_tilde() const { return inverse(inv_q_tilde); }
    Rational r_tilde() const { return inverse(inv_r_tilde); }
};

enum class Strictness { strict, equality };

struct AuxPair {
    Rational inv_l;
    Rational inv_p;
    Strictness strictness = Strictness::equality;
    // The (q, r) the pair was derived from.
    Rational inv_q;
    Rational inv_r;

    Rational l() const { return inverse(inv_l); }
    Rational p() const { return inverse(inv_p); }
};

struct NamedBound {
    std::string label;
    Rational value;
};

/// Open interval of admissible r for the critical tuple.
struct RInterval {
    Rational lo;
    Rational hi;
    std::vector<NamedBound> lower;
    std::vector<NamedBound> upper;

    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& r) const { return lo < r && r < hi; }
    bool empty() const { return !(lo < hi); }
};

/// (q, r) = (4(alpha+2)/(d alpha), alpha+2). Requires the subcritical regime.
Construction<SubcriticalPair> subcritical_pair(const ProblemParams& params);

/// Requires 4/d <= alpha < 4/(d-1).
RInterval feasible_r_interval(const ProblemParams& params);

/// Critical tuple with s = (alpha d - 4)/(2 alpha). `r` defaults to the
/// interval midpoint; an r outside the interval yields an infeasible report.
Construction<StrichartzTuple> critical_tuple(const ProblemParams& params,
                                             std::optional<Rational> r = std::nullopt);

/// q_eps = q + eps with 1/q~_eps chosen so that the sum identity still closes.
/// eps = 0 returns the base tuple unchanged.
Construction<StrichartzTuple> perturbed_tuple(const StrichartzTuple& base,
                                              const ProblemParams& params,
                                              const Rational& epsilon);

/// Halves `start` until perturbed_tuple is feasible.
Rational feasible_epsilon(const StrichartzTuple& base, const ProblemParams& params,
                          const Rational& start = Rational(1));

/// theta in (0, 1]; requires the scattering regime.
Construction<ThetaTuple> theta_tuple(const StrichartzTuple& base, const ProblemParams& params,
                                     const Rational& theta);

/// Largest theta = 1 - k * resolution < 1 with a feasible theta_tuple. The
/// feasible set is an interval ending at 1, so when 1 - resolution already
/// falls outside it the resolution is halved until a grid point lands inside.
Rational max_feasible_theta(const StrichartzTuple& base, const ProblemParams& params,
                            const Rational& resolution);

/// 1/l = alpha d/(4r), 1/p = 1/2 - alpha/(2r).
Construction<AuxPair> auxiliary_pair(const ProblemParams& params, const StrichartzTuple& tuple,
                                     Strictness strictness);
Construction<AuxPair> auxiliary_pair(const ProblemParams& params, const ThetaTuple& tuple,
                                     Strictness strictness);

ConstraintReport verify_tuple(const SubcriticalPair& pair, const ProblemParams& params);
ConstraintReport verify_tuple(const StrichartzTuple& tuple, const ProblemParams& params);
ConstraintReport verify_tuple(const ThetaTuple& tuple, const ProblemParams& params);
ConstraintReport verify_tuple(const AuxPair& pair, const ProblemParams& params);

/// s = (alpha d - 4) / (2 alpha).
Rational critical_regularity(const ProblemParams& params);

nlohmann::json to_json(const ConstraintReport& report);
nlohmann::json to_json(const StrichartzTuple& tuple);
nlohmann::json to_json(const ThetaTuple& tuple);
nlohmann::json to_json(const AuxPair& pair);
nlohmann::json to_json(const SubcriticalPair& pair);
nlohmann::json to_json(const RInterval& interval);

}  // namespace nlslab::exponents
