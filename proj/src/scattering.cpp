#include "nlslab/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/error.hpp"
#include "nlslab/norms.hpp"

namespace nlslab {

SpectralField pullback(const SpectralField& field) {
    return free_evolve(field, -field.time()).with_time(0.0);
}

std::vector<double> CauchyTable::consecutive() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < size(); ++i) out.push_back(at(i, i + 1));
    return out;
}

std::vector<double> CauchyTable::sup_tail() const {
    const std::size_t n = size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double m = k + 1 < n ? out[k + 1] : 0.0;
        for (std::size_t j = k + 1; j < n; ++j) m = std::max(m, at(k, j));
        out[k] = m;
    }
    return out;
}

CauchyTable cauchy_table(const std::vector<SpectralField>& snapshots) {
    const std::size_t n = snapshots.size();
    if (n < 3) throw InvalidInput("Cauchy table needs at least 3 snapshots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(snapshots[i].time() > snapshots[i - 1].time()))
            throw InvalidInput("snapshot times must be strictly increasing");
    std::vector<SpectralField> w;
    w.reserve(n);
    for (const auto& s : snapshots) w.push_back(pullback(s));
    CauchyTable t;
    t.matrix.assign(n * n, 0.0);
    for (const auto& s : snapshots) t.times.push_back(s.time());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = sobolev_h1(combine(w[i], 1.0, w[j], -1.0));
            t.matrix[i * n + j] = c;
            t.matrix[j * n + i] = c;
        }
    return t;
}

CauchyFlags cauchy_flags(const CauchyTable& table, double transient, double threshold) {
    CauchyFlags f;
    f.transient = transient;
    f.threshold = threshold;
    const auto D = table.consecutive();
    const auto T = table.sup_tail();
    for (std::size_t i = 0; i < D.size(); ++i)
        if (table.times[i] >= transient) {
            f.first_post = i;
            break;
        }
    if (!f.first_post) return f;
    const std::size_t k0 = *f.first_post;
    f.tail_decreasing = D.size() - k0 >= 2;
    for (std::size_t i = k0 + 1; i < D.size(); ++i) f.tail_decreasing &= D[i] < D[i - 1];
    f.contraction = D[k0] > 0.0 ? D.back() / D[k0] : 0.0;
    f.sup_tail_ratio = T[k0] > 0.0 ? T[D.size() - 1] / T[k0] : 0.0;
    f.contracts = f.tail_decreasing && f.contraction < threshold;
    f.no_scattering = !f.tail_decreasing && f.sup_tail_ratio >= threshold;
    return f;
}

bool in_decay_range(int d, double q) {
    if (!(q > 2.0)) return false;
    if (d == 1) return true;
    return q < 2.0 * (d + 1) / (d - 1);
}

DecaySeries decay_series(int d, double q, const std::vector<double>& times,
                         const std::vector<double>& values, double transient) {
    if (times.size() != values.size()) throw InvalidInput("times and values differ in length");
    DecaySeries s;
    s.q = q;
    s.outside_decay_range = !in_decay_range(d, q);
    s.times = times;
    s.values = values;
    if (values.empty()) return s;
    const double vmax = *std::max_element(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (times[i] <= transient) s.early_max = std::max(s.early_max, values[i]);
    s.ratio_last_over_max = vmax > 0.0 ? values.back() / vmax : 0.0;
    s.decay_factor = values.back() > 0.0 ? s.early_max / values.back() : 0.0;
    s.monotone_tail = true;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (times[i - 1] >= transient && values[i] > values[i - 1]) s.monotone_tail = false;
    for (double v : values)
        s.max_relative_deviation =
            std::max(s.max_relative_deviation, std::abs(v - values.front()) / std::max(values.front(), 1e-300));
    return s;
}

std::vector<DecaySeries> decay_series(const std::vector<SpectralField>& snapshots,
                                      const std::vector<double>& q_list, double transient) {
    std::vector<double> times;
    std::vector<std::vector<double>> values(q_list.size());
    for (const auto& f : snapshots) {
        times.push_back(f.time());
        const auto u = f.to_physical();
        for (std::size_t k = 0; k < q_list.size(); ++k) values[k].push_back(lebesgue_norm(f.grid(), u, q_list[k]));
    }
    std::vector<DecaySeries> out;
    const int d = snapshots.empty() ? 1 : snapshots.front().grid().d;
    for (std::size_t k = 0; k < q_list.size(); ++k)
        out.push_back(decay_series(d, q_list[k], times, values[k], transient));
    return out;
}

SpacetimeAccumulators::SpacetimeAccumulators(const exponents::ProblemParams& params,
                                             const exponents::StrichartzTuple& base,
                                             const exponents::ThetaTuple& theta,
                                             const exponents::AuxPair& aux, const Rational& delta) {
    using namespace exponents;
    if (!verify_tuple(base, params).feasible()) throw InvalidInput("base tuple is infeasible");
    if (!verify_tuple(theta, params).feasible()) throw InvalidInput("theta tuple is infeasible");
    if (!verify_tuple(aux, params).feasible()) throw InvalidInput("auxiliary pair is infeasible");
    if (!(delta > 0)) throw InvalidInput("delta must be positive");
    if (Rational(1, 2) + delta + base.s > 1)
        throw InvalidInput("delta violates 1/2 + delta + s <= 1 (s = " + to_string(base.s) + ")");
    r_theta_ = to_double(theta.r());
    q_theta_ = to_double(theta.q());
    p_ = to_double(aux.p());
    l_ = to_double(aux.l());
    gamma_ = 0.5 + to_double(delta);
    for (const auto& [name, exponent] : {std::pair{"theta_mixed", q_theta_}, std::pair{"aux_u", l_},
                                         std::pair{"aux_dy_u", l_}, std::pair{"aux_dx_u", l_}}) {
        Channel c;
        c.name = name;
        c.exponent = exponent;
        channels_.push_back(std::move(c));
    }
    last_f_.assign(channels_.size(), 0.0);
}

void SpacetimeAccumulators::push(double t, const SpectralField& field) {
    if (!times_.empty() && !(t > times_.back())) throw InvalidInput("accumulator times must increase");
    const double norms[4] = {
        mixed_norm(field, r_theta_, gamma_),
        mixed_norm(field, p_, 0.0),
        mixed_norm(derivative_y(field), p_, 0.0),
        mixed_norm_grad_x(field, p_),
    };
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        auto& c = channels_[k];
        const double f = std::pow(norms[k], c.exponent);
        if (!times_.empty()) {
            c.last_increment = 0.5 * (f + last_f_[k]) * (t - times_.back());
            c.value += c.last_increment;
            c.peak_increment = std::max(c.peak_increment, c.last_increment);
        }
        c.last_integrand = f;
        c.series.push_back(c.value);
        last_f_[k] = f;
    }
    times_.push_back(t);
}

bool SpacetimeAccumulators::all_saturated(double ratio) const {
    return std::all_of(channels_.begin(), channels_.end(), [ratio](const Channel& c) { return c.saturated(ratio); });
}

nlohmann::json to_json(const DecaySeries& s) {
    return {
        {"q", s.q},
        {"outside_decay_range", s.outside_decay_range},
        {"times", s.times},
        {"values", s.values},
        {"early_max", s.early_max},
        {"ratio_last_over_max", s.ratio_last_over_max},
        {"decay_factor", s.decay_factor},
        {"monotone_tail", s.monotone_tail},
        {"max_relative_deviation", s.max_relative_deviation},
    };
}

nlohmann::json to_json(const ScatterReport& r) {
    nlohmann::json acc = nlohmann::json::array();
    for (const auto& c : r.accumulators)
        acc.push_back({{"name", c.name},
                       {"exponent", c.exponent},
                       {"value", c.value},
                       {"last_increment", c.last_increment},
                       {"peak_increment", c.peak_increment},
                       {"saturated", c.saturated()},
                       {"series", c.series}});
    nlohmann::json decay = nlohmann::json::array();
    for (const auto& s : r.decay) decay.push_back(to_json(s));
    nlohmann::json flags = {
        {"transient", r.flags.transient},
        {"tail_decreasing", r.flags.tail_decreasing},
        {"contraction", r.flags.contraction},
        {"sup_tail_ratio", r.flags.sup_tail_ratio},
        {"threshold", r.flags.threshold},
        {"contracts", r.flags.contracts},
        {"no_scattering", r.flags.no_scattering},
    };
    return {
        {"times", r.cauchy.times},
        {"cauchy_matrix", r.cauchy.matrix},
        {"consecutive_differences", r.cauchy.consecutive()},
        {"sup_tail", r.cauchy.sup_tail()},
        {"flags", flags},
        {"decay", decay},
        {"accumulator_times", r.accumulator_times},
        {"accumulators", acc},
        {"f_plus", {{"time", r.f_plus_time}, {"h1_norm", r.f_plus_h1}}},
    };
}

}  // namespace nlslab
