#pragma once

// Evidence for (or against) scattering: free-flow pull-backs
// w(t) = e^{it Delta} u(t), their H^1 Cauchy table, L^q decay series and
// space-time norm accumulators.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlslab/exponent_lab.hpp"
#include "nlslab/spectral_field.hpp"

namespace nlslab {

/// free_evolve(u(t), -t); the result carries time_tag 0.
SpectralField pullback(const SpectralField& field);

struct CauchyTable {
    std::vector<double> times;
    std::vector<double> matrix;  // row-major, C_ij = ||w(t_i) - w(t_j)||_{H^1}

    std::size_t size() const { return times.size(); }
    double at(std::size_t i, std::size_t j) const { return matrix[i * times.size() + j]; }
    /// D_i = C_{i,i+1}.
    std::vector<double> consecutive() const;
    /// T_k = max_{j > i >= k} C_ij.
    std::vector<double> sup_tail() const;
};

/// Snapshots (>= 3, strictly increasing times) -> Cauchy table of pull-backs.
CauchyTable cauchy_table(const std::vector<SpectralField>& snapshots);

struct CauchyFlags {
    double transient = 5.0;
    std::optional<std::size_t> first_post;  // first i with t_i >= transient
    bool tail_decreasing = false;           // D_i strictly decreasing over t_i >= transient
    double contraction = 0.0;               // D_last / D_first_post
    double sup_tail_ratio = 0.0;            // T_last / T_first_post
    double threshold = 0.2;
    /// contraction < threshold together with a strictly decreasing tail.
    bool contracts = false;
    /// The tail neither decreases nor contracts: T stays above threshold * T_first_post.
    bool no_scattering = false;
};

CauchyFlags cauchy_flags(const CauchyTable& table, double transient = 5.0, double threshold = 0.2);

struct DecaySeries {
    double q = 2.0;
    bool outside_decay_range = false;  // q outside (2, 2(d+1)/(d-1))
    std::vector<double> times;
    std::vector<double> values;
    double early_max = 0.0;        // max over t <= transient
    double ratio_last_over_max = 0.0;
    double decay_factor = 0.0;     // early_max / last
    bool monotone_tail = false;    // non-increasing for t >= transient
    double max_relative_deviation = 0.0;  // max |v - v_0| / v_0
};

/// True when 2 < q < 2(d+1)/(d-1) (any q > 2, including infinity, for d = 1).
bool in_decay_range(int d, double q);

/// Builds a decay series from precomputed norm values.
DecaySeries decay_series(int d, double q, const std::vector<double>& times,
                         const std::vector<double>& values, double transient = 1.0);
/// Computes lebesgue_norm(u(t_i), q) for every q.
std::vector<DecaySeries> decay_series(const std::vector<SpectralField>& snapshots,
                                      const std::vector<double>& q_list, double transient = 1.0);

/// Running trapezoid integral of a nonnegative integrand with increment stats.
struct Channel {
    std::string name;
    double exponent = 1.0;  // power applied to the norm
    double value = 0.0;
    double last_increment = 0.0;
    double peak_increment = 0.0;
    double last_integrand = 0.0;
    std::vector<double> series;  // running value after every push

    bool saturated(double ratio = 1e-4) const {
        return peak_increment == 0.0 || last_increment < ratio * peak_increment;
    }
};

/// Accumulates, over a uniformly sampled stream,
///   ||u||_{L^{r_theta}_x H^{1/2+delta}_y}^{q_theta}
///   ||u||^l, ||d_y u||^l, ||grad_x u||^l   in L^p_x L^2_y.
class SpacetimeAccumulators {
public:
    /// Rejects infeasible tuples and delta violating 0 < delta, 1/2 + delta + s <= 1.
    SpacetimeAccumulators(const exponents::ProblemParams& params,
                          const exponents::StrichartzTuple& base,
                          const exponents::ThetaTuple& theta, const exponents::AuxPair& aux,
                          const Rational& delta);

    void push(double t, const SpectralField& field);

    const std::vector<Channel>& channels() const { return channels_; }
    const std::vector<double>& times() const { return times_; }
    bool all_saturated(double ratio = 1e-4) const;

    double r_theta() const { return r_theta_; }
    double q_theta() const { return q_theta_; }
    double p() const { return p_; }
    double l() const { return l_; }
    double gamma() const { return gamma_; }

private:
    double r_theta_, q_theta_, p_, l_, gamma_;
    std::vector<Channel> channels_;
    std::vector<double> times_;
    std::vector<double> last_f_;
};

struct ScatterReport {
    CauchyTable cauchy;
    CauchyFlags flags;
    std::vector<DecaySeries> decay;
    std::vector<Channel> accumulators;
    std::vector<double> accumulator_times;
    double f_plus_h1 = 0.0;  // ||w(t_max)||_{H^1}
    double f_plus_time = 0.0;
};

nlohmann::json to_json(const ScatterReport& report);
nlohmann::json to_json(const DecaySeries& series);

}  // namespace nlslab
