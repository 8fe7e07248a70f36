#pragma once

#include <optional>

#include "nowcast/survey.hpp"

namespace nowcast {

/// Inputs of the indirect-response variance formula.
struct VarianceInputs {
    double f = 0.0;         // hidden-population fraction, in [0, 1]
    double mu_d = 1.0;      // mean latent in-degree, > 0
    double sigma_d2 = 0.0;  // in-degree variance, >= 0
    double phi = 0.0;       // co-membership control, in [0, 1]; phi == f is independence

    void validate() const;
};

/// sigma_X^2 = f (mu_D^2 (phi - f) + mu_D (1 - phi) + sigma_D^2 phi).
/// Lies between mu_D f (1 - mu_D f) and f (sigma_D^2 + mu_D^2 (1 - f)).
double variance_indirect(const VarianceInputs& v);

/// True iff the degree variance is small enough that the scaled indirect
/// sample mean deviates from f with lower probability than the direct one:
/// sigma_D^2 <= mu_D (mu_D - 1) (1 - phi) / phi. phi == 0 always passes
/// (the threshold is unbounded in the limit).
bool indirect_beats_direct(double mu_d, double sigma_d2, double phi);

/// Deviation factor of a smooth sequence j steps away:
/// |g_{t+j} - g_t| <= g_t * |j| eps1 / (1 - |j| eps1).
/// DomainError when |j| eps1 >= 1 (the bound is vacuous).
double first_diff_deviation(double eps1, long long j);

/// Leading term of the centred moving-average error: E_g(w) = w (w+1) eps2 / 6.
/// The o(w^4 eps2^2) remainder has no closed form and is absorbed by a
/// documented 1.1 slack in the property suites.
double window_average_error(double eps2, int w);

/// gamma_g = E_g(w) + eps1 * (sigma_n/mu_n) * w eps1 / (1 - w eps1).
/// DomainError when w * eps1 >= 1.
double gamma_factor(double eps1, double eps2, int w, double sigma_n_over_mu_n);

struct WindowBoundInputs {
    double eps_f1 = 0.0;  // first-diff bound on f
    double eps_f2 = 0.0;
    double eps_s1 = 0.0;  // first-diff bound on sigma_X^2
    double eps_s2 = 0.0;
    int w = 0;
    double n_t = 1.0;  // responses in the centre bin (mean counts are accepted)
    double n_w = 1.0;  // responses across the window, n_w >= n_t
    double sigma_n_over_mu_n = 0.0;
};

/// Smallest fractional error lambda for which a w-window weighted average is
/// provably no worse than the unsmoothed estimate (first threshold form):
///   lambda >= [w e_f1 / (1 - w e_f1)] /
///             [1 - (1 + w e_s1 / (1 - w e_s1)) sqrt(n_t / n_w)].
/// The numerator uses the sharper w e / (1 - w e) form. nullopt when the
/// threshold is infeasible at this w (non-positive denominator or a vacuous
/// w * eps >= 1 bound); the window search treats that as +infinity.
std::optional<double> lambda_threshold_thm3(const WindowBoundInputs& b);

/// Second threshold form: lambda >= gamma_f / (1 - sqrt((n_t/n_w)(1 + gamma_s2))).
/// nullopt when infeasible.
std::optional<double> lambda_threshold_thm4(double gamma_f, double gamma_s2,
                                            double n_t, double n_w);

/// B = sum_j q_j alpha_j: the constant by which group-wise multiplicative
/// reporting bias scales the expected indirect response.
double bias_factor(const BiasGroups& bias);

} // namespace nowcast
