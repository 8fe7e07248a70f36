#include "nowcast/bounds.hpp"

#include <cmath>

namespace nowcast {

void VarianceInputs::validate() const {
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("variance inputs: f outside [0, 1]");
    if (!(mu_d > 0.0)) throw DomainError("variance inputs: mu_d must be positive");
    if (!(sigma_d2 >= 0.0)) throw DomainError("variance inputs: sigma_d2 must be >= 0");
    if (!(phi >= 0.0 && phi <= 1.0)) throw DomainError("variance inputs: phi outside [0, 1]");
}

double variance_indirect(const VarianceInputs& v) {
    v.validate();
    return v.f * (v.mu_d * v.mu_d * (v.phi - v.f) + v.mu_d * (1.0 - v.phi) +
                  v.sigma_d2 * v.phi);
}

bool indirect_beats_direct(double mu_d, double sigma_d2, double phi) {
    if (!(mu_d >= 1.0)) throw DomainError("indirect_beats_direct: mu_d must be >= 1");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw DomainError("indirect_beats_direct: phi outside [0, 1]");
    if (!(sigma_d2 >= 0.0))
        throw DomainError("indirect_beats_direct: sigma_d2 must be >= 0");
    if (phi == 0.0) return true;
    return sigma_d2 <= mu_d * (mu_d - 1.0) * (1.0 - phi) / phi;
}

double first_diff_deviation(double eps1, long long j) {
    if (!(eps1 >= 0.0)) throw DomainError("first_diff_deviation: eps1 must be >= 0");
    const double je = static_cast<double>(j < 0 ? -j : j) * eps1;
    if (je >= 1.0)
        throw DomainError("first_diff_deviation: |j|*eps1 >= 1, bound is vacuous");
    return je / (1.0 - je);
}

double window_average_error(double eps2, int w) {
    if (!(eps2 >= 0.0)) throw DomainError("window_average_error: eps2 must be >= 0");
    if (w < 0) throw DomainError("window_average_error: w must be >= 0");
    return static_cast<double>(w) * (w + 1) * eps2 / 6.0;
}

double gamma_factor(double eps1, double eps2, int w, double sigma_n_over_mu_n) {
    if (!(sigma_n_over_mu_n >= 0.0))
        throw DomainError("gamma_factor: sigma_n/mu_n must be >= 0");
    return window_average_error(eps2, w) +
           eps1 * sigma_n_over_mu_n * first_diff_deviation(eps1, w);
}

std::optional<double> lambda_threshold_thm3(const WindowBoundInputs& b) {
    if (b.w < 0) throw DomainError("lambda_threshold_thm3: w must be >= 0");
    if (!(b.n_t > 0.0 && b.n_w > 0.0))
        throw DomainError("lambda_threshold_thm3: counts must be positive");
    const double wf = static_cast<double>(b.w) * b.eps_f1;
    const double ws = static_cast<double>(b.w) * b.eps_s1;
    if (wf >= 1.0 || ws >= 1.0) return std::nullopt;  // vacuous bound
    const double numerator = wf / (1.0 - wf);
    const double inflation = 1.0 + ws / (1.0 - ws);
    const double denominator = 1.0 - inflation * std::sqrt(b.n_t / b.n_w);
    if (denominator <= 0.0) return std::nullopt;
    return numerator / denominator;
}

std::optional<double> lambda_threshold_thm4(double gamma_f, double gamma_s2,
                                            double n_t, double n_w) {
    if (!(gamma_f >= 0.0 && gamma_s2 >= 0.0))
        throw DomainError("lambda_threshold_thm4: gamma factors must be >= 0");
    if (!(n_t > 0.0 && n_w > 0.0))
        throw DomainError("lambda_threshold_thm4: counts must be positive");
    const double denominator = 1.0 - std::sqrt(n_t / n_w * (1.0 + gamma_s2));
    if (denominator <= 0.0) return std::nullopt;
    return gamma_f / denominator;
}

double bias_factor(const BiasGroups& bias) {
    bias.validate();
    double b = 0.0;
    for (const auto& g : bias.groups) b += g.q * g.alpha;
    return b;
}

} // namespace nowcast
