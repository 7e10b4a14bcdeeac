#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemotaxis {

/// Coefficients and exponents of the attraction-repulsion system
///
///   u_t = div((u+1)^{m1-1} grad u - chi u (u+1)^{m2-1} grad v + xi u (u+1)^{m3-1} grad w)
///         + lambda u^rho - mu u^k - c |grad u|^gamma
///
/// together with the switches selecting the chemical equations (tau, nonlocal).
/// Defaults are "every coefficient 1, k = 1.1".
struct ModelParams {
  int n = 2;
  int tau = 0;
  bool nonlocal = false;

  double chi = 1.0;
  double xi = 1.0;
  double lambda = 1.0;
  double mu = 1.0;
  double c = 1.0;
  double rho = 1.0;
  double k = 1.1;
  double gamma = 1.0;

  double m1 = 1.0;
  double m2 = 1.0;
  double m3 = 1.0;
  double alpha = 1.0;
  double beta = 1.0;

  // Production-law bounds f1 <= k1 (s+1)^alpha, k2 (s+1)^beta <= f2 <= k3 (s+1)^beta.
  double f1_coeff = 1.0;
  double f2_lo = 1.0;
  double f2_hi = 1.0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid model parameters: " + what); };
    if (n < 1 || n > 3) fail("n must be 1, 2 or 3");
    if (tau != 0 && tau != 1) fail("tau must be 0 or 1");
    if (!(chi >= 0.0) || !(xi >= 0.0)) fail("chi and xi must be >= 0");
    if (!(lambda >= 0.0) || !(mu >= 0.0) || !(c >= 0.0)) fail("lambda, mu and c must be >= 0");
    if (!(rho >= 1.0)) fail("rho must be >= 1");
    if (!(k >= rho)) fail("k must be >= rho");
    if (!(gamma >= 1.0)) fail("gamma must be >= 1");
    if (!(alpha > 0.0) || !(beta > 0.0)) fail("alpha and beta must be > 0");
    if (!(f2_lo > 0.0) || !(f1_coeff >= f2_lo) || !(f2_hi >= f2_lo)) fail("need k1, k3 >= k2 > 0");
    for (double x : {m1, m2, m3})
      if (!std::isfinite(x)) fail("m1, m2, m3 must be finite");
  }
};

inline double compute_theta_cap(const ModelParams& p) {
  const double ratio = static_cast<double>(p.n) / (p.n + 1.0);
  return std::max({1.0, ratio * (p.m2 + p.alpha), p.tau * ratio * (p.m3 + p.beta)});
}

/// Theta < gamma <= 2.
inline bool check_gamma_condition(const ModelParams& p) {
  return compute_theta_cap(p) < p.gamma && p.gamma <= 2.0;
}

/// Uniform-in-time bound on the total mass, valid when k > rho.
inline double mass_bound(const ModelParams& p, double initial_mass, double domain_volume) {
  if (!(p.k > p.rho)) throw std::invalid_argument("mass bound requires k>rho");
  if (!(p.mu > 0.0)) throw std::invalid_argument("mass bound requires mu>0");
  if (!(initial_mass >= 0.0)) throw std::invalid_argument("initial mass must be >= 0");
  if (!(domain_volume > 0.0)) throw std::invalid_argument("domain volume must be > 0");
  const double gap = p.k - p.rho;
  const double equilibrium = std::pow(p.lambda / p.mu * std::pow(domain_volume, gap), 1.0 / gap);
  return std::max(initial_mass, equilibrium);
}

struct DegenerateExponent : std::domain_error {
  using std::domain_error::domain_error;
};

/// Gagliardo-Nirenberg interpolation exponents used in the L^p bootstrap.
struct GnExponents {
  double theta = 0, sigma = 0;
  double theta_bar = 0, sigma_bar = 0;
  double theta_hat = 0, sigma_hat = 0;
  double theta_tilde = 0;
  double theta_under = 0, sigma_under = 0;
};

inline GnExponents gn_exponents(const ModelParams& prm, double p, double q) {
  if (!(p > 1.0) || !(q > 1.0)) throw DegenerateExponent("degenerate exponent: need p > 1 and q > 1");
  const double g = prm.gamma;
  if (!(g >= 1.0)) throw DegenerateExponent("degenerate exponent: gamma < 1");
  const double lift = (p + g - 1.0) / g;
  const double denom = lift - 1.0 / g + 1.0 / prm.n;
  const double attr_arg = p + prm.m2 + prm.alpha - 1.0;
  const double rep_arg = p + prm.m3 + prm.beta - 1.0;
  if (denom == 0.0 || !std::isfinite(denom)) throw DegenerateExponent("degenerate exponent: zero denominator");
  if (!(attr_arg > 0.0) || !(rep_arg > 0.0))
    throw DegenerateExponent("degenerate exponent: p + m_j + production exponent - 1 <= 0");

  auto interp = [&](double target) { return (lift - lift / target) / denom; };
  GnExponents e;
  e.theta = interp(p);
  e.sigma = p * g / (p + g - 1.0);
  e.theta_bar = interp(attr_arg);
  e.sigma_bar = g * attr_arg / (p + g - 1.0);
  e.theta_hat = interp(rep_arg);
  e.sigma_hat = g * rep_arg / (p + g - 1.0);
  e.theta_tilde = interp(prm.beta);
  e.theta_under = interp(q);
  e.sigma_under = g * (p + q) / (p + g - 1.0);
  return e;
}

/// Flags in the order theta, sigma*theta/gamma, theta_bar, sigma_bar*theta_bar/gamma,
/// theta_hat, sigma_hat*theta_hat/gamma, theta_tilde, sigma_hat*theta_tilde/gamma,
/// theta_under, sigma_under*theta_under/gamma; each tests membership in (0,1).
using GnFlags = std::array<bool, 10>;

inline GnFlags verify_gn_inequalities(const GnExponents& e, const ModelParams& prm, bool /*beta_gt_one*/) {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  const double g = prm.gamma;
  return {in_unit(e.theta),
          in_unit(e.sigma * e.theta / g),
          in_unit(e.theta_bar),
          in_unit(e.sigma_bar * e.theta_bar / g),
          in_unit(e.theta_hat),
          in_unit(e.sigma_hat * e.theta_hat / g),
          in_unit(e.theta_tilde),
          in_unit(e.sigma_hat * e.theta_tilde / g),
          in_unit(e.theta_under),
          in_unit(e.sigma_under * e.theta_under / g)};
}

/// The theta_tilde pair (indices 6, 7) is only demanded when beta > 1.
inline bool all_required(const GnFlags& flags, bool beta_gt_one) {
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!beta_gt_one && (i == 6 || i == 7)) continue;
    if (!flags[i]) return false;
  }
  return true;
}

inline double default_q(const ModelParams& p) { return std::max(p.beta, p.m3 + p.beta - 1.0) + 1.0; }

struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PbarSearch {
  double ratio = 1.1;
  double start = 2.0;
  int stability_window = 10;
  // When false the scan runs even if the gamma condition fails (it then simply finds nothing).
  bool enforce_precondition = true;
};

/// Smallest p on the grid start * ratio^j (p <= p_max) from which every required
/// inequality holds for the following `stability_window` grid points as well.
/// The gamma condition is checked with tau = 1, i.e. both production terms count.
inline std::optional<double> find_pbar(const ModelParams& prm, double q, double p_max, const PbarSearch& opt = {}) {
  ModelParams full = prm;
  full.tau = 1;
  if (opt.enforce_precondition && !check_gamma_condition(full))
    throw PreconditionViolated("precondition violated: gamma condition fails with tau = 1");
  const bool beta_gt_one = prm.beta > 1.0;

  auto holds = [&](double p) {
    try {
      return all_required(verify_gn_inequalities(gn_exponents(prm, p, q), prm, beta_gt_one), beta_gt_one);
    } catch (const DegenerateExponent&) {
      return false;
    }
  };

  int streak = 0;
  double candidate = 0.0;
  for (double p = opt.start; p <= p_max * (1.0 + 1e-12); p *= opt.ratio) {
    if (holds(p)) {
      if (streak == 0) candidate = p;
      if (++streak > opt.stability_window) return candidate;
    } else {
      streak = 0;
    }
  }
  return std::nullopt;
}

/// Closed-form regime quantities for one parameter set.
struct RegimeReport {
  double theta_cap = 0.0;
  bool gamma_ok = false;
  std::optional<double> mass_bound;
  std::optional<double> pbar;
  std::vector<std::string> notes;
};

inline RegimeReport regime_report(const ModelParams& p, std::optional<double> initial_mass = std::nullopt,
                                  std::optional<double> domain_volume = std::nullopt) {
  RegimeReport r;
  r.theta_cap = compute_theta_cap(p);
  r.gamma_ok = check_gamma_condition(p);
  {
    std::ostringstream os;
    os << "Theta_" << p.tau << " = max{1, " << p.n << "/" << p.n + 1 << "*(m2+alpha), " << p.tau << "*" << p.n << "/"
       << p.n + 1 << "*(m3+beta)} = " << r.theta_cap;
    r.notes.push_back(os.str());
  }
  {
    std::ostringstream os;
    os << r.theta_cap << " < gamma=" << p.gamma << " <= 2 : " << (r.gamma_ok ? "holds" : "fails");
    r.notes.push_back(os.str());
  }
  if (p.k > p.rho && p.mu > 0.0 && initial_mass && domain_volume) {
    r.mass_bound = mass_bound(p, *initial_mass, *domain_volume);
  } else if (!(p.k > p.rho)) {
    r.notes.push_back("mass bound unavailable: requires k > rho");
  }
  ModelParams full = p;
  full.tau = 1;
  if (check_gamma_condition(full)) {
    r.pbar = find_pbar(p, default_q(p), 1e6);
    if (!r.pbar) r.notes.push_back("no pbar found below p = 1e6");
  } else {
    r.notes.push_back("pbar search skipped: gamma condition fails with both production terms");
  }
  return r;
}

}  // namespace chemotaxis
