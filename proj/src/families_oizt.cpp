#include <cmath>
#include <limits>

#include "sscr/family.hpp"
#include "sscr/special.hpp"
#include "family_impl.hpp"

namespace sscr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool count_in_support(double y, double lo) {
  return std::isfinite(y) && y >= lo && y == std::floor(y);
}

// Renormalized form: inflation applied before truncation, so the observed
// pmf is [omega * I{y=1} + (1 - omega) * P(y)] / (1 - (1 - omega) * P(0)).

class OiztPoisson final : public CountFamily {
public:
  OiztPoisson(Link lambda_link, Link omega_link)
      : CountFamily("oiztpoisson", {"lambda", "omega"},
                    {lambda_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double em = std::exp(-lam);
      const double s = 1.0 - (1.0 - omega) * em;
      if (y[k] == 1.0) {
        ll += w[k] * (std::log(omega + (1.0 - omega) * lam * em) -
                      std::log(s));
      } else {
        ll += w[k] * (std::log1p(-omega) +
                      detail::poisson_logpmf(y[k], lam) - std::log(s));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double domega = link_inv(link(1), eta(k, 1), 1);
      const double em = std::exp(-lam);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      const double d = omega + (1.0 - omega) * lam * em;
      const double s = 1.0 - (1.0 - omega) * em;
      const double t = omega + (1.0 - omega) * em;
      u(k, 0) = (z * t / d + (1.0 - z) * y[k] / lam - 1.0 / s) * dlam;
      u(k, 1) = (z * (1.0 - lam * em) / d - em / s -
                 (1.0 - z) / (1.0 - omega)) *
                domega;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    (void)y;
    Eigen::MatrixXd blocks(eta.rows(), 4);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double domega = link_inv(link(1), eta(k, 1), 1);
      const double em = std::exp(-lam);
      const double d = omega + (1.0 - omega) * lam * em;
      const double s = 1.0 - (1.0 - omega) * em;
      const double t = omega + (1.0 - omega) * em;
      const double zb = d / s;
      const double ey = (omega + (1.0 - omega) * lam) / s;
      const double xx = ey - zb;
      const double om1 = 1.0 - omega;
      const double g00 = (-zb * (1.0 - lam * em) * (1.0 - lam * em) /
                              (d * d) +
                          em * em / (s * s) - (1.0 - zb) / (om1 * om1)) *
                         domega * domega;
      const double g01 = (zb * (1.0 - em) / d -
                          zb * (1.0 - lam * em) * t / (d * d) +
                          em / (s * s)) *
                         domega * dlam;
      const double g11 = (1.0 / (s * s) + omega * zb / d -
                          zb * t * t / (d * d) - 1.0 / s -
                          xx / (lam * lam)) *
                         dlam * dlam;
      blocks(k, 0) = -g11;
      blocks(k, 1) = -g01;
      blocks(k, 2) = -g01;
      blocks(k, 3) = -g00;
    }
    return blocks;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double em = std::exp(-lam);
    const double d = omega + (1.0 - omega) * lam * em;
    const double s = 1.0 - (1.0 - omega) * em;
    if (truncated) {
      if (y == 1.0) return d / s;
      return (1.0 - omega) * std::exp(detail::poisson_logpmf(y, lam)) / s;
    }
    if (y == 0.0) return (1.0 - omega) * em;
    if (y == 1.0) return d;
    return (1.0 - omega) * std::exp(detail::poisson_logpmf(y, lam));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double mu = omega + (1.0 - omega) * lam;
    const double ey2 = omega + (1.0 - omega) * (lam + lam * lam);
    if (!truncated) return {mu, ey2 - mu * mu};
    const double s = 1.0 - (1.0 - omega) * std::exp(-lam);
    const double mu_t = mu / s;
    return {mu_t, ey2 / s - mu_t * mu_t};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    return 1.0 / (1.0 - (1.0 - omega) * std::exp(-lam));
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double domega = link_inv(link(1), eta[1], 1);
    const double em = std::exp(-lam);
    const double s = 1.0 - (1.0 - omega) * em;
    Eigen::RowVectorXd g(2);
    g[0] = dlam * (omega - 1.0) * em / (s * s);
    g[1] = -domega * em / (s * s);
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_poisson(y);
  }
};

class OiztGeom final : public CountFamily {
public:
  OiztGeom(Link lambda_link, Link omega_link)
      : CountFamily("oiztgeom", {"lambda", "omega"},
                    {lambda_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      if (y[k] == 1.0) {
        const double num = omega * (lam * lam + lam + 1.0) + lam;
        const double den = (1.0 + lam) * (lam + omega);
        ll += w[k] * (std::log(num) - std::log(den));
      } else {
        ll += w[k] * (std::log1p(-omega) + y[k] * std::log(lam) -
                      y[k] * std::log1p(lam) - std::log(lam + omega));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double domega = link_inv(link(1), eta(k, 1), 1);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      const double lp1 = 1.0 + lam;
      const double num = omega * (lam * lam + lam + 1.0) + lam;
      u(k, 0) = (z * (omega - 1.0) * lam * (omega * (2.0 + lam) + lam) /
                     (lp1 * (lam + omega) * num) +
                 (1.0 - z) * (y[k] / lam - y[k] / lp1 -
                              1.0 / (omega + lam))) *
                dlam;
      u(k, 1) = (z * lp1 * lam * lam / ((omega + lam) * num) -
                 (1.0 - z) * lp1 / ((1.0 - omega) * (omega + lam))) *
                domega;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    (void)y;
    Eigen::MatrixXd blocks(eta.rows(), 4);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double domega = link_inv(link(1), eta(k, 1), 1);
      const double lp1 = 1.0 + lam;
      const double l2 = lam * lam;
      const double num = omega * (l2 + lam + 1.0) + lam;
      const double den = lp1 * (lam + omega);
      const double zb = num / den;
      const double ey = (lam + omega - lam * omega) * lp1 / (lam + omega);
      const double xx = ey - zb;
      const double om1 = 1.0 - omega;
      const double g00 = (1.0 / ((lam + omega) * (lam + omega)) -
                          zb * (l2 + lam + 1.0) * (l2 + lam + 1.0) /
                              (num * num) -
                          (1.0 - zb) / (om1 * om1)) *
                         domega * domega;
      const double g01 =
          ((1.0 - zb) / ((omega + lam) * (omega + lam)) +
           zb * lam *
               (omega * omega * (lam * l2 + 2.0 * l2 + 4.0 * lam + 2.0) +
                omega * (4.0 * l2 + 2.0 * lam) + lam * l2) /
               (((omega + lam) * num) * ((omega + lam) * num))) *
          dlam * domega;
      const double g11 =
          (zb * ((omega + 2.0 * lam + 1.0) * (omega + 2.0 * lam + 1.0) /
                     (den * den) -
                 2.0 / den + 2.0 * omega / num -
                 (2.0 * omega * lam + omega + 1.0) *
                     (2.0 * omega * lam + omega + 1.0) / (num * num)) +
           xx / (lp1 * lp1) - xx / l2 +
           (1.0 - zb) / ((omega + lam) * (omega + lam))) *
          dlam * dlam;
      blocks(k, 0) = -g11;
      blocks(k, 1) = -g01;
      blocks(k, 2) = -g01;
      blocks(k, 3) = -g00;
    }
    return blocks;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double lp1 = 1.0 + lam;
    if (truncated) {
      if (y == 1.0)
        return (omega * (lam * lam + lam + 1.0) + lam) /
               (lp1 * (lam + omega));
      return (1.0 - omega) *
             std::exp(y * std::log(lam) - y * std::log1p(lam)) /
             (lam + omega);
    }
    if (y == 0.0) return (1.0 - omega) / lp1;
    if (y == 1.0) return omega + (1.0 - omega) * lam / (lp1 * lp1);
    return (1.0 - omega) * std::exp(detail::geom_logpmf(y, lam));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double lp1 = 1.0 + lam;
    const double mu = omega + (1.0 - omega) * lam;
    const double zb = (omega * (lam * lam + lam + 1.0) + lam) /
                      (lp1 * (lam + omega));
    const double ey2_t = zb + (1.0 - omega) * lam * lam *
                                  (2.0 * lam * lam + 5.0 * lam + 4.0) /
                                  (lp1 * (lam + omega));
    if (truncated) {
      const double mu_t = mu * lp1 / (lam + omega);
      return {mu_t, ey2_t - mu_t * mu_t};
    }
    const double s = (lam + omega) / lp1;
    return {mu, s * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    return (1.0 + lam) / (lam + omega);
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double domega = link_inv(link(1), eta[1], 1);
    const double d2 = (lam + omega) * (lam + omega);
    Eigen::RowVectorXd g(2);
    g[0] = dlam * (omega - 1.0) / d2;
    g[1] = -domega * (1.0 + lam) / d2;
    return g;
  }

  double ht_variance_term(double y,
                          const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    return (1.0 - omega) / (lam + omega);
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_geom(y);
  }
};

class OiztNegbin final : public CountFamily {
public:
  OiztNegbin(Link lambda_link, Link alpha_link, Link omega_link)
      : CountFamily("oiztnegbin", {"lambda", "alpha", "omega"},
                    {lambda_link, alpha_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double omega = link_inv(link(2), eta(k, 2));
      const double p0 = detail::nb_p0(lam, alpha);
      const double s = 1.0 - (1.0 - omega) * p0;
      if (y[k] == 1.0) {
        const double v = omega + (1.0 - omega) * detail::nb_p1(lam, alpha);
        ll += w[k] * (std::log(v) - std::log(s));
      } else {
        ll += w[k] * (std::log1p(-omega) +
                      detail::nb_logpmf(y[k], lam, alpha) - std::log(s));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 3);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double omega = link_inv(link(2), eta(k, 2));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dalpha = link_inv(link(1), eta(k, 1), 1);
      const double domega = link_inv(link(2), eta(k, 2), 1);
      const double yk = y[k];
      const double z = yk == 1.0 ? 1.0 : 0.0;
      const double al1 = alpha * lam + 1.0;
      const double lg = std::log(al1);
      const double p0 = detail::nb_p0(lam, alpha);
      const double p1 = detail::nb_p1(lam, alpha);
      const double s = 1.0 - (1.0 - omega) * p0;
      const double v = omega + (1.0 - omega) * p1;
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      const double dp0a = p0 * (al1 * lg - alpha * lam) /
                          (alpha * alpha * al1);
      const double dp1a = p1 * (al1 * lg - alpha * lam * (1.0 + alpha)) /
                          (alpha * alpha * al1);
      u(k, 0) = (z * (1.0 - omega) * p0 * (1.0 - lam) / (al1 * al1 * v) +
                 (1.0 - z) * (yk / lam - alpha * (yk + 1.0 / alpha) / al1) -
                 (1.0 - omega) * p0 / (al1 * s)) *
                dlam;
      u(k, 1) = ((1.0 - omega) * dp0a / s +
                 (1.0 - z) * (dig + lg / (alpha * alpha) -
                              lam * (1.0 / alpha + yk) / al1 + yk / alpha) +
                 z * (1.0 - omega) * dp1a / v) *
                dalpha;
      u(k, 2) = (z * (1.0 - p1) / v - p0 / s - (1.0 - z) / (1.0 - omega)) *
                domega;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double omega = link_inv(link(2), eta[2]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double p0 = detail::nb_p0(lam, alpha);
    const double s = 1.0 - (1.0 - omega) * p0;
    if (truncated) {
      if (y == 1.0)
        return (omega + (1.0 - omega) * detail::nb_p1(lam, alpha)) / s;
      return (1.0 - omega) * std::exp(detail::nb_logpmf(y, lam, alpha)) / s;
    }
    if (y == 0.0) return (1.0 - omega) * p0;
    if (y == 1.0) return omega + (1.0 - omega) * detail::nb_p1(lam, alpha);
    return (1.0 - omega) * std::exp(detail::nb_logpmf(y, lam, alpha));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double omega = link_inv(link(2), eta[2]);
    const double mu = omega + (1.0 - omega) * lam;
    const double ey2 =
        omega + (1.0 - omega) * (lam + (1.0 + alpha) * lam * lam);
    if (!truncated) return {mu, ey2 - mu * mu};
    const double s = 1.0 - (1.0 - omega) * detail::nb_p0(lam, alpha);
    const double mu_t = mu / s;
    return {mu_t, ey2 / s - mu_t * mu_t};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double omega = link_inv(link(2), eta[2]);
    return 1.0 / (1.0 - (1.0 - omega) * detail::nb_p0(lam, alpha));
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double omega = link_inv(link(2), eta[2]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double dalpha = link_inv(link(1), eta[1], 1);
    const double domega = link_inv(link(2), eta[2], 1);
    const double al1 = alpha * lam + 1.0;
    const double p0 = detail::nb_p0(lam, alpha);
    const double s = 1.0 - (1.0 - omega) * p0;
    Eigen::RowVectorXd g(3);
    g[0] = dlam * (omega - 1.0) * p0 / (al1 * s * s);
    g[1] = dalpha * (1.0 - omega) * p0 *
           (al1 * std::log(al1) - lam * alpha) /
           (alpha * alpha * al1 * s * s);
    g[2] = -domega * p0 / (s * s);
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_negbin(y);
  }
};

} // namespace

namespace detail {

void register_oizt_families() {
  add_family("oiztpoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "omega"});
    return std::make_unique<OiztPoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("oiztgeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "omega"});
    return std::make_unique<OiztGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("oiztnegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha", "omega"});
    return std::make_unique<OiztNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
}

} // namespace detail
} // namespace sscr
