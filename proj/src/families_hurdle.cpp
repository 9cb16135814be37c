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

// ztHurdle* families truncate first and then split mass between y = 1 and
// the two-plus tail; Hurdlezt* families hurdle the untruncated counts at
// y = 1 and truncate afterwards.

class ZtHurdlePoisson final : public CountFamily {
public:
  ZtHurdlePoisson(Link lambda_link, Link pi_link)
      : CountFamily("ztHurdlepoisson", {"lambda", "pi"},
                    {lambda_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      if (y[k] == 1.0) {
        ll += w[k] * std::log(pi);
      } else {
        const double em = std::exp(-lam);
        const double tail = 1.0 - em - lam * em;
        if (tail <= 0.0) return -kInf;
        ll += w[k] * (std::log1p(-pi) +
                      detail::poisson_logpmf(y[k], lam) - std::log(tail));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dpi = link_inv(link(1), eta(k, 1), 1);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      const double em = std::exp(-lam);
      const double tail = 1.0 - em - lam * em;
      u(k, 0) = (1.0 - z) *
                (y[k] / lam - 1.0 - lam * em / tail) * dlam;
      u(k, 1) = (z / pi - (1.0 - z) / (1.0 - pi)) * dpi;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double em = std::exp(-lam);
    const double tail = 1.0 - em - lam * em;
    if (truncated) {
      if (y == 1.0) return pi;
      return (1.0 - pi) *
             std::exp(detail::poisson_logpmf(y, lam) - std::log(tail));
    }
    const double pnot1 = 1.0 - lam * em;
    if (y == 0.0) return em / pnot1;
    if (y == 1.0) return pi * tail / pnot1;
    return (1.0 - pi) * std::exp(detail::poisson_logpmf(y, lam)) / pnot1;
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double em = std::exp(-lam);
    const double tail = 1.0 - em - lam * em;
    const double mu_t = pi + (1.0 - pi) * lam * (1.0 - em) / tail;
    const double ey2_t =
        pi + (1.0 - pi) * (lam + lam * lam - lam * em) / tail;
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double pobs = tail / (1.0 - lam * em);
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double em = std::exp(-lam);
    return (1.0 - lam * em) / (1.0 - em - lam * em);
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double em = std::exp(-lam);
    const double tail = 1.0 - em - lam * em;
    Eigen::RowVectorXd g(2);
    g[0] = -dlam * (em - em * em) / (tail * tail);
    g[1] = 0.0;
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_poisson(y);
  }
};

class ZtHurdleGeom final : public CountFamily {
public:
  ZtHurdleGeom(Link lambda_link, Link pi_link)
      : CountFamily("ztHurdlegeom", {"lambda", "pi"},
                    {lambda_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      if (y[k] == 1.0) {
        ll += w[k] * std::log(pi);
      } else {
        ll += w[k] * (std::log1p(-pi) + (y[k] - 2.0) * std::log(lam) -
                      (y[k] - 1.0) * std::log1p(lam));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dpi = link_inv(link(1), eta(k, 1), 1);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      u(k, 0) = (1.0 - z) *
                ((y[k] - 2.0) / lam - (y[k] - 1.0) / (1.0 + lam)) * dlam;
      u(k, 1) = (z / pi - (1.0 - z) / (1.0 - pi)) * dpi;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    if (truncated) {
      if (y == 1.0) return pi;
      return (1.0 - pi) * std::exp((y - 2.0) * std::log(lam) -
                                   (y - 1.0) * std::log1p(lam));
    }
    const double c = lam * lam + lam + 1.0;
    if (y == 0.0) return (1.0 + lam) / c;
    if (y == 1.0) return pi * lam * lam / c;
    return (1.0 - pi) * std::exp(detail::geom_logpmf(y, lam)) *
           (1.0 + lam) * (1.0 + lam) / c;
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double mu_t = pi + (1.0 - pi) * (2.0 + lam);
    const double ey2_t =
        pi + (1.0 - pi) *
                 (lam * lam + lam + (2.0 + lam) * (2.0 + lam));
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double pobs = lam * lam / (lam * lam + lam + 1.0);
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    return (lam * lam + lam + 1.0) / (lam * lam);
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double dlam = link_inv(link(0), eta[0], 1);
    Eigen::RowVectorXd g(2);
    g[0] = -dlam * (lam + 2.0) / (lam * lam * lam);
    g[1] = 0.0;
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_geom(y);
  }
};

class ZtHurdleNegbin final : public CountFamily {
public:
  ZtHurdleNegbin(Link lambda_link, Link alpha_link, Link pi_link)
      : CountFamily("ztHurdlenegbin", {"lambda", "alpha", "pi"},
                    {lambda_link, alpha_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double pi = link_inv(link(2), eta(k, 2));
      if (y[k] == 1.0) {
        ll += w[k] * std::log(pi);
      } else {
        const double tail = 1.0 - detail::nb_p0(lam, alpha) -
                            detail::nb_p1(lam, alpha);
        if (tail <= 0.0) return -kInf;
        ll += w[k] * (std::log1p(-pi) +
                      detail::nb_logpmf(y[k], lam, alpha) - std::log(tail));
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
      const double pi = link_inv(link(2), eta(k, 2));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dalpha = link_inv(link(1), eta(k, 1), 1);
      const double dpi = link_inv(link(2), eta(k, 2), 1);
      const double yk = y[k];
      const double z = yk == 1.0 ? 1.0 : 0.0;
      const double al1 = alpha * lam + 1.0;
      const double lg = std::log(al1);
      const double p0 = detail::nb_p0(lam, alpha);
      const double p1 = detail::nb_p1(lam, alpha);
      const double tail = 1.0 - p0 - p1;
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      const double dp0 = p0 * (al1 * lg - alpha * lam) /
                         (alpha * alpha * al1);
      const double dp1 = p1 * (al1 * lg - alpha * lam * (1.0 + alpha)) /
                         (alpha * alpha * al1);
      u(k, 0) = (1.0 - z) *
                (yk / lam - alpha * (yk + 1.0 / alpha) / al1 -
                 (1.0 + alpha) * lam * p0 / (al1 * al1 * tail)) *
                dlam;
      u(k, 1) = (1.0 - z) *
                (yk / alpha + dig + lg / (alpha * alpha) -
                 lam * (1.0 / alpha + yk) / al1 + (dp0 + dp1) / tail) *
                dalpha;
      u(k, 2) = (z / pi - (1.0 - z) / (1.0 - pi)) * dpi;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double pi = link_inv(link(2), eta[2]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double p0 = detail::nb_p0(lam, alpha);
    const double p1 = detail::nb_p1(lam, alpha);
    if (truncated) {
      if (y == 1.0) return pi;
      return (1.0 - pi) * std::exp(detail::nb_logpmf(y, lam, alpha)) /
             (1.0 - p0 - p1);
    }
    if (y == 0.0) return p0 / (1.0 - p1);
    if (y == 1.0) return pi * (1.0 - p0 - p1) / (1.0 - p1);
    return (1.0 - pi) * std::exp(detail::nb_logpmf(y, lam, alpha)) /
           (1.0 - p1);
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double pi = link_inv(link(2), eta[2]);
    const double p0 = detail::nb_p0(lam, alpha);
    const double p1 = detail::nb_p1(lam, alpha);
    const double tail = 1.0 - p0 - p1;
    const double mu_t = pi + (1.0 - pi) * (lam - p1) / tail;
    const double ey2_t =
        pi + (1.0 - pi) * (lam + (1.0 + alpha) * lam * lam - p1) / tail;
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double pobs = tail / (1.0 - p1);
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double p1 = detail::nb_p1(lam, alpha);
    return (1.0 - p1) / (1.0 - detail::nb_p0(lam, alpha) - p1);
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_negbin(y);
  }
};

class HurdleZtPoisson final : public CountFamily {
public:
  HurdleZtPoisson(Link lambda_link, Link pi_link)
      : CountFamily("Hurdleztpoisson", {"lambda", "pi"},
                    {lambda_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double em = std::exp(-lam);
      const double denom = 1.0 - (1.0 - pi) * em - lam * em;
      if (denom <= 0.0) return -kInf;
      if (y[k] == 1.0) {
        ll += w[k] * (std::log(pi) + std::log1p(-lam * em) -
                      std::log(denom));
      } else {
        ll += w[k] * (std::log1p(-pi) +
                      detail::poisson_logpmf(y[k], lam) - std::log(denom));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dpi = link_inv(link(1), eta(k, 1), 1);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      const double em = std::exp(-lam);
      const double denom = 1.0 - (1.0 - pi) * em - lam * em;
      u(k, 0) = (-(lam * em + (1.0 - pi) * em - em) / denom +
                 z * (lam * em - em) / (1.0 - lam * em) +
                 (1.0 - z) * (y[k] / lam - 1.0)) *
                dlam;
      u(k, 1) = (z / pi - (1.0 - z) / (1.0 - pi) - em / denom) * dpi;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double em = std::exp(-lam);
    const double pnot1 = 1.0 - lam * em;
    if (truncated) {
      const double denom = 1.0 - (1.0 - pi) * em - lam * em;
      if (y == 1.0) return pi * pnot1 / denom;
      return (1.0 - pi) * std::exp(detail::poisson_logpmf(y, lam)) / denom;
    }
    if (y == 0.0) return (1.0 - pi) * em / pnot1;
    if (y == 1.0) return pi;
    return (1.0 - pi) * std::exp(detail::poisson_logpmf(y, lam)) / pnot1;
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double em = std::exp(-lam);
    const double pnot1 = 1.0 - lam * em;
    const double m1 = lam - lam * em;
    const double m2 = lam + lam * lam - lam * em;
    if (truncated) {
      const double denom = 1.0 - (1.0 - pi) * em - lam * em;
      const double mu_t = (pi * pnot1 + (1.0 - pi) * m1) / denom;
      const double ey2_t = (pi * pnot1 + (1.0 - pi) * m2) / denom;
      return {mu_t, ey2_t - mu_t * mu_t};
    }
    const double mu = pi + (1.0 - pi) * m1 / pnot1;
    const double ey2 = pi + (1.0 - pi) * m2 / pnot1;
    return {mu, ey2 - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double em = std::exp(-lam);
    return (1.0 - lam * em) / (1.0 - (1.0 - pi) * em - lam * em);
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double dpi = link_inv(link(1), eta[1], 1);
    const double em = std::exp(-lam);
    const double denom = 1.0 - (1.0 - pi) * em - lam * em;
    Eigen::RowVectorXd g(2);
    g[0] = dlam * (pi - 1.0) * (em - em * em) / (denom * denom);
    g[1] = -dpi * (1.0 - lam * em) * em / (denom * denom);
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_poisson(y);
  }
};

class HurdleZtGeom final : public CountFamily {
public:
  HurdleZtGeom(Link lambda_link, Link pi_link)
      : CountFamily("Hurdleztgeom", {"lambda", "pi"},
                    {lambda_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double kk = lam * lam + pi * (lam + 1.0);
      if (y[k] == 1.0) {
        ll += w[k] * (std::log(pi) + std::log(lam * lam + lam + 1.0) -
                      std::log(kk));
      } else {
        ll += w[k] * (std::log1p(-pi) + y[k] * std::log(lam) -
                      (y[k] - 1.0) * std::log1p(lam) - std::log(kk));
      }
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dpi = link_inv(link(1), eta(k, 1), 1);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      const double c = lam * lam + lam + 1.0;
      const double kk = lam * lam + pi * (lam + 1.0);
      u(k, 0) = (z * (2.0 * lam + 1.0) / c +
                 (1.0 - z) * (y[k] / lam - (y[k] - 1.0) / (1.0 + lam)) -
                 (2.0 * lam + pi) / kk) *
                dlam;
      u(k, 1) = (z / pi - (1.0 - z) / (1.0 - pi) - (1.0 + lam) / kk) * dpi;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    (void)y;
    Eigen::MatrixXd blocks(eta.rows(), 4);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double pi = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dpi = link_inv(link(1), eta(k, 1), 1);
      const double c = lam * lam + lam + 1.0;
      const double kk = lam * lam + pi * (lam + 1.0);
      const double zb = pi * c / kk;
      const double mu =
          (pi * c + (1.0 - pi) * (2.0 + lam) * lam * lam) / kk;
      const double yy = mu - zb;
      const double lp1 = 1.0 + lam;
      const double g00 = (-zb / (pi * pi) -
                          (1.0 - zb) / ((1.0 - pi) * (1.0 - pi)) +
                          (lp1 / kk) * (lp1 / kk)) *
                         dpi * dpi;
      const double g01 = lam * (lam + 2.0) / (kk * kk) * dlam * dpi;
      const double g11 =
          ((yy - 1.0 + zb) / (lp1 * lp1) - yy / (lam * lam) +
           zb * (2.0 * c - (2.0 * lam + 1.0) * (2.0 * lam + 1.0)) /
               (c * c) +
           (2.0 * lam + pi) * (2.0 * lam + pi) / (kk * kk) - 2.0 / kk) *
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
    const double pi = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double c = lam * lam + lam + 1.0;
    if (truncated) {
      const double kk = lam * lam + pi * (lam + 1.0);
      if (y == 1.0) return pi * c / kk;
      return (1.0 - pi) *
             std::exp(y * std::log(lam) - (y - 1.0) * std::log1p(lam)) / kk;
    }
    if (y == 0.0) return (1.0 - pi) * (1.0 + lam) / c;
    if (y == 1.0) return pi;
    return (1.0 - pi) *
           std::exp(y * std::log(lam) - (y - 1.0) * std::log1p(lam)) / c;
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double c = lam * lam + lam + 1.0;
    const double lp1 = 1.0 + lam;
    const double m1 = lam * lam * (lam + 2.0);
    const double m2 = (2.0 * lam * lam + lam) * lp1 * lp1 - lam;
    if (truncated) {
      const double kk = lam * lam + pi * lp1;
      const double mu_t = (pi * c + (1.0 - pi) * m1) / kk;
      const double ey2_t = (pi * c + (1.0 - pi) * m2) / kk;
      return {mu_t, ey2_t - mu_t * mu_t};
    }
    const double mu = pi + (1.0 - pi) * m1 / c;
    const double ey2 = pi + (1.0 - pi) * m2 / c;
    return {mu, ey2 - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    return (lam * lam + lam + 1.0) / (lam * lam + pi * (lam + 1.0));
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double pi = link_inv(link(1), eta[1]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double dpi = link_inv(link(1), eta[1], 1);
    const double kk = lam * lam + pi * (lam + 1.0);
    Eigen::RowVectorXd g(2);
    g[0] = dlam * (pi - 1.0) * lam * (lam + 2.0) / (kk * kk);
    g[1] = -dpi * (lam * lam + lam + 1.0) * (lam + 1.0) / (kk * kk);
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_geom(y);
  }
};

class HurdleZtNegbin final : public CountFamily {
public:
  HurdleZtNegbin(Link lambda_link, Link alpha_link, Link pi_link)
      : CountFamily("Hurdleztnegbin", {"lambda", "alpha", "pi"},
                    {lambda_link, alpha_link, pi_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double pi = link_inv(link(2), eta(k, 2));
      const double p0 = detail::nb_p0(lam, alpha);
      const double p1 = detail::nb_p1(lam, alpha);
      const double denom = 1.0 - (1.0 - pi) * p0 - p1;
      if (denom <= 0.0) return -kInf;
      if (y[k] == 1.0) {
        ll += w[k] * (std::log(pi) + std::log1p(-p1) - std::log(denom));
      } else {
        ll += w[k] * (std::log1p(-pi) +
                      detail::nb_logpmf(y[k], lam, alpha) -
                      std::log(denom));
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
      const double pi = link_inv(link(2), eta(k, 2));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dalpha = link_inv(link(1), eta(k, 1), 1);
      const double dpi = link_inv(link(2), eta(k, 2), 1);
      const double yk = y[k];
      const double z = yk == 1.0 ? 1.0 : 0.0;
      const double al1 = alpha * lam + 1.0;
      const double lg = std::log(al1);
      const double p0 = detail::nb_p0(lam, alpha);
      const double p1 = detail::nb_p1(lam, alpha);
      const double denom = 1.0 - (1.0 - pi) * p0 - p1;
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      const double dp0a = p0 * (al1 * lg - alpha * lam) /
                          (alpha * alpha * al1);
      const double dp1a = p1 * (al1 * lg - alpha * lam * (1.0 + alpha)) /
                          (alpha * alpha * al1);
      const double dp0l = -p0 / al1;
      const double dp1l = p0 * (1.0 - lam) / (al1 * al1);
      u(k, 0) = ((1.0 - z) * (yk / lam - (1.0 + alpha * yk) / al1) +
                 ((1.0 - pi) * dp0l + dp1l) / denom -
                 z * dp1l / (1.0 - p1)) *
                dlam;
      u(k, 1) = ((1.0 - z) * (dig + lg / (alpha * alpha) -
                              lam * (1.0 / alpha + yk) / al1 +
                              yk / alpha) -
                 z * dp1a / (1.0 - p1) +
                 ((1.0 - pi) * dp0a + dp1a) / denom) *
                dalpha;
      u(k, 2) = (z / pi - (1.0 - z) / (1.0 - pi) - p0 / denom) * dpi;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double pi = link_inv(link(2), eta[2]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double p0 = detail::nb_p0(lam, alpha);
    const double p1 = detail::nb_p1(lam, alpha);
    if (truncated) {
      const double denom = 1.0 - (1.0 - pi) * p0 - p1;
      if (y == 1.0) return pi * (1.0 - p1) / denom;
      return (1.0 - pi) * std::exp(detail::nb_logpmf(y, lam, alpha)) /
             denom;
    }
    if (y == 0.0) return (1.0 - pi) * p0 / (1.0 - p1);
    if (y == 1.0) return pi;
    return (1.0 - pi) * std::exp(detail::nb_logpmf(y, lam, alpha)) /
           (1.0 - p1);
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double pi = link_inv(link(2), eta[2]);
    const double p1 = detail::nb_p1(lam, alpha);
    const double m1 = lam - p1;
    const double m2 = lam + (1.0 + alpha) * lam * lam - p1;
    if (truncated) {
      const double denom =
          1.0 - (1.0 - pi) * detail::nb_p0(lam, alpha) - p1;
      const double mu_t =
          (pi * (1.0 - p1) + (1.0 - pi) * m1) / denom;
      const double ey2_t =
          (pi * (1.0 - p1) + (1.0 - pi) * m2) / denom;
      return {mu_t, ey2_t - mu_t * mu_t};
    }
    const double mu = pi + (1.0 - pi) * m1 / (1.0 - p1);
    const double ey2 = pi + (1.0 - pi) * m2 / (1.0 - p1);
    return {mu, ey2 - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double pi = link_inv(link(2), eta[2]);
    const double p1 = detail::nb_p1(lam, alpha);
    return (1.0 - p1) /
           (1.0 - (1.0 - pi) * detail::nb_p0(lam, alpha) - p1);
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zot_sat_negbin(y);
  }
};

} // namespace

namespace detail {

void register_hurdle_families() {
  add_family("ztHurdlepoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "pi"});
    return std::make_unique<ZtHurdlePoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("ztHurdlegeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "pi"});
    return std::make_unique<ZtHurdleGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("ztHurdlenegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha", "pi"});
    return std::make_unique<ZtHurdleNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("Hurdleztpoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "pi"});
    return std::make_unique<HurdleZtPoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("Hurdleztgeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "pi"});
    return std::make_unique<HurdleZtGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("Hurdleztnegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha", "pi"});
    return std::make_unique<HurdleZtNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}),
        pick_link(o, "pi", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
}

} // namespace detail
} // namespace sscr
