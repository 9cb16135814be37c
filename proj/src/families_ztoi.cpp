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

// Mixture form: inflation applied after truncation, so the observed pmf is
// omega * I{y=1} + (1 - omega) * (zero-truncated pmf).

class ZtoiPoisson final : public CountFamily {
public:
  ZtoiPoisson(Link lambda_link, Link omega_link)
      : CountFamily("ztoipoisson", {"lambda", "omega"},
                    {lambda_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      const double t1 = std::exp(-lam) / (1.0 - std::exp(-lam));
      if (y[k] == 1.0) {
        ll += w[k] * std::log(omega + (1.0 - omega) * lam * t1);
      } else {
        ll += w[k] * (std::log1p(-omega) +
                      detail::poisson_logpmf(y[k], lam) -
                      detail::log1mexp(lam));
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
      const double t1 = em / (1.0 - em);
      const double z = y[k] == 1.0 ? 1.0 : 0.0;
      u(k, 0) = (z * (1.0 - omega) * t1 * (1.0 - lam / (1.0 - em)) /
                     ((1.0 - omega) * lam * t1 + omega) +
                 (1.0 - z) * (y[k] / lam - 1.0 / (1.0 - em))) *
                dlam;
      u(k, 1) = (z * (1.0 - lam * t1) / (omega + (1.0 - omega) * lam * t1) -
                 (1.0 - z) / (1.0 - omega)) *
                domega;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    const double em = std::exp(-lam);
    const double zt1 = lam * em / (1.0 - em);
    if (truncated) {
      if (y == 1.0) return omega + (1.0 - omega) * zt1;
      return (1.0 - omega) *
             std::exp(detail::poisson_logpmf(y, lam) - detail::log1mexp(lam));
    }
    if (y == 0.0) return em;
    if (y == 1.0) return omega * (1.0 - em) + (1.0 - omega) * lam * em;
    return (1.0 - omega) * std::exp(detail::poisson_logpmf(y, lam));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double pobs = 1.0 - std::exp(-lam);
    const double mu_t = omega + (1.0 - omega) * lam / pobs;
    const double ey2_t = omega + (1.0 - omega) * (lam + lam * lam) / pobs;
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    return 1.0 / (1.0 - std::exp(-lam));
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double em = std::exp(-lam);
    Eigen::RowVectorXd g(2);
    g[0] = -dlam * em / ((1.0 - em) * (1.0 - em));
    g[1] = 0.0;
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_poisson(y);
  }
};

class ZtoiGeom final : public CountFamily {
public:
  ZtoiGeom(Link lambda_link, Link omega_link)
      : CountFamily("ztoigeom", {"lambda", "omega"},
                    {lambda_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double omega = link_inv(link(1), eta(k, 1));
      if (y[k] == 1.0) {
        ll += w[k] * std::log(omega + (1.0 - omega) / (1.0 + lam));
      } else {
        ll += w[k] * (std::log1p(-omega) + (y[k] - 1.0) * std::log(lam) -
                      y[k] * std::log1p(lam));
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
      const double lp1 = lam + 1.0;
      u(k, 0) = ((1.0 - z) * ((y[k] - 1.0) / lam - y[k] / lp1) -
                 z * (1.0 - omega) /
                     (lp1 * lp1 * ((1.0 - omega) / lp1 + omega))) *
                dlam;
      u(k, 1) = (lam * omega - z * lam - z + 1.0) /
                ((omega - 1.0) * (lam * omega + 1.0)) * domega;
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
      const double lp1 = lam + 1.0;
      const double zb = omega + (1.0 - omega) / lp1;
      const double xx = (1.0 - omega) * (lp1 - 1.0 / lp1);
      const double lo1 = lam * omega + 1.0;
      const double om1 = omega - 1.0;
      const double g00 =
          -(lam * lam * omega * omega +
            ((2.0 - 2.0 * zb) * lam - 2.0 * zb * lam * lam) * omega +
            zb * lam * lam - zb + 1.0) /
          (om1 * om1 * lo1 * lo1) * domega * domega;
      const double g01 = zb / (lo1 * lo1) * domega * dlam;
      const double mix = (1.0 - omega) / lp1 + omega;
      const double g11 =
          (2.0 * (1.0 - omega) * zb / (lp1 * lp1 * lp1 * mix) -
           (1.0 - omega) * (1.0 - omega) * zb /
               (lp1 * lp1 * lp1 * lp1 * mix * mix) +
           xx / (lp1 * lp1) - (xx - 1.0 + zb) / (lam * lam)) *
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
      if (y == 1.0) return omega + (1.0 - omega) / lp1;
      return (1.0 - omega) *
             std::exp((y - 1.0) * std::log(lam) - y * std::log1p(lam));
    }
    if (y == 0.0) return 1.0 / lp1;
    if (y == 1.0) return (lam / lp1) * (omega + (1.0 - omega) / lp1);
    return (1.0 - omega) * std::exp(detail::geom_logpmf(y, lam));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double omega = link_inv(link(1), eta[1]);
    const double lp1 = 1.0 + lam;
    const double mu_t = omega + (1.0 - omega) * lp1;
    const double ey2_t = omega + (1.0 - omega) * lp1 * (2.0 * lam + 1.0);
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double pobs = lam / lp1;
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    return (1.0 + lam) / lam;
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double dlam = link_inv(link(0), eta[0], 1);
    Eigen::RowVectorXd g(2);
    g[0] = -dlam / (lam * lam);
    g[1] = 0.0;
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_geom(y);
  }
};

class ZtoiNegbin final : public CountFamily {
public:
  ZtoiNegbin(Link lambda_link, Link alpha_link, Link omega_link)
      : CountFamily("ztoinegbin", {"lambda", "alpha", "omega"},
                    {lambda_link, alpha_link, omega_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double omega = link_inv(link(2), eta(k, 2));
      const double p0 = detail::nb_p0(lam, alpha);
      if (y[k] == 1.0) {
        const double zt1 = detail::nb_p1(lam, alpha) / (1.0 - p0);
        ll += w[k] * std::log(omega + (1.0 - omega) * zt1);
      } else {
        ll += w[k] * (std::log1p(-omega) +
                      detail::nb_logpmf(y[k], lam, alpha) -
                      std::log1p(-p0));
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
      const double mix = omega * (1.0 - p0) + (1.0 - omega) * p1;
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      u(k, 0) = (z * (omega - 1.0) * p0 * (lam - 1.0 + p0) /
                     (al1 * al1 * (1.0 - p0) * mix) -
                 (1.0 - z) * ((lam - yk) + yk * p0) /
                     (lam * al1 * (1.0 - p0))) *
                dlam;
      u(k, 1) = (z * (1.0 - omega) * lam * p0 *
                     (lg - lam * alpha * (1.0 + alpha) / al1 +
                      lam * alpha * alpha * p0 / al1) /
                     (alpha * alpha * al1 * (1.0 - p0) * mix) +
                 (1.0 - z) *
                     (dig + (al1 * lg + (yk - lam) * alpha -
                             yk * alpha * p0) /
                                (alpha * alpha * al1 * (1.0 - p0)))) *
                dalpha;
      u(k, 2) = (z * (1.0 - p0 - p1) /
                     (omega * (1.0 - p0 - p1) + p1) -
                 (1.0 - z) / (1.0 - omega)) *
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
    if (truncated) {
      if (y == 1.0)
        return omega + (1.0 - omega) * detail::nb_p1(lam, alpha) / (1.0 - p0);
      return (1.0 - omega) *
             std::exp(detail::nb_logpmf(y, lam, alpha) - std::log1p(-p0));
    }
    if (y == 0.0) return p0;
    if (y == 1.0)
      return omega * (1.0 - p0) + (1.0 - omega) * detail::nb_p1(lam, alpha);
    return (1.0 - omega) * std::exp(detail::nb_logpmf(y, lam, alpha));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double omega = link_inv(link(2), eta[2]);
    const double pobs = 1.0 - detail::nb_p0(lam, alpha);
    const double ey2 = lam + (1.0 + alpha) * lam * lam;
    const double mu_t = omega + (1.0 - omega) * lam / pobs;
    const double ey2_t = omega + (1.0 - omega) * ey2 / pobs;
    if (truncated) return {mu_t, ey2_t - mu_t * mu_t};
    const double mu = pobs * mu_t;
    return {mu, pobs * ey2_t - mu * mu};
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    return 1.0 / (1.0 - detail::nb_p0(lam, alpha));
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double dalpha = link_inv(link(1), eta[1], 1);
    const double al1 = alpha * lam + 1.0;
    const double p0 = detail::nb_p0(lam, alpha);
    const double denom = al1 * (1.0 - p0) * (1.0 - p0);
    Eigen::RowVectorXd g(3);
    g[0] = -dlam * p0 / denom;
    g[1] = dalpha * p0 * (al1 * std::log(al1) - lam * alpha) /
           (alpha * alpha * denom);
    g[2] = 0.0;
    return g;
  }

  double saturated_loglik(double y) const override {
    return y == 1.0 ? 0.0 : detail::zt_sat_negbin(y);
  }
};

} // namespace

namespace detail {

void register_ztoi_families() {
  add_family("ztoipoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "omega"});
    return std::make_unique<ZtoiPoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("ztoigeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "omega"});
    return std::make_unique<ZtoiGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
  add_family("ztoinegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha", "omega"});
    return std::make_unique<ZtoiNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}),
        pick_link(o, "omega", Link::logit,
                  {Link::logit, Link::cloglog, Link::probit}));
  });
}

} // namespace detail
} // namespace sscr
