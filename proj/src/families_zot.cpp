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

class ZotPoisson final : public CountFamily {
public:
  explicit ZotPoisson(Link lambda_link)
      : CountFamily("zotpoisson", {"lambda"}, {lambda_link}) {}

  double support_min() const override { return 2.0; }

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double em = std::exp(-lam);
      const double tail = 1.0 - em - lam * em;
      if (tail <= 0.0) return -kInf;
      ll += w[k] * (detail::poisson_logpmf(y[k], lam) - std::log(tail));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 1);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double em = std::exp(-lam);
      // lambda / (e^lam - lam - 1), written overflow-safe
      const double frac = lam * em / (1.0 - (lam + 1.0) * em);
      u(k, 0) = (-frac + y[k] / lam - 1.0) * dlam;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    (void)y;
    Eigen::MatrixXd blocks(eta.rows(), 1);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double em = std::exp(-lam);
      const double d = 1.0 - (lam + 1.0) * em;
      const double mu = lam * (1.0 - em) / d;
      const double a = (lam - mu) + ((mu - 1.0) * lam + mu) * em;
      const double t1 = -((lam - mu) + 1.0 + (mu - 1.0) * em) / (lam * d);
      const double t2 = a / (lam * lam * d);
      const double t3 = (1.0 - em) * a / (lam * d * d);
      blocks(k, 0) = -(t1 + t2 + t3) * dlam * dlam;
    }
    return blocks;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    if (!count_in_support(y, truncated ? 2.0 : 0.0)) return 0.0;
    double lp = detail::poisson_logpmf(y, lam);
    if (truncated) {
      const double em = std::exp(-lam);
      lp -= std::log(1.0 - em - lam * em);
    }
    return std::exp(lp);
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    if (!truncated) return {lam, lam};
    const double em = std::exp(-lam);
    const double d = 1.0 - em - lam * em;
    const double mu = lam * (1.0 - em) / d;
    const double m2 = (lam + lam * lam - lam * em) / d;
    return {mu, m2 - mu * mu};
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
    const double d = 1.0 - (lam + 1.0) * em;
    Eigen::RowVectorXd g(1);
    g[0] = -dlam * (em - em * em) / (d * d);
    return g;
  }

  double saturated_loglik(double y) const override {
    return detail::zot_sat_poisson(y);
  }
};

class ZotGeom final : public CountFamily {
public:
  explicit ZotGeom(Link lambda_link)
      : CountFamily("zotgeom", {"lambda"}, {lambda_link}) {}

  double support_min() const override { return 2.0; }

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      if (lam <= 0.0) return -kInf;
      ll += w[k] * ((y[k] - 2.0) * std::log(lam) -
                    (y[k] - 1.0) * std::log1p(lam));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 1);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      u(k, 0) = -(lam - y[k] + 2.0) / (lam * lam + lam) * dlam;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    (void)y;
    Eigen::MatrixXd blocks(eta.rows(), 1);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      blocks(k, 0) = dlam * dlam / (lam * (lam + 1.0));
    }
    return blocks;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    if (!count_in_support(y, truncated ? 2.0 : 0.0)) return 0.0;
    if (truncated)
      return std::exp((y - 2.0) * std::log(lam) -
                      (y - 1.0) * std::log1p(lam));
    return std::exp(detail::geom_logpmf(y, lam));
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    return {truncated ? 2.0 + lam : lam, lam * (1.0 + lam)};
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
    Eigen::RowVectorXd g(1);
    g[0] = -dlam * (lam + 2.0) / (lam * lam * lam);
    return g;
  }

  double saturated_loglik(double y) const override {
    return detail::zot_sat_geom(y);
  }
};

class ZotNegbin final : public CountFamily {
public:
  ZotNegbin(Link lambda_link, Link alpha_link)
      : CountFamily("zotnegbin", {"lambda", "alpha"},
                    {lambda_link, alpha_link}) {}

  double support_min() const override { return 2.0; }

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double tail =
          1.0 - detail::nb_p0(lam, alpha) - detail::nb_p1(lam, alpha);
      if (tail <= 0.0) return -kInf;
      ll += w[k] * (detail::nb_logpmf(y[k], lam, alpha) - std::log(tail));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 2);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double dalpha = link_inv(link(1), eta(k, 1), 1);
      const double yk = y[k];
      const double a1 = alpha * lam + 1.0;
      const double lg = std::log(a1);
      const double p0 = detail::nb_p0(lam, alpha);
      const double p1 = detail::nb_p1(lam, alpha);
      const double tail = 1.0 - p0 - p1;
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      u(k, 0) = (yk / lam - alpha * (yk + 1.0 / alpha) / a1 -
                 (1.0 + alpha) * lam * p0 / (a1 * a1 * tail)) *
                dlam;
      const double dp0 = (lg / (alpha * alpha) - lam / (alpha * a1)) * p0;
      const double dp1 =
          p1 * (lg / (alpha * alpha) - lam * (1.0 + alpha) / (alpha * a1));
      u(k, 1) = (yk / alpha + dig + lg / (alpha * alpha) -
                 lam * (1.0 / alpha + yk) / a1 + (dp0 + dp1) / tail) *
                dalpha;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 2.0 : 0.0)) return 0.0;
    double lp = detail::nb_logpmf(y, lam, alpha);
    if (truncated) {
      const double tail =
          1.0 - detail::nb_p0(lam, alpha) - detail::nb_p1(lam, alpha);
      if (tail <= 0.0) return 0.0;
      lp -= std::log(tail);
    }
    return std::exp(lp);
  }

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    (void)y;
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    const double p1 = detail::nb_p1(lam, alpha);
    return (1.0 - p1) /
           (1.0 - detail::nb_p0(lam, alpha) - p1);
  }

  double saturated_loglik(double y) const override {
    return detail::zot_sat_negbin(y);
  }
};

} // namespace

namespace detail {

void register_zot_families() {
  add_family("zotpoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<ZotPoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}));
  });
  add_family("zotgeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<ZotGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}));
  });
  add_family("zotnegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha"});
    return std::make_unique<ZotNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}));
  });
}

} // namespace detail
} // namespace sscr
