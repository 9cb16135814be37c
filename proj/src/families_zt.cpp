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

class ZtPoisson final : public CountFamily {
public:
  explicit ZtPoisson(Link lambda_link)
      : CountFamily("ztpoisson", {"lambda"}, {lambda_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      ll += w[k] * (detail::poisson_logpmf(y[k], lam) - detail::log1mexp(lam));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 1);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      u(k, 0) = (y[k] / lam - 1.0 / (1.0 - std::exp(-lam))) * dlam;
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
      const double r = 1.0 / (1.0 - std::exp(-lam));
      blocks(k, 0) = r * (1.0 + 1.0 / lam - r) * dlam * dlam;
    }
    return blocks;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    double lp = detail::poisson_logpmf(y, lam);
    if (truncated) lp -= detail::log1mexp(lam);
    return std::exp(lp);
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    if (!truncated) return {lam, lam};
    const double mu = lam / (1.0 - std::exp(-lam));
    return {mu, mu * (lam + 1.0 - mu)};
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
    Eigen::RowVectorXd g(1);
    g[0] = -dlam * em / ((1.0 - em) * (1.0 - em));
    return g;
  }

  double saturated_loglik(double y) const override {
    return detail::zt_sat_poisson(y);
  }
};

class ZtGeom final : public CountFamily {
public:
  explicit ZtGeom(Link lambda_link)
      : CountFamily("ztgeom", {"lambda"}, {lambda_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      if (lam <= 0.0) return -kInf;
      ll += w[k] * ((y[k] - 1.0) * std::log(lam) -
                    y[k] * std::log1p(lam));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u(y.size(), 1);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      u(k, 0) = ((y[k] - 1.0) / lam - y[k] / (1.0 + lam)) * dlam;
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
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    double lp = detail::geom_logpmf(y, lam);
    if (truncated) lp -= std::log(lam) - std::log1p(lam);
    return std::exp(lp);
  }

  std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                    bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    return {truncated ? 1.0 + lam : lam, lam * (1.0 + lam)};
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
    Eigen::RowVectorXd g(1);
    g[0] = -dlam / (lam * lam);
    return g;
  }

  double saturated_loglik(double y) const override {
    return detail::zt_sat_geom(y);
  }
};

class ZtNegbin final : public CountFamily {
public:
  ZtNegbin(Link lambda_link, Link alpha_link)
      : CountFamily("ztnegbin", {"lambda", "alpha"},
                    {lambda_link, alpha_link}) {}

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double lam = link_inv(link(0), eta(k, 0));
      const double alpha = link_inv(link(1), eta(k, 1));
      const double p0 = detail::nb_p0(lam, alpha);
      ll += w[k] * (detail::nb_logpmf(y[k], lam, alpha) - std::log1p(-p0));
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
      const double al1 = alpha * lam + 1.0;
      const double p0 = detail::nb_p0(lam, alpha);
      const double dig =
          (-digamma(yk + 1.0 / alpha) + digamma(1.0 / alpha)) /
          (alpha * alpha);
      u(k, 0) = -((lam - yk) + yk * p0) /
                (lam * al1 * (1.0 - p0)) * dlam;
      u(k, 1) = (dig + (al1 * std::log(al1) + (yk - lam) * alpha -
                        yk * alpha * p0) /
                           (alpha * alpha * al1 * (1.0 - p0))) *
                dalpha;
    }
    return u;
  }

  double pmf(double y, const Eigen::RowVectorXd& eta,
             bool truncated) const override {
    const double lam = link_inv(link(0), eta[0]);
    const double alpha = link_inv(link(1), eta[1]);
    if (!count_in_support(y, truncated ? 1.0 : 0.0)) return 0.0;
    double lp = detail::nb_logpmf(y, lam, alpha);
    if (truncated) lp -= std::log1p(-detail::nb_p0(lam, alpha));
    return std::exp(lp);
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
    Eigen::RowVectorXd g(2);
    g[0] = -dlam * p0 / denom;
    g[1] = dalpha * p0 * (al1 * std::log(al1) - lam * alpha) /
           (alpha * alpha * denom);
    return g;
  }

  double saturated_loglik(double y) const override {
    return detail::zt_sat_negbin(y);
  }
};

} // namespace

namespace detail {

void register_zt_families() {
  add_family("ztpoisson", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<ZtPoisson>(
        pick_link(o, "lambda", Link::log, {Link::log}));
  });
  add_family("ztgeom", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<ZtGeom>(
        pick_link(o, "lambda", Link::log, {Link::log}));
  });
  add_family("ztnegbin", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda", "alpha"});
    return std::make_unique<ZtNegbin>(
        pick_link(o, "lambda", Link::log, {Link::log}),
        pick_link(o, "alpha", Link::log, {Link::log}));
  });
}

} // namespace detail
} // namespace sscr
