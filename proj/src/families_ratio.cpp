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

// Ratio families model P[Y = 2] / P[Y = 1] under a Poisson assumption via a
// logistic regression on the rows with y in {1, 2}; other rows carry no
// likelihood information but still enter the population-size estimate.

class RatioFamily : public CountFamily {
public:
  using CountFamily::CountFamily;

  double support_max() const override { return 2.0; }

  double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd& eta,
                        const Eigen::ArrayXd& w) const override {
    double ll = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      if (y[k] != 1.0 && y[k] != 2.0) continue;
      const double lam = link_inv(link(0), eta(k, 0));
      const double lp = y[k] == 2.0 ? std::log(lam) : std::log(2.0);
      ll += w[k] * (lp - std::log(2.0 + lam));
    }
    return std::isfinite(ll) ? ll : -kInf;
  }

  Eigen::ArrayXd loglik_rows(const Eigen::ArrayXd& y,
                             const Eigen::MatrixXd& eta) const override {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      if (y[k] != 1.0 && y[k] != 2.0) continue;
      const double lam = link_inv(link(0), eta(k, 0));
      const double lp = y[k] == 2.0 ? std::log(lam) : std::log(2.0);
      out[k] = lp - std::log(2.0 + lam);
    }
    return out;
  }

  Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                        const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(y.size(), 1);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      if (y[k] != 1.0 && y[k] != 2.0) continue;
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      const double z = y[k] == 2.0 ? 1.0 : 0.0;
      u(k, 0) = ((z - 1.0) * lam + 2.0 * z) / (lam * (2.0 + lam)) * dlam;
    }
    return u;
  }

  Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                              const Eigen::MatrixXd& eta) const override {
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(eta.rows(), 1);
    for (Eigen::Index k = 0; k < eta.rows(); ++k) {
      if (y[k] != 1.0 && y[k] != 2.0) continue;
      const double lam = link_inv(link(0), eta(k, 0));
      const double dlam = link_inv(link(0), eta(k, 0), 1);
      blocks(k, 0) =
          2.0 / (lam * (2.0 + lam) * (2.0 + lam)) * dlam * dlam;
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

  double saturated_loglik(double y) const override {
    (void)y;
    return 0.0;
  }
};

class Chao final : public RatioFamily {
public:
  explicit Chao(Link lambda_link)
      : RatioFamily("chao", {"lambda"}, {lambda_link}) {}

  double ht_weight(double y, const Eigen::RowVectorXd& eta) const override {
    if (y != 1.0 && y != 2.0) return 1.0;
    const double lam = link_inv(link(0), eta[0]);
    return 1.0 + 1.0 / (lam + lam * lam / 2.0);
  }

  Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const override {
    Eigen::RowVectorXd g(1);
    if (y != 1.0 && y != 2.0) {
      g[0] = 0.0;
      return g;
    }
    const double lam = link_inv(link(0), eta[0]);
    const double dlam = link_inv(link(0), eta[0], 1);
    const double q = lam * lam / 2.0 + lam;
    g[0] = -dlam * (lam + 1.0) / (q * q);
    return g;
  }

  double ht_variance_term(double y,
                          const Eigen::RowVectorXd& eta) const override {
    if (y != 1.0 && y != 2.0) return 0.0;
    const double lam = link_inv(link(0), eta[0]);
    const double em = std::exp(-lam);
    const double prob = lam * em + lam * lam * em / 2.0;
    const double r = 1.0 + em / prob;
    return (1.0 - prob) * r * r;
  }
};

class Zelterman final : public RatioFamily {
public:
  explicit Zelterman(Link lambda_link)
      : RatioFamily("zelterman", {"lambda"}, {lambda_link}) {}

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
};

} // namespace

namespace detail {

void register_ratio_families() {
  add_family("chao", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<Chao>(
        pick_link(o, "lambda", Link::loghalf, {Link::loghalf}));
  });
  add_family("zelterman", [](const std::map<std::string, Link>& o) {
    check_link_keys(o, {"lambda"});
    return std::make_unique<Zelterman>(
        pick_link(o, "lambda", Link::loghalf, {Link::loghalf}));
  });
}

} // namespace detail
} // namespace sscr
