#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>
#include <Eigen/Dense>

#include "sscr/links.hpp"

namespace sscr {

// One count-data family: the truncated likelihood seen by the fitter plus the
// quantities needed for Horvitz-Thompson estimation, diagnostics and
// simulation. Linear predictors are stored as an n x p matrix eta whose
// columns follow eta_names(); each column has its own link.
class CountFamily {
public:
  CountFamily(std::string name, std::vector<std::string> eta_names,
              std::vector<Link> links);
  virtual ~CountFamily() = default;

  const std::string& name() const { return name_; }
  int n_params() const { return static_cast<int>(links_.size()); }
  const std::vector<std::string>& eta_names() const { return eta_names_; }
  Link link(int j) const { return links_[static_cast<size_t>(j)]; }

  // smallest count an observed unit may carry (2 for the zero-one-truncated
  // families, 1 otherwise)
  virtual double support_min() const { return 1.0; }
  // largest count drawn by simulate (finite only for chao and zelterman)
  virtual double support_max() const;
  virtual void validate(const Eigen::ArrayXd& y) const;

  // weighted log likelihood of the observed (truncated) sample
  virtual double log_likelihood(const Eigen::ArrayXd& y,
                                const Eigen::MatrixXd& eta,
                                const Eigen::ArrayXd& w) const = 0;

  // per-row unweighted log likelihood, defaults to the truncated log pmf
  virtual Eigen::ArrayXd loglik_rows(const Eigen::ArrayXd& y,
                                     const Eigen::MatrixXd& eta) const;

  // per-row d loglik / d eta, without prior weights (n x p)
  virtual Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                                const Eigen::MatrixXd& eta) const = 0;

  // per-row expected information in eta space, without prior weights; row k
  // holds the p x p block flattened column-major (n x p*p)
  virtual Eigen::MatrixXd information(const Eigen::ArrayXd& y,
                                      const Eigen::MatrixXd& eta) const;

  // probability of a single count, truncated to the observable support or not
  virtual double pmf(double y, const Eigen::RowVectorXd& eta,
                     bool truncated) const = 0;

  // mean and variance of the truncated or untruncated count
  virtual std::pair<double, double> moments(const Eigen::RowVectorXd& eta,
                                            bool truncated) const;

  // Horvitz-Thompson weight of one observed unit, 1 / P[unit observed]
  virtual double ht_weight(double y, const Eigen::RowVectorXd& eta) const = 0;
  virtual Eigen::RowVectorXd ht_weight_gradient(
      double y, const Eigen::RowVectorXd& eta) const;
  // per-unit contribution to the observation-noise part of var(N hat)
  virtual double ht_variance_term(double y,
                                  const Eigen::RowVectorXd& eta) const;

  // per-observation saturated log likelihood used by deviance residuals
  virtual double saturated_loglik(double y) const;

  virtual double simulate_one(const Eigen::RowVectorXd& eta, bool truncated,
                              std::mt19937_64& rng) const;
  Eigen::ArrayXd simulate(const Eigen::MatrixXd& eta, bool truncated,
                          std::mt19937_64& rng) const;

private:
  std::string name_;
  std::vector<std::string> eta_names_;
  std::vector<Link> links_;
};

// Registry of families constructible by name. Link overrides are keyed by
// parameter name ("lambda", "omega", "pi", "alpha"); omitted parameters keep
// their default links. Registering a name twice throws.
using FamilyFactory =
    std::function<std::unique_ptr<CountFamily>(const std::map<std::string, Link>&)>;

void register_family(const std::string& name, FamilyFactory factory);
std::unique_ptr<CountFamily> make_family(
    const std::string& name, const std::map<std::string, Link>& links = {});
std::vector<std::string> registered_families();

} // namespace sscr
