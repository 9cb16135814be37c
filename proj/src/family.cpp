#include "sscr/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "sscr/special.hpp"
#include "family_impl.hpp"

namespace sscr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nelder-Mead on an unconstrained objective, small dimension only
double nelder_mead_min(const std::function<double(const Eigen::VectorXd&)>& f,
                       Eigen::VectorXd x0, int max_iter) {
  const int p = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(static_cast<size_t>(p) + 1, x0);
  std::vector<double> fv(static_cast<size_t>(p) + 1);
  for (int j = 0; j < p; ++j) pts[static_cast<size_t>(j) + 1][j] += 0.5;
  for (size_t i = 0; i < pts.size(); ++i) fv[i] = f(pts[i]);

  auto order = [&] {
    for (size_t i = 1; i < pts.size(); ++i)
      for (size_t j = i; j > 0 && fv[j] < fv[j - 1]; --j) {
        std::swap(fv[j], fv[j - 1]);
        std::swap(pts[j], pts[j - 1]);
      }
  };
  order();

  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fv.back() - fv.front()) < 1e-12 * (1.0 + std::abs(fv.front())))
      break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
    for (size_t i = 0; i + 1 < pts.size(); ++i) centroid += pts[i];
    centroid /= static_cast<double>(p);

    Eigen::VectorXd xr = centroid + (centroid - pts.back());
    double fr = f(xr);
    if (fr < fv.front()) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts.back());
      double fe = f(xe);
      if (fe < fr) { pts.back() = xe; fv.back() = fe; }
      else         { pts.back() = xr; fv.back() = fr; }
    } else if (fr < fv[fv.size() - 2]) {
      pts.back() = xr;
      fv.back() = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (pts.back() - centroid);
      double fc = f(xc);
      if (fc < fv.back()) { pts.back() = xc; fv.back() = fc; }
      else {
        for (size_t i = 1; i < pts.size(); ++i) {
          pts[i] = pts.front() + 0.5 * (pts[i] - pts.front());
          fv[i] = f(pts[i]);
        }
      }
    }
    order();
  }
  return fv.front();
}

} // namespace

CountFamily::CountFamily(std::string name, std::vector<std::string> eta_names,
                         std::vector<Link> links)
    : name_(std::move(name)),
      eta_names_(std::move(eta_names)),
      links_(std::move(links)) {
  if (eta_names_.size() != links_.size())
    throw std::invalid_argument("family '" + name_ +
                                "': one link per linear predictor required");
}

double CountFamily::support_max() const { return kInf; }

void CountFamily::validate(const Eigen::ArrayXd& y) const {
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double v = y[k];
    if (!std::isfinite(v) || v != std::floor(v) || v < support_min()) {
      std::ostringstream msg;
      msg << "family '" << name_ << "' requires integer counts >= "
          << support_min() << "; found " << v << " at row " << (k + 1);
      throw std::invalid_argument(msg.str());
    }
  }
}

Eigen::MatrixXd CountFamily::information(const Eigen::ArrayXd& y,
                                         const Eigen::MatrixXd& eta) const {
  // exact expected information per row, E[s s^T] under the truncated count
  (void)y;
  const int p = n_params();
  const Eigen::Index n = eta.rows();
  Eigen::MatrixXd out(n, p * p);
  Eigen::ArrayXd yv(1);
  Eigen::MatrixXd one_eta(1, p);
  for (Eigen::Index k = 0; k < n; ++k) {
    one_eta.row(0) = eta.row(k);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    double mass = 0.0, mean = 0.0;
    for (double v = support_min(); v < 1e6; ++v) {
      const double pr = pmf(v, eta.row(k), true);
      if (std::isfinite(pr) && pr > 0.0) {
        yv[0] = v;
        const Eigen::VectorXd s = score(yv, one_eta).row(0);
        acc.noalias() += pr * (s * s.transpose());
        mass += pr;
        mean += v * pr;
      }
      if (mass > 1.0 - 1e-12 && v > mean / std::max(mass, 1e-300) + 10.0) break;
    }
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < p; ++i) out(k, j * p + i) = acc(i, j);
  }
  return out;
}

std::pair<double, double> CountFamily::moments(const Eigen::RowVectorXd& eta,
                                               bool truncated) const {
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  const double start = truncated ? support_min() : 0.0;
  for (double v = start; v < 1e6; ++v) {
    const double pr = pmf(v, eta, truncated);
    if (std::isfinite(pr) && pr > 0.0) {
      mass += pr;
      m1 += v * pr;
      m2 += v * v * pr;
    }
    if (mass > 1.0 - 1e-12 && v > m1 / std::max(mass, 1e-300) + 10.0) break;
  }
  return {m1, m2 - m1 * m1};
}

Eigen::RowVectorXd CountFamily::ht_weight_gradient(
    double y, const Eigen::RowVectorXd& eta) const {
  const int p = n_params();
  Eigen::RowVectorXd g(p);
  Eigen::RowVectorXd e = eta;
  for (int j = 0; j < p; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(eta[j]));
    e[j] = eta[j] + h;
    const double up = ht_weight(y, e);
    e[j] = eta[j] - h;
    const double dn = ht_weight(y, e);
    e[j] = eta[j];
    g[j] = (up - dn) / (2.0 * h);
  }
  return g;
}

double CountFamily::ht_variance_term(double y,
                                     const Eigen::RowVectorXd& eta) const {
  // (1 - P) / P^2 with P the observation probability
  const double w = ht_weight(y, eta);
  return w * (w - 1.0);
}

Eigen::ArrayXd CountFamily::loglik_rows(const Eigen::ArrayXd& y,
                                        const Eigen::MatrixXd& eta) const {
  const Eigen::Index n = y.size();
  Eigen::ArrayXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pr = pmf(y[k], eta.row(k), true);
    out[k] = (std::isfinite(pr) && pr > 0.0) ? std::log(pr) : -kInf;
  }
  return out;
}

double CountFamily::saturated_loglik(double y) const {
  const int p = n_params();
  Eigen::VectorXd start(p);
  for (int j = 0; j < p; ++j) {
    const std::string& nm = eta_names_[static_cast<size_t>(j)];
    double theta = 1.0;
    if (nm == "lambda") theta = std::max(y, 0.5);
    else if (nm == "omega" || nm == "pi") theta = 0.5;
    start[j] = link_fwd(link(j), theta);
  }
  auto neg = [&](const Eigen::VectorXd& e) {
    const double pr = pmf(y, e.transpose(), true);
    return (std::isfinite(pr) && pr > 0.0) ? -std::log(pr) : kInf;
  };
  return -nelder_mead_min(neg, start, 400 * p);
}

double CountFamily::simulate_one(const Eigen::RowVectorXd& eta, bool truncated,
                                 std::mt19937_64& rng) const {
  const double lower = truncated ? support_min() - 1.0 : -1.0;
  const double upper = support_max();
  double lb = 0.0;
  for (double v = 0.0; v <= lower; ++v) lb += pmf(v, eta, false);
  double ub = 1.0;
  if (std::isfinite(upper)) {
    ub = 0.0;
    for (double v = 0.0; v <= upper; ++v) ub += pmf(v, eta, false);
  }
  std::uniform_real_distribution<double> unif(lb, std::min(ub, 1.0));
  const double u = unif(rng);
  double v = std::max(lower, -1.0);
  double cum = lb;
  while (cum <= u && v < 1e6) {
    v += 1.0;
    cum += pmf(v, eta, false);
  }
  return v;
}

Eigen::ArrayXd CountFamily::simulate(const Eigen::MatrixXd& eta, bool truncated,
                                     std::mt19937_64& rng) const {
  Eigen::ArrayXd out(eta.rows());
  for (Eigen::Index k = 0; k < eta.rows(); ++k)
    out[k] = simulate_one(eta.row(k), truncated, rng);
  return out;
}

namespace {

std::map<std::string, FamilyFactory>& registry() {
  static std::map<std::string, FamilyFactory> reg;
  return reg;
}

std::once_flag builtin_once;

void ensure_builtins() {
  std::call_once(builtin_once, [] {
    detail::register_zt_families();
    detail::register_zot_families();
    detail::register_ztoi_families();
    detail::register_oizt_families();
    detail::register_hurdle_families();
    detail::register_ratio_families();
  });
}

} // namespace

namespace detail {

void add_family(const std::string& name, FamilyFactory factory) {
  if (!registry().emplace(name, std::move(factory)).second)
    throw std::invalid_argument("family '" + name + "' is already registered");
}

void check_link_keys(const std::map<std::string, Link>& overrides,
                     std::initializer_list<const char*> params) {
  for (const auto& [key, lnk] : overrides) {
    (void)lnk;
    if (std::find_if(params.begin(), params.end(), [&](const char* q) {
          return key == q;
        }) == params.end())
      throw std::invalid_argument("no parameter named '" + key +
                                  "' accepts a link choice here");
  }
}

Link pick_link(const std::map<std::string, Link>& overrides,
               const std::string& param, Link fallback,
               std::initializer_list<Link> allowed) {
  auto it = overrides.find(param);
  const Link chosen = it == overrides.end() ? fallback : it->second;
  if (std::find(allowed.begin(), allowed.end(), chosen) == allowed.end())
    throw std::invalid_argument("link '" + std::string(link_name(chosen)) +
                                "' is not supported for parameter '" + param +
                                "'");
  return chosen;
}

double poisson_logpmf(double y, double lambda) {
  if (lambda <= 0.0) return -kInf;
  return y * std::log(lambda) - lambda - std::lgamma(y + 1.0);
}

double geom_logpmf(double y, double lambda) {
  if (lambda <= 0.0) return -kInf;
  return y * std::log(lambda) - (y + 1.0) * std::log1p(lambda);
}

double nb_logpmf(double y, double lambda, double alpha) {
  if (lambda <= 0.0 || alpha <= 0.0) return -kInf;
  // gamma-ratio term as a product: lgamma differences cancel catastrophically
  // when 1/alpha is huge
  double ratio;
  if (y <= 10000.0) {
    ratio = 0.0;
    for (double j = 0.0; j < y; ++j) ratio += std::log1p(alpha * j);
  } else {
    const double ia = 1.0 / alpha;
    ratio = std::lgamma(y + ia) - std::lgamma(ia) + y * std::log(alpha);
  }
  return ratio - std::lgamma(y + 1.0) -
         (y + 1.0 / alpha) * std::log1p(alpha * lambda) +
         y * std::log(lambda);
}

double nb_p0(double lambda, double alpha) {
  return std::exp(-std::log1p(alpha * lambda) / alpha);
}

double nb_p1(double lambda, double alpha) {
  return lambda *
         std::exp(-(1.0 / alpha + 1.0) * std::log1p(alpha * lambda));
}

double log1mexp(double x) {
  if (x <= 0.0) return -kInf;
  return x > 0.6931471805599453 ? std::log1p(-std::exp(-x))
                                : std::log(-std::expm1(-x));
}

double nm_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd x0, int max_iter) {
  return nelder_mead_min(f, std::move(x0), max_iter);
}

double zt_sat_poisson(double y) {
  if (y <= 1.0) return 0.0;
  const double lam = lambert_w0(-y * std::exp(-y)) + y;
  return poisson_logpmf(y, lam) - log1mexp(lam);
}

double zt_sat_geom(double y) {
  if (y <= 1.0) return 0.0;
  return (y - 1.0) * std::log(y - 1.0) - y * std::log(y);
}

double zt_sat_negbin(double y) {
  if (y <= 1.0) return 0.0;
  Eigen::VectorXd x0(2);
  x0 << std::log(y), 0.0;
  return -nm_minimize(
      [y](const Eigen::VectorXd& x) {
        const double lp = nb_logpmf(y, std::exp(x[0]), std::exp(x[1])) -
                          std::log1p(-nb_p0(std::exp(x[0]), std::exp(x[1])));
        return std::isfinite(lp) ? -lp : kInf;
      },
      x0, 600);
}

double zot_sat_poisson(double y) {
  if (y <= 2.0) return 0.0;
  Eigen::VectorXd x0(1);
  x0 << std::log(y);
  return -nm_minimize(
      [y](const Eigen::VectorXd& x) {
        const double lam = std::exp(x[0]);
        const double tail = 1.0 - std::exp(-lam) - lam * std::exp(-lam);
        if (tail <= 0.0) return kInf;
        const double lp = poisson_logpmf(y, lam) - std::log(tail);
        return std::isfinite(lp) ? -lp : kInf;
      },
      x0, 400);
}

double zot_sat_geom(double y) {
  if (y <= 2.0) return 0.0;
  return (y - 2.0) * std::log(y - 2.0) - (y - 1.0) * std::log(y - 1.0);
}

double zot_sat_negbin(double y) {
  if (y <= 2.0) return 0.0;
  Eigen::VectorXd x0(2);
  x0 << std::log(y), 0.0;
  return -nm_minimize(
      [y](const Eigen::VectorXd& x) {
        const double lam = std::exp(x[0]);
        const double alpha = std::exp(x[1]);
        const double tail = 1.0 - nb_p0(lam, alpha) - nb_p1(lam, alpha);
        if (tail <= 0.0) return kInf;
        const double lp = nb_logpmf(y, lam, alpha) - std::log(tail);
        return std::isfinite(lp) ? -lp : kInf;
      },
      x0, 600);
}

} // namespace detail

void register_family(const std::string& name, FamilyFactory factory) {
  ensure_builtins();
  detail::add_family(name, std::move(factory));
}

std::unique_ptr<CountFamily> make_family(
    const std::string& name, const std::map<std::string, Link>& links) {
  ensure_builtins();
  auto it = registry().find(name);
  if (it == registry().end())
    throw std::invalid_argument("unknown family '" + name + "'");
  return it->second(links);
}

std::vector<std::string> registered_families() {
  ensure_builtins();
  std::vector<std::string> names;
  names.reserve(registry().size());
  for (const auto& [name, factory] : registry()) {
    (void)factory;
    names.push_back(name);
  }
  return names;
}

} // namespace sscr
