#include "sscr/links.hpp"

#include <cmath>
#include <stdexcept>

#include "sscr/special.hpp"

namespace sscr {

Link link_from_name(const std::string& name) {
  if (name == "log") return Link::log;
  if (name == "loghalf") return Link::loghalf;
  if (name == "logit") return Link::logit;
  if (name == "cloglog") return Link::cloglog;
  if (name == "probit") return Link::probit;
  if (name == "neglog") return Link::neglog;
  throw std::invalid_argument("unknown link: " + name);
}

const char* link_name(Link link) {
  switch (link) {
    case Link::log: return "log";
    case Link::loghalf: return "loghalf";
    case Link::logit: return "logit";
    case Link::cloglog: return "cloglog";
    case Link::probit: return "probit";
    case Link::neglog: return "neglog";
  }
  return "?";
}

double link_inv(Link link, double eta, int deriv) {
  switch (link) {
    case Link::log:
      return std::exp(eta);
    case Link::loghalf:
      return 2.0 * std::exp(eta);
    case Link::logit: {
      double e = std::exp(eta);
      switch (deriv) {
        case 0: return 1.0 / (1.0 + std::exp(-eta));
        case 1: return e / ((1.0 + e) * (1.0 + e));
        case 2: return -e * (e - 1.0) / ((1.0 + e) * (1.0 + e) * (1.0 + e));
      }
      break;
    }
    case Link::cloglog: {
      double e = std::exp(eta);
      switch (deriv) {
        case 0: return 1.0 - std::exp(-e);
        case 1: return std::exp(eta - e);
        case 2: return (1.0 - e) * std::exp(eta - e);
      }
      break;
    }
    case Link::probit:
      switch (deriv) {
        case 0: return norm_cdf(eta);
        case 1: return norm_pdf(eta);
        case 2: return -eta * norm_pdf(eta);
      }
      break;
    case Link::neglog:
      return (deriv % 2 == 0 ? 1.0 : -1.0) * std::exp(-eta);
  }
  throw std::invalid_argument("link_inv: deriv must be 0, 1 or 2");
}

Eigen::ArrayXd link_inv(Link link, const Eigen::ArrayXd& eta, int deriv) {
  Eigen::ArrayXd out(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) out[i] = link_inv(link, eta[i], deriv);
  return out;
}

double link_fwd(Link link, double theta) {
  switch (link) {
    case Link::log: return std::log(theta);
    case Link::loghalf: return std::log(theta / 2.0);
    case Link::logit: return std::log(theta / (1.0 - theta));
    case Link::cloglog: return std::log(-std::log(1.0 - theta));
    case Link::probit: return norm_quantile(theta);
    case Link::neglog: return -std::log(theta);
  }
  throw std::invalid_argument("link_fwd: bad link");
}

} // namespace sscr
