#pragma once

#include <string>
#include <Eigen/Dense>

namespace sscr {

enum class Link { log, loghalf, logit, cloglog, probit, neglog };

Link link_from_name(const std::string& name);
const char* link_name(Link l);

// inverse link evaluated at eta; deriv selects d^deriv/deta^deriv, deriv in {0,1,2}
double link_inv(Link l, double eta, int deriv = 0);
Eigen::ArrayXd link_inv(Link l, const Eigen::ArrayXd& eta, int deriv = 0);

// forward link: eta from the distribution parameter
double link_fwd(Link l, double theta);

} // namespace sscr
