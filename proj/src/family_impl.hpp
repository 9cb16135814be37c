#pragma once

#include <initializer_list>
#include <map>
#include <string>

#include "sscr/family.hpp"

// shared internals for the family implementations
namespace sscr::detail {

// registry insertion without triggering builtin registration
void add_family(const std::string& name, FamilyFactory factory);

void register_zt_families();
void register_zot_families();
void register_ztoi_families();
void register_oizt_families();
void register_hurdle_families();
void register_ratio_families();

// reject override keys that are not parameters of the family
void check_link_keys(const std::map<std::string, Link>& overrides,
                     std::initializer_list<const char*> params);
// resolve one parameter's link, restricted to the allowed set
Link pick_link(const std::map<std::string, Link>& overrides,
               const std::string& param, Link fallback,
               std::initializer_list<Link> allowed);

double poisson_logpmf(double y, double lambda);
// geometric on {0,1,...} with mean lambda
double geom_logpmf(double y, double lambda);
// negative binomial with mean lambda and dispersion alpha (size 1/alpha)
double nb_logpmf(double y, double lambda, double alpha);
double nb_p0(double lambda, double alpha);
double nb_p1(double lambda, double alpha);

// log(1 - exp(-x)) for x > 0
double log1mexp(double x);

// small-dimension Nelder-Mead, returns the minimum value found
double nm_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd x0, int max_iter);

// per-observation saturated log likelihoods of the truncated base counts
double zt_sat_poisson(double y);
double zt_sat_geom(double y);
double zt_sat_negbin(double y);
double zot_sat_poisson(double y);
double zot_sat_geom(double y);
double zot_sat_negbin(double y);

} // namespace sscr::detail
