#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sscr/links.hpp"

using namespace sscr;

namespace {

const std::vector<Link> all_links = {Link::log,     Link::loghalf, Link::logit,
                                     Link::cloglog, Link::probit,  Link::neglog};

double fd_deriv(Link link, double eta, int deriv) {
  double h = 1e-6;
  return (link_inv(link, eta + h, deriv - 1) - link_inv(link, eta - h, deriv - 1)) / (2.0 * h);
}

} // namespace

TEST_CASE("forward and inverse round-trip") {
  for (Link link : all_links) {
    for (double eta : {-2.0, -0.5, 0.0, 0.7, 1.9}) {
      double theta = link_inv(link, eta);
      CHECK(link_fwd(link, theta) == doctest::Approx(eta).epsilon(1e-10));
    }
  }
}

TEST_CASE("first and second derivatives match finite differences") {
  for (Link link : all_links) {
    for (double eta : {-1.5, -0.3, 0.4, 1.2}) {
      CHECK(link_inv(link, eta, 1) ==
            doctest::Approx(fd_deriv(link, eta, 1)).epsilon(1e-6));
      CHECK(link_inv(link, eta, 2) ==
            doctest::Approx(fd_deriv(link, eta, 2)).epsilon(1e-6));
    }
  }
}

TEST_CASE("known values") {
  CHECK(link_inv(Link::log, 0.0) == 1.0);
  CHECK(link_inv(Link::loghalf, 0.0) == 2.0);
  CHECK(link_fwd(Link::loghalf, 2.0) == 0.0);
  CHECK(link_inv(Link::logit, 0.0) == doctest::Approx(0.5));
  CHECK(link_inv(Link::probit, 0.0) == doctest::Approx(0.5));
  CHECK(link_inv(Link::cloglog, 0.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(link_inv(Link::neglog, 0.0) == 1.0);
  CHECK(link_inv(Link::neglog, 1.0, 1) == doctest::Approx(-std::exp(-1.0)));
}

TEST_CASE("name round-trip and unknown name rejected") {
  for (Link link : all_links) CHECK(link_from_name(link_name(link)) == link);
  CHECK_THROWS_AS(link_from_name("identity"), std::invalid_argument);
}

TEST_CASE("array overload agrees with scalar") {
  Eigen::ArrayXd eta(3);
  eta << -1.0, 0.0, 2.0;
  for (Link link : all_links) {
    for (int d : {0, 1, 2}) {
      Eigen::ArrayXd v = link_inv(link, eta, d);
      for (int i = 0; i < 3; ++i) CHECK(v[i] == link_inv(link, eta[i], d));
    }
  }
}
