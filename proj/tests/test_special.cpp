#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sscr/special.hpp"

using namespace sscr;

TEST_CASE("normal quantile matches reference values") {
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(norm_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-12));
  CHECK(norm_quantile(0.9999) == doctest::Approx(3.719016485455709).epsilon(1e-12));
  CHECK(norm_quantile(1e-12) == doctest::Approx(-7.034483825301131).epsilon(1e-12));
  CHECK(norm_quantile(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-12));
  CHECK(norm_quantile(0.5) == 0.0);
}

TEST_CASE("normal cdf and pdf") {
  CHECK(norm_cdf(1.644853626951) == doctest::Approx(0.9499999999999512).epsilon(1e-13));
  CHECK(norm_cdf(-2.5) == doctest::Approx(0.006209665325776132).epsilon(1e-13));
  CHECK(norm_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-13));
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("quantile inverts cdf") {
  for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6})
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(gamma_p(2.5, 1.3) == doctest::Approx(0.23863473215498604).epsilon(1e-12));
  CHECK(gamma_q(2.5, 6.7) == doctest::Approx(0.01990522033477438).epsilon(1e-12));
  CHECK(gamma_p(0.5, 0.5) == doctest::Approx(0.6826894921370859).epsilon(1e-12));
  CHECK(gamma_q(10.0, 3.0) == doctest::Approx(0.9988975118698845).epsilon(1e-12));
  CHECK(gamma_p(3.0, 2.0) + gamma_q(3.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_p(1.0, 0.0) == 0.0);
  CHECK(gamma_q(1.0, 0.0) == 1.0);
}

TEST_CASE("chi-squared upper tail") {
  CHECK(chisq_upper(50.06, 2) == doctest::Approx(1.3477493093926726e-11).epsilon(1e-9));
  CHECK(chisq_upper(3.84, 1) == doctest::Approx(0.05004352124870519).epsilon(1e-12));
  CHECK(chisq_upper(37.776, 3) == doctest::Approx(3.1525735974350495e-08).epsilon(1e-10));
  CHECK(chisq_upper(0.0, 5) == 1.0);
}

TEST_CASE("lambert w principal branch") {
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-12));
  CHECK(lambert_w0(-0.2) == doctest::Approx(-0.2591711018190737).epsilon(1e-12));
  CHECK(lambert_w0(5.0) == doctest::Approx(1.3267246652422002).epsilon(1e-12));
  CHECK(lambert_w0(100.0) == doctest::Approx(3.38563014029005).epsilon(1e-12));
  CHECK(lambert_w0(0.0) == 0.0);
  for (double x : {-0.3, -0.1, 0.5, 2.0, 50.0}) {
    double w = lambert_w0(x);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("digamma and trigamma") {
  CHECK(digamma(0.3) == doctest::Approx(-3.502524222200133).epsilon(1e-12));
  CHECK(digamma(4.7) == doctest::Approx(1.4374238096317817).epsilon(1e-12));
  CHECK(trigamma(0.3) == doctest::Approx(12.245364546107734).epsilon(1e-12));
  CHECK(trigamma(4.7) == doctest::Approx(0.23699183867807333).epsilon(1e-12));
  // recurrences
  CHECK(digamma(3.4) - digamma(2.4) == doctest::Approx(1.0 / 2.4).epsilon(1e-12));
  CHECK(trigamma(2.4) - trigamma(3.4) == doctest::Approx(1.0 / (2.4 * 2.4)).epsilon(1e-12));
}
