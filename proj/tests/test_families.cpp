#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sscr/family.hpp"

using namespace sscr;

namespace {

const std::vector<std::string> canonical = {
    "ztpoisson",      "ztgeom",        "ztnegbin",       "zotpoisson",
    "zotgeom",        "zotnegbin",     "ztoipoisson",    "ztoigeom",
    "ztoinegbin",     "oiztpoisson",   "oiztgeom",       "oiztnegbin",
    "ztHurdlepoisson", "ztHurdlegeom", "ztHurdlenegbin", "Hurdleztpoisson",
    "Hurdleztgeom",   "Hurdleztnegbin", "chao",          "zelterman"};

Eigen::RowVectorXd rv(std::initializer_list<double> vals) {
  Eigen::RowVectorXd out(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index k = 0;
  for (double v : vals) out[k++] = v;
  return out;
}

double single_ll(const CountFamily& fam, double y, const Eigen::RowVectorXd& eta) {
  Eigen::ArrayXd ya(1), w(1);
  ya << y;
  w << 1.0;
  Eigen::MatrixXd em(1, eta.size());
  em.row(0) = eta;
  return fam.log_likelihood(ya, em, w);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

} // namespace

TEST_CASE("registry lists every built-in family") {
  auto names = registered_families();
  for (const auto& want : canonical) {
    bool found = false;
    for (const auto& got : names) found = found || got == want;
    CHECK_MESSAGE(found, "missing family " << want);
  }
  CHECK(names.size() >= canonical.size());
  CHECK_THROWS_WITH_AS(make_family("ztbinomial"), "unknown family 'ztbinomial'",
                       std::invalid_argument);
}

TEST_CASE("custom registration works once and only once") {
  register_family("testonly", [](const std::map<std::string, Link>&) {
    struct Degenerate final : CountFamily {
      Degenerate() : CountFamily("testonly", {"lambda"}, {Link::log}) {}
      double log_likelihood(const Eigen::ArrayXd& y, const Eigen::MatrixXd&,
                            const Eigen::ArrayXd& w) const override {
        return (w * (y == 1.0).cast<double>()).sum() * 0.0;
      }
      Eigen::MatrixXd score(const Eigen::ArrayXd& y,
                            const Eigen::MatrixXd&) const override {
        return Eigen::MatrixXd::Zero(y.size(), 1);
      }
      double pmf(double y, const Eigen::RowVectorXd&, bool) const override {
        return y == 1.0 ? 1.0 : 0.0;
      }
      double ht_weight(double, const Eigen::RowVectorXd&) const override {
        return 1.0;
      }
    };
    return std::make_unique<Degenerate>();
  });
  auto fam = make_family("testonly");
  CHECK(fam->name() == "testonly");
  CHECK(fam->n_params() == 1);
  CHECK_THROWS_WITH_AS(
      register_family("testonly", [](const std::map<std::string, Link>&) {
        return std::unique_ptr<CountFamily>{};
      }),
      "family 'testonly' is already registered", std::invalid_argument);
}

TEST_CASE("link choices are validated per parameter") {
  CHECK(make_family("ztpoisson")->link(0) == Link::log);
  CHECK(make_family("ztoigeom")->link(1) == Link::logit);
  CHECK(make_family("ztoigeom", {{"omega", Link::cloglog}})->link(1) ==
        Link::cloglog);
  CHECK(make_family("ztHurdlenegbin", {{"pi", Link::probit}})->link(2) ==
        Link::probit);
  CHECK(make_family("chao")->link(0) == Link::loghalf);
  CHECK_THROWS_WITH_AS(make_family("ztpoisson", {{"lambda", Link::logit}}),
                       "link 'logit' is not supported for parameter 'lambda'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_family("chao", {{"lambda", Link::log}}),
                       "link 'log' is not supported for parameter 'lambda'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_family("ztpoisson", {{"omega", Link::logit}}),
                       "no parameter named 'omega' accepts a link choice here",
                       std::invalid_argument);
}

TEST_CASE("eta layout follows the declared parameter order") {
  auto nb = make_family("ztoinegbin");
  REQUIRE(nb->n_params() == 3);
  CHECK(nb->eta_names()[0] == "lambda");
  CHECK(nb->eta_names()[1] == "alpha");
  CHECK(nb->eta_names()[2] == "omega");
  CHECK(make_family("ztHurdlenegbin")->eta_names()[2] == "pi");
  CHECK(make_family("oiztgeom")->eta_names()[1] == "omega");
}

TEST_CASE("validate enforces the observable support") {
  Eigen::ArrayXd ok(3), one(3), frac(2), big(2);
  ok << 2, 3, 7;
  one << 2, 3, 1;
  frac << 1, 2.5;
  big << 5, 9;
  CHECK(make_family("zotpoisson")->support_min() == 2.0);
  CHECK(make_family("ztgeom")->support_min() == 1.0);
  CHECK_NOTHROW(make_family("zotpoisson")->validate(ok));
  CHECK_THROWS_WITH_AS(
      make_family("zotpoisson")->validate(one),
      "family 'zotpoisson' requires integer counts >= 2; found 1 at row 3",
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      make_family("ztpoisson")->validate(frac),
      "family 'ztpoisson' requires integer counts >= 1; found 2.5 at row 2",
      std::invalid_argument);
  CHECK_NOTHROW(make_family("chao")->validate(big));
  CHECK_NOTHROW(make_family("zelterman")->validate(big));
}

TEST_CASE("zero-truncated poisson pinned values") {
  auto fam = make_family("ztpoisson");
  const auto eta = rv({0.0});
  CHECK(fam->pmf(1, eta, true) == doctest::Approx(0.5819767068693265).epsilon(1e-13));
  CHECK(fam->pmf(0, eta, false) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(single_ll(*fam, 1, eta) == doctest::Approx(-0.541324854612918).epsilon(1e-12));
  CHECK(fam->moments(eta, true).first ==
        doctest::Approx(1.5819767068693265).epsilon(1e-12));
  CHECK(fam->moments(eta, false).first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fam->ht_weight(1, eta) == doctest::Approx(1.5819767068693266).epsilon(1e-12));
}

TEST_CASE("zero-truncated negbin pinned values") {
  auto fam = make_family("ztnegbin");
  const auto eta = rv({std::log(2.0), std::log(0.5)});
  CHECK(fam->pmf(0, eta, false) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(fam->pmf(1, eta, true) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(fam->ht_weight(1, eta) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("geometric equals negbin at unit dispersion") {
  auto geom = make_family("ztgeom");
  auto nb = make_family("ztnegbin");
  const auto eg = rv({0.3});
  const auto en = rv({0.3, 0.0});
  for (double y : {1.0, 2.0, 3.0, 5.0, 9.0}) {
    CHECK(geom->pmf(y, eg, true) == doctest::Approx(nb->pmf(y, en, true)).epsilon(1e-12));
    CHECK(geom->pmf(y, eg, false) == doctest::Approx(nb->pmf(y, en, false)).epsilon(1e-12));
  }
  CHECK(geom->ht_weight(2, eg) == doctest::Approx(nb->ht_weight(2, en)).epsilon(1e-12));
}

TEST_CASE("one-inflation differs between mixture and renormalized forms") {
  const auto eta = rv({0.0, logit(0.25)});
  auto ztoi = make_family("ztoigeom");
  auto oizt = make_family("oiztgeom");
  CHECK(ztoi->pmf(1, eta, true) == doctest::Approx(0.625).epsilon(1e-13));
  CHECK(oizt->pmf(1, eta, true) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(ztoi->pmf(0, eta, false) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(oizt->pmf(0, eta, false) == doctest::Approx(0.375).epsilon(1e-13));
  CHECK(ztoi->ht_weight(1, eta) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oizt->ht_weight(1, eta) == doctest::Approx(1.6).epsilon(1e-12));

  const auto ep = rv({std::log(1.2), logit(0.3)});
  auto ztoip = make_family("ztoipoisson");
  auto oiztp = make_family("oiztpoisson");
  CHECK(single_ll(*ztoip, 1, ep) == doctest::Approx(-0.4124131112028519).epsilon(1e-12));
  CHECK(single_ll(*ztoip, 3, ep) == doctest::Approx(-2.4430873249244893).epsilon(1e-12));
  CHECK(single_ll(*oiztp, 1, ep) == doctest::Approx(-0.3556105467378213).epsilon(1e-12));
  CHECK(single_ll(*oiztp, 3, ep) == doctest::Approx(-2.564688686560856).epsilon(1e-12));
}

TEST_CASE("hurdle order changes the truncated one-probability") {
  const auto eta = rv({std::log(2.0), logit(0.3)});
  auto zth = make_family("ztHurdlegeom");
  auto hzt = make_family("Hurdleztgeom");
  CHECK(zth->pmf(1, eta, true) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(hzt->pmf(1, eta, true) == doctest::Approx(3.0 / 7.0).epsilon(1e-13));
  CHECK(zth->pmf(0, eta, false) == doctest::Approx(3.0 / 7.0).epsilon(1e-13));
  CHECK(hzt->pmf(1, eta, false) == doctest::Approx(0.3).epsilon(1e-13));

  auto zthp = make_family("ztHurdlepoisson");
  CHECK(zthp->pmf(0, rv({std::log(1.5), logit(0.3)}), false) ==
        doctest::Approx(0.33538037548852123).epsilon(1e-12));
}

TEST_CASE("ratio families weight only the informative counts") {
  const auto eta = rv({-0.2});
  auto chao = make_family("chao");
  const double lam = 2.0 * std::exp(-0.2);
  CHECK(chao->ht_weight(1, eta) ==
        doctest::Approx(1.335784380423846).epsilon(1e-12));
  CHECK(chao->ht_weight(1, eta) ==
        doctest::Approx(1.0 + 1.0 / (lam + lam * lam / 2.0)).epsilon(1e-13));
  CHECK(chao->ht_weight(2, eta) == chao->ht_weight(1, eta));
  CHECK(chao->ht_weight(5, eta) == 1.0);

  auto zel = make_family("zelterman");
  CHECK(zel->ht_weight(1, eta) ==
        doctest::Approx(1.241423447599053).epsilon(1e-12));
  CHECK(zel->ht_weight(7, eta) == zel->ht_weight(1, eta));

  Eigen::ArrayXd y(3), w(3);
  y << 1, 2, 6;
  w << 1, 1, 1;
  Eigen::MatrixXd em = Eigen::MatrixXd::Constant(3, 1, -0.2);
  Eigen::ArrayXd rows = chao->loglik_rows(y, em);
  CHECK(rows[2] == 0.0);
  CHECK(chao->log_likelihood(y, em, w) == doctest::Approx(rows.sum()).epsilon(1e-12));
  Eigen::MatrixXd sc = chao->score(y, em);
  CHECK(sc(2, 0) == 0.0);
}

TEST_CASE("saturated log likelihood pinned values") {
  CHECK(make_family("ztpoisson")->saturated_loglik(5) ==
        doctest::Approx(-1.7334228435597034).epsilon(1e-8));
  CHECK(make_family("ztpoisson")->saturated_loglik(1) == 0.0);
  CHECK(make_family("ztgeom")->saturated_loglik(4) ==
        doctest::Approx(-2.249340578475233).epsilon(1e-12));
  CHECK(make_family("ztnegbin")->saturated_loglik(4) ==
        doctest::Approx(-1.6136465858).epsilon(1e-9));
  CHECK(make_family("zotpoisson")->saturated_loglik(4) ==
        doctest::Approx(-1.5199946483481057).epsilon(1e-8));
  CHECK(make_family("zotgeom")->saturated_loglik(5) ==
        doctest::Approx(-2.249340578475233).epsilon(1e-12));
  CHECK(make_family("zotnegbin")->saturated_loglik(4) ==
        doctest::Approx(-1.5199946483).epsilon(1e-8));
  CHECK(make_family("zotnegbin")->saturated_loglik(2) == 0.0);

  CHECK(make_family("ztoipoisson")->saturated_loglik(1) == 0.0);
  CHECK(make_family("ztoipoisson")->saturated_loglik(5) ==
        doctest::Approx(make_family("ztpoisson")->saturated_loglik(5)).epsilon(1e-10));
  CHECK(make_family("oiztgeom")->saturated_loglik(4) ==
        doctest::Approx(-2.249340578475233).epsilon(1e-12));
  CHECK(make_family("Hurdleztgeom")->saturated_loglik(5) ==
        doctest::Approx(-2.249340578475233).epsilon(1e-12));
  CHECK(make_family("ztHurdlenegbin")->saturated_loglik(4) ==
        doctest::Approx(make_family("zotnegbin")->saturated_loglik(4)).epsilon(1e-9));
  CHECK(make_family("Hurdleztgeom")->saturated_loglik(1) == 0.0);
}

TEST_CASE("weighted likelihood equals the weighted row sum") {
  Eigen::ArrayXd y(3), w(3);
  y << 1, 3, 2;
  w << 1.5, 2.0, 0.5;
  for (const char* name : {"ztnegbin", "oiztgeom", "Hurdleztpoisson"}) {
    auto fam = make_family(name);
    Eigen::MatrixXd eta(3, fam->n_params());
    for (int j = 0; j < fam->n_params(); ++j)
      eta.col(j).setConstant(fam->link(j) == Link::log ? 0.4 : -0.9);
    CHECK(fam->log_likelihood(y, eta, w) ==
          doctest::Approx((fam->loglik_rows(y, eta) * w).sum()).epsilon(1e-12));
  }
}

TEST_CASE("simulation is deterministic and respects the support") {
  auto fam = make_family("ztoigeom");
  Eigen::MatrixXd eta(200, 2);
  eta.col(0).setConstant(0.5);
  eta.col(1).setConstant(logit(0.2));
  std::mt19937_64 a(42), b(42), c(7);
  Eigen::ArrayXd da = fam->simulate(eta, true, a);
  Eigen::ArrayXd db = fam->simulate(eta, true, b);
  Eigen::ArrayXd dc = fam->simulate(eta, true, c);
  CHECK((da == db).all());
  CHECK_FALSE((da == dc).all());
  CHECK((da >= 1.0).all());
  CHECK((da == da.floor()).all());

  auto chao = make_family("chao");
  Eigen::MatrixXd ec = Eigen::MatrixXd::Constant(200, 1, -0.2);
  std::mt19937_64 r(11);
  Eigen::ArrayXd dch = chao->simulate(ec, true, r);
  CHECK((dch >= 1.0).all());
  CHECK((dch <= 2.0).all());

  auto zot = make_family("zotpoisson");
  Eigen::MatrixXd ez = Eigen::MatrixXd::Constant(200, 1, 0.3);
  std::mt19937_64 rz(5);
  CHECK((zot->simulate(ez, true, rz) >= 2.0).all());
}
