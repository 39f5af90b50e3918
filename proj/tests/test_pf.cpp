#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "srled/errors.hpp"
#include "srled/pf.hpp"

using namespace srled;

namespace {

DerivedRates rates_with(int N0) {
    DeviceParams p;
    p.N0 = N0;
    return derive_rates(p);
}

const PFModel binomial{PFKind::Binomial};
const PFModel langevin{PFKind::LangevinRate};

}  // namespace

TEST_CASE("binomial dispersion") {
    const auto r = rates_with(100);
    CHECK(pf_dispersion(0.0, 0.0, 1.0, r, binomial) == 0.0);
    CHECK(pf_dispersion(100.0, 0.0, 1.0, r, binomial) == 0.0);
    CHECK(pf_dispersion(50.0, 0.0, 1.0, r, binomial) == doctest::Approx(25.0));
    for (double ne : {3.0, 17.5, 42.0}) {
        CHECK(pf_dispersion(ne, 0.0, 1.0, r, binomial) == pf_dispersion(100 - ne, 0.0, 1.0, r, binomial));
        CHECK(pf_dispersion(ne, 5.0, 0.2, r, binomial) == pf_dispersion(ne, 0.0, 1.0, r, binomial));
    }
}

TEST_CASE("langevin-rate and binomial agree at the symmetric zero-field point") {
    const auto r = rates_with(200);
    CHECK(pf_dispersion(100.0, 0.0, 1.0, r, langevin) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(pf_dispersion(100.0, 0.0, 1.0, r, binomial) == doctest::Approx(50.0).epsilon(1e-14));
}

TEST_CASE("langevin-rate dispersion grows with the field and stays bounded") {
    const auto r = rates_with(100);
    double last = pf_dispersion(30.0, 0.0, 1.0, r, langevin);
    for (double n : {0.1, 1.0, 10.0, 1e3, 1e6}) {
        const double d = pf_dispersion(30.0, n, 1.0, r, langevin);
        CHECK(d >= last);
        CHECK(d <= 100.0 * 100.0 / 4);
        last = d;
    }
}

TEST_CASE("none model is identically zero") {
    const auto r = rates_with(100);
    CHECK(pf_dispersion(50.0, 3.0, 1.0, r, PFModel{PFKind::None}) == 0.0);
    CHECK_FALSE(PFModel{PFKind::None}.depends_on_field());
    CHECK_FALSE(binomial.depends_on_field());
    CHECK(langevin.depends_on_field());
}

TEST_CASE("bandwidth") {
    const auto r = rates_with(100);
    CHECK(pf_bandwidth(0.0, 1.0, r) == doctest::Approx(2 * r.gamma_par));
    CHECK(pf_bandwidth(0.0, 0.0, r) == doctest::Approx(r.gamma_par));
    const double b1 = pf_bandwidth(10.0, 1.0, r), b2 = pf_bandwidth(20.0, 1.0, r);
    CHECK((b2 - b1) / 10.0 == doctest::Approx(2 * r.g_diff * r.f));
    CHECK(pf_bandwidth(0.0, 2.0, r) > pf_bandwidth(0.0, 1.0, r));
}

TEST_CASE("narrowness check") {
    const auto r = rates_with(100);
    const auto res = narrowness_check(r, pf_bandwidth(0.0, 1.0, r));
    CHECK(res.ratio == doctest::Approx(0.08));
    CHECK(res.pass);

    DerivedRates slow = r;
    slow.gamma_par = slow.kappa;
    CHECK_FALSE(narrowness_check(slow, pf_bandwidth(0.0, 0.0, slow)).pass);

    const double bw = 0.25 * r.kappa;
    CHECK(narrowness_check(r, bw, 0.25).pass);
    CHECK_FALSE(narrowness_check(r, bw, 0.2499).pass);
}

TEST_CASE("model names round-trip") {
    for (auto k : {PFKind::None, PFKind::Binomial, PFKind::LangevinRate}) {
        CHECK(pf_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(pf_kind_from_string("poisson"), ValidationError);
}
