#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "geozeta/errors.hpp"
#include "geozeta/euler.hpp"
#include "geozeta/reference.hpp"
#include "geozeta/spectra.hpp"

using namespace geozeta;

namespace {

PrimeGeodesic geodesic(double length, std::vector<double> angles,
                       std::vector<cdouble> twists = {cdouble{1.0, 0.0}}) {
    PrimeGeodesic g;
    g.length = length;
    g.holonomy_angles = std::move(angles);
    g.twist_eigenvalues = std::move(twists);
    return g;
}

SigmaCharacter sigma_of(std::vector<long> w) {
    SigmaCharacter s;
    s.weight_vector = std::move(w);
    s.label = "test";
    return s;
}

bool close(cdouble a, cdouble b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

TEST_CASE("stable eigenvalues are e^{-l} e^{+-i theta}") {
    const auto flat = stable_eigenvalues(geodesic(1.0, {0.0}), 3);
    REQUIRE(flat.size() == 2);
    CHECK(close(flat[0], cdouble{std::exp(-1.0), 0.0}, 1e-15));
    CHECK(close(flat[1], cdouble{std::exp(-1.0), 0.0}, 1e-15));

    auto quarter = stable_eigenvalues(geodesic(1.0, {3.14159265358979323846 / 2.0}), 3);
    REQUIRE(quarter.size() == 2);
    std::sort(quarter.begin(), quarter.end(),
              [](cdouble a, cdouble b) { return a.imag() < b.imag(); });
    CHECK(close(quarter[0], cdouble{0.0, -std::exp(-1.0)}, 1e-15));
    CHECK(close(quarter[1], cdouble{0.0, std::exp(-1.0)}, 1e-15));

    const auto five = stable_eigenvalues(geodesic(0.7, {0.3, 1.1}), 5);
    REQUIRE(five.size() == 4);
    for (cdouble a : five) CHECK(std::abs(std::abs(a) - std::exp(-0.7)) < 1e-15);
}

TEST_CASE("symmetric power sizes follow the monomial count") {
    const auto s3 = stable_eigenvalues(geodesic(1.0, {0.4}), 3);
    const auto s5 = stable_eigenvalues(geodesic(1.0, {0.4, 0.9}), 5);
    for (int k = 0; k <= 6; ++k) {
        CHECK(symmetric_power_eigenvalues(s3, k).size() == static_cast<std::size_t>(k + 1));
        const long expect = (k + 1) * (k + 2) * (k + 3) / 6; // C(k+3,3)
        CHECK(symmetric_power_eigenvalues(s5, k).size() == static_cast<std::size_t>(expect));
    }
    // degree-k monomials of {a,a} are all a^k
    const auto sq = symmetric_power_eigenvalues({cdouble{0.5, 0.0}, cdouble{0.5, 0.0}}, 3);
    for (cdouble v : sq) CHECK(close(v, cdouble{0.125, 0.0}, 1e-15));
}

TEST_CASE("weyl flip negates the last weight and is an involution") {
    const SigmaCharacter s = sigma_of({2, -3});
    const SigmaCharacter f = weyl_flip(s);
    CHECK(f.weight_vector == std::vector<long>{2, 3});
    CHECK(weyl_flip(f).weight_vector == s.weight_vector);
}

TEST_CASE("local log at large real s matches the first-order double sum") {
    // trivial twist, theta = 0, l = 1, n = 3: the k-th symmetric power has
    // k+1 eigenvalues e^{-k}, so the leading trace term of the local log is
    // -sum_k (k+1) e^{-(s+1+k)}.  Higher trace orders are O(e^{-2(s+1)}).
    const double eps = 1e-12;
    const cdouble v = log_selberg_local(geodesic(1.0, {0.0}), cdouble{20.0, 0.0},
                                        sigma_of({0}), 3, 1.0, eps);
    double oracle = 0.0;
    for (int k = 0;; ++k) {
        const double term = (k + 1) * std::exp(-(21.0 + k));
        oracle -= term;
        if (term < eps / 10.0) break;
    }
    CHECK(std::abs(v - cdouble{oracle, 0.0}) <= eps);
    CHECK(std::abs(v) > 1e-10); // the value itself is not degenerate
}

TEST_CASE("rank-zero twist kills the local factor") {
    const cdouble v = log_selberg_local(geodesic(1.0, {0.3}, {}), cdouble{2.0, 0.5},
                                        sigma_of({1}), 3, 1.0, 1e-12);
    CHECK(v == cdouble{0.0, 0.0});
}

TEST_CASE("local log requires Re(s) beyond the abscissa") {
    CHECK_THROWS_AS(log_selberg_local(geodesic(1.0, {0.0}), cdouble{1.0, 2.0},
                                      sigma_of({0}), 3, 1.0, 1e-12),
                    ConvergenceError);
    CHECK_THROWS_AS(log_selberg_local(geodesic(1.0, {0.0}), cdouble{2.0, 0.0},
                                      sigma_of({0}), 3, 1.0, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(log_selberg_local(geodesic(1.0, {0.0}), cdouble{2.0, 0.0},
                                      sigma_of({0, 1}), 3, 1.0, 1e-12),
                    ValidationError); // weight rank mismatch
}

TEST_CASE("closed-form local log agrees with the symmetric-power expansion") {
    Rng rng(2024);
    const double eps = 1e-13;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = trial % 2 == 0 ? 3 : 5;
        const double rho = (n - 1) / 2.0;
        std::vector<double> angles;
        for (std::size_t j = 0; j < static_cast<std::size_t>((n - 1) / 2); ++j)
            angles.push_back(rng.next_uniform(0.0, 6.28));
        std::vector<cdouble> twists;
        const int rank = 1 + static_cast<int>(rng.next_below(2));
        for (int j = 0; j < rank; ++j) {
            const double phase = rng.next_uniform(0.0, 6.28);
            twists.push_back({std::cos(phase), std::sin(phase)});
        }
        const PrimeGeodesic g =
            geodesic(rng.next_uniform(0.8, 2.0), std::move(angles), std::move(twists));
        std::vector<long> w;
        for (std::size_t j = 0; j < g.holonomy_angles.size(); ++j)
            w.push_back(static_cast<long>(rng.next_below(5)) - 2);
        const SigmaCharacter sigma = sigma_of(std::move(w));
        const cdouble s{rho + rng.next_uniform(0.3, 2.0), rng.next_uniform(-3.0, 3.0)};

        const cdouble fast = log_selberg_local(g, s, sigma, n, rho, eps);
        const cdouble slow = reference::log_selberg_local_monomial(g, s, sigma, n, rho, eps);
        CHECK(std::abs(fast - slow) <= 2.0 * eps + 1e-13 * std::abs(fast));
    }
}

TEST_CASE("empty spectrum evaluates to zero with a pure tail bound") {
    const LengthSpectrum empty = make_length_spectrum(3, 1.0, 4.0, {});
    EvalRequest req;
    req.s = {2.5, 0.0};
    req.zeta_kind = ZetaKind::selberg;
    req.sigma = sigma_of({0});
    const EvalResult r = log_zeta(empty, req);
    CHECK(r.log_value == cdouble{0.0, 0.0});
    CHECK(r.terms_used == 0);
    CHECK(r.series_bound == 0.0);
    CHECK(r.spectrum_tail_bound > 0.0);
    CHECK(r.truncation_bound == r.spectrum_tail_bound);
    CHECK(r.tail_conditional); // hand-built spectra carry no density guarantee
}

TEST_CASE("generated spectra report an unconditional tail") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 4.0, 3, 0.05);
    EvalRequest req;
    req.s = {2.5, 0.0};
    req.sigma = sigma_of({0});
    const EvalResult r = log_zeta(s, req);
    CHECK(!r.tail_conditional);
    CHECK(r.series_bound <= req.tail_tolerance);
    CHECK(r.truncation_bound == r.series_bound + r.spectrum_tail_bound);
    CHECK(r.terms_used > 0);
}

TEST_CASE("evaluation enforces the convergence abscissa per kind") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 4.0, 3, 0.05);
    EvalRequest req;
    req.sigma = sigma_of({0});
    req.zeta_kind = ZetaKind::selberg;
    req.s = {1.02, 0.0}; // inside the default margin around rho = 1
    CHECK_THROWS_AS(log_zeta(s, req), ConvergenceError);
    req.s = {1.2, 0.0};
    CHECK_NOTHROW(log_zeta(s, req));
    req.zeta_kind = ZetaKind::ruelle;
    req.s = {2.02, 0.0}; // Ruelle products need Re(s) > 2 rho
    CHECK_THROWS_AS(log_zeta(s, req), ConvergenceError);
    req.s = {2.2, 0.0};
    CHECK_NOTHROW(log_zeta(s, req));
    req.tail_tolerance = 0.0;
    CHECK_THROWS_AS(log_zeta(s, req), ValidationError);
    req.tail_tolerance = 1e-12;
    req.margin = 0.0;
    CHECK_THROWS_AS(log_zeta(s, req), ValidationError);
}

TEST_CASE("symmetrized and super logs are the two signed combinations") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 5.0, 17, 0.02);
    EvalRequest req;
    req.s = {1.8, 0.7};
    req.sigma = sigma_of({2});
    req.zeta_kind = ZetaKind::selberg;
    const EvalResult plain = log_zeta(s, req);
    EvalRequest flipped = req;
    flipped.sigma = weyl_flip(req.sigma);
    const EvalResult mirror = log_zeta(s, flipped);

    req.zeta_kind = ZetaKind::symmetrized_s;
    const EvalResult sym = log_zeta(s, req);
    req.zeta_kind = ZetaKind::super_s;
    const EvalResult sup = log_zeta(s, req);

    const double slack =
        sym.series_bound + sup.series_bound + 2.0 * (plain.series_bound + mirror.series_bound);
    CHECK(std::abs(sym.log_value - (plain.log_value + mirror.log_value)) <= slack + 1e-15);
    CHECK(std::abs(sup.log_value - (plain.log_value - mirror.log_value)) <= slack + 1e-15);
}

TEST_CASE("super log vanishes when every holonomy angle is zero") {
    LengthSpectrum base = generate_length_spectrum(3, 1.0, 5.0, 8, 0.02);
    std::vector<PrimeGeodesic> flat = base.geodesics;
    for (PrimeGeodesic& g : flat)
        for (double& th : g.holonomy_angles) th = 0.0;
    const LengthSpectrum s = make_length_spectrum(3, 1.0, 5.0, std::move(flat));
    EvalRequest req;
    req.s = {1.9, 0.4};
    req.sigma = sigma_of({1});
    req.zeta_kind = ZetaKind::super_s;
    const EvalResult r = log_zeta(s, req);
    CHECK(std::abs(r.log_value) <= r.series_bound + 1e-15);
}

TEST_CASE("halving the tolerance moves the log by at most the series bound") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 5.0, 23, 0.02);
    EvalRequest req;
    req.s = {1.6, 1.1};
    req.sigma = sigma_of({1});
    req.zeta_kind = ZetaKind::selberg;
    req.tail_tolerance = 1e-6;
    const EvalResult coarse = log_zeta(s, req);
    req.tail_tolerance = 5e-7;
    const EvalResult fine = log_zeta(s, req);
    CHECK(std::abs(coarse.log_value - fine.log_value) <=
          coarse.series_bound + fine.series_bound + 1e-15);
    CHECK(std::abs(coarse.log_value - fine.log_value) <= coarse.truncation_bound + 1e-15);
}

TEST_CASE("conjugating s conjugates the log and flips the character") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 5.0, 31, 0.02);
    // trivial weight: plain conjugation symmetry
    EvalRequest req;
    req.s = {1.7, 2.3};
    req.sigma = sigma_of({0});
    req.zeta_kind = ZetaKind::selberg;
    const EvalResult upper0 = log_zeta(s, req);
    req.s = std::conj(req.s);
    const EvalResult lower0 = log_zeta(s, req);
    CHECK(std::abs(lower0.log_value - std::conj(upper0.log_value)) <=
          upper0.series_bound + lower0.series_bound + 1e-13 * std::abs(upper0.log_value));

    // nontrivial weight: conjugation lands on the Weyl-flipped character
    req.s = {1.7, 2.3};
    req.sigma = sigma_of({1});
    const EvalResult upper1 = log_zeta(s, req);
    req.s = std::conj(req.s);
    req.sigma = weyl_flip(req.sigma);
    const EvalResult lower1 = log_zeta(s, req);
    CHECK(std::abs(lower1.log_value - std::conj(upper1.log_value)) <=
          upper1.series_bound + lower1.series_bound + 1e-13 * std::abs(upper1.log_value));

    // the symmetrized sweep is conjugation-closed, so it is symmetric as is
    req.s = {1.7, 2.3};
    req.sigma = sigma_of({1});
    req.zeta_kind = ZetaKind::symmetrized_s;
    const EvalResult upper2 = log_zeta(s, req);
    req.s = std::conj(req.s);
    const EvalResult lower2 = log_zeta(s, req);
    CHECK(std::abs(lower2.log_value - std::conj(upper2.log_value)) <=
          upper2.series_bound + lower2.series_bound + 1e-13 * std::abs(upper2.log_value));
}

TEST_CASE("parallel evaluation matches the serial reference route") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 6.0, 42, 0.01);
    for (ZetaKind kind : {ZetaKind::selberg, ZetaKind::ruelle, ZetaKind::symmetrized_s,
                          ZetaKind::super_s}) {
        EvalRequest req;
        req.zeta_kind = kind;
        req.s = kind == ZetaKind::ruelle ? cdouble{2.4, 0.9} : cdouble{1.5, 0.9};
        req.sigma = sigma_of({1});
        const EvalResult fast = log_zeta(s, req);
        const EvalResult slow = reference::log_zeta_serial(s, req);
        CHECK(std::abs(fast.log_value - slow.log_value) <=
              fast.series_bound + slow.series_bound + 1e-13 * (1.0 + std::abs(fast.log_value)));
        CHECK(fast.terms_used > 0);
        CHECK(slow.terms_used > 0);
    }
}

TEST_CASE("results are byte-identical across thread counts") {
    const LengthSpectrum s = generate_length_spectrum(3, 1.0, 6.0, 7, 0.01);
    EvalRequest req;
    req.s = {1.4, -0.8};
    req.sigma = sigma_of({2});
    req.zeta_kind = ZetaKind::symmetrized_s;
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const EvalResult one = log_zeta(s, req);
    omp_set_num_threads(4);
    const EvalResult four = log_zeta(s, req);
    omp_set_num_threads(before);
    CHECK(one.log_value.real() == four.log_value.real());
    CHECK(one.log_value.imag() == four.log_value.imag());
    CHECK(one.series_bound == four.series_bound);
    CHECK(one.terms_used == four.terms_used);
}

TEST_CASE("ruelle log equals the rank-one trace recombination on a small spectrum") {
    // On a single geodesic the Ruelle local factor is
    //   log(1 - tr(mu) e^{-s l})  (up to the trace series the kernel uses);
    // with trivial twist and sigma this is exactly log(1 - e^{-s l}).
    const PrimeGeodesic g = geodesic(1.3, {0.9});
    const LengthSpectrum s = make_length_spectrum(3, 1.0, 2.0, {g});
    EvalRequest req;
    req.s = {2.6, 0.4};
    req.zeta_kind = ZetaKind::ruelle;
    req.sigma = sigma_of({0});
    const EvalResult r = log_zeta(s, req);
    const cdouble expect = std::log(1.0 - std::exp(-req.s * 1.3));
    CHECK(std::abs(r.log_value - expect) <= r.series_bound + 1e-14);
}
