#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "geozeta/divisor.hpp"
#include "geozeta/errors.hpp"
#include "geozeta/spectra.hpp"

using namespace geozeta;

namespace {

SpectralInput simple_a(std::vector<LaplaceEntry> laplace) {
    return make_spectral_input(CaseTag::A, 3, std::move(laplace), {}, 1.0);
}

SpectralInput simple_b(std::vector<LaplaceEntry> laplace, std::vector<DiracEntry> dirac) {
    return make_spectral_input(CaseTag::B, 3, std::move(laplace), std::move(dirac), 1.0);
}

bool has_point(const Divisor& d, cdouble loc, long order) {
    for (const DivisorPoint& p : d.points)
        if (std::abs(p.location - loc) < 1e-12 && p.order == order) return true;
    return false;
}

} // namespace

TEST_CASE("laplace entries map to mirrored imaginary points") {
    const Divisor d = divisor_case_a(simple_a({{2.0, 3}}));
    REQUIRE(d.points.size() == 2);
    CHECK(has_point(d, {0.0, 2.0}, 3));
    CHECK(has_point(d, {0.0, -2.0}, 3));
}

TEST_CASE("a zero laplace eigenvalue lands at the origin with doubled order") {
    const Divisor d = divisor_case_a(simple_a({{0.0, 1}}));
    REQUIRE(d.points.size() == 1);
    CHECK(has_point(d, {0.0, 0.0}, 2));
}

TEST_CASE("negative multiplicities become poles") {
    const Divisor d = divisor_case_a(simple_a({{1.0, -2}}));
    REQUIRE(d.points.size() == 2);
    CHECK(has_point(d, {0.0, 1.0}, -2));
    CHECK(has_point(d, {0.0, -1.0}, -2));
}

TEST_CASE("the case-a map requires tag A but the symmetrized map does not") {
    const SpectralInput b = simple_b({{1.0, 2}}, {{1.0, 2}});
    CHECK_THROWS_AS(divisor_case_a(b), ValidationError);
    const Divisor d = divisor_symmetrized(b);
    CHECK(has_point(d, {0.0, 1.0}, 2));
    CHECK(has_point(d, {0.0, -1.0}, 2));
}

TEST_CASE("dirac entries map one-sidedly") {
    const Divisor d = divisor_super(simple_b({{1.0, 2}}, {{1.0, 2}}));
    REQUIRE(d.points.size() == 1);
    CHECK(has_point(d, {0.0, 1.0}, 2));

    const Divisor e = divisor_super(simple_b({{1.0, 3}}, {{-1.0, -3}}));
    REQUIRE(e.points.size() == 1);
    CHECK(has_point(e, {0.0, -1.0}, -3));

    const Divisor empty = divisor_super(simple_b({{1.0, 2}}, {}));
    CHECK(empty.points.empty());
    CHECK_THROWS_AS(divisor_super(simple_a({{1.0, 2}})), ValidationError);
}

TEST_CASE("half-sum divisor on the union support") {
    const SpectralInput in = simple_b({{1.0, 3}}, {{-1.0, -3}, {1.0, 1}});
    const Divisor d = divisor_selberg_case_b(in);
    REQUIRE(d.points.size() == 1);
    CHECK(has_point(d, {0.0, 1.0}, 2)); // (3 + 1)/2
    // (3 - 3)/2 = 0 at -i: dropped
    CHECK(!has_point(d, {0.0, -1.0}, 0));
}

TEST_CASE("half-sum divisor keeps the origin order undoubled") {
    const SpectralInput in = simple_b({{0.0, 2}, {1.0, 4}}, {{1.0, 2}});
    const Divisor d = divisor_selberg_case_b(in);
    CHECK(has_point(d, {0.0, 0.0}, 2));
    CHECK(has_point(d, {0.0, 1.0}, 3));  // (4 + 2)/2
    CHECK(has_point(d, {0.0, -1.0}, 2)); // (4 + 0)/2
    CHECK(d.points.size() == 3);
}

TEST_CASE("an odd half-sum is rejected, never rounded") {
    // Valid spectral data (no dirac partner, so no parity constraint there),
    // but the half-sum at +-i would be 1/2.
    const SpectralInput in = simple_b({{1.0, 1}}, {});
    CHECK_THROWS_AS(divisor_selberg_case_b(in), ValidationError);
    CHECK_THROWS_AS(divisor_selberg_case_b(simple_a({{1.0, 2}})), ValidationError);
}

TEST_CASE("divisor normalization merges, drops zeros, and sorts canonically") {
    std::vector<DivisorPoint> raw = {
        {{0.0, 2.0}, 5}, {{1.0, 0.0}, 1}, {{0.0, 2.0}, -5}, {{0.0, -1.0}, 2}, {{0.5, 0.0}, 3}};
    const Divisor d = make_divisor(raw);
    REQUIRE(d.points.size() == 3);
    CHECK(std::abs(d.points[0].location - cdouble{0.5, 0.0}) < 1e-15);
    CHECK(std::abs(d.points[1].location - cdouble{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(d.points[2].location - cdouble{1.0, 0.0}) < 1e-15);

    std::reverse(raw.begin(), raw.end());
    const Divisor e = make_divisor(raw);
    REQUIRE(e.points.size() == d.points.size());
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        CHECK(d.points[i].location == e.points[i].location);
        CHECK(d.points[i].order == e.points[i].order);
    }
}

TEST_CASE("square relation holds for consistent spectra") {
    const SpectralInput in =
        simple_b({{0.0, 2}, {1.0, 4}, {2.0, 2}}, {{-2.0, -2}, {-1.0, -2}, {1.0, 2}, {2.0, 2}});
    const SqrtCheckReport r = combine_sqrt_check(
        divisor_symmetrized(in), divisor_super(in), divisor_selberg_case_b(in));
    CHECK(r.ok);
    CHECK(r.mismatches.empty());
}

TEST_CASE("square relation failures are located") {
    const SpectralInput in = simple_b({{1.0, 4}}, {{1.0, 2}});
    Divisor d_s = divisor_symmetrized(in);
    const Divisor d_super = divisor_super(in);
    const Divisor d_half = divisor_selberg_case_b(in);
    // Perturb the symmetrized divisor at +i.
    for (DivisorPoint& p : d_s.points)
        if (p.location.imag() > 0) p.order += 2;
    const SqrtCheckReport r = combine_sqrt_check(d_s, d_super, d_half);
    CHECK(!r.ok);
    REQUIRE(r.mismatches.size() == 1);
    CHECK(std::abs(r.mismatches[0].location - cdouble{0.0, 1.0}) < 1e-12);
    CHECK(r.mismatches[0].combined_order == 8);       // (4+2) + 2
    CHECK(r.mismatches[0].doubled_selberg_order == 6); // 2 * 3
}

TEST_CASE("square relation on empty divisors is vacuously true") {
    const SqrtCheckReport r = combine_sqrt_check({}, {}, {});
    CHECK(r.ok);
}

TEST_CASE("csv rendering is canonical") {
    const Divisor d = make_divisor({{{0.0, 2.0}, 3}, {{0.0, -2.0}, 3}, {{0.0, 0.0}, 2}});
    std::ostringstream out;
    write_divisor_csv(out, d);
    CHECK(out.str() == "re,im,order\n0,0,2\n0,-2,3\n0,2,3\n");
}
