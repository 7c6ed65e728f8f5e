#include "geozeta/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "geozeta/errors.hpp"

namespace geozeta {

namespace {

using LocationKey = std::pair<double, double>;

LocationKey key_of(cdouble z) { return {z.real(), z.imag()}; }

void require_tag(const SpectralInput& input, CaseTag tag, const char* op) {
    if (input.case_tag != tag)
        throw ValidationError("case-mismatch", std::string(op) + " requires case " +
                                                   (tag == CaseTag::A ? "A" : "B"));
}

Divisor from_map(const std::map<LocationKey, long>& orders) {
    std::vector<DivisorPoint> raw;
    raw.reserve(orders.size());
    for (const auto& [key, order] : orders)
        raw.push_back({cdouble{key.first, key.second}, order});
    return make_divisor(std::move(raw));
}

Divisor laplace_divisor(const SpectralInput& input) {
    std::vector<DivisorPoint> raw;
    raw.reserve(2 * input.laplace_spectrum.size());
    for (const LaplaceEntry& e : input.laplace_spectrum) {
        if (e.s == 0.0) {
            raw.push_back({cdouble{0.0, 0.0}, 2 * e.m});
        } else {
            raw.push_back({cdouble{0.0, e.s}, e.m});
            raw.push_back({cdouble{0.0, -e.s}, e.m});
        }
    }
    return make_divisor(std::move(raw));
}

} // namespace

Divisor make_divisor(std::vector<DivisorPoint> raw) {
    std::map<LocationKey, long> merged;
    for (const DivisorPoint& pt : raw) merged[key_of(pt.location)] += pt.order;

    Divisor out;
    out.points.reserve(merged.size());
    for (const auto& [key, order] : merged) {
        if (order == 0) continue;
        out.points.push_back({cdouble{key.first, key.second}, order});
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const DivisorPoint& a, const DivisorPoint& b) {
                  const double ra = std::abs(a.location);
                  const double rb = std::abs(b.location);
                  if (ra != rb) return ra < rb;
                  return std::arg(a.location) < std::arg(b.location);
              });
    return out;
}

Divisor divisor_case_a(const SpectralInput& input) {
    require_tag(input, CaseTag::A, "divisor_case_a");
    return laplace_divisor(input);
}

Divisor divisor_symmetrized(const SpectralInput& input) { return laplace_divisor(input); }

Divisor divisor_super(const SpectralInput& input) {
    require_tag(input, CaseTag::B, "divisor_super");
    std::vector<DivisorPoint> raw;
    raw.reserve(input.dirac_spectrum.size());
    for (const DiracEntry& e : input.dirac_spectrum) raw.push_back({cdouble{0.0, e.s}, e.m_s});
    return make_divisor(std::move(raw));
}

Divisor divisor_selberg_case_b(const SpectralInput& input) {
    require_tag(input, CaseTag::B, "divisor_selberg_case_b");

    // Laplace order by |s|, Dirac order by signed s.
    std::map<double, long> laplace;
    for (const LaplaceEntry& e : input.laplace_spectrum) laplace[e.s] += e.m;
    std::map<double, long> dirac;
    for (const DiracEntry& e : input.dirac_spectrum) dirac[e.s] += e.m_s;

    // Union of supports on the imaginary axis, as signed ordinates.
    std::map<double, long> half_sums;
    for (const auto& [s, m] : laplace) {
        if (s == 0.0) {
            half_sums[0.0] = 0; // handled below; support marker only
            continue;
        }
        half_sums[s] = 0;
        half_sums[-s] = 0;
    }
    for (const auto& [s, m_s] : dirac) half_sums[s] = 0;

    std::map<LocationKey, long> orders;
    for (auto& [t, unused] : half_sums) {
        if (t == 0.0) {
            const auto it = laplace.find(0.0);
            const long m0 = it == laplace.end() ? 0 : it->second;
            orders[key_of(cdouble{0.0, 0.0})] = m0;
            continue;
        }
        const auto lap = laplace.find(std::abs(t));
        const long m = lap == laplace.end() ? 0 : lap->second;
        const auto dir = dirac.find(t);
        const long m_s = dir == dirac.end() ? 0 : dir->second;
        if ((m + m_s) % 2 != 0)
            throw ValidationError("parity",
                                  "odd order sum " + std::to_string(m + m_s) +
                                      " at ordinate " + format_double(t));
        orders[key_of(cdouble{0.0, t})] = (m + m_s) / 2;
    }
    return from_map(orders);
}

SqrtCheckReport combine_sqrt_check(const Divisor& d_s, const Divisor& d_super,
                                   const Divisor& d_selberg_b) {
    std::map<LocationKey, std::pair<long, long>> table; // {combined, doubled selberg}
    for (const DivisorPoint& pt : d_s.points) table[key_of(pt.location)].first += pt.order;
    for (const DivisorPoint& pt : d_super.points) table[key_of(pt.location)].first += pt.order;
    for (const DivisorPoint& pt : d_selberg_b.points)
        table[key_of(pt.location)].second += 2 * pt.order;

    SqrtCheckReport report;
    for (const auto& [key, pair] : table) {
        if (pair.first == pair.second) continue;
        report.ok = false;
        report.mismatches.push_back(
            {cdouble{key.first, key.second}, pair.second, pair.first});
    }
    return report;
}

void write_divisor_csv(std::ostream& out, const Divisor& divisor) {
    out << "re,im,order\n";
    for (const DivisorPoint& pt : divisor.points)
        out << format_double(pt.location.real()) << ',' << format_double(pt.location.imag())
            << ',' << pt.order << '\n';
}

} // namespace geozeta
