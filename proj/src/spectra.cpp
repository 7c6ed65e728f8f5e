#include "geozeta/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace geozeta {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kUnitTol = 1e-12;

// Materialization guard: generated spectra are held in memory.
constexpr double kMaxGeneratedCount = 2.0e7;

void validate_geodesic(const PrimeGeodesic& g, size_t rank, double cutoff, long index) {
    const std::string where = "geodesic " + std::to_string(index);
    if (!(g.length > 0.0))
        throw ValidationError("spectrum", where + ": length must be positive, got " +
                                              format_double(g.length));
    if (g.length > cutoff)
        throw ValidationError("spectrum", where + ": length " + format_double(g.length) +
                                              " exceeds cutoff " + format_double(cutoff));
    if (g.holonomy_angles.size() != rank)
        throw ValidationError("spectrum",
                              where + ": expected " + std::to_string(rank) +
                                  " holonomy angles, got " + std::to_string(g.holonomy_angles.size()));
    for (double a : g.holonomy_angles)
        if (!(a >= 0.0 && a < kTwoPi))
            throw ValidationError("spectrum", where + ": holonomy angle " + format_double(a) +
                                                  " outside [0, 2pi)");
    for (const auto& z : g.twist_eigenvalues)
        if (std::abs(std::abs(z) - 1.0) > kUnitTol)
            throw ValidationError("spectrum", where + ": twist eigenvalue modulus " +
                                                  format_double(std::abs(z)) + " is not 1");
    if (g.multiplicity <= 0)
        throw ValidationError("spectrum", where + ": multiplicity must be positive");
}

json geodesic_to_json(const PrimeGeodesic& g) {
    json twists = json::array();
    for (const auto& z : g.twist_eigenvalues) twists.push_back({z.real(), z.imag()});
    return json{{"length", g.length},
                {"holonomy_angles", g.holonomy_angles},
                {"twist_eigenvalues", twists},
                {"multiplicity", g.multiplicity}};
}

PrimeGeodesic geodesic_from_json(const json& j, long line) {
    try {
        PrimeGeodesic g;
        g.length = j.at("length").get<double>();
        g.holonomy_angles = j.at("holonomy_angles").get<std::vector<double>>();
        for (const auto& pair : j.at("twist_eigenvalues")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("twist eigenvalue must be [re, im]", line);
            g.twist_eigenvalues.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        g.multiplicity = j.at("multiplicity").get<long>();
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad geodesic record: ") + e.what(), line);
    }
}

} // namespace

LengthSpectrum make_length_spectrum(int dimension, double rho, double cutoff,
                                    std::vector<PrimeGeodesic> geodesics,
                                    SpectrumProvenance provenance) {
    if (dimension < 3 || dimension % 2 == 0)
        throw ValidationError("spectrum", "dimension must be odd and >= 3, got " +
                                              std::to_string(dimension));
    if (!(rho > 0.0))
        throw ValidationError("spectrum", "rho must be positive");
    if (!(cutoff > 0.0))
        throw ValidationError("spectrum", "cutoff must be positive");

    LengthSpectrum s;
    s.dimension = dimension;
    s.rho = rho;
    s.cutoff = cutoff;
    s.provenance = provenance;
    s.geodesics = std::move(geodesics);
    std::stable_sort(s.geodesics.begin(), s.geodesics.end(),
                     [](const PrimeGeodesic& a, const PrimeGeodesic& b) {
                         return a.length < b.length;
                     });
    const size_t rank = s.holonomy_rank();
    for (size_t i = 0; i < s.geodesics.size(); ++i)
        validate_geodesic(s.geodesics[i], rank, cutoff, static_cast<long>(i));
    return s;
}

LengthSpectrum load_length_spectrum(std::istream& in, SpectrumFormat format) {
    if (format != SpectrumFormat::jsonl)
        throw ValidationError("format", "unsupported length-spectrum format");
    std::string line;
    long lineno = 0;
    json header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            header = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad header: ") + e.what(), lineno);
        }
        break;
    }
    if (header.is_null())
        throw ParseError("empty length-spectrum stream", lineno);
    int dimension;
    double rho, cutoff;
    SpectrumProvenance provenance = SpectrumProvenance::ingested;
    try {
        dimension = header.at("dimension").get<int>();
        rho = header.at("rho").get<double>();
        cutoff = header.at("cutoff").get<double>();
        // Spectra written by the generator carry their provenance; files
        // without the marker count as ingested, so their density-based tail
        // bounds stay conditional.
        if (header.value("provenance", "") == "generated")
            provenance = SpectrumProvenance::generated;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad header: ") + e.what(), lineno);
    }

    std::vector<PrimeGeodesic> geodesics;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), lineno);
        }
        geodesics.push_back(geodesic_from_json(rec, lineno));
    }
    return make_length_spectrum(dimension, rho, cutoff, std::move(geodesics), provenance);
}

void save_length_spectrum(const LengthSpectrum& spectrum, std::ostream& out,
                          SpectrumFormat format) {
    if (format != SpectrumFormat::jsonl)
        throw ValidationError("format", "unsupported length-spectrum format");
    json header{{"dimension", spectrum.dimension},
                {"rho", spectrum.rho},
                {"cutoff", spectrum.cutoff}};
    if (spectrum.provenance == SpectrumProvenance::generated) header["provenance"] = "generated";
    out << header.dump() << '\n';
    for (const auto& g : spectrum.geodesics) out << geodesic_to_json(g).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Length-spectrum synthesis.
//
// Intensity lambda(u) = e^{2 rho u} (1/u - 1/(2 rho u^2)) on u > 1/(2 rho),
// chosen so that the counting function integrates in closed form to
// pi(L) = e^{2 rho L}/(2 rho L) - e.  Lengths are drawn i.i.d. from the
// normalized intensity by rejection against the e^{2 rho u} envelope.
// ---------------------------------------------------------------------------

double geodesic_count_estimate(double rho, double cutoff, double density_scale) {
    const double a = 1.0 / (2.0 * rho);
    if (cutoff <= a) return 0.0;
    const double x = 2.0 * rho * cutoff;
    if (x > 700.0)
        throw NumericError("overflow", "e^{2 rho L} exceeds representable range");
    return density_scale * (std::exp(x) / x - std::exp(1.0));
}

LengthSpectrum generate_length_spectrum(int dimension, double rho, double cutoff,
                                        std::uint64_t seed, double density_scale) {
    if (dimension < 3 || dimension % 2 == 0)
        throw ValidationError("generate", "dimension must be odd and >= 3");
    if (!(rho > 0.0) || !(cutoff > 0.0))
        throw ValidationError("generate", "rho and cutoff must be positive");
    if (!(density_scale > 0.0))
        throw ValidationError("generate", "density_scale must be positive");

    const double a = 1.0 / (2.0 * rho);
    const double expected = geodesic_count_estimate(rho, cutoff, density_scale);
    if (expected > kMaxGeneratedCount)
        throw ValidationError("generate", "expected geodesic count " + format_double(expected) +
                                              " too large to materialize; lower cutoff or "
                                              "density_scale");
    Rng rng(seed);
    const double count_real = expected + rng.next_unit();
    const auto count = static_cast<long long>(count_real);
    if (count < 1)
        throw ValidationError("empty-spectrum", "cutoff " + format_double(cutoff) +
                                                    " too small: expected count " +
                                                    format_double(expected) + " < 1");

    // Envelope constant: h(u) = 1/u - 1/(2 rho u^2) peaks at u = 1/rho.
    auto h = [&](double u) { return 1.0 / u - 1.0 / (2.0 * rho * u * u); };
    double c = h(cutoff);
    if (cutoff > 1.0 / rho) c = std::max(c, h(1.0 / rho));

    const double ea = std::exp(2.0 * rho * a);
    const double el = std::exp(2.0 * rho * cutoff);
    const size_t rank = static_cast<size_t>((dimension - 1) / 2);

    std::vector<PrimeGeodesic> geos;
    geos.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) {
        double u;
        for (;;) {
            // inverse-CDF draw from the e^{2 rho u} envelope on [a, L]
            u = std::log(ea + rng.next_unit() * (el - ea)) / (2.0 * rho);
            if (rng.next_unit() * c <= h(u)) break;
        }
        PrimeGeodesic g;
        g.length = u;
        g.holonomy_angles.resize(rank);
        for (auto& th : g.holonomy_angles) th = rng.next_uniform(kTwoPi);
        g.twist_eigenvalues = {cdouble{1.0, 0.0}}; // trivial character
        g.multiplicity = 1;
        geos.push_back(std::move(g));
    }
    // The unconditional tail bound downstream assumes the nominal density;
    // an up-scaled spectrum exceeds it, so its tail is only conditional.
    const auto provenance = density_scale <= 1.0 ? SpectrumProvenance::generated
                                                 : SpectrumProvenance::ingested;
    return make_length_spectrum(dimension, rho, cutoff, std::move(geos), provenance);
}

// ---------------------------------------------------------------------------
// Operator spectra
// ---------------------------------------------------------------------------

SpectralInput make_spectral_input(CaseTag case_tag, int dimension,
                                  std::vector<LaplaceEntry> laplace,
                                  std::vector<DiracEntry> dirac, double weyl_constant,
                                  const SpectralValidationOptions& opts) {
    if (dimension < 3 || dimension % 2 == 0)
        throw ValidationError("spectral", "dimension must be odd and >= 3");
    if (!(weyl_constant > 0.0))
        throw ValidationError("spectral", "weyl_constant must be positive");

    for (size_t i = 0; i < laplace.size(); ++i) {
        if (!(laplace[i].s >= 0.0))
            throw ValidationError("spectral", "laplace eigenvalue must be >= 0, got " +
                                                  format_double(laplace[i].s));
        if (i > 0 && !(laplace[i].s > laplace[i - 1].s))
            throw ValidationError("spectral", "laplace eigenvalues must be strictly increasing");
        if (laplace[i].m == 0)
            throw ValidationError("spectral", "laplace multiplicity must be nonzero");
    }

    if (case_tag == CaseTag::A && !dirac.empty())
        throw ValidationError("spectral", "case A carries no Dirac spectrum");

    if (case_tag == CaseTag::B) {
        for (size_t i = 0; i < dirac.size(); ++i) {
            if (i > 0 && !(dirac[i].s > dirac[i - 1].s))
                throw ValidationError("spectral", "dirac eigenvalues must be strictly increasing");
            const auto& d = dirac[i];
            if (d.s == 0.0) {
                // m_s(0) vanishes identically (antisymmetrized projection trace)
                if (d.m_s != 0)
                    throw ValidationError("spectral", "dirac entry at 0 must have m_s = 0");
                continue;
            }
            auto it = std::lower_bound(laplace.begin(), laplace.end(), std::abs(d.s),
                                       [](const LaplaceEntry& e, double v) { return e.s < v; });
            if (it == laplace.end() || it->s != std::abs(d.s))
                throw ValidationError("spectral",
                                      "dirac eigenvalue " + format_double(d.s) +
                                          " has no laplace entry at " + format_double(std::abs(d.s)));
            if (it->m < std::abs(d.m_s))
                throw ValidationError("spectral", "dirac multiplicity at " + format_double(d.s) +
                                                      " exceeds laplace multiplicity");
            if ((it->m + d.m_s) % 2 != 0)
                throw ValidationError("spectral", "parity violation at " + format_double(d.s) +
                                                      ": m + m_s must be even");
        }
    }

    // Weyl growth check on the |m|-weighted counting function.
    long long weighted = 0;
    for (const auto& e : laplace) {
        weighted += std::abs(e.m);
        if (weighted >= opts.weyl_min_count && e.s > 0.0) {
            double bound = weyl_constant * std::pow(e.s, dimension) * (1.0 + opts.weyl_tolerance);
            if (static_cast<double>(weighted) > bound)
                throw ValidationError("spectral",
                                      "counting function exceeds Weyl bound at r = " +
                                          format_double(e.s) + ": " + std::to_string(weighted) +
                                          " > " + format_double(bound));
        }
    }

    SpectralInput in;
    in.case_tag = case_tag;
    in.dimension = dimension;
    in.laplace_spectrum = std::move(laplace);
    in.dirac_spectrum = std::move(dirac);
    in.weyl_constant = weyl_constant;
    return in;
}

SpectralInput load_spectral_input(std::istream& in, const SpectralValidationOptions& opts) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad spectral input: ") + e.what());
    }
    try {
        const std::string cs = doc.at("case").get<std::string>();
        if (cs != "A" && cs != "B") throw ParseError("case must be \"A\" or \"B\"");
        CaseTag tag = cs == "A" ? CaseTag::A : CaseTag::B;
        int dimension = doc.at("dimension").get<int>();
        double weyl = doc.at("weyl_constant").get<double>();
        std::vector<LaplaceEntry> laplace;
        for (const auto& row : doc.at("laplace")) {
            if (!row.is_array() || row.size() != 2) throw ParseError("laplace row must be [s, m]");
            laplace.push_back({row[0].get<double>(), row[1].get<long>()});
        }
        std::vector<DiracEntry> dirac;
        if (doc.contains("dirac"))
            for (const auto& row : doc.at("dirac")) {
                if (!row.is_array() || row.size() != 2)
                    throw ParseError("dirac row must be [s, m_s]");
                dirac.push_back({row[0].get<double>(), row[1].get<long>()});
            }
        return make_spectral_input(tag, dimension, std::move(laplace), std::move(dirac), weyl,
                                   opts);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad spectral input: ") + e.what());
    }
}

void save_spectral_input(const SpectralInput& input, std::ostream& out) {
    json laplace = json::array();
    for (const auto& e : input.laplace_spectrum) laplace.push_back({e.s, e.m});
    json dirac = json::array();
    for (const auto& e : input.dirac_spectrum) dirac.push_back({e.s, e.m_s});
    json doc{{"case", input.case_tag == CaseTag::A ? "A" : "B"},
             {"dimension", input.dimension},
             {"weyl_constant", input.weyl_constant},
             {"laplace", laplace},
             {"dirac", dirac}};
    out << doc.dump(2) << '\n';
}

SpectralInput generate_spectral_input(int dimension, double weyl_constant, double r_max,
                                      CaseTag case_tag, std::uint64_t seed) {
    if (dimension < 3 || dimension % 2 == 0)
        throw ValidationError("generate", "dimension must be odd and >= 3");
    if (!(weyl_constant > 0.0) || !(r_max > 0.0))
        throw ValidationError("generate", "weyl_constant and r_max must be positive");
    const double total = weyl_constant * std::pow(r_max, dimension);
    if (total > kMaxGeneratedCount)
        throw ValidationError("generate", "expected eigenvalue count too large to materialize");

    Rng rng(seed);
    std::vector<LaplaceEntry> laplace;
    std::vector<DiracEntry> dirac_pos, dirac_neg;

    // Advance the weighted count by m per eigenvalue so the |m|-weighted
    // counting function tracks C r^n.
    double wcount = 0.0;
    bool include_zero = rng.next_unit() < 0.3;
    if (include_zero) laplace.push_back({0.0, 1 + static_cast<long>(rng.next_below(2))});
    for (;;) {
        long m = rng.next_unit() < 0.1 ? 2 : 1;
        double s = std::pow((wcount + rng.next_unit()) / weyl_constant,
                            1.0 / static_cast<double>(dimension));
        if (s > r_max) break;
        if (s > 0.0) laplace.push_back({s, m});
        wcount += static_cast<double>(m);

        if (case_tag == CaseTag::B && s > 0.0) {
            // split m into d+ + d-; m_s = d+ - d-, so parity holds by construction
            long dplus = 0;
            for (long b = 0; b < m; ++b) dplus += static_cast<long>(rng.next_below(2));
            long ms = 2 * dplus - m;
            if (ms != 0) {
                dirac_pos.push_back({s, ms});
                dirac_neg.push_back({-s, -ms});
            }
        }
    }
    if (laplace.empty())
        throw ValidationError("empty-spectrum", "r_max too small: no eigenvalues generated");

    std::vector<DiracEntry> dirac;
    if (case_tag == CaseTag::B) {
        dirac.reserve(dirac_pos.size() * 2);
        for (auto it = dirac_neg.rbegin(); it != dirac_neg.rend(); ++it) dirac.push_back(*it);
        for (const auto& d : dirac_pos) dirac.push_back(d);
    }
    return make_spectral_input(case_tag, dimension, std::move(laplace), std::move(dirac),
                               weyl_constant);
}

} // namespace geozeta
