#include "geozeta/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>
#include <omp.h>

#include "geozeta/errors.hpp"

namespace geozeta {

namespace {

constexpr long kBlock = 2048;
constexpr double kPi = 3.14159265358979323846;
constexpr double kShellRatio = 0.85; // shell-sum decay accepted as convergent

bool is_finite(cdouble v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::vector<double> sorted_radii_with_mult(const ZeroSet& z, std::vector<long>* mults) {
    std::vector<std::pair<double, long>> entries;
    entries.reserve(z.zeros.size());
    for (const ZeroEntry& e : z.zeros) entries.push_back({std::abs(e.z), e.multiplicity});
    std::sort(entries.begin(), entries.end());
    std::vector<double> radii;
    radii.reserve(entries.size());
    mults->clear();
    mults->reserve(entries.size());
    for (const auto& [r, m] : entries) {
        radii.push_back(r);
        mults->push_back(m);
    }
    return radii;
}

void require_estimable(const ZeroSet& z, long minimum) {
    if (z.total_multiplicity() < minimum)
        throw ValidationError("too-few-zeros", "growth estimation needs at least " +
                                                   std::to_string(minimum) + " zeros");
}

// Tail of the canonical product over the omitted zeros |z| > R, via
// |log E(u,p)| <= 2|u|^{p+1}/(p+1) for |u| <= 1/2 and the counting bound
// N(r) <= C r^n:  sum <= 2 C |s|^{p+1} R^{n-p-1} / (p+1-n).
double truncation_tail(const ZeroSet& z, int genus, cdouble s, double eps_tail) {
    if (!z.truncated) return 0.0;
    const double R = z.radius_cutoff;
    const double n = static_cast<double>(z.declared_dimension);
    const double p1 = static_cast<double>(genus + 1);
    if (!(p1 > n))
        throw ConvergenceError("tail-divergent",
                               "genus " + std::to_string(genus) +
                                   " cannot bound a density of exponent " +
                                   std::to_string(z.declared_dimension));
    const double sabs = std::abs(s);
    if (!(R >= 2.0 * sabs))
        throw ConvergenceError("cutoff",
                               "evaluation point |s| = " + format_double(sabs) +
                                   " too large for the zero cutoff " + format_double(R));
    const double tail =
        2.0 * z.density_constant * std::pow(sabs, p1) * std::pow(R, n - p1) / (p1 - n);
    if (!(tail <= eps_tail))
        throw ConvergenceError("tail", "tail bound " + format_double(tail) +
                                           " exceeds the tolerance " + format_double(eps_tail));
    return tail;
}

cdouble horner(const std::vector<cdouble>& coeffs, cdouble s) {
    cdouble acc{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
    return acc;
}

nlohmann::json zero_set_to_json(const ZeroSet& z, int genus) {
    nlohmann::json obj;
    obj["genus"] = genus;
    nlohmann::json zeros = nlohmann::json::array();
    for (const ZeroEntry& e : z.zeros)
        zeros.push_back({e.z.real(), e.z.imag(), e.multiplicity});
    obj["zeros"] = std::move(zeros);
    obj["dimension"] = z.declared_dimension;
    obj["truncated"] = z.truncated;
    obj["cutoff"] = z.radius_cutoff;
    obj["density"] = z.density_constant;
    obj["conditional"] = z.density_conditional;
    return obj;
}

std::pair<ZeroSet, int> zero_set_from_json(const nlohmann::json& obj) {
    std::vector<ZeroEntry> zeros;
    for (const auto& row : obj.at("zeros")) {
        if (!row.is_array() || row.size() != 3)
            throw ParseError("zero-set entries must be [re, im, multiplicity]");
        zeros.push_back({cdouble{row[0].get<double>(), row[1].get<double>()},
                         row[2].get<long>()});
    }
    ZeroSet z = make_zero_set(std::move(zeros), obj.at("dimension").get<int>());
    z.truncated = obj.value("truncated", false);
    z.radius_cutoff = obj.value("cutoff", 0.0);
    z.density_constant = obj.value("density", 0.0);
    z.density_conditional = obj.value("conditional", false);
    return {std::move(z), obj.at("genus").get<int>()};
}

} // namespace

long ZeroSet::total_multiplicity() const {
    long total = 0;
    for (const ZeroEntry& e : zeros) total += e.multiplicity;
    return total;
}

double ZeroSet::max_radius() const {
    double r = 0.0;
    for (const ZeroEntry& e : zeros) r = std::max(r, std::abs(e.z));
    return r;
}

ZeroSet make_zero_set(std::vector<ZeroEntry> zeros, int declared_dimension) {
    if (declared_dimension < 1)
        throw ValidationError("dimension", "declared dimension must be positive");
    for (const ZeroEntry& e : zeros) {
        if (e.z == cdouble{0.0, 0.0})
            throw ValidationError("origin-zero",
                                  "zero sets exclude the origin; use the origin order instead");
        if (e.multiplicity < 1)
            throw ValidationError("multiplicity", "multiplicities must be at least 1");
    }
    ZeroSet out;
    out.zeros = std::move(zeros);
    out.declared_dimension = declared_dimension;
    return out;
}

cdouble elementary_factor(cdouble u, int k) {
    if (k < 0) throw ValidationError("elementary-factor", "negative degree");
    cdouble poly{0.0, 0.0};
    cdouble upow{1.0, 0.0};
    for (int j = 1; j <= k; ++j) {
        upow *= u;
        poly += upow / static_cast<double>(j);
    }
    return (cdouble{1.0, 0.0} - u) * std::exp(poly);
}

cdouble log_elementary_factor(cdouble u, int k) {
    if (k < 0) throw ValidationError("elementary-factor", "negative degree");
    const double uabs = std::abs(u);
    if (uabs <= 0.5) {
        // log E(u,k) = -sum_{j>k} u^j/j; geometric decay, no cancellation.
        cdouble upow{1.0, 0.0};
        for (int j = 1; j <= k; ++j) upow *= u;
        cdouble acc{0.0, 0.0};
        for (int j = k + 1; j <= k + 200; ++j) {
            upow *= u;
            const cdouble term = upow / static_cast<double>(j);
            acc -= term;
            if (std::abs(term) < 1e-20 * (1.0 + std::abs(acc))) break;
        }
        return acc;
    }
    cdouble poly{0.0, 0.0};
    cdouble upow{1.0, 0.0};
    for (int j = 1; j <= k; ++j) {
        upow *= u;
        poly += upow / static_cast<double>(j);
    }
    return std::log(cdouble{1.0, 0.0} - u) + poly;
}

ExponentEstimate convergence_exponent(const ZeroSet& z) {
    ExponentEstimate out;
    if (!z.truncated) {
        // A complete finite set: every power sum converges.
        out.bounded_set = true;
        return out;
    }
    require_estimable(z, 100);

    std::vector<long> mults;
    const std::vector<double> radii = sorted_radii_with_mult(z, &mults);
    const double r_min = radii.front();
    const double r_max = radii.back();
    if (!(r_max > r_min * (1.0 + 1e-6))) {
        out.bounded_set = true;
        return out;
    }

    // Counting function at each distinct radius, restricted to the outer
    // half of the radius range.
    const double window = 0.5 * (r_min + r_max);
    std::vector<double> xs;
    std::vector<double> ys;
    long count = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        count += mults[i];
        const bool last_at_radius = (i + 1 == radii.size()) || (radii[i + 1] > radii[i]);
        if (!last_at_radius || radii[i] < window || radii[i] <= 0.0) continue;
        xs.push_back(std::log(radii[i]));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    if (xs.size() < 3) {
        out.bounded_set = true;
        return out;
    }
    const LineFit fit = fit_line(xs, ys);
    out.value = fit.slope;
    out.fit_residual = fit.rms_residual;
    return out;
}

GenusEstimate genus_of(const ZeroSet& z) {
    GenusEstimate out;
    if (!z.truncated) return out; // finite complete set: genus 0 exactly
    require_estimable(z, 100);

    const double R = z.max_radius();
    if (!(R > 0.0)) return out;
    const double checkpoints[4] = {R / 8.0, R / 4.0, R / 2.0, R};

    for (int p = 0; p <= z.declared_dimension; ++p) {
        double shells[3] = {0.0, 0.0, 0.0};
        const double t = static_cast<double>(p + 1);
        for (const ZeroEntry& e : z.zeros) {
            const double r = std::abs(e.z);
            for (int shell = 0; shell < 3; ++shell) {
                if (r > checkpoints[shell] && r <= checkpoints[shell + 1]) {
                    shells[shell] += static_cast<double>(e.multiplicity) * std::pow(r, -t);
                    break;
                }
            }
        }
        const bool converged = shells[1] <= kShellRatio * shells[0] + 1e-300 &&
                               shells[2] <= kShellRatio * shells[1] + 1e-300;
        if (converged) {
            out.value = p;
            return out;
        }
    }
    out.value = z.declared_dimension;
    out.clamped = true;
    return out;
}

double power_sum(const ZeroSet& z, double t) {
    double acc = 0.0;
    for (const ZeroEntry& e : z.zeros)
        acc += static_cast<double>(e.multiplicity) * std::pow(std::abs(e.z), -t);
    return acc;
}

cdouble ProductResult::value() const { return is_zero ? cdouble{0.0, 0.0} : std::exp(log_value); }

ProductResult canonical_product(const ZeroSet& z, int genus, cdouble s, double eps_tail) {
    if (genus < 0) throw ValidationError("genus", "genus must be nonnegative");
    if (!(eps_tail > 0.0)) throw ValidationError("tolerance", "tail tolerance must be positive");

    ProductResult out;
    out.tail_bound = truncation_tail(z, genus, s, eps_tail);
    out.tail_conditional = z.truncated && z.density_conditional;

    const long count = static_cast<long>(z.zeros.size());
    if (count == 0) return out;

    struct BlockPartial {
        cdouble log{0.0, 0.0};
        long hit = 0;
    };
    const long nblocks = (count + kBlock - 1) / kBlock;
    std::vector<BlockPartial> partials(static_cast<std::size_t>(nblocks));
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < nblocks; ++b) {
        if (failure) continue;
        try {
            BlockPartial part;
            const long lo = b * kBlock;
            const long hi = std::min(count, lo + kBlock);
            for (long i = lo; i < hi; ++i) {
                const ZeroEntry& e = z.zeros[static_cast<std::size_t>(i)];
                if (e.z == s) {
                    part.hit += e.multiplicity;
                    continue;
                }
                part.log += static_cast<double>(e.multiplicity) *
                            log_elementary_factor(s / e.z, genus);
            }
            partials[static_cast<std::size_t>(b)] = part;
        } catch (...) {
#pragma omp critical(geozeta_product_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (const BlockPartial& part : partials) {
        out.log_value += part.log;
        out.zero_multiplicity += part.hit;
    }
    // log_value holds the reduced product (vanishing factors removed) when
    // the point is an exact zero.
    out.is_zero = out.zero_multiplicity > 0;
    return out;
}

DivisorSplit split_divisor(const Divisor& divisor, int declared_dimension) {
    std::vector<ZeroEntry> zeros;
    std::vector<ZeroEntry> poles;
    long m0 = 0;
    for (const DivisorPoint& pt : divisor.points) {
        if (pt.location == cdouble{0.0, 0.0}) {
            m0 = pt.order;
        } else if (pt.order > 0) {
            zeros.push_back({pt.location, pt.order});
        } else {
            poles.push_back({pt.location, -pt.order});
        }
    }
    DivisorSplit split;
    split.z1 = make_zero_set(std::move(zeros), declared_dimension);
    split.z2 = make_zero_set(std::move(poles), declared_dimension);
    split.m0 = m0;
    return split;
}

Factorization make_factorization(ZeroSet z1, ZeroSet z2, int p1, int p2, long m0,
                                 std::vector<cdouble> g_coefficients) {
    if (z1.declared_dimension != z2.declared_dimension)
        throw ValidationError("dimension", "zero and pole sets declare different dimensions");
    if (m0 < 0) throw ValidationError("origin-order", "origin order must be nonnegative");
    if (g_coefficients.size() >
        static_cast<std::size_t>(z1.declared_dimension) + 1)
        throw ValidationError("degree", "polynomial degree exceeds the declared dimension");

    const auto check_genus = [](const ZeroSet& z, int p, const char* which) {
        if (p < 0) throw ValidationError("genus", "genus must be nonnegative");
        if (!z.truncated) {
            if (p != 0)
                throw ValidationError("genus", std::string(which) +
                                                   ": complete finite sets have genus 0");
        } else if (z.total_multiplicity() >= 100) {
            const GenusEstimate est = genus_of(z);
            if (est.value != p)
                throw ValidationError("genus", std::string(which) + ": declared genus " +
                                                   std::to_string(p) +
                                                   " does not match the estimate " +
                                                   std::to_string(est.value));
        }
    };
    check_genus(z1, p1, "zeros");
    check_genus(z2, p2, "poles");

    Factorization fact;
    fact.z1 = std::move(z1);
    fact.z2 = std::move(z2);
    fact.p1 = p1;
    fact.p2 = p2;
    fact.m0 = m0;
    fact.g_coefficients = std::move(g_coefficients);
    return fact;
}

GFit fit_g(const std::vector<std::pair<cdouble, cdouble>>& f_log_samples,
           const Factorization& fact, int degree, double eps_tail) {
    const int n = fact.z1.declared_dimension;
    if (degree < 0) throw ValidationError("degree", "degree must be nonnegative");
    if (degree > n)
        throw ValidationError("degree", "degree " + std::to_string(degree) +
                                            " exceeds the dimension bound " + std::to_string(n));
    const std::size_t want = 2 * static_cast<std::size_t>(degree + 1);
    if (f_log_samples.size() < want)
        throw ValidationError("samples", "need at least " + std::to_string(want) +
                                             " samples for degree " + std::to_string(degree));

    // g(s) = log f + log W2 - log W1 - m0 Log s along the sample path.
    std::vector<cdouble> points;
    std::vector<cdouble> values;
    points.reserve(f_log_samples.size());
    values.reserve(f_log_samples.size());
    for (const auto& [s, log_f] : f_log_samples) {
        const ProductResult w1 = canonical_product(fact.z1, fact.p1, s, eps_tail);
        const ProductResult w2 = canonical_product(fact.z2, fact.p2, s, eps_tail);
        if (w1.is_zero || w2.is_zero)
            throw ValidationError("sample-at-zero",
                                  "sample points must avoid the zero and pole sets");
        cdouble g = log_f + w2.log_value - w1.log_value;
        if (fact.m0 != 0) {
            if (s == cdouble{0.0, 0.0})
                throw ValidationError("sample-at-zero", "origin sample with positive m0");
            g -= static_cast<double>(fact.m0) * std::log(s);
        }
        points.push_back(s);
        values.push_back(g);
    }

    // The displayed formula is branch-ambiguous by multiples of 2 pi i;
    // enforce continuity along the path.
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double jump = values[i].imag() - values[i - 1].imag();
        const double wraps = std::round(jump / (2.0 * kPi));
        values[i] -= cdouble{0.0, 2.0 * kPi * wraps};
    }

    // Centered, scaled basis t = (s - c)/R for a well-conditioned fit.
    cdouble center{0.0, 0.0};
    for (const cdouble& s : points) center += s;
    center /= static_cast<double>(points.size());
    double scale = 0.0;
    for (const cdouble& s : points) scale = std::max(scale, std::abs(s - center));
    if (!(scale > 0.0))
        throw NumericError("ill-conditioned", "sample points coincide");

    const std::size_t cols = static_cast<std::size_t>(degree + 1);
    std::vector<std::vector<cdouble>> basis(points.size(), std::vector<cdouble>(cols));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const cdouble t = (points[i] - center) / scale;
        cdouble tp{1.0, 0.0};
        for (std::size_t j = 0; j < cols; ++j) {
            basis[i][j] = tp;
            tp *= t;
        }
    }

    // Normal equations M x = rhs with M = A^H A.
    std::vector<std::vector<cdouble>> m(cols, std::vector<cdouble>(cols, cdouble{0.0, 0.0}));
    std::vector<cdouble> rhs(cols, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t a = 0; a < cols; ++a) {
            const cdouble conj_a = std::conj(basis[i][a]);
            for (std::size_t b = 0; b < cols; ++b) m[a][b] += conj_a * basis[i][b];
            rhs[a] += conj_a * values[i];
        }
    }

    // Gaussian elimination with partial pivoting.
    double max_pivot = 0.0;
    std::vector<cdouble> x = rhs;
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < cols; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        std::swap(m[col], m[pivot]);
        std::swap(x[col], x[pivot]);
        const double mag = std::abs(m[col][col]);
        max_pivot = std::max(max_pivot, mag);
        if (mag < 1e-12 * max_pivot || mag == 0.0)
            throw NumericError("ill-conditioned", "near-collinear sample set");
        for (std::size_t row = col + 1; row < cols; ++row) {
            const cdouble f = m[row][col] / m[col][col];
            for (std::size_t k = col; k < cols; ++k) m[row][k] -= f * m[col][k];
            x[row] -= f * x[col];
        }
    }
    std::vector<cdouble> scaled(cols);
    for (std::size_t col = cols; col-- > 0;) {
        cdouble acc = x[col];
        for (std::size_t k = col + 1; k < cols; ++k) acc -= m[col][k] * scaled[k];
        scaled[col] = acc / m[col][col];
    }

    GFit fit;
    double sq = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        cdouble predicted{0.0, 0.0};
        for (std::size_t j = 0; j < cols; ++j) predicted += scaled[j] * basis[i][j];
        sq += std::norm(predicted - values[i]);
    }
    fit.rms_residual = std::sqrt(sq / static_cast<double>(points.size()));

    // Convert sum_j b_j ((s-c)/R)^j to monomial coefficients via the
    // binomial expansion of (s-c)^j.
    fit.coefficients.assign(cols, cdouble{0.0, 0.0});
    for (std::size_t j = 0; j < cols; ++j) {
        const cdouble bj = scaled[j] / std::pow(cdouble{scale, 0.0}, static_cast<double>(j));
        // expansion[i] = C(j,i) (-c)^{j-i}, built down from i = j via
        // C(j,i) = C(j,i+1) (i+1)/(j-i).
        std::vector<cdouble> expansion(j + 1);
        expansion[j] = cdouble{1.0, 0.0};
        for (std::size_t i = j; i-- > 0;) {
            const double ratio =
                static_cast<double>(i + 1) / static_cast<double>(j - i);
            expansion[i] = expansion[i + 1] * ratio * (-center);
        }
        for (std::size_t i = 0; i <= j; ++i) fit.coefficients[i] += bj * expansion[i];
    }
    return fit;
}

FactorizationValue evaluate_factorization(const Factorization& fact, cdouble s,
                                          double eps_tail) {
    if (!(eps_tail > 0.0)) throw ValidationError("tolerance", "tail tolerance must be positive");
    const ProductResult w1 = canonical_product(fact.z1, fact.p1, s, eps_tail / 2.0);
    const ProductResult w2 = canonical_product(fact.z2, fact.p2, s, eps_tail / 2.0);

    FactorizationValue out;
    out.tail_bound = w1.tail_bound + w2.tail_bound;
    out.tail_conditional = w1.tail_conditional || w2.tail_conditional;

    long net = 0;
    if (s == cdouble{0.0, 0.0}) net += fact.m0;
    if (w1.is_zero) net += w1.zero_multiplicity;
    if (w2.is_zero) net -= w2.zero_multiplicity;
    if (net != 0 || w1.is_zero || w2.is_zero || (s == cdouble{0.0, 0.0} && fact.m0 > 0)) {
        if (net > 0) {
            out.is_zero = true;
            out.zero_order = net;
            out.value = cdouble{0.0, 0.0};
            return out;
        }
        if (net < 0) {
            out.is_pole = true;
            out.pole_order = -net;
            return out;
        }
        if (w1.is_zero || w2.is_zero)
            throw NumericError("indeterminate",
                               "zero and pole of equal order meet at the evaluation point");
    }

    out.log_value = w1.log_value - w2.log_value + horner(fact.g_coefficients, s);
    if (fact.m0 != 0)
        out.log_value += static_cast<double>(fact.m0) * std::log(s);
    out.value = std::exp(out.log_value);
    return out;
}

OrderEstimate estimate_order(const std::function<cdouble(cdouble)>& log_evaluator,
                             const std::vector<double>& radii, int angular_samples) {
    if (radii.size() < 5)
        throw ValidationError("radii", "order estimation needs at least 5 radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw ValidationError("radii", "radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw ValidationError("radii", "radii must be strictly increasing");
    }
    const int samples = std::max(64, angular_samples);

    OrderEstimate out;
    out.points.reserve(radii.size());
    for (double r : radii) {
        double log_m = -1e300;
        bool bad = false;
#pragma omp parallel for reduction(max : log_m) reduction(|| : bad)
        for (int a = 0; a < samples; ++a) {
            const double theta = 2.0 * kPi * static_cast<double>(a) /
                                 static_cast<double>(samples);
            const cdouble v = log_evaluator(std::polar(r, theta));
            if (!is_finite(v))
                bad = true;
            else
                log_m = std::max(log_m, v.real());
        }
        if (bad)
            throw NumericError("overflow", "evaluator not finite on the circle r = " +
                                               format_double(r));
        if (!(log_m > 0.0))
            throw NumericError("magnitude",
                               "max modulus is not above 1 on the circle r = " +
                                   format_double(r) + "; order slope undefined");
        out.points.push_back({r, std::log(log_m)});
    }

    const std::size_t start = out.points.size() / 2;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = start; i < out.points.size(); ++i) {
        xs.push_back(std::log(out.points[i].first));
        ys.push_back(out.points[i].second);
    }
    const LineFit fit = fit_line(xs, ys);
    out.order = fit.slope;
    out.rms_residual = fit.rms_residual;
    return out;
}

void save_factorization(std::ostream& out, const Factorization& fact) {
    nlohmann::json doc;
    doc["m0"] = fact.m0;
    nlohmann::json g = nlohmann::json::array();
    for (const cdouble& c : fact.g_coefficients) g.push_back({c.real(), c.imag()});
    doc["g"] = std::move(g);
    doc["z1"] = zero_set_to_json(fact.z1, fact.p1);
    doc["z2"] = zero_set_to_json(fact.z2, fact.p2);
    out << doc.dump(2) << '\n';
}

Factorization load_factorization(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("factorization document: ") + e.what());
    }
    try {
        std::vector<cdouble> g;
        for (const auto& row : doc.at("g")) {
            if (!row.is_array() || row.size() != 2)
                throw ParseError("polynomial coefficients must be [re, im]");
            g.push_back(cdouble{row[0].get<double>(), row[1].get<double>()});
        }
        auto [z1, p1] = zero_set_from_json(doc.at("z1"));
        auto [z2, p2] = zero_set_from_json(doc.at("z2"));
        return make_factorization(std::move(z1), std::move(z2), p1, p2,
                                  doc.at("m0").get<long>(), std::move(g));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("factorization document: ") + e.what());
    }
}

} // namespace geozeta
