#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geozeta/errors.hpp"

namespace geozeta {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------
// Deterministic scalar helpers
// ---------------------------------------------------------------------------

// Shortest representation that round-trips exactly through strtod.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// FNV-1a, used for input provenance digests in CLI artifacts.
inline std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(std::span<const char>(bytes.data(), bytes.size()));
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Seeded sampling.  splitmix64 + explicit float mapping so generated spectra
// do not depend on the standard library's distribution internals.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, hi)
    double next_uniform(double hi) { return hi * next_unit(); }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// log det(1 - A t) for A = diag(eigs), via the trace series
//   log det(1 - A t) = -sum_{m>=1} tr(A^m) t^m / m.
// The series fixes the branch canonically; requires max|eig * t| < 1.
// ---------------------------------------------------------------------------

struct LogDetResult {
    cdouble value{0.0, 0.0};
    double tail_bound = 0.0; // bound on the modulus of the omitted m-tail
    int terms = 0;
};

inline LogDetResult log_det_one_minus(std::span<const cdouble> eigs, cdouble t,
                                      double eps_tail, int max_terms = 100000) {
    LogDetResult r;
    if (eigs.empty()) return r;
    double rho = 0.0;
    for (const auto& a : eigs) rho = std::max(rho, std::abs(a * t));
    if (!(rho < 1.0))
        throw ConvergenceError("logdet", "spectral radius " + format_double(rho) +
                                             " >= 1 in log det(1 - At) series");
    std::vector<cdouble> pw(eigs.begin(), eigs.end());
    cdouble tp = t;
    cdouble acc{0.0, 0.0};
    const double d = static_cast<double>(eigs.size());
    for (int m = 1; m <= max_terms; ++m) {
        cdouble tr{0.0, 0.0};
        for (auto& p : pw) tr += p;
        acc -= tr * tp / static_cast<double>(m);
        r.terms = m;
        // tail: sum_{k>m} d * rho^k / k <= d * rho^{m+1} / ((m+1)(1-rho))
        double tail = d * std::pow(rho, m + 1) / ((m + 1) * (1.0 - rho));
        if (tail <= eps_tail) {
            r.tail_bound = tail;
            break;
        }
        if (m == max_terms)
            throw NumericError("logdet", "trace series did not reach tolerance");
        for (size_t j = 0; j < pw.size(); ++j) pw[j] *= eigs[j];
        tp *= t;
    }
    r.value = acc;
    return r;
}

// ---------------------------------------------------------------------------
// Ordinary least squares y = a + b x; returns slope and rms residual.
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw ValidationError("fit", "need at least two points for a line fit");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0)
        throw NumericError("fit", "degenerate abscissa in line fit");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

} // namespace geozeta
