#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "geozeta/numeric.hpp"

namespace geozeta {

// ---------------------------------------------------------------------------
// Geodesic length spectra
// ---------------------------------------------------------------------------

// One primitive closed geodesic.  Holonomy is stored as the rotation angles
// of the M-conjugacy class (only eigenvalues enter any formula); the twist
// eigenvalues are the unit-modulus eigenvalues of the flat-bundle monodromy.
struct PrimeGeodesic {
    double length = 0.0;
    std::vector<double> holonomy_angles;   // floor((n-1)/2) entries in [0, 2pi)
    std::vector<cdouble> twist_eigenvalues; // |z| = 1; may be empty (rank-0 twist)
    long multiplicity = 1;
};

enum class SpectrumProvenance { generated, ingested };

// Finite truncation of the primitive length spectrum: everything with
// length <= cutoff is present.  Immutable after construction.
struct LengthSpectrum {
    int dimension = 3;      // odd, >= 3
    double rho = 1.0;       // half-sum of positive roots; (n-1)/2 for H^n
    double cutoff = 0.0;    // truncation length L
    std::vector<PrimeGeodesic> geodesics; // sorted ascending by length
    SpectrumProvenance provenance = SpectrumProvenance::ingested;

    size_t holonomy_rank() const { return static_cast<size_t>((dimension - 1) / 2); }
};

// Validating factory: sorts by length and enforces every invariant.
LengthSpectrum make_length_spectrum(int dimension, double rho, double cutoff,
                                    std::vector<PrimeGeodesic> geodesics,
                                    SpectrumProvenance provenance = SpectrumProvenance::ingested);

enum class SpectrumFormat { jsonl };

// JSON-lines: first line {"dimension":..,"rho":..,"cutoff":..}, then one
// record per geodesic.  Floats are decimal, round-trip exact.
LengthSpectrum load_length_spectrum(std::istream& in, SpectrumFormat format = SpectrumFormat::jsonl);
void save_length_spectrum(const LengthSpectrum& spectrum, std::ostream& out,
                          SpectrumFormat format = SpectrumFormat::jsonl);

// Synthetic spectrum with prime-geodesic-theorem statistics: the counting
// function tracks pi(L) = e^{2 rho L}/(2 rho L) - e, scaled by density_scale.
// Deterministic in the seed; angles uniform on [0,2pi); trivial twist.
LengthSpectrum generate_length_spectrum(int dimension, double rho, double cutoff,
                                        std::uint64_t seed, double density_scale = 1.0);

// Expected geodesic count of the generator up to L (the density integral).
double geodesic_count_estimate(double rho, double cutoff, double density_scale = 1.0);

// ---------------------------------------------------------------------------
// Operator spectra
// ---------------------------------------------------------------------------

enum class CaseTag { A, B };

struct LaplaceEntry {
    double s = 0.0;   // eigenvalue, >= 0
    long m = 0;       // multiplicity; signed (virtual representations)
};

struct DiracEntry {
    double s = 0.0;   // signed eigenvalue
    long m_s = 0;     // signed multiplicity
};

// Eigenvalue lists with multiplicities for the Laplace-type operator and,
// in case B, the Dirac-type operator.  Immutable after construction.
struct SpectralInput {
    CaseTag case_tag = CaseTag::A;
    int dimension = 3;
    std::vector<LaplaceEntry> laplace_spectrum; // strictly increasing in s
    std::vector<DiracEntry> dirac_spectrum;     // case B; strictly increasing in s
    double weyl_constant = 1.0;                 // C in N(r) ~ C r^n
};

struct SpectralValidationOptions {
    double weyl_tolerance = 0.25; // slack on N(r) <= C r^n (1 + tol)
    long weyl_min_count = 32;     // counting threshold below which no check runs
};

SpectralInput make_spectral_input(CaseTag case_tag, int dimension,
                                  std::vector<LaplaceEntry> laplace,
                                  std::vector<DiracEntry> dirac, double weyl_constant,
                                  const SpectralValidationOptions& opts = {});

SpectralInput load_spectral_input(std::istream& in,
                                  const SpectralValidationOptions& opts = {});
void save_spectral_input(const SpectralInput& input, std::ostream& out);

// Weyl-law synthesis: eigenvalues with multiplicity-weighted counting
// function N(r) ~ C r^n plus seeded jitter.  Case B also produces a Dirac
// spectrum satisfying the parity invariant by construction.
SpectralInput generate_spectral_input(int dimension, double weyl_constant, double r_max,
                                      CaseTag case_tag, std::uint64_t seed);

} // namespace geozeta
