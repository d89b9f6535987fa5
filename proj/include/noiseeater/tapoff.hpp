#pragma once

namespace noiseeater {

// Largest admissible SHG interaction strength. sech^2(7) ~ 3.3e-6, so beyond
// this the remaining fundamental power underflows usefully and the linearized
// treatment is invalid anyway.
inline constexpr double kXiMax = 7.0;

// The 2x3 process matrix mapping {signal_in, meter_in, tapoff_vac} amplitude
// fluctuations to the signal/meter fields immediately after the tap-off.
// Row 1 = signal output, row 2 = meter output.
struct TapOffMatrix {
    double a = 1.0, b = 0.0, c = 0.0; // signal row
    double d = 0.0, e = 1.0, f = 0.0; // meter row
};

enum class TapOffKind {
    kBeamsplitter,
    kSecondHarmonic,
};

// Which tap-off process to use and its strength parameter: the tap-off ratio
// eta in (0, 1] for a beamsplitter, the interaction strength xi in [0, kXiMax]
// for single-pass second harmonic generation.
struct TapOffSpec {
    TapOffKind kind = TapOffKind::kBeamsplitter;
    double parameter = 1.0;

    static TapOffSpec beamsplitter(double eta);
    static TapOffSpec second_harmonic(double xi);
};

// Lossless beamsplitter with transmission eta:
//   ( sqrt(eta)    -sqrt(1-eta)  0 )
//   ( sqrt(1-eta)   sqrt(eta)    0 )
TapOffMatrix bs_matrix(double eta);

// Lossless single-pass second harmonic generation at interaction strength xi:
//   a = (1 - xi tanh xi) sech xi      b = sqrt(2) tanh xi sech xi
//   d = -(tanh xi + xi sech^2 xi)/sqrt(2)   e = sech^2 xi
// Satisfies a*e - b*d = sech xi.
TapOffMatrix shg_matrix(double xi);

// Fraction of input signal power remaining in the fundamental after single-pass
// SHG: sech^2 xi in (0, 1].
double shg_tapoff_ratio(double xi);

// Unique non-negative xi with sech^2 xi = eta, via the logarithmic closed form
// xi = ln(x + sqrt(x^2 - 1)), x = 1/sqrt(eta).
double xi_from_tapoff(double eta);

// Matrix for either process.
TapOffMatrix make_matrix(const TapOffSpec& spec);

// Tap-off ratio eta (power fraction remaining in the signal) for either process.
double tapoff_ratio(const TapOffSpec& spec);

} // namespace noiseeater
