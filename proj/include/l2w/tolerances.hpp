#pragma once

namespace l2w {

// All numerical thresholds live here so reports can echo the values in force.
struct Tolerances {
    double flat = 1e-6;        // |g - 1| on the flat part of a block
    double floor = 1e-9;       // slack on lower bounds (block floor, psi >= 0)
    double support = 1e-7;     // |f| above this counts as numerical support
    double fft_roundtrip = 1e-10;
    double mean = 1e-9;
    double budget = 1e-9;
    double sym = 1e-12;        // conjugate symmetry of real-valued coefficient vectors
};

}  // namespace l2w
