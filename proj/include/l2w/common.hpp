#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2w {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Raised when a hypothesis the construction depends on cannot be established
// (divergence of sum 1/lambda, a regularity bound, unboundedness of lambda).
class PremiseError : public std::runtime_error {
public:
    PremiseError(std::string premise, const std::string& detail)
        : std::runtime_error(premise + ": " + detail), premise_(std::move(premise)) {}
    const std::string& premise() const { return premise_; }

private:
    std::string premise_;
};

// Raised when an object was built but a verified property or tolerance failed.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Exec { serial, parallel };

// Process-wide default for kernels that have a serial and an OpenMP variant.
Exec default_exec();
void set_default_exec(Exec e);

inline bool is_pow2(std::size_t g) { return g != 0 && (g & (g - 1)) == 0; }

}  // namespace l2w
