#pragma once

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace smt {

// Failures a caller is expected to handle derive from smt::error so the CLI
// can map them onto its exit codes (usage -> 2, io -> 3, everything else that
// escapes -> 1).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// inadmissible exponent pair: alpha/alpha_n + beta/n > 1
struct admissibility_error : error {
    using error::error;
};

// scalar argument outside its documented range
struct range_error : error {
    using error::error;
};

// geometric misuse: singularity outside the domain, empty mask, ...
struct domain_error : error {
    using error::error;
};

// an enclosure certificate (B_{rho-eps} subset ... subset B_{rho+eps}) that
// does not actually enclose, or cannot be matched
struct certificate_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

struct usage_error : error {
    using error::error;
};

// printf-style formatting into std::string (gcc 11 lacks std::format)
inline std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buf[512];
    int k = std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    if (k < 0) return std::string(fmt);
    if (static_cast<size_t>(k) < sizeof(buf)) return std::string(buf, k);
    std::string big(static_cast<size_t>(k) + 1, '\0');
    va_start(args, fmt);
    std::vsnprintf(big.data(), big.size(), fmt, args);
    va_end(args);
    big.resize(static_cast<size_t>(k));
    return big;
}

}  // namespace smt
