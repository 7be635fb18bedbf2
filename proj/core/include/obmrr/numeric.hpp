#ifndef OBMRR_NUMERIC_HPP
#define OBMRR_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <string>

namespace obmrr {

// Exact rational scalar. The accounting and verification paths are generic
// over the scalar type so small runs can be bit-sharp (Rat) while large
// experiments fall back to double.
using Rat = boost::multiprecision::cpp_rational;

template <class Num>
Num from_ratio(long long num, long long den);

template <>
inline Rat from_ratio<Rat>(long long num, long long den) {
    return Rat(num, den);
}

template <>
inline double from_ratio<double>(long long num, long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::string num_to_string(const Rat& x) { return x.str(); }

inline std::string num_to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace obmrr

#endif
