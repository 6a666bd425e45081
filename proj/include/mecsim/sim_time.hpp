#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <string>

namespace mecsim {

// Simulation time in seconds since scenario start. Wall clock is never
// consulted anywhere in the engine, so a (seed, scenario) pair fully
// determines every timestamp.
struct SimTime {
    double secs = 0.0;

    friend auto operator<=>(const SimTime&, const SimTime&) = default;
};

inline SimTime operator+(SimTime t, double dt) { return SimTime{t.secs + dt}; }

inline SimTime& operator+=(SimTime& t, double dt) {
    t.secs += dt;
    return t;
}

// Elapsed seconds between two instants.
inline double operator-(SimTime a, SimTime b) { return a.secs - b.secs; }

// Fixed-decimal formatting shared by every exported artifact, so that two
// runs with the same seed serialize byte-identically.
inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

// Measurement samples are quantized once, at the point of collection, to a
// nanosecond-ish grid. Every consumer (trace payloads, CSV exports,
// statistics) then sees the exact same value.
inline double quantize_sample(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace mecsim
