#pragma once

// GLSL builtin semantics on Value, spelled exactly as the GLSL ES 3.00
// definitions so the interpreter agrees with emitted code.

#include <cmath>

#include "shaderevo/value.hpp"

namespace shaderevo::vm {

inline double gmin(double a, double b) { return b < a ? b : a; }
inline double gmax(double a, double b) { return a < b ? b : a; }
inline double gclamp(double x, double lo, double hi) { return gmin(gmax(x, lo), hi); }
inline double gfract(double x) { return x - std::floor(x); }
inline double gmix(double a, double b, double t) { return a * (1.0 - t) + b * t; }
inline double gstep(double edge, double x) { return x < edge ? 0.0 : 1.0; }

template <class F>
Value map(const Value& a, F f) {
    Value r;
    r.dim = a.dim;
    for (int i = 0; i < a.dim; ++i) r.c[i] = f(a.c[i]);
    return r;
}

// Binary/ternary maps broadcast scalar operands.
template <class F>
Value map(const Value& a, const Value& b, F f) {
    Value r;
    r.dim = a.dim > b.dim ? a.dim : b.dim;
    for (int i = 0; i < r.dim; ++i) r.c[i] = f(a.c[a.dim == 1 ? 0 : i], b.c[b.dim == 1 ? 0 : i]);
    return r;
}

template <class F>
Value map(const Value& a, const Value& b, const Value& c, F f) {
    Value r;
    r.dim = a.dim;
    if (b.dim > r.dim) r.dim = b.dim;
    if (c.dim > r.dim) r.dim = c.dim;
    for (int i = 0; i < r.dim; ++i) {
        r.c[i] = f(a.c[a.dim == 1 ? 0 : i], b.c[b.dim == 1 ? 0 : i], c.c[c.dim == 1 ? 0 : i]);
    }
    return r;
}

inline Value add(const Value& a, const Value& b) { return map(a, b, [](double x, double y) { return x + y; }); }
inline Value sub(const Value& a, const Value& b) { return map(a, b, [](double x, double y) { return x - y; }); }
inline Value mul(const Value& a, const Value& b) { return map(a, b, [](double x, double y) { return x * y; }); }
inline Value div(const Value& a, const Value& b) { return map(a, b, [](double x, double y) { return x / y; }); }

inline double dot(const Value& a, const Value& b) {
    double s = a.c[0] * b.c[0];
    for (int i = 1; i < a.dim; ++i) s = s + a.c[i] * b.c[i];
    return s;
}

inline double length(const Value& a) { return std::sqrt(dot(a, a)); }

inline Value normalize(const Value& a) {
    const double len = length(a);
    return map(a, [len](double x) { return x / len; });
}

inline Value cross(const Value& a, const Value& b) {
    return Value::of({a.c[1] * b.c[2] - b.c[1] * a.c[2], a.c[2] * b.c[0] - b.c[2] * a.c[0],
                      a.c[0] * b.c[1] - b.c[0] * a.c[1]});
}

}  // namespace shaderevo::vm
