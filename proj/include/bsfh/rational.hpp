#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

namespace bsfh {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Engine-level failure: malformed input data, unsupported configuration, or an
// internal invariant that callers are expected to handle via the CLI exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int sign(const Rat& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

// Accepts "p", "-p", "p/q" and plain decimal strings such as "0.35" or "-12.5".
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw Error("parse_rat: empty string");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Int num(s.substr(0, slash));
      Int den(s.substr(slash + 1));
      if (den == 0) throw Error("parse_rat: zero denominator in '" + s + "'");
      return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    bool neg = s[0] == '-';
    std::string head = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string frac = s.substr(dot + 1);
    if (head.empty()) head = "0";
    if (frac.empty()) throw Error("parse_rat: trailing dot in '" + s + "'");
    Int den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Int num = Int(head) * den + Int(frac);
    if (neg) num = -num;
    return Rat(num, den);
  } catch (const std::exception& e) {
    throw Error(std::string("parse_rat: cannot parse '") + s + "': " + e.what());
  }
}

inline std::string rat_str(const Rat& r) {
  std::string n = numerator(r).str();
  if (denominator(r) == 1) return n;
  return n + "/" + denominator(r).str();
}

struct Pt {
  Rat x;
  Rat y;

  Pt() = default;
  Pt(Rat xx, Rat yy) : x(std::move(xx)), y(std::move(yy)) {}

  friend Pt operator+(const Pt& a, const Pt& b) { return {a.x + b.x, a.y + b.y}; }
  friend Pt operator-(const Pt& a, const Pt& b) { return {a.x - b.x, a.y - b.y}; }
  friend Pt operator*(const Rat& s, const Pt& p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Pt& a, const Pt& b) { return !(a == b); }
  friend bool operator<(const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

inline std::string pt_str(const Pt& p) { return "(" + rat_str(p.x) + "," + rat_str(p.y) + ")"; }

inline Rat cross(const Pt& a, const Pt& b) { return a.x * b.y - a.y * b.x; }
inline Rat dot(const Pt& a, const Pt& b) { return a.x * b.x + a.y * b.y; }

// Sign of the signed area of triangle (a, b, c); +1 means counterclockwise.
inline int orient(const Pt& a, const Pt& b, const Pt& c) { return sign(cross(b - a, c - a)); }

inline Pt lerp(const Pt& a, const Pt& b, const Rat& t) { return a + t * (b - a); }

struct Seg {
  Pt a;
  Pt b;
};

inline bool on_segment(const Pt& p, const Seg& s) {
  if (orient(s.a, s.b, p) != 0) return false;
  return dot(p - s.a, p - s.b) <= 0;
}

// Parameter t with p = a + t(b-a); requires p collinear with the segment's line.
inline Rat param_on_line(const Pt& p, const Seg& s) {
  Pt d = s.b - s.a;
  if (d.x == 0 && d.y == 0) throw Error("param_on_line: degenerate segment");
  if (d.x != 0) {
    if ((p.y - s.a.y) * d.x != (p.x - s.a.x) * d.y)
      throw Error("param_on_line: point not on line");
    return (p.x - s.a.x) / d.x;
  }
  if (p.x != s.a.x) throw Error("param_on_line: point not on line");
  return (p.y - s.a.y) / d.y;
}

enum class IsectKind { None, Point, Overlap };

struct Isect {
  IsectKind kind = IsectKind::None;
  Pt p;
  Rat ta;  // parameter on first segment, in [0,1]
  Rat tb;  // parameter on second segment, in [0,1]
};

inline Isect intersect_segments(const Seg& s, const Seg& t) {
  Isect out;
  Pt r = s.b - s.a;
  Pt q = t.b - t.a;
  Rat denom = cross(r, q);
  Pt diff = t.a - s.a;
  if (denom == 0) {
    if (cross(diff, r) != 0) return out;  // parallel, distinct lines
    // Collinear: compare parameter ranges of t's endpoints on s's line.
    Rat t0 = param_on_line(t.a, s);
    Rat t1 = param_on_line(t.b, s);
    Rat lo = t0 < t1 ? t0 : t1;
    Rat hi = t0 < t1 ? t1 : t0;
    if (hi < 0 || lo > 1) return out;
    if (hi == 0 || lo == 1) {
      out.kind = IsectKind::Point;
      out.ta = hi == 0 ? Rat(0) : Rat(1);
      out.p = lerp(s.a, s.b, out.ta);
      out.tb = param_on_line(out.p, t);
      return out;
    }
    out.kind = IsectKind::Overlap;
    return out;
  }
  Rat ta = cross(diff, q) / denom;
  Rat tb = cross(diff, r) / denom;
  if (ta < 0 || ta > 1 || tb < 0 || tb > 1) return out;
  out.kind = IsectKind::Point;
  out.ta = ta;
  out.tb = tb;
  out.p = lerp(s.a, s.b, ta);
  return out;
}

}  // namespace bsfh
