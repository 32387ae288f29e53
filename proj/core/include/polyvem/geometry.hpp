#ifndef POLYVEM_GEOMETRY_HPP
#define POLYVEM_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace vem {

/// 2-D point / vector.
struct Pt {
  double x = 0.0;
  double y = 0.0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(double s, Pt a) { return {s * a.x, s * a.y}; }
inline Pt operator*(Pt a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Pt a, Pt b) { return a.x * b.x + a.y * b.y; }
inline double cross(Pt a, Pt b) { return a.x * b.y - a.y * b.x; }
inline double norm(Pt a) { return std::sqrt(dot(a, a)); }
inline double dist(Pt a, Pt b) { return norm(a - b); }

/// 3-D point / vector.
struct P3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline P3 operator+(P3 a, P3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline P3 operator-(P3 a, P3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline P3 operator*(double s, P3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline P3 operator*(P3 a, double s) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(P3 a, P3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline P3 cross(P3 a, P3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(P3 a) { return std::sqrt(dot(a, a)); }
inline double dist(P3 a, P3 b) { return norm(a - b); }

/// Errors raised on invalid mesh input or failed mesh operations.
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Errors raised by linear solvers (singular system, breakdown, ...).
class SolveError : public std::runtime_error {
public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Errors raised on bad user-facing input (CLI options, file contents).
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vem

#endif
