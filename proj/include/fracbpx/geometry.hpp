#pragma once

#include <cmath>

namespace fracbpx {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double t, Point a) { return {t * a.x, t * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Positive for counter-clockwise (a, b, c).
inline double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

double point_segment_distance(Point p, Point a, Point b);

}  // namespace fracbpx
