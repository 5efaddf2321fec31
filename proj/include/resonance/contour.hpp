#pragma once

#include "resonance/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace resonance {

struct MultiIndex {
    std::vector<int> signs;  // each +1 or -1

    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> s) : signs(s) {}
    explicit MultiIndex(std::vector<int> s) : signs(std::move(s)) {}

    std::size_t size() const { return signs.size(); }
    int operator[](std::size_t k) const { return signs[k]; }
    MultiIndex mirrored() const;
    bool operator==(const MultiIndex&) const = default;
    std::string str() const;

    // Uniform index of length m.
    static MultiIndex uniform(std::size_t m, int sign);
    // All 2^m multi-indices in lexicographic order (-1 before +1).
    static std::vector<MultiIndex> all(std::size_t m);
};

enum class CurveShape { Semicircle, Rectangle, Flat };

std::string to_string(CurveShape shape);

// Semicircle: half-ellipse over the interval with vertical semi-axis `size` (0 means the true
// semicircle, size = half the interval length). Rectangle: vertical legs of height `size`.
struct CurveSpec {
    CurveShape shape = CurveShape::Semicircle;
    double size = 0.0;
    std::optional<double> ray_extent;  // truncation abscissa distance for unbounded rays

    bool operator==(const CurveSpec&) const = default;
};

struct QuadratureOrder {
    int panels = 8;
    int points = 16;

    QuadratureOrder doubled() const { return {2 * panels, points}; }
    bool operator==(const QuadratureOrder&) const = default;
};

// One term of the discretized coupling measure: weight * k placed at mu.
struct Atom {
    Complex mu;
    Complex weight;
    Matrix k;
    int piece = -1;  // -1 for the discrete remainder
};

struct Segment {
    Complex a;
    Complex b;
    bool infinite_end = false;  // b is only a direction marker: the segment continues past b
};

struct ContourPiece {
    int interval = 0;
    CurveSpec spec;
    int sign = 1;
    double lo = 0.0;  // interval endpoints (may be infinite)
    double hi = 0.0;
    // half-ellipse geometry
    double center = 0.0;
    double half_width = 0.0;
    double height = 0.0;
    // straight pieces (rectangle legs, flat segment)
    std::vector<Segment> segments;
    std::size_t first_atom = 0;
    std::size_t atom_count = 0;
    double tail_bound = 0.0;

    bool is_arc() const { return spec.shape == CurveShape::Semicircle; }
    bool is_circle() const { return is_arc() && half_width == height; }
    // Open region between the curve and the interval.
    bool encloses(Complex z) const;
    // Point on the half-ellipse for parameter t in [0, pi].
    Complex arc_point(double t) const;
};

struct Contour {
    MultiIndex multi_index;
    std::vector<ContourPiece> pieces;
    std::vector<Atom> atoms;  // discrete remainder first, then pieces in order
    QuadratureOrder order;
    double quad_tol = 1e-10;
    double diameter = 0.0;

    double guard() const { return 1e-8 * diameter; }
    bool is_flat() const;
    std::vector<CurveSpec> specs() const;
    // Index of the piece whose enclosed region contains z, or -1.
    int region(Complex z) const;
    // Smallest distance from z to an atom location.
    double distance_to_atoms(Complex z) const;
};

struct ContourOptions {
    QuadratureOrder order;
    double quad_tol = 1e-10;
};

Contour build_contour(const SpectralModel& model, const std::vector<CurveSpec>& specs, const MultiIndex& l,
                      const ContourOptions& options = {});
// Same curve spec for every interval.
Contour build_contour(const SpectralModel& model, const CurveSpec& spec, const MultiIndex& l,
                      const ContourOptions& options = {});
// Contour for -l with the same curve specs and order.
Contour mirror_contour(const SpectralModel& model, const Contour& contour);
// Rebuild with a different quadrature order.
Contour reorder_contour(const SpectralModel& model, const Contour& contour, QuadratureOrder order);
// The intervals themselves (physical-sheet reference).
Contour flat_contour(const SpectralModel& model, QuadratureOrder order = {16, 16});

double variation(const SpectralModel& model, const Contour& contour);

struct Separation {
    double d0 = 0.0;     // conservative: sampled minimum minus slack
    double slack = 0.0;  // subtracted sampling gap (0 for exact formulas)
};

Separation separation(const SpectralModel& model, const Contour& contour);
double separation_distance(const SpectralModel& model, const Contour& contour);

// Distance from p to the curve of one piece (lower bound when the piece is sampled).
Separation distance_to_piece(const ContourPiece& piece, Complex p, const QuadratureOrder& order);

struct SolvabilityCertificate {
    double d0 = 0.0;
    double v0 = 0.0;
    double omega = 0.0;
    std::optional<double> r_min;
    std::optional<double> r_max;
    bool admissible = false;
    double d0_slack = 0.0;
    double v0_tail = 0.0;

    // Contraction constant on the ball of radius r_min (0 when inadmissible).
    double contraction() const;
};

SolvabilityCertificate certificate_from(double d0, double v0);
SolvabilityCertificate solvability_certificate(const SpectralModel& model, const Contour& contour);

struct ContourFamily {
    std::vector<std::vector<CurveSpec>> members;
    ContourOptions options;

    static ContourFamily semicircles(const std::vector<double>& heights, std::size_t intervals, ContourOptions options = {});
};

struct ScanResult {
    bool certified = false;  // false: no certificate in family
    double r0_estimate = 0.0;
    double d_max_estimate = 0.0;
    std::optional<Contour> best_contour;
    std::vector<SolvabilityCertificate> certificates;  // one per family member
};

ScanResult scan_r0(const SpectralModel& model, const MultiIndex& l, const ContourFamily& family);

}  // namespace resonance
