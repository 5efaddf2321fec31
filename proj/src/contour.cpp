#include "resonance/contour.hpp"

#include "resonance/errors.hpp"
#include "resonance/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resonance {

MultiIndex MultiIndex::mirrored() const {
    MultiIndex m = *this;
    for (int& s : m.signs) s = -s;
    return m;
}

std::string MultiIndex::str() const {
    std::string out = "(";
    for (std::size_t k = 0; k < signs.size(); ++k) {
        if (k) out += ",";
        out += signs[k] > 0 ? "+" : "-";
    }
    return out + ")";
}

MultiIndex MultiIndex::uniform(std::size_t m, int sign) { return MultiIndex(std::vector<int>(m, sign)); }

std::vector<MultiIndex> MultiIndex::all(std::size_t m) {
    std::vector<MultiIndex> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<int> s(m);
        for (std::size_t k = 0; k < m; ++k) s[k] = (mask >> (m - 1 - k)) & 1 ? 1 : -1;
        out.emplace_back(std::move(s));
    }
    return out;
}

std::string to_string(CurveShape shape) {
    switch (shape) {
        case CurveShape::Semicircle: return "semicircle";
        case CurveShape::Rectangle: return "rectangle";
        case CurveShape::Flat: return "flat";
    }
    return "unknown";
}

Complex ContourPiece::arc_point(double t) const {
    return {center - half_width * std::cos(t), sign * height * std::sin(t)};
}

bool ContourPiece::encloses(Complex z) const {
    switch (spec.shape) {
        case CurveShape::Flat: return false;
        case CurveShape::Semicircle: {
            if (sign * z.imag() <= 0.0) return false;
            const double u = (z.real() - center) / half_width;
            const double v = z.imag() / height;
            return u * u + v * v < 1.0;
        }
        case CurveShape::Rectangle: {
            const double y = sign * z.imag();
            return z.real() > lo && z.real() < hi && y > 0.0 && y < spec.size;
        }
    }
    return false;
}

bool Contour::is_flat() const {
    return std::all_of(pieces.begin(), pieces.end(), [](const ContourPiece& p) { return p.spec.shape == CurveShape::Flat; });
}

std::vector<CurveSpec> Contour::specs() const {
    std::vector<CurveSpec> out;
    for (const auto& p : pieces) out.push_back(p.spec);
    return out;
}

int Contour::region(Complex z) const {
    for (std::size_t k = 0; k < pieces.size(); ++k)
        if (pieces[k].encloses(z)) return static_cast<int>(k);
    return -1;
}

double Contour::distance_to_atoms(Complex z) const {
    double d = kInf;
    for (const auto& a : atoms) d = std::min(d, std::abs(z - a.mu));
    return d;
}

namespace {

struct Node {
    Complex mu;
    Complex weight;
};

void add_segment_nodes(std::vector<Node>& out, Complex p, Complex q, int panels, const GaussRule& rule) {
    const Complex step = (q - p) / static_cast<double>(panels);
    for (int j = 0; j < panels; ++j) {
        const Complex a = p + step * static_cast<double>(j);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            out.push_back({a + step * (0.5 * (1.0 + rule.nodes[i])), step * (0.5 * rule.weights[i])});
    }
}

// Geometrically graded panels from p along a horizontal direction over length `length`.
void add_ray_nodes(std::vector<Node>& out, Complex p, double dir, double length, double first, const GaussRule& rule,
                   bool reverse) {
    std::vector<double> edges{0.0};
    double h = first;
    while (edges.back() < length) {
        edges.push_back(std::min(length, edges.back() + h));
        h *= 2.0;
    }
    std::vector<Node> ray;
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        const Complex a = p + dir * edges[j];
        const Complex b = p + dir * edges[j + 1];
        add_segment_nodes(ray, a, b, 1, rule);
    }
    if (reverse) {
        std::reverse(ray.begin(), ray.end());
        for (auto& n : ray) n.weight = -n.weight;
    }
    out.insert(out.end(), ray.begin(), ray.end());
}

struct Truncation {
    double reach;  // |Re mu| at the cut
    double tail;
};

// Cut an unbounded ray so that the neglected part of the variation is below 1e-3 * quad_tol.
Truncation truncate_ray(const CouplingFunction& kp, double start, double depth, const CurveSpec& spec, double quad_tol,
                        int interval) {
    const double base = std::abs(start) + std::max(depth, 1.0);
    if (kp.is_zero()) return {spec.ray_extent ? std::abs(start) + *spec.ray_extent : base + 10.0, 0.0};
    if (!kp.decay())
        throw UnsupportedModelError("interval " + std::to_string(interval) +
                                    " is unbounded but the coupling declares no decay bound");
    const DecayBound d = *kp.decay();
    if (!(d.theta > 1.0)) throw UnsupportedModelError("decay exponent must exceed 1 for unbounded intervals");
    double reach;
    if (spec.ray_extent) {
        reach = std::abs(start) + *spec.ray_extent;
    } else {
        const double tau = 1e-3 * quad_tol;
        reach = std::max(base, std::pow(d.c / (tau * (d.theta - 1.0)), 1.0 / (d.theta - 1.0)) - 1.0);
    }
    return {reach, d.c * std::pow(1.0 + reach, 1.0 - d.theta) / (d.theta - 1.0)};
}

double segment_distance(const Segment& s, Complex p) {
    const Complex d = s.b - s.a;
    double t = std::real(std::conj(d) * (p - s.a)) / std::norm(d);
    t = s.infinite_end ? std::max(t, 0.0) : std::clamp(t, 0.0, 1.0);
    return std::abs(p - (s.a + t * d));
}

}  // namespace

Contour build_contour(const SpectralModel& model, const CurveSpec& spec, const MultiIndex& l, const ContourOptions& options) {
    return build_contour(model, std::vector<CurveSpec>(model.intervals.size(), spec), l, options);
}

Contour build_contour(const SpectralModel& model, const std::vector<CurveSpec>& specs_in, const MultiIndex& l,
                      const ContourOptions& options) {
    check_structure(model);
    const std::size_t m = model.intervals.size();
    if (l.size() != m)
        throw GeometryError("multi-index has length " + std::to_string(l.size()) + " but the model has " +
                            std::to_string(m) + " intervals");
    for (int s : l.signs)
        if (s != 1 && s != -1) throw GeometryError("multi-index entries must be +1 or -1");
    std::vector<CurveSpec> specs = specs_in;
    if (specs.size() == 1 && m > 1) specs.assign(m, specs.front());
    if (specs.size() != m) throw GeometryError("need one curve spec per interval");
    if (options.order.panels < 1 || options.order.points < 1) throw GeometryError("quadrature order must be positive");

    const GaussRule rule = gauss_legendre(options.order.points);
    Contour c;
    c.multi_index = l;
    c.order = options.order;
    c.quad_tol = options.quad_tol;

    for (const auto& d : model.discrete) c.atoms.push_back({Complex(d.nu, 0.0), Complex(1.0, 0.0), d.k, -1});

    for (std::size_t k = 0; k < m; ++k) {
        const Interval& iv = model.intervals[k];
        ContourPiece piece;
        piece.interval = static_cast<int>(k);
        piece.spec = specs[k];
        piece.sign = l[k];
        piece.lo = iv.lo;
        piece.hi = iv.hi;
        const int s = l[k];
        const std::string name = "interval " + std::to_string(k);
        std::vector<Node> nodes;

        switch (piece.spec.shape) {
            case CurveShape::Semicircle: {
                if (!iv.bounded()) throw UnsupportedModelError("semicircle pieces need a bounded interval (" + name + ")");
                piece.center = 0.5 * (iv.lo + iv.hi);
                piece.half_width = 0.5 * iv.length();
                piece.height = piece.spec.size > 0.0 ? piece.spec.size : piece.half_width;
                if (piece.spec.size < 0.0) throw GeometryError("semicircle height must be positive (" + name + ")", k);
                if (!(piece.height < iv.strip))
                    throw GeometryError("curve exits the holomorphy strip of " + name, static_cast<int>(k));
                const int panels = c.order.panels;
                const double dt = kPi / panels;
                for (int j = 0; j < panels; ++j) {
                    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                        const double t = dt * (j + 0.5 * (1.0 + rule.nodes[i]));
                        const Complex dz(piece.half_width * std::sin(t), s * piece.height * std::cos(t));
                        nodes.push_back({piece.arc_point(t), dz * (0.5 * dt * rule.weights[i])});
                    }
                }
                break;
            }
            case CurveShape::Rectangle: {
                const double depth = piece.spec.size;
                if (!(depth > 0.0)) throw GeometryError("rectangle depth must be positive (" + name + ")", k);
                if (!(depth < iv.strip)) throw GeometryError("curve exits the holomorphy strip of " + name, static_cast<int>(k));
                const Complex up(0.0, s * depth);
                if (iv.bounded()) {
                    piece.segments = {{iv.lo, iv.lo + up}, {iv.lo + up, iv.hi + up}, {iv.hi + up, iv.hi}};
                    for (const auto& seg : piece.segments) add_segment_nodes(nodes, seg.a, seg.b, c.order.panels, rule);
                } else if (std::isfinite(iv.lo)) {
                    const auto cut = truncate_ray(model.coupling, iv.lo, depth, piece.spec, c.quad_tol, k);
                    piece.tail_bound = cut.tail;
                    piece.segments = {{iv.lo, iv.lo + up}, {iv.lo + up, iv.lo + 1.0 + up, true}};
                    add_segment_nodes(nodes, iv.lo, iv.lo + up, c.order.panels, rule);
                    add_ray_nodes(nodes, iv.lo + up, 1.0, cut.reach - iv.lo, depth, rule, false);
                } else if (std::isfinite(iv.hi)) {
                    const auto cut = truncate_ray(model.coupling, iv.hi, depth, piece.spec, c.quad_tol, k);
                    piece.tail_bound = cut.tail;
                    piece.segments = {{iv.hi + up, iv.hi - 1.0 + up, true}, {iv.hi + up, iv.hi}};
                    add_ray_nodes(nodes, iv.hi + up, -1.0, cut.reach + iv.hi, depth, rule, true);
                    add_segment_nodes(nodes, iv.hi + up, iv.hi, c.order.panels, rule);
                } else {
                    const auto cut = truncate_ray(model.coupling, 0.0, depth, piece.spec, c.quad_tol, k);
                    piece.tail_bound = 2.0 * cut.tail;
                    piece.segments = {{up, up - 1.0, true}, {up, up + 1.0, true}};
                    add_ray_nodes(nodes, up, -1.0, cut.reach, depth, rule, true);
                    add_ray_nodes(nodes, up, 1.0, cut.reach, depth, rule, false);
                }
                break;
            }
            case CurveShape::Flat: {
                if (iv.bounded()) {
                    piece.segments = {{iv.lo, iv.hi}};
                    add_segment_nodes(nodes, iv.lo, iv.hi, c.order.panels, rule);
                } else {
                    const double first = 1.0;
                    if (std::isfinite(iv.lo)) {
                        const auto cut = truncate_ray(model.coupling, iv.lo, first, piece.spec, c.quad_tol, k);
                        piece.tail_bound = cut.tail;
                        piece.segments = {{iv.lo, iv.lo + 1.0, true}};
                        add_ray_nodes(nodes, iv.lo, 1.0, cut.reach - iv.lo, first, rule, false);
                    } else if (std::isfinite(iv.hi)) {
                        const auto cut = truncate_ray(model.coupling, iv.hi, first, piece.spec, c.quad_tol, k);
                        piece.tail_bound = cut.tail;
                        piece.segments = {{iv.hi, iv.hi - 1.0, true}};
                        add_ray_nodes(nodes, iv.hi, -1.0, cut.reach + iv.hi, first, rule, true);
                    } else {
                        const auto cut = truncate_ray(model.coupling, 0.0, first, piece.spec, c.quad_tol, k);
                        piece.tail_bound = 2.0 * cut.tail;
                        piece.segments = {{0.0, -1.0, true}, {0.0, 1.0, true}};
                        add_ray_nodes(nodes, 0.0, -1.0, cut.reach, first, rule, true);
                        add_ray_nodes(nodes, 0.0, 1.0, cut.reach, first, rule, false);
                    }
                }
                break;
            }
        }

        piece.first_atom = c.atoms.size();
        piece.atom_count = nodes.size();
        for (const auto& node : nodes) {
            if (std::abs(node.mu.imag()) >= iv.strip)
                throw GeometryError("quadrature node leaves the holomorphy strip of " + name, static_cast<int>(k));
            c.atoms.push_back({node.mu, node.weight, model.coupling(node.mu), static_cast<int>(k)});
        }
        c.pieces.push_back(std::move(piece));
    }

    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    auto extend = [&](Complex z) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    };
    for (const auto& a : c.atoms) extend(a.mu);
    for (const auto& iv : model.intervals) {
        if (std::isfinite(iv.lo)) extend(iv.lo);
        if (std::isfinite(iv.hi)) extend(iv.hi);
    }
    c.diameter = std::hypot(xmax - xmin, ymax - ymin);
    if (!(c.diameter > 0.0)) c.diameter = 1.0;
    return c;
}

Contour mirror_contour(const SpectralModel& model, const Contour& contour) {
    return build_contour(model, contour.specs(), contour.multi_index.mirrored(), {contour.order, contour.quad_tol});
}

Contour reorder_contour(const SpectralModel& model, const Contour& contour, QuadratureOrder order) {
    return build_contour(model, contour.specs(), contour.multi_index, {order, contour.quad_tol});
}

Contour flat_contour(const SpectralModel& model, QuadratureOrder order) {
    return build_contour(model, CurveSpec{CurveShape::Flat, 0.0, std::nullopt},
                         MultiIndex::uniform(model.intervals.size(), 1), {order, 1e-10});
}

double variation(const SpectralModel& model, const Contour& contour) {
    (void)model;
    double v = 0.0;
    for (const auto& a : contour.atoms) v += std::abs(a.weight) * spectral_norm(a.k);
    for (const auto& p : contour.pieces) v += p.tail_bound;
    return v;
}

Separation distance_to_piece(const ContourPiece& piece, Complex p, const QuadratureOrder& order) {
    if (piece.is_arc()) {
        if (piece.is_circle()) {
            const Complex c(piece.center, 0.0);
            const Complex left(piece.lo, 0.0), right(piece.hi, 0.0);
            double d = std::min(std::abs(p - left), std::abs(p - right));
            if (piece.sign * p.imag() >= 0.0) d = std::min(d, std::abs(std::abs(p - c) - piece.half_width));
            return {d, 0.0};
        }
        // Half-ellipse: exact distances to the chords of a dense sample, minus the largest sagitta.
        const int samples = 8 * order.panels * order.points;
        const double dt = kPi / samples;
        const double a = piece.half_width, b = piece.height;
        const double kappa = std::max(a / (b * b), b / (a * a));
        double d = kInf, hmax = 0.0;
        Complex prev = piece.arc_point(0.0);
        for (int j = 1; j <= samples; ++j) {
            const Complex cur = piece.arc_point(j * dt);
            d = std::min(d, segment_distance({prev, cur}, p));
            hmax = std::max(hmax, std::abs(cur - prev));
            prev = cur;
        }
        const double sag = kappa * hmax * hmax / 8.0;
        return {std::max(0.0, d - sag), sag};
    }
    double d = kInf;
    for (const auto& s : piece.segments) d = std::min(d, segment_distance(s, p));
    return {d, 0.0};
}

Separation separation(const SpectralModel& model, const Contour& contour) {
    const RealVector eigs = a1_eigenvalues(model);
    Separation best{kInf, 0.0};
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const Complex lam(eigs(i), 0.0);
        for (const auto& d : model.discrete) {
            const double dist = std::abs(lam.real() - d.nu);
            if (dist < best.d0) best = {dist, 0.0};
        }
        for (const auto& piece : contour.pieces) {
            const Separation s = distance_to_piece(piece, lam, contour.order);
            if (s.d0 < best.d0) best = s;
        }
    }
    return best;
}

double separation_distance(const SpectralModel& model, const Contour& contour) { return separation(model, contour).d0; }

double SolvabilityCertificate::contraction() const {
    if (!admissible || !r_min) return 0.0;
    const double gap = d0 - *r_min;
    return v0 / (gap * gap);
}

SolvabilityCertificate certificate_from(double d0, double v0) {
    SolvabilityCertificate c;
    c.d0 = d0;
    c.v0 = v0;
    c.omega = d0 * d0 - 4.0 * v0;
    c.admissible = d0 > 0.0 && c.omega > 0.0;
    if (c.admissible) {
        const double h = 0.5 * d0;
        const double s = std::sqrt(h * h - v0);
        c.r_min = v0 / (h + s);
        c.r_max = d0 - std::sqrt(v0);
    }
    return c;
}

SolvabilityCertificate solvability_certificate(const SpectralModel& model, const Contour& contour) {
    const Separation sep = separation(model, contour);
    double tail = 0.0;
    for (const auto& p : contour.pieces) tail += p.tail_bound;
    SolvabilityCertificate c = certificate_from(sep.d0, variation(model, contour));
    c.d0_slack = sep.slack;
    c.v0_tail = tail;
    return c;
}

ContourFamily ContourFamily::semicircles(const std::vector<double>& heights, std::size_t intervals, ContourOptions options) {
    ContourFamily f;
    f.options = options;
    for (double h : heights) f.members.emplace_back(intervals, CurveSpec{CurveShape::Semicircle, h, std::nullopt});
    return f;
}

ScanResult scan_r0(const SpectralModel& model, const MultiIndex& l, const ContourFamily& family) {
    ScanResult out;
    for (const auto& member : family.members) {
        std::optional<Contour> c;
        try {
            c = build_contour(model, member, l, family.options);
        } catch (const GeometryError&) {
            out.certificates.push_back({});
            continue;
        }
        const SolvabilityCertificate cert = solvability_certificate(model, *c);
        out.certificates.push_back(cert);
        if (!cert.admissible) continue;
        if (!out.certified || *cert.r_min < out.r0_estimate) {
            out.r0_estimate = *cert.r_min;
            out.best_contour = *c;
        }
        out.d_max_estimate = out.certified ? std::max(out.d_max_estimate, cert.d0) : cert.d0;
        out.certified = true;
    }
    return out;
}

}  // namespace resonance
