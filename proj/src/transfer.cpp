#include "resonance/transfer.hpp"

#include "resonance/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resonance {

std::string to_string(Location location) {
    switch (location) {
        case Location::Outside: return "outside";
        case Location::Inside: return "inside";
        case Location::GuardBand: return "on-contour-guard-band";
    }
    return "unknown";
}

namespace {

void check_guard(const Contour& contour, Complex z) {
    const double d = contour.distance_to_atoms(z);
    if (d <= contour.guard()) {
        std::ostringstream os;
        os << "evaluation point " << z << " is within " << d << " of a quadrature node or discrete point (guard "
           << contour.guard() << ")";
        throw GuardBandError(os.str(), d);
    }
}

// Largest gap between consecutive nodes of a piece.
double node_spacing(const Contour& contour, const ContourPiece& piece) {
    double h = 0.0;
    for (std::size_t q = piece.first_atom + 1; q < piece.first_atom + piece.atom_count; ++q)
        h = std::max(h, std::abs(contour.atoms[q].mu - contour.atoms[q - 1].mu));
    return h;
}

}  // namespace

Matrix v1_continued(const SpectralModel& model, const Contour& contour, Complex z) {
    check_guard(contour, z);
    const Eigen::Index n = model.dimension();
    Matrix v = Matrix::Zero(n, n);
    for (const auto& a : contour.atoms) v += a.k * (a.weight / (z - a.mu));
    return v;
}

Matrix v1_taylor(const SpectralModel& model, const Contour& contour, Complex z, int k) {
    check_guard(contour, z);
    const Eigen::Index n = model.dimension();
    Matrix v = Matrix::Zero(n, n);
    const double sgn = k % 2 == 0 ? 1.0 : -1.0;
    for (const auto& a : contour.atoms) v += a.k * (sgn * a.weight / std::pow(z - a.mu, k + 1));
    return v;
}

Matrix transfer_matrix(const SpectralModel& model, const Contour& contour, Complex z) {
    Matrix m = v1_continued(model, contour, z);
    m += model.a1;
    m.diagonal().array() -= z;
    return m;
}

TransferEvaluation transfer(const SpectralModel& model, const Contour& contour, Complex z) {
    TransferEvaluation ev;
    ev.z = z;
    ev.matrix = transfer_matrix(model, contour, z);
    ev.sheet_tag = contour.is_flat() ? "physical" : contour.multi_index.str();
    ev.piece = contour.region(z);
    ev.location = ev.piece >= 0 ? Location::Inside : Location::Outside;
    for (const auto& piece : contour.pieces) {
        if (piece.atom_count == 0) continue;
        double dp = kInf;
        for (std::size_t q = piece.first_atom; q < piece.first_atom + piece.atom_count; ++q)
            dp = std::min(dp, std::abs(z - contour.atoms[q].mu));
        if (dp < 0.5 * node_spacing(contour, piece)) {
            ev.location = Location::GuardBand;
            ev.reliable = false;
        }
    }
    return ev;
}

void check_mirror_pair(const Contour& plus, const Contour& minus) {
    if (!(minus.multi_index == plus.multi_index.mirrored()))
        throw PairingError("contours are not mirrors: multi-indices " + plus.multi_index.str() + " and " +
                           minus.multi_index.str());
    if (!(plus.specs() == minus.specs()) || !(plus.order == minus.order))
        throw PairingError("contours are not mirrors: curve specs or quadrature orders differ");
}

double adjoint_symmetry_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                                 Complex z) {
    check_mirror_pair(contour_l, contour_minus_l);
    const Matrix lhs = transfer_matrix(model, contour_minus_l, std::conj(z)).adjoint();
    return spectral_norm(lhs - transfer_matrix(model, contour_l, z));
}

double residue_relation_residual(const SpectralModel& model, const Contour& contour, const Contour& physical, Complex z) {
    Matrix diff = transfer_matrix(model, contour, z) - transfer_matrix(model, physical, z);
    const int k = contour.region(z);
    if (k >= 0) {
        const ContourPiece& piece = contour.pieces[static_cast<std::size_t>(k)];
        diff -= (2.0 * kPi * kI * double(piece.sign)) * kprime_eval(model, z);
    }
    return spectral_norm(diff);
}

}  // namespace resonance
