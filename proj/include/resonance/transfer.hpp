#pragma once

#include "resonance/contour.hpp"

#include <string>

namespace resonance {

enum class Location { Outside, Inside, GuardBand };

std::string to_string(Location location);

struct TransferEvaluation {
    Complex z;
    Matrix matrix;
    std::string sheet_tag;  // "physical" or the multi-index
    Location location = Location::Outside;
    int piece = -1;         // enclosing piece when inside
    bool reliable = true;   // false inside the guard band
};

// Sum over atoms of w K / (z - mu). GuardBandError if z is within the guard of an atom.
Matrix v1_continued(const SpectralModel& model, const Contour& contour, Complex z);

// Taylor coefficient of order k at z: (-1)^k sum w K / (z - mu)^(k+1).
Matrix v1_taylor(const SpectralModel& model, const Contour& contour, Complex z, int k);

// A1 - z + V1(z).
Matrix transfer_matrix(const SpectralModel& model, const Contour& contour, Complex z);

TransferEvaluation transfer(const SpectralModel& model, const Contour& contour, Complex z);

// PairingError unless `minus` is the mirror of `plus`.
void check_mirror_pair(const Contour& plus, const Contour& minus);

double adjoint_symmetry_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                                 Complex z);

// ||M1(z, contour) - M1(z, physical) - 2 pi i l_k K'(z)|| with k the piece enclosing z (no jump outside).
double residue_relation_residual(const SpectralModel& model, const Contour& contour, const Contour& physical, Complex z);

}  // namespace resonance
