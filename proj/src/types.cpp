#include "resonance/types.hpp"

namespace resonance {

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace resonance
