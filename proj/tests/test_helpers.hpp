#pragma once

#include "cadmm/linalg.hpp"
#include "cadmm/rng.hpp"

namespace test_util {

inline cadmm::ComplexVector rand_vector(cadmm::PortableRng& rng, int n) {
    cadmm::ComplexVector v(n);
    for (int j = 0; j < n; ++j) v(j) = rng.standard_complex_normal();
    return v;
}

inline cadmm::ComplexMatrix rand_matrix(cadmm::PortableRng& rng, int n) {
    cadmm::ComplexMatrix M(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) M(r, c) = rng.standard_complex_normal();
    }
    return M;
}

inline cadmm::ComplexMatrix rand_hermitian(cadmm::PortableRng& rng, int n) {
    return cadmm::symmetrize(rand_matrix(rng, n));
}

inline cadmm::ComplexMatrix rand_pd(cadmm::PortableRng& rng, int n) {
    const cadmm::ComplexMatrix G = rand_matrix(rng, n);
    return cadmm::ComplexMatrix(G.adjoint() * G) +
           0.1 * cadmm::ComplexMatrix::Identity(n, n);
}

}  // namespace test_util
