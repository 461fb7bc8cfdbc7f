#include "cadmm/generator.hpp"

#include <cmath>

#include "cadmm/errors.hpp"
#include "cadmm/rng.hpp"

namespace cadmm {

namespace {

constexpr int kRedrawCap = 16;

ComplexVector draw_vector(PortableRng& rng, int n) {
    ComplexVector v(n);
    for (int j = 0; j < n; ++j) v(j) = rng.standard_complex_normal();
    return v;
}

ComplexMatrix draw_hermitian(PortableRng& rng, int n) {
    ComplexMatrix M(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) M(r, c) = rng.standard_complex_normal();
    }
    return symmetrize(M);
}

}  // namespace

GeneratedInstance generate(const GenSpec& spec) {
    if (spec.n < 1) throw ParameterError("generator dimension must be at least 1");
    if (spec.m < 1) throw ParameterError("generator needs at least one constraint");

    PortableRng rng(spec.seed);
    const ComplexVector x_feas = draw_vector(rng, spec.n);

    ComplexMatrix A0 = draw_hermitian(rng, spec.n);
    int redraws = 0;
    double pd_shift = 0.0;
    if (spec.pd_A0) {
        const EigDecomposition eig = eig_hermitian(A0);
        pd_shift = std::abs(eig.lambda_min()) + 1.0;
        A0.diagonal().array() += Complex(pd_shift, 0.0);
    } else {
        EigDecomposition eig = eig_hermitian(A0);
        while (!(eig.lambda_min() < 0.0 && eig.lambda_max() > 0.0)) {
            if (++redraws > kRedrawCap) {
                throw ValidationError("could not draw an indefinite A0 in " +
                                      std::to_string(kRedrawCap) + " attempts (n = " +
                                      std::to_string(spec.n) + " is too small)");
            }
            A0 = draw_hermitian(rng, spec.n);
            eig = eig_hermitian(A0);
        }
    }
    const ComplexVector b0 = draw_vector(rng, spec.n);

    std::vector<QcqpConstraint> constraints;
    constraints.reserve(static_cast<std::size_t>(spec.m));
    for (int i = 0; i < spec.m; ++i) {
        QcqpConstraint con;
        con.A = draw_hermitian(rng, spec.n);
        con.b = draw_vector(rng, spec.n);
        const double margin = std::abs(rng.standard_normal());
        con.c = quad_form(con.A, con.b, x_feas) + margin;
        constraints.push_back(std::move(con));
    }

    InstanceMeta meta;
    meta.seed = spec.seed;
    meta.x_feas = x_feas;
    meta.pd_shift = pd_shift;
    meta.redraws = redraws;

    GeneratedInstance out;
    out.instance = make_instance(std::move(A0), b0, std::move(constraints), std::move(meta));
    out.x_feas = x_feas;
    return out;
}

}  // namespace cadmm
