#include <doctest.h>

#include "cadmm/errors.hpp"
#include "cadmm/generator.hpp"
#include "cadmm/linalg.hpp"
#include "cadmm/qcqp.hpp"

using namespace cadmm;

TEST_CASE("feasible point has nonnegative slack on every constraint") {
    for (std::uint64_t seed : {0u, 7u, 42u, 1234u}) {
        const GeneratedInstance gen = generate({.n = 10, .m = 5, .pd_A0 = false, .seed = seed});
        const FeasibilityReport report = check_feasible(gen.instance, gen.x_feas);
        CHECK(report.feasible);
        for (int i = 0; i < gen.instance.m(); ++i) {
            CHECK(report.slack(i) >= 0.0);
        }
    }
}

TEST_CASE("slack at the feasible point survives serialization within 1e-10") {
    const GeneratedInstance gen = generate({.n = 8, .m = 4, .pd_A0 = false, .seed = 55});
    const FeasibilityReport fresh = check_feasible(gen.instance, gen.x_feas);
    const QcqpInstance reloaded = instance_from_json(instance_to_json(gen.instance));
    REQUIRE(reloaded.meta.x_feas.has_value());
    const FeasibilityReport loaded = check_feasible(reloaded, *reloaded.meta.x_feas);
    for (int i = 0; i < reloaded.m(); ++i) {
        CHECK(loaded.slack(i) == doctest::Approx(fresh.slack(i)).epsilon(1e-10));
    }
}

TEST_CASE("definite mode shifts the spectrum to at least one") {
    const GeneratedInstance gen = generate({.n = 10, .m = 5, .pd_A0 = true, .seed = 3});
    const EigDecomposition eig = eig_hermitian(gen.instance.A0);
    CHECK(eig.lambda_min() >= 1.0 - 1e-9);
    REQUIRE(gen.instance.meta.pd_shift.has_value());
    CHECK(*gen.instance.meta.pd_shift > 1.0);
}

TEST_CASE("indefinite mode leaves both signs in the spectrum") {
    for (std::uint64_t seed : {1u, 9u, 77u}) {
        const GeneratedInstance gen = generate({.n = 10, .m = 5, .pd_A0 = false, .seed = seed});
        const EigDecomposition eig = eig_hermitian(gen.instance.A0);
        CHECK(eig.lambda_min() < 0.0);
        CHECK(eig.lambda_max() > 0.0);
        REQUIRE(gen.instance.meta.redraws.has_value());
        CHECK(*gen.instance.meta.redraws <= 16);
    }
}

TEST_CASE("generated matrices are exactly Hermitian") {
    const GeneratedInstance gen = generate({.n = 6, .m = 3, .pd_A0 = false, .seed = 8});
    CHECK_NOTHROW(validate_hermitian(gen.instance.A0, 0.0));
    for (const auto& con : gen.instance.constraints) {
        CHECK_NOTHROW(validate_hermitian(con.A, 0.0));
    }
}

TEST_CASE("same seed reproduces identical instance bytes") {
    const GenSpec spec{.n = 10, .m = 5, .pd_A0 = false, .seed = 42};
    const std::string a = instance_to_json(generate(spec).instance);
    const std::string b = instance_to_json(generate(spec).instance);
    CHECK(a == b);

    const std::string other =
        instance_to_json(generate({.n = 10, .m = 5, .pd_A0 = false, .seed = 43}).instance);
    CHECK(a != other);
}

TEST_CASE("definite and indefinite draws share the leading stream") {
    // x_feas comes first in the stream, so it matches across pd_A0 settings.
    const GeneratedInstance pd = generate({.n = 5, .m = 2, .pd_A0 = true, .seed = 91});
    const GeneratedInstance indef = generate({.n = 5, .m = 2, .pd_A0 = false, .seed = 91});
    CHECK((pd.x_feas - indef.x_feas).norm() == 0.0);
}

TEST_CASE("scalar instances cannot be indefinite") {
    CHECK_THROWS_AS(generate({.n = 1, .m = 1, .pd_A0 = false, .seed = 1}), ValidationError);
    CHECK_NOTHROW(generate({.n = 1, .m = 1, .pd_A0 = true, .seed = 1}));
}

TEST_CASE("generator validates its inputs") {
    CHECK_THROWS_AS(generate({.n = 0, .m = 1, .pd_A0 = true, .seed = 1}), ParameterError);
    CHECK_THROWS_AS(generate({.n = 2, .m = 0, .pd_A0 = true, .seed = 1}), ParameterError);
}
