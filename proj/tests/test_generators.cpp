#include <cmath>

#include "kcp/generators.hpp"
#include "kcp/sampling.hpp"
#include "support.hpp"

using namespace kcp;
using kcp::test::reference;

namespace {

ModelParams params_with(double omega, double gamma, double g = 1.0)
{
    ModelParams p;
    p.g = g;
    p.omega = omega;
    p.gamma = gamma;
    return p;
}

double real_eval(Gen tag, const KleinPoint& p, const ModelParams& params, int a = -1, int b = -1)
{
    return eval(GeneratorId::of(tag, a, b), p, params).real();
}

} // namespace

TEST_SUITE("generators")
{
    TEST_CASE("labels round-trip through parse")
    {
        for (const auto& id : all_generators(4)) {
            CHECK(GeneratorId::parse(id.label()) == id);
            CHECK(GeneratorId::parse(id.conj().label()) == id.conj());
        }
        CHECK(GeneratorId::of(Gen::HAlphaN, 0).label() == "H_1N");
        CHECK(GeneratorId::of(Gen::HAlphaBeta, 0, 1).label() == "H_1,2");
        CHECK_THROWS(GeneratorId::parse("nonsense"));
    }

    TEST_CASE("index checks")
    {
        CHECK_THROWS_AS(check_indices(GeneratorId::of(Gen::HAlpha, 2), 3), std::out_of_range);
        CHECK_NOTHROW(check_indices(GeneratorId::of(Gen::HAlpha, 1), 3));
        CHECK_THROWS_AS(eval(GeneratorId::of(Gen::HAlpha, 1), test::origin_point(), ModelParams{}), std::out_of_range);
    }

    TEST_CASE("values at w = -i, z = 0")
    {
        const KleinPoint p = test::origin_point();
        const auto& o = reference();
        const auto params = params_with(1.0, 1.0);
        const auto& hkd = o["HKD_at_minus_i"];
        CHECK(real_eval(Gen::H, p, params) == doctest::Approx(hkd[0].get<double>()).epsilon(1e-15));
        CHECK(real_eval(Gen::K, p, params) == doctest::Approx(hkd[1].get<double>()).epsilon(1e-15));
        CHECK(std::abs(real_eval(Gen::D, p, params)) < 1e-15);
        CHECK(real_eval(Gen::Hosc, p, params) == doctest::Approx(o["Hosc_omega1_at_minus_i"].get<double>()).epsilon(1e-15));
        CHECK(real_eval(Gen::HCoul, p, params) == doctest::Approx(o["HCoul_gamma1_at_minus_i"].get<double>()).epsilon(1e-15));
        CHECK(std::abs(eval(GeneratorId::of(Gen::M, 0, 0), p, params)) == 0.0);
        CHECK(std::abs(real_eval(Gen::ShiftedH, p, params) - o["shifted_H_at_minus_i"].get<double>()) < 1e-15);
        CHECK(real_eval(Gen::ShiftedHosc, p, params) == doctest::Approx(o["shifted_Hosc_at_minus_i"].get<double>()).epsilon(1e-15));
    }

    TEST_CASE("values at w = 1 - i, z = 0.5")
    {
        const KleinPoint p = test::sample_point();
        const auto& hkd = reference()["HKD_at_1_minus_i"];
        const ModelParams params;
        CHECK(real_eval(Gen::H, p, params) == doctest::Approx(hkd[0].get<double>()).epsilon(1e-15));
        CHECK(real_eval(Gen::K, p, params) == doctest::Approx(hkd[1].get<double>()).epsilon(1e-15));
        CHECK(real_eval(Gen::D, p, params) == doctest::Approx(hkd[2].get<double>()).epsilon(1e-15));
    }

    TEST_CASE("real-tagged generators are real")
    {
        DomainSampler s(2);
        const auto params = params_with(1.3, 0.8, 0.9);
        for (int k = 0; k < 200; ++k) {
            const KleinPoint p = s.klein(3);
            for (const auto& id : all_generators(3)) {
                if (id.real_valued()) {
                    const cplx v = eval(id, p, params);
                    CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v)));
                }
            }
        }
    }

    TEST_CASE("h_NN = H + K")
    {
        DomainSampler s(8);
        const ModelParams params;
        for (int k = 0; k < 100; ++k) {
            const KleinPoint p = s.klein(3);
            const cplx h = eval(GeneratorId::of(Gen::hNN), p, params);
            const cplx sum = eval(GeneratorId::of(Gen::H), p, params) + eval(GeneratorId::of(Gen::K), p, params);
            CHECK(test::close(h, sum, 1e-12));
        }
    }

    TEST_CASE("dependency identities")
    {
        const ModelParams params;
        const auto d = dependency_identities(test::sample_point(), params);
        CHECK_FALSE(d.skipped);
        CHECK(d.energy_residual < 1e-12);
        CHECK(d.factorisation_residual < 1e-12);

        const auto z0 = dependency_identities(test::origin_point(), params);
        CHECK(z0.skipped);
        CHECK_FALSE(z0.note.empty());

        DomainSampler s(12);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const auto r = dependency_identities(s.klein(4), params);
            REQUIRE_FALSE(r.skipped);
            worst = std::max({worst, r.energy_residual, r.factorisation_residual});
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("the halved sum over alpha equals (N-1)H/2")
    {
        // Each term H_{αN̄} H_{Nᾱ} / H_{αᾱ} equals H, so Σ_α (...)/2 = (N-1)H/2.
        const ModelParams params;
        DomainSampler s(13);
        for (std::size_t n : {2u, 3u, 5u}) {
            const KleinPoint p = s.klein(n);
            cplx sum = 0.0;
            for (int a = 0; a < static_cast<int>(n) - 1; ++a) {
                const cplx hn = eval(GeneratorId::of(Gen::HAlphaN, a), p, params);
                sum += hn * std::conj(hn) / (2.0 * eval(GeneratorId::of(Gen::HAlphaBeta, a, a), p, params));
            }
            const double H = real_eval(Gen::H, p, params);
            CHECK(test::close(sum, 0.5 * static_cast<double>(n - 1) * H, 1e-12));
        }
    }

    TEST_CASE("duality at the reference points")
    {
        const ModelParams params;
        const KleinPoint fixed = duality(test::origin_point());
        CHECK(std::abs(fixed.w() - cplx(0.0, -1.0)) < 1e-15);
        CHECK(std::abs(fixed.z(0)) == 0.0);
        CHECK(real_eval(Gen::H, fixed, params) == doctest::Approx(0.5));
        CHECK(real_eval(Gen::K, fixed, params) == doctest::Approx(0.5));

        const KleinPoint p = test::sample_point();
        const KleinPoint d = duality(p);
        const auto& ref = reference()["dual_of_1_minus_i"];
        CHECK(std::abs(d.w() - test::as_complex(ref["w"])) < 1e-15);
        CHECK(std::abs(d.z(0) - test::as_complex(ref["z"][0])) < 1e-15);
        CHECK(real_eval(Gen::H, d, params) == doctest::Approx(reference()["H_of_dual"].get<double>()).epsilon(1e-14));
        CHECK(real_eval(Gen::H, d, params) == doctest::Approx(real_eval(Gen::K, p, params)).epsilon(1e-14));
    }

    TEST_CASE("dual(dual(w, z)) = (w, -z); the fourth power is the identity")
    {
        DomainSampler s(31);
        for (int k = 0; k < 100; ++k) {
            const KleinPoint p = s.klein(3);
            const KleinPoint d2 = duality(duality(p));
            CHECK(std::abs(d2.w() - p.w()) < 1e-15 * std::max(1.0, std::abs(p.w())) * 4);
            for (std::size_t a = 0; a < 2; ++a) {
                CHECK(std::abs(d2.z(a) + p.z(a)) < 1e-14 * std::max(1.0, std::abs(p.z(a))));
            }
            const KleinPoint d4 = duality(duality(d2));
            CHECK(std::abs(d4.w() - p.w()) < 1e-14 * std::max(1.0, std::abs(p.w())));
            for (std::size_t a = 0; a < 2; ++a) {
                CHECK(std::abs(d4.z(a) - p.z(a)) < 1e-14 * std::max(1.0, std::abs(p.z(a))));
            }
        }
        // Identity on z = 0.
        const KleinPoint q(cplx(0.7, -1.3), {0.0});
        const KleinPoint q2 = duality(duality(q));
        CHECK(std::abs(q2.w() - q.w()) < 1e-15);
    }

    TEST_CASE("duality pullbacks")
    {
        const auto r = duality_check(3, 1.0, 100, 7, 1e-12);
        for (const char* label : {"H(dual)=K", "K(dual)=H", "D(dual)=-D"}) {
            REQUIRE(r.find(label) != nullptr);
            CHECK(r.find(label)->passed);
        }
        const auto* inv = r.find("dual(dual)=id");
        REQUIRE(inv != nullptr);
        CHECK_FALSE(inv->passed);
        REQUIRE(r.find("dual^4=id") != nullptr);
        CHECK(r.find("dual^4=id")->passed);
    }

    TEST_CASE("oscillator algebra, N = 2, g = 1, omega = 1")
    {
        const auto r = oscillator_algebra_check(2, params_with(1.0, 0.0), 100, 7, 1e-9);
        CHECK(r.passed());
        CHECK(r.find("M_ab=A_a*B_b") != nullptr);
    }

    TEST_CASE("Coulomb algebra, N = 3, g = 0.7, gamma = 1.3")
    {
        const auto r = coulomb_algebra_check(3, params_with(0.0, 1.3, 0.7), 100, 7, 1e-9);
        CHECK(r.passed());
        CHECK(r.max_residual() < 1e-9);
    }

    TEST_CASE("shifted systems, N = 2, g = 1")
    {
        const auto r = shifted_system_check(2, params_with(1.0, 1.0), 100, 7, 1e-9);
        CHECK(r.passed());
    }

    TEST_CASE("system checks need N >= 2")
    {
        const auto p = params_with(1.0, 1.0);
        CHECK_THROWS_AS(oscillator_algebra_check(1, p, 10, 1, 1e-9), std::invalid_argument);
        CHECK_THROWS_AS(coulomb_algebra_check(1, p, 10, 1, 1e-9), std::invalid_argument);
        CHECK_THROWS_AS(shifted_system_check(1, p, 10, 1, 1e-9), std::invalid_argument);
    }

    TEST_CASE("a 1% error in the Coulomb ladder term breaks {HCoul, R}")
    {
        auto p = params_with(0.0, 1.0);
        p.scales[Coef::CoulombLadder] = 1.01;
        const auto r = coulomb_algebra_check(2, p, 100, 7, 1e-9);
        double worst = 0.0;
        for (const auto& rel : r.relations) {
            if (rel.label.rfind("{HCoul,R_", 0) == 0) {
                worst = std::max(worst, rel.residual);
            }
        }
        CHECK(worst > 1e-4);
    }

    TEST_CASE("Killing property of every basis potential")
    {
        const auto r = killing_check(2, 0.5, 50, 7, 1e-6);
        CHECK(r.passed());
        CHECK(r.relations.size() == convenient_basis(2).size() + h_basis(2).size());
    }

    TEST_CASE("parameter validation")
    {
        ModelParams p;
        p.omega = -1.0;
        CHECK_THROWS(p.validate());
        p.omega = 0.0;
        p.g = 0.0;
        CHECK_THROWS(p.validate());
    }
}
