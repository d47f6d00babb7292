#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "udpack/generators.hpp"
#include "udpack/io.hpp"
#include "udpack/udset.hpp"
#include "support.hpp"

using namespace udpack;
using namespace testutil;

TEST_CASE("validate: distance-1 pair, violation, empty set") {
    auto ok = UDSet::validate({{0.0, 0.0}, {1.0, 0.0}}, 2, 5.0);
    CHECK(ok.size() == 2);
    CHECK(ok.min_distance_attained());

    CHECK_THROWS_AS(UDSet::validate({{0.0, 0.0}, {0.9, 0.0}}, 2, 5.0), MinDistanceViolation);
    try {
        UDSet::validate({{0.0, 0.0}, {0.9, 0.0}}, 2, 5.0);
    } catch (const MinDistanceViolation& e) {
        CHECK(e.distance == doctest::Approx(0.9).epsilon(1e-12));
    }

    auto empty = UDSet::validate({}, 2, 5.0);
    CHECK(empty.is_empty());
    CHECK(empty.size() == 0);
    CHECK_FALSE(empty.min_distance_attained());
}

TEST_CASE("validate: window and finiteness checks") {
    CHECK_THROWS_AS(UDSet::validate({{6.0, 0.0}}, 2, 5.0), OutOfWindowError);
    CHECK_THROWS_AS(UDSet::validate({{std::nan(""), 0.0}}, 2, 5.0), DomainError);
    // attainment flag: sparse pair is valid but the constant is not attained
    auto sparse = UDSet::validate({{0.0, 0.0}, {3.0, 0.0}}, 2, 5.0);
    CHECK_FALSE(sparse.min_distance_attained());
}

TEST_CASE("points are stored lexicographically sorted") {
    auto s = UDSet::validate({{2.0, 0.0}, {-1.0, 1.0}, {0.5, -2.0}}, 2, 5.0);
    CHECK(s.point(0)[0] == -1.0);
    CHECK(s.point(1)[0] == 0.5);
    CHECK(s.point(2)[0] == 2.0);
}

TEST_CASE("rigid motions: identity, quarter turn, composition law") {
    auto s = UDSet::validate({{0.0, 0.0}, {1.0, 0.0}}, 2, 5.0);
    auto same = transform(s, RigidMotion::identity(2));
    CHECK(same == s);

    RigidMotion quarter{RotationMatrix{2, {0.0, -1.0, 1.0, 0.0}}, {0.0, 0.0}};
    auto turned = transform(s, quarter);
    CHECK(turned.point(0)[0] == doctest::Approx(0.0));
    CHECK(turned.point(1)[1] == doctest::Approx(1.0));

    Xoshiro256pp rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        RigidMotion g{random_rotation(n, rng), random_in_ball(n, 2.0, rng)};
        RigidMotion h{random_rotation(n, rng), random_in_ball(n, 2.0, rng)};
        const Point x = random_in_ball(n, 3.0, rng);
        const Point lhs = g.compose(h).apply(x);
        const Point rhs = g.apply(h.apply(x));
        for (int k = 0; k < n; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12));
    }
}

TEST_CASE("transform: isometry preserves validity, window grows by the shift") {
    auto z2 = gen_named_lattice("Z2", 8.0);
    const Point t{0.25, 0.0};
    auto shifted = transform(z2, RigidMotion::pure_translation(t));
    CHECK(shifted.size() == z2.size());
    CHECK(shifted.window_radius() == doctest::Approx(8.25));

    Xoshiro256pp rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        RigidMotion g{random_rotation(2, rng), random_in_ball(2, 2.0, rng)};
        auto moved = transform(z2, g);  // validate-after-transform must not throw
        CHECK(moved.size() == z2.size());
    }

    RotationMatrix skew{2, {1.0, 0.1, 0.0, 1.0}};
    CHECK_THROWS_AS(transform(z2, RigidMotion{skew, {0.0, 0.0}}), DomainError);
}

TEST_CASE("rotation orthogonality tolerance is 1e-12") {
    RotationMatrix nearly{2, {1.0, 1e-11, 0.0, 1.0}};
    CHECK_FALSE(nearly.is_orthogonal());
    RotationMatrix fine{2, {1.0, 1e-13, 0.0, 1.0}};
    CHECK(fine.is_orthogonal());
}

TEST_CASE("restrict_annulus: full window, Z2 ring, empty ring") {
    auto z2 = gen_named_lattice("Z2", 6.0);
    CHECK(restrict_annulus(z2, Annulus(0.0, z2.window_radius())) == z2);

    auto ring = restrict_annulus(z2, Annulus(0.5, 1.5));
    CHECK(ring.size() == 8);  // norms 1 and sqrt(2)
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const double nrm = norm(ring.point(i));
        CHECK(nrm >= 0.5);
        CHECK(nrm <= 1.5);
    }

    CHECK(restrict_annulus(z2, Annulus(0.25, 0.25)).is_empty());
    CHECK_THROWS_AS(Annulus(-1.0, 2.0), DomainError);
    CHECK_THROWS_AS(Annulus(2.0, 1.0), DomainError);
}

TEST_CASE("restricting to radially separated annuli always unions validly") {
    auto hex = gen_named_lattice("hex", 20.0);
    Xoshiro256pp rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform(0.0, 6.0);
        const double b = a + rng.uniform(0.5, 4.0);
        const double c = b + 1.0 + rng.uniform(0.0, 0.5);  // gap >= 1
        const double d = c + rng.uniform(0.5, 4.0);
        auto u = union_checked(restrict_annulus(hex, Annulus(a, b)),
                               restrict_annulus(hex, Annulus(c, d)));
        CHECK(u.size() == restrict_annulus(hex, Annulus(a, b)).size() +
                              restrict_annulus(hex, Annulus(c, d)).size());
    }
}

TEST_CASE("union_checked: empty, checkerboard Z4, violation, dedup") {
    auto z2 = gen_named_lattice("Z2", 5.0);
    CHECK(union_checked(z2, UDSet::empty(2, 5.0)) == z2);
    CHECK(union_checked(z2, z2) == z2);  // duplicates collapse

    auto z4 = gen_named_lattice("Z4", 3.0);
    auto z4_shift = translated_copy(z4, {0.5, 0.5, 0.5, 0.5});
    // brute-force oracle: min cross distance of the two windows is exactly 1
    double min_cross = 1e9;
    for (std::size_t i = 0; i < z4.size(); ++i) {
        for (std::size_t j = 0; j < z4_shift.size(); ++j) {
            min_cross = std::min(min_cross, dist(z4.point(i), z4_shift.point(j)));
        }
    }
    CHECK(min_cross == doctest::Approx(1.0).epsilon(1e-12));
    auto d4ish = union_checked(z4, z4_shift);
    CHECK(d4ish.size() == z4.size() + z4_shift.size());

    auto a = UDSet::validate({{0.0, 0.0}}, 2, 3.0);
    auto b = UDSet::validate({{0.5, 0.0}}, 2, 3.0);
    CHECK_THROWS_AS(union_checked(a, b), MinDistanceViolation);
}

TEST_CASE("gen_lattice: Z2 and hex window counts match enumeration oracles") {
    auto z2 = gen_named_lattice("Z2", 10.0);
    CHECK(z2.size() == 317);  // Gauss circle count for radius 10
    CHECK(z2.size() ==
          lattice_count_oracle({1.0, 0.0, 0.0, 1.0}, 2, 10.0, 12));

    auto hex = gen_named_lattice("hex", 10.0);
    const double s3 = std::sqrt(3.0);
    CHECK(hex.size() == lattice_count_oracle({1.0, 0.0, 0.5, s3 / 2.0}, 2, 10.0, 25));
    CHECK(hex.min_distance_attained());
}

TEST_CASE("gen_lattice: degenerate window, singular basis, normalization") {
    auto origin_only = gen_named_lattice("Z3", 0.0);
    CHECK(origin_only.size() == 1);
    CHECK(norm(origin_only.point(0)) == 0.0);

    CHECK_THROWS_AS(gen_lattice({1.0, 0.0, 2.0, 0.0}, 2, 5.0), DomainError);

    // fcc: shortest vector of the raw basis is sqrt(2); after normalization
    // the minimum distance is exactly 1 and the origin has 12 kissing points
    auto fcc = gen_named_lattice("fcc", 6.0);
    const Point origin{0.0, 0.0, 0.0};
    CHECK(fcc.grid().neighbors_within(origin, 1.0 + 1e-9).size() == 13);  // self + 12
    double min_d = 1e9;
    const std::size_t anchor = fcc.grid().neighbors_within(origin, 0.0).front();
    for (std::size_t i = 0; i < fcc.size(); ++i) {
        if (i != anchor) min_d = std::min(min_d, dist(fcc.point(anchor), fcc.point(i)));
    }
    CHECK(min_d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gen_lattice: Z^n counts equal brute enumeration, n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        const double T = n <= 2 ? 20.0 : (n == 3 ? 8.0 : 5.0);
        std::vector<double> id(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) id[i * n + i] = 1.0;
        auto s = gen_lattice(id, n, T);
        CHECK(s.size() == lattice_count_oracle(id, n, T, static_cast<long>(T) + 2));
    }
}

TEST_CASE("gen_lattice: scale produces sparse copies") {
    auto two_z2 = gen_named_lattice("Z2", 10.0, 2.0);
    for (std::size_t i = 0; i < two_z2.size(); ++i) {
        CHECK(std::fmod(two_z2.point(i)[0], 2.0) == 0.0);
    }
    CHECK_FALSE(two_z2.min_distance_attained());
    CHECK_THROWS_AS(gen_named_lattice("Z2", 10.0, 0.5), DomainError);
}

TEST_CASE("gen_rsa: window too small for two, 1-D bounds, determinism") {
    auto one = gen_rsa(2, 0.4, 123, 500);
    CHECK(one.size() == 1);

    auto line = gen_rsa(1, 5.0, 99, 20000);
    CHECK(line.size() >= 6);   // any maximal packing of [-5,5] has >= 6 points
    CHECK(line.size() <= 11);  // and at most 11 fit

    auto again = gen_rsa(1, 5.0, 99, 20000);
    CHECK(line == again);
    auto other = gen_rsa(1, 5.0, 100, 20000);
    CHECK_FALSE(line == other);
}

TEST_CASE("UDPACK io: byte-exact round trip") {
    auto rsa = gen_rsa(3, 4.0, 7, 2000);
    std::ostringstream first;
    write_packing(first, rsa);
    std::istringstream back(first.str());
    auto reread = read_packing(back);
    CHECK(reread == rsa);
    std::ostringstream second;
    write_packing(second, reread);
    CHECK(first.str() == second.str());
}

TEST_CASE("UDPACK io: header, version, dimension and validation errors") {
    {
        std::istringstream bad("UDPACK 2\ndim=2 window=5\n");
        CHECK_THROWS_AS(read_packing(bad), FileFormatError);
    }
    {
        std::istringstream bad("not a packing\n");
        CHECK_THROWS_AS(read_packing(bad), FileFormatError);
    }
    {
        std::istringstream bad("UDPACK 1\ndim=2 window=5\n1.0 2.0 3.0\n");
        CHECK_THROWS_AS(read_packing(bad), FileFormatError);
    }
    {
        std::istringstream bad("UDPACK 1\ndim=2 window=5\n# fine\n0 0\n0.5 0\n");
        try {
            read_packing(bad);
            CHECK(false);
        } catch (const FileFormatError& e) {
            CHECK(std::string(e.what()).find("lines 4 and 5") != std::string::npos);
        }
    }
    {
        std::istringstream ok("UDPACK 1\ndim=2 window=5\n0 0 # trailing comment\n\n1 0\n");
        CHECK(read_packing(ok).size() == 2);
    }
}
