#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include <cyclo/oracle.hpp>
#include <cyclo/primes.hpp>

using namespace cyclo;

TEST_CASE("oracle_phi on small indices") {
    REQUIRE(oracle_phi(1).coeffs == std::vector<int64_t>{-1, 1});
    REQUIRE(oracle_phi(2).coeffs == std::vector<int64_t>{1, 1});
    REQUIRE(oracle_phi(6).coeffs == std::vector<int64_t>{1, -1, 1});
    REQUIRE(oracle_phi(9).coeffs == std::vector<int64_t>{1, 0, 0, 1, 0, 0, 1});
    REQUIRE(oracle_phi(12).coeffs == std::vector<int64_t>{1, 0, -1, 0, 1});
    REQUIRE(oracle_phi(15).coeffs == std::vector<int64_t>{1, -1, 0, 1, -1, 1, 0, -1, 1});
}

TEST_CASE("oracle_phi at primes is all ones") {
    for (uint64_t p : {3ull, 7ull, 97ull}) {
        DensePoly f = oracle_phi(p);
        REQUIRE(f.degree() == static_cast<int64_t>(p) - 1);
        for (int64_t c : f.coeffs) REQUIRE(c == 1);
    }
}

TEST_CASE("oracle_phi degree is the totient and the table agrees") {
    auto table = oracle_phi_table(120);
    for (uint64_t n = 1; n <= 120; ++n) {
        REQUIRE(table[n].degree() == static_cast<int64_t>(euler_phi(n)));
        REQUIRE(table[n].coeffs == oracle_phi(n).coeffs);
    }
}

TEST_CASE("first cyclotomic height above 1 is at n = 105") {
    for (uint64_t n = 1; n < 105; ++n) REQUIRE(poly_height(oracle_phi(n)) <= 1);
    DensePoly f = oracle_phi(105);
    REQUIRE(poly_height(f) == 2);
    REQUIRE(f.coeffs[7] == -2);  // first extremal coefficient
}

TEST_CASE("oracle inclusion-exclusion matches oracle_phi on prime triples") {
    DensePoly q = oracle_inclusion_exclusion(TernaryTriple{3, 5, 7});
    REQUIRE(q.coeffs == oracle_phi(105).coeffs);
    DensePoly q2 = oracle_inclusion_exclusion(TernaryTriple{3, 7, 11});
    REQUIRE(q2.coeffs == oracle_phi(231).coeffs);
}

TEST_CASE("oracle inclusion-exclusion frozen heights") {
    REQUIRE(poly_height(oracle_inclusion_exclusion(TernaryTriple{3, 7, 11})) == 1);
    REQUIRE(poly_height(oracle_inclusion_exclusion(TernaryTriple{3, 5, 37})) == 2);
    REQUIRE(poly_height(oracle_inclusion_exclusion(TernaryTriple{9, 11, 50})) == 5);
    REQUIRE(poly_height(oracle_inclusion_exclusion(TernaryTriple{3, 5, 8})) == 2);
}

TEST_CASE("oracle inclusion-exclusion degree and caps") {
    TernaryTriple t{11, 13, 17};
    REQUIRE(oracle_inclusion_exclusion(t).degree() == 10 * 12 * 16);
    try {
        oracle_inclusion_exclusion(TernaryTriple{101, 103, 107});  // pqr > 10^6
        FAIL("expected resource error");
    } catch (const error& e) {
        REQUIRE(e.kind() == errc::resource);
    }
    try {
        oracle_phi(100001);
        FAIL("expected resource error");
    } catch (const error& e) {
        REQUIRE(e.kind() == errc::resource);
    }
}

TEST_CASE("oracle rejects invalid triples") {
    REQUIRE_THROWS_AS(oracle_inclusion_exclusion(TernaryTriple{3, 6, 7}), error);
    REQUIRE_THROWS_AS(oracle_inclusion_exclusion(TernaryTriple{2, 5, 7}), error);
}
