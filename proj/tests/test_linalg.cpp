#include <catch2/catch_amalgamated.hpp>

#include <milnor/linalg.hpp>

using milnor::CycloNum;
using milnor::Matrix;
using milnor::Rat;

TEST_CASE("rational rank and inverse") {
    Matrix<Rat> m(3, 3, Rat(0));
    m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
    m(1, 0) = 4; m(1, 1) = 5; m(1, 2) = 6;
    m(2, 0) = 7; m(2, 1) = 8; m(2, 2) = 9;
    CHECK(m.rank() == 2);
    CHECK(m.kernel_dim() == 1);

    m(2, 2) = 10;
    CHECK(m.rank() == 3);
    Matrix<Rat> inv = m.inverse();
    CHECK(m * inv == Matrix<Rat>::identity(3, Rat(0)));
}

TEST_CASE("singular matrix inversion throws") {
    Matrix<Rat> m(2, 2, Rat(0));
    m(0, 0) = 1; m(0, 1) = 2;
    m(1, 0) = 2; m(1, 1) = 4;
    CHECK_THROWS_AS(m.inverse(), std::domain_error);
}

TEST_CASE("cyclotomic matrix arithmetic") {
    CycloNum z = CycloNum::zero(4);
    CycloNum i = CycloNum::root(4);
    Matrix<CycloNum> m(2, 2, z);
    m(0, 0) = i;
    m(0, 1) = CycloNum::one(4);
    m(1, 1) = i;
    Matrix<CycloNum> inv = m.inverse();
    CHECK(m * inv == Matrix<CycloNum>::identity(2, z));
    CHECK(m.rank() == 2);

    // i * conjugate pattern: (m - i I) has rank 1
    Matrix<CycloNum> shifted = m - Matrix<CycloNum>::identity(2, z) * m;  // zero
    CHECK(shifted.rank() == 0);
}

TEST_CASE("stacked rank combines blocks") {
    Matrix<Rat> a(1, 3, Rat(0));
    a(0, 0) = 1;
    Matrix<Rat> b(1, 3, Rat(0));
    b(0, 1) = 1;
    Matrix<Rat> c(1, 3, Rat(0));
    c(0, 0) = 1; c(0, 1) = 1;
    CHECK(milnor::stacked_rank<Rat>({a, b, c}) == 2);
    CHECK(milnor::stacked_rank<Rat>({}) == 0);
}

TEST_CASE("matrix vector apply") {
    Matrix<Rat> m(2, 2, Rat(0));
    m(0, 0) = 2; m(0, 1) = 1;
    m(1, 0) = 0; m(1, 1) = 3;
    std::vector<Rat> v{Rat(1), Rat(2)};
    auto w = m.apply(v);
    CHECK(w[0] == Rat(4));
    CHECK(w[1] == Rat(6));
}

TEST_CASE("determinant helper for collinearity") {
    Rat det = milnor::det3<Rat>(Rat(1), Rat(0), Rat(0),
                                Rat(0), Rat(1), Rat(0),
                                Rat(0), Rat(0), Rat(1));
    CHECK(det == Rat(1));
}
