#include <doctest.h>

#include <random>

#include "flatspin/clifford.hpp"

using namespace flatspin;

namespace {

PinElement random_pin(std::mt19937_64& rng, int n) {
  PinElement p;
  p.dim = n;
  p.subset = rng() & ((std::uint64_t(1) << n) - 1);
  p.sign = (rng() & 1) ? 1 : -1;
  return p;
}

PinElement basis(int i, int n) {
  return PinElement{std::uint64_t(1) << i, 1, n};
}

}  // namespace

TEST_CASE("clifford squares and identity") {
  const int n = 5;
  PinElement e1 = basis(0, n);
  PinElement sq = pin_multiply(e1, e1);
  CHECK(sq.subset == 0);
  CHECK(sq.sign == -1);

  PinElement e12{0b11, 1, n};
  PinElement sq12 = pin_multiply(e12, e12);
  CHECK(sq12.subset == 0);
  CHECK(sq12.sign == -1);

  PinElement es{0b10110, 1, n};
  CHECK(pin_equal(pin_multiply(es, pin_identity(n)), es));
}

TEST_CASE("anticommutation") {
  const int n = 8;
  for (int i = 0; i < n; ++i) {
    CHECK(pin_multiply(basis(i, n), basis(i, n)).sign == -1);
    for (int j = 0; j < n; ++j) {
      if (i == j)
        continue;
      PinElement ab = pin_multiply(basis(i, n), basis(j, n));
      PinElement ba = pin_multiply(basis(j, n), basis(i, n));
      CHECK(ab.subset == ba.subset);
      CHECK(ab.sign == -ba.sign);
    }
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(555);
  for (int iter = 0; iter < 500; ++iter) {
    int n = 1 + int(rng() % 16);
    PinElement a = random_pin(rng, n), b = random_pin(rng, n),
               c = random_pin(rng, n);
    CHECK(pin_equal(pin_multiply(pin_multiply(a, b), c),
                    pin_multiply(a, pin_multiply(b, c))));
  }
}

TEST_CASE("inverses") {
  std::mt19937_64 rng(556);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + int(rng() % 16);
    PinElement a = random_pin(rng, n);
    CHECK(pin_equal(pin_multiply(a, pin_inverse(a)), pin_identity(n)));
    CHECK(pin_equal(pin_multiply(pin_inverse(a), a), pin_identity(n)));
  }
}

TEST_CASE("lift_diagonal") {
  SignVector b1 = SignVector::from_signs({1, -1, -1, -1, -1});
  PinElement c = lift_diagonal(b1);
  CHECK(c.subset == 0b11110);
  CHECK(c.sign == 1);
  CHECK(is_spin(c));

  CHECK(lift_diagonal(SignVector::identity(4)).subset == 0);

  PinElement r = lift_diagonal(SignVector::from_signs({-1, 1, 1}));
  CHECK(r.subset == 0b001);
  CHECK(!is_spin(r));
}

TEST_CASE("lambda examples") {
  // e_{2,3,4,5} in dimension 5 covers B_1.
  PinElement g{0b11110, 1, 5};
  CHECK(lambda(g) == SignVector::from_signs({1, -1, -1, -1, -1}));
  CHECK(lambda(PinElement{0, -1, 5}) == SignVector::identity(5));
  CHECK(lambda(PinElement{0b011, 1, 3}) ==
        SignVector::from_signs({-1, -1, 1}));
  CHECK_THROWS(lambda(PinElement{0b001, 1, 3}));
}

TEST_CASE("lambda is a homomorphism killing the sign") {
  std::mt19937_64 rng(557);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 2 + int(rng() % 14);
    PinElement a = random_pin(rng, n), b = random_pin(rng, n);
    if (!is_spin(a))
      a.subset ^= 1;  // force even
    if (!is_spin(b))
      b.subset ^= 1;
    CHECK(lambda(pin_multiply(a, b)) == lambda(a) * lambda(b));
    CHECK(lambda(pin_negate(a)) == lambda(a));
  }
}

TEST_CASE("lambda inverts lift_diagonal on even sign matrices") {
  std::mt19937_64 rng(558);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + int(rng() % 14);
    std::uint64_t mask = rng() & ((std::uint64_t(1) << n) - 1);
    if (__builtin_popcountll(mask) & 1)
      mask ^= 1;
    SignVector b(n, mask);
    CHECK(lambda(lift_diagonal(b)) == b);
  }
}

TEST_CASE("spinc arithmetic") {
  const int n = 5;
  SpinCElement i4 = spinc_make(pin_identity(n), Rat(1, 4));
  CHECK(spinc_l(i4) == Rat(1, 2));
  SpinCElement sq = spinc_multiply(i4, i4);
  CHECK(sq.pin.subset == 0);
  CHECK(sq.angle == Rat(1, 2));

  // [-e_S, q] = [e_S, q + 1/2]
  PinElement neg{0b110, -1, n};
  SpinCElement canon = spinc_make(neg, Rat(1, 3));
  CHECK(canon.pin.sign == 1);
  CHECK(canon.angle == Rat(5, 6));
  // canonicalization is idempotent
  SpinCElement again = spinc_make(canon.pin, canon.angle);
  CHECK(spinc_equal(again, canon));

  for (int num = 0; num < 4; ++num) {
    SpinCElement e = spinc_make(PinElement{0b11110, 1, n}, Rat(num, 4));
    CHECK(spinc_lambda_bar(e) == SignVector::from_signs({1, -1, -1, -1, -1}));
  }
}

TEST_CASE("spinc lambda_bar is a homomorphism") {
  std::mt19937_64 rng(559);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + int(rng() % 10);
    PinElement a = random_pin(rng, n), b = random_pin(rng, n);
    if (!is_spin(a))
      a.subset ^= 1;
    if (!is_spin(b))
      b.subset ^= 1;
    SpinCElement x = spinc_make(a, Rat(int(rng() % 12), 12));
    SpinCElement y = spinc_make(b, Rat(int(rng() % 12), 12));
    CHECK(spinc_lambda_bar(spinc_multiply(x, y)) ==
          spinc_lambda_bar(x) * spinc_lambda_bar(y));
    CHECK(spinc_equal(spinc_multiply(x, spinc_inverse(x)),
                      spinc_identity(n)));
  }
}
