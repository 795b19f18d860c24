#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adadgs/benchmarks.hpp"
#include "support.hpp"

using namespace adadgs;
using namespace adadgs::testing;

namespace {

Vector probe(std::size_t d) {
  Vector z(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z[i] = 0.37 * static_cast<double>(i + 1) - 1.1 * std::sin(3.0 * static_cast<double>(i) + 1.0);
  }
  return z;
}

struct Reference {
  const char* name;
  std::size_t dim;
  double value;
};

// Independently evaluated with compensated summation from the textbook formulas.
const Reference kReference[] = {
    {"ackley", 2, 6.5214099732026405},
    {"alpine", 2, 1.9672380167603483},
    {"ellipsoidal", 2, 2472702.291526973},
    {"quintic", 2, 9.10314418100986},
    {"rastrigin", 2, 41.15774788937081},
    {"rosenbrock", 2, 162.13173505520828},
    {"salomon", 2, 1.6608310332892084},
    {"schaffer_f7", 2, 5.66353247000121},
    {"sharp_ridge", 2, 157.5569859383495},
    {"styblinski_tang", 2, -16.604366915495536},
    {"trigonometric", 2, 14.116234567496779},
    {"wavy", 2, 0.8250509096793032},
    {"ackley", 5, 6.856104175205118},
    {"alpine", 5, 5.679866514355625},
    {"ellipsoidal", 5, 2062867.918208121},
    {"quintic", 5, 28.38910812396782},
    {"rastrigin", 5, 83.95671821505245},
    {"rosenbrock", 5, 1830.436690054697},
    {"salomon", 5, 0.3199613615595274},
    {"schaffer_f7", 5, 23.043362167793827},
    {"sharp_ridge", 5, 298.1105205741321},
    {"styblinski_tang", 5, -46.94102201467073},
    {"trigonometric", 5, 35.707711486579484},
    {"wavy", 5, 1.0567485427649275},
};

}  // namespace

TEST_CASE("base functions match independently computed values") {
  for (const Reference& ref : kReference) {
    CAPTURE(ref.name);
    CAPTURE(ref.dim);
    CHECK(eval_base(ref.name, probe(ref.dim)) == doctest::Approx(ref.value).epsilon(1e-12));
  }
}

TEST_CASE("hand-checked base values") {
  CHECK(eval_base("rastrigin", Vector::Zero(7)) == 0.0);
  CHECK(eval_base("quintic", (Vector(2) << -1.0, 2.0).finished()) == 0.0);
  CHECK(eval_base("alpine", Vector::Ones(10)) == doctest::Approx(9.414709848078965).epsilon(1e-15));
  CHECK(eval_base("alpine", Vector::Ones(10)) ==
        doctest::Approx(10.0 * std::abs(std::sin(1.0) + 0.1)).epsilon(1e-15));
  CHECK(eval_base("trigonometric", Vector::Constant(4, 0.9)) == 1.0);
  CHECK(eval_base("wavy", Vector::Zero(3)) == 0.0);
  CHECK(eval_base("rosenbrock", Vector::Ones(6)) == 0.0);
}

TEST_CASE("Styblinski-Tang minimiser is a stationary point with the documented value") {
  const double z = kStyblinskiTangArgmin;
  CHECK(std::abs(2.0 * z * z * z - 16.0 * z + 2.5) <= 1e-12);
  CHECK(optimum_value(BenchmarkId::styblinski_tang, 1) ==
        doctest::Approx(-39.16616570377141).epsilon(1e-14));
  CHECK(std::abs(optimum_value(BenchmarkId::styblinski_tang, 1) - (-39.166)) <= 1e-3);
  CHECK(eval_base(BenchmarkId::styblinski_tang, Vector::Constant(1, z - 1e-3)) >
        optimum_value(BenchmarkId::styblinski_tang, 1));
  CHECK(eval_base(BenchmarkId::styblinski_tang, Vector::Constant(1, z + 1e-3)) >
        optimum_value(BenchmarkId::styblinski_tang, 1));
}

TEST_CASE("registry lists twelve functions alphabetically with their domains") {
  const auto& reg = benchmark_registry();
  REQUIRE(reg.size() == 12);
  for (std::size_t i = 1; i < reg.size(); ++i) CHECK(reg[i - 1].name < reg[i].name);

  struct Domain {
    const char* name;
    double lo, hi;
  };
  const Domain expected[] = {
      {"ackley", -32.768, 32.768},
      {"alpine", -10, 10},
      {"ellipsoidal", -2, 2},
      {"quintic", -10, 10},
      {"rastrigin", -5.12, 5.12},
      {"rosenbrock", -5, 10},
      {"salomon", -100, 100},
      {"schaffer_f7", -100, 100},
      {"sharp_ridge", -10, 10},
      {"styblinski_tang", -5, 5},
      {"trigonometric", -500, 500},
      {"wavy", -std::numbers::pi, std::numbers::pi},
  };
  for (const Domain& e : expected) {
    const BenchmarkInfo& info = benchmark_info(parse_benchmark(e.name));
    CHECK(info.name == e.name);
    CHECK(info.domain.lower == e.lo);
    CHECK(info.domain.upper == e.hi);
  }
  CHECK(benchmark_info(BenchmarkId::styblinski_tang).optimum_text == "-39.166*d");
}

TEST_CASE("optimum is reached at x_opt for every function and seed") {
  for (const BenchmarkInfo& info : benchmark_registry()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const TransformedBenchmark b = make_benchmark(info.name, 10, seed);
      CAPTURE(info.name);
      CAPTURE(seed);
      const double value = b(b.x_opt());
      const double expected = optimum_value(info.id, 10);
      CHECK(std::abs(value - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
      // x_opt lies in the central 80% of the box.
      const double margin = 0.1 * info.domain.width();
      CHECK((b.x_opt().array() >= info.domain.lower + margin).all());
      CHECK((b.x_opt().array() <= info.domain.upper - margin).all());
      const Matrix& r = b.rotation();
      CHECK((r * r.transpose() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("1000-dimensional Styblinski-Tang optimum") {
  const TransformedBenchmark b = make_benchmark("styblinski_tang", 1000, 42);
  const double value = b(b.x_opt());
  CHECK(std::abs(value - (-39166.0)) <= 1.0);
  CHECK(std::abs(value - (-39.166 * 1000)) <= 1e-3 * 1000);
}

TEST_CASE("optimum is a local minimum after the transform") {
  Rng rng(6);
  for (const char* name : {"rosenbrock", "trigonometric", "quintic", "sharp_ridge", "ellipsoidal"}) {
    const TransformedBenchmark b = make_benchmark(name, 6, 3);
    const double at_opt = b(b.x_opt());
    for (int k = 0; k < 20; ++k) {
      const Vector dx = 1e-3 * random_vector(6, rng);
      CHECK(b(b.x_opt() + dx) > at_opt);
    }
  }
}

TEST_CASE("identity transform is bit-identical to the base function") {
  Rng rng(9);
  for (const BenchmarkInfo& info : benchmark_registry()) {
    const TransformedBenchmark b = TransformedBenchmark::untransformed(info.id, 8);
    for (int k = 0; k < 10; ++k) {
      const Vector z = random_vector(8, rng, 3.0);
      CHECK(b(z) == eval_base(info.id, z));
    }
  }
}

TEST_CASE("rotation couples coordinates") {
  const std::size_t d = 6;
  const double h = 0.05;
  Rng rng(31);
  auto mixed = [&](const auto& f, const Vector& x, Eigen::Index i, Eigen::Index j) {
    Vector xi = x, xj = x, xij = x;
    xi[i] += h;
    xj[j] += h;
    xij[i] += h;
    xij[j] += h;
    return f(xij) - f(xi) - f(xj) + f(x);
  };
  const TransformedBenchmark plain = TransformedBenchmark::untransformed(BenchmarkId::rastrigin, d);
  const TransformedBenchmark rotated = make_benchmark("rastrigin", d, 8);
  double largest = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(d, rng);
    const auto i = static_cast<Eigen::Index>(k % d);
    const auto j = static_cast<Eigen::Index>((k + 1) % d);
    CHECK(std::abs(mixed(plain, x, i, j)) <= 1e-10);
    largest = std::max(largest, std::abs(mixed(rotated, x, i, j)));
  }
  CHECK(largest > 1e-2);
}

TEST_CASE("benchmark objective is counted and bounded by the box") {
  const TransformedBenchmark b = make_benchmark("ackley", 4, 1);
  const Objective f = b.objective();
  CHECK(f.dim() == 4);
  CHECK(f.label() == "ackley");
  CHECK(f.bounds()[0].lower == -32.768);
  CHECK(f(b.x_opt()) == b(b.x_opt()));
  CHECK(f.evaluations() == 1);
  CHECK(f.concurrent_safe());
}

TEST_CASE("make_benchmark is deterministic and seed-dependent") {
  const TransformedBenchmark a = make_benchmark("wavy", 5, 11);
  const TransformedBenchmark b = make_benchmark("wavy", 5, 11);
  const TransformedBenchmark c = make_benchmark("wavy", 5, 12);
  CHECK((a.rotation().array() == b.rotation().array()).all());
  CHECK((a.x_opt().array() == b.x_opt().array()).all());
  CHECK_FALSE((a.x_opt().array() == c.x_opt().array()).all());
}

TEST_CASE("benchmark argument errors") {
  CHECK_THROWS_AS(make_benchmark("griewank", 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_benchmark("ackley", 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_benchmark(""), std::invalid_argument);
}
