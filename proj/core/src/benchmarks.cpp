#include "acqregret/benchmarks.hpp"

#include "acqregret/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace acqregret {
namespace {

using std::numbers::pi;

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Domain Box(int dim, double lo, double hi) {
  return Domain(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

double Beale(const Vector& x) {
  const double a = 1.5 - x[0] + x[0] * x[1];
  const double b = 2.25 - x[0] + x[0] * x[1] * x[1];
  const double c = 2.625 - x[0] + x[0] * x[1] * x[1] * x[1];
  return a * a + b * b + c * c;
}

double Branin(const Vector& x) {
  constexpr double b = 5.1 / (4.0 * pi * pi);
  constexpr double c = 5.0 / pi;
  constexpr double t = 1.0 / (8.0 * pi);
  const double u = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
  return u * u + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

// Cosine mixture on [0,1]^d via u = 2x - 1:
//   f(x) = sum_i (u_i^2 - 0.1 cos(5 pi u_i)),  minimum -0.1 d at x = 0.5.
double Cosines(const Vector& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = 2.0 * x[i] - 1.0;
    f += u * u - 0.1 * std::cos(5.0 * pi * u);
  }
  return f;
}

double Hartmann6(const Vector& x) {
  static constexpr std::array<double, 4> alpha = {1.0, 1.2, 3.0, 3.2};
  static constexpr std::array<std::array<double, 6>, 4> a = {{
      {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
      {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
      {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
      {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
  }};
  static constexpr std::array<std::array<double, 6>, 4> p = {{
      {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
      {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
  }};
  double f = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double diff = x[static_cast<Eigen::Index>(j)] - p[i][j];
      inner += a[i][j] * diff * diff;
    }
    f -= alpha[i] * std::exp(-inner);
  }
  return f;
}

double HolderTable(const Vector& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
  return -std::abs(std::sin(x[0]) * std::cos(x[1]) * std::exp(std::abs(1.0 - r / pi)));
}

double Rosenbrock(const Vector& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    f += 100.0 * a * a + b * b;
  }
  return f;
}

double SixHumpCamel(const Vector& x) {
  const double x1 = x[0];
  const double x2 = x[1];
  const double x1s = x1 * x1;
  return (4.0 - 2.1 * x1s + x1s * x1s / 3.0) * x1s + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2;
}

double Sphere(const Vector& x) { return x.squaredNorm(); }

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void RequireDim(std::string_view name, std::optional<int> dim, int fixed) {
  if (dim && *dim != fixed) {
    throw RegistryError("benchmark '" + std::string(name) + "' is defined only for dim " +
                        std::to_string(fixed));
  }
}

Benchmark MakeCosines(int dim) {
  Benchmark b;
  b.name = "cosines" + std::to_string(dim);
  b.dim = dim;
  b.domain = Box(dim, 0.0, 1.0);
  b.eval = Cosines;
  b.f_min = -0.1 * dim;
  b.x_min = {Vector::Constant(dim, 0.5)};
  b.formula = "sum_i (u_i^2 - 0.1 cos(5 pi u_i)), u = 2x - 1";
  b.provenance = "cosine mixture rescaled from [-1,1]^d to [0,1]^d; minimum at the center";
  return b;
}

}  // namespace

std::vector<std::string> BenchmarkNames() {
  return {"beale",       "branin",     "cosines2",     "cosines8", "hartmann6d",
          "holdertable", "rosenbrock", "sixhumpcamel", "sphere"};
}

Benchmark GetBenchmark(std::string_view raw_name, std::optional<int> dim) {
  const std::string name = Lower(raw_name);
  if (dim && *dim < 1) throw RegistryError("benchmark dimension must be positive");
  Benchmark b;
  if (name == "beale") {
    RequireDim(name, dim, 2);
    b = {"beale", 2, Box(2, -4.5, 4.5), Beale, 0.0, {Vec({3.0, 0.5})},
         "(1.5 - x1 + x1 x2)^2 + (2.25 - x1 + x1 x2^2)^2 + (2.625 - x1 + x1 x2^3)^2",
         "standard box [-4.5, 4.5]^2"};
  } else if (name == "branin") {
    RequireDim(name, dim, 2);
    b = {"branin", 2, Domain(Vec({-5.0, 0.0}), Vec({10.0, 15.0})), Branin,
         0.39788735772973816,
         {Vec({-pi, 12.275}), Vec({pi, 2.275}), Vec({3.0 * pi, 2.475})},
         "(x2 - 5.1/(4 pi^2) x1^2 + 5/pi x1 - 6)^2 + 10 (1 - 1/(8 pi)) cos(x1) + 10",
         "standard box [-5,10] x [0,15]; f_min = 5/(4 pi)"};
  } else if (name == "cosines" || name == "cosines2" || name == "cosines8") {
    int d = name == "cosines8" ? 8 : 2;
    if (name == "cosines" && dim) d = *dim;
    if (name != "cosines") RequireDim(name, dim, d);
    if (d != 2 && d != 8) throw RegistryError("cosines is registered for dim 2 and 8 only");
    b = MakeCosines(d);
  } else if (name == "hartmann6d" || name == "hartmann6") {
    RequireDim(name, dim, 6);
    b = {"hartmann6d", 6, Box(6, 0.0, 1.0), Hartmann6, -3.3223680114155147,
         {Vec({0.20168950909365746, 0.15001069354111374, 0.4768739729250998, 0.2753324275220782,
               0.3116516172395686, 0.6573005345536702})},
         "-sum_i alpha_i exp(-sum_j A_ij (x_j - P_ij)^2)", "standard box [0,1]^6"};
  } else if (name == "holdertable") {
    RequireDim(name, dim, 2);
    constexpr double a = 8.055023466339607;
    constexpr double c = 9.664590027738118;
    b = {"holdertable", 2, Box(2, -10.0, 10.0), HolderTable, -19.20850256788675,
         {Vec({a, c}), Vec({-a, c}), Vec({a, -c}), Vec({-a, -c})},
         "-|sin(x1) cos(x2) exp(|1 - sqrt(x1^2 + x2^2)/pi|)|", "standard box [-10,10]^2"};
  } else if (name == "rosenbrock") {
    const int d = dim.value_or(2);
    if (d < 2) throw RegistryError("rosenbrock needs dim >= 2");
    b = {"rosenbrock", d, Box(d, -2.048, 2.048), Rosenbrock, 0.0, {Vector::Ones(d)},
         "sum_i 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2", "box [-2.048, 2.048]^d"};
  } else if (name == "sixhumpcamel") {
    RequireDim(name, dim, 2);
    b = {"sixhumpcamel", 2, Domain(Vec({-3.0, -2.0}), Vec({3.0, 2.0})), SixHumpCamel,
         -1.0316284534898774,
         {Vec({0.08984200893527233, -0.712656403019058}),
          Vec({-0.08984201000528086, 0.7126564016433328})},
         "(4 - 2.1 x1^2 + x1^4/3) x1^2 + x1 x2 + (-4 + 4 x2^2) x2^2",
         "standard box [-3,3] x [-2,2]"};
  } else if (name == "sphere") {
    const int d = dim.value_or(2);
    b = {"sphere", d, Box(d, -5.12, 5.12), Sphere, 0.0, {Vector::Zero(d)}, "sum_i x_i^2",
         "box [-5.12, 5.12]^d"};
  } else {
    throw RegistryError("unknown benchmark '" + std::string(raw_name) + "'");
  }
  return b;
}

double Observe(const Benchmark& benchmark, const Vector& x, double sigma_n, Rng& rng) {
  if (!benchmark.domain.contains(x)) {
    throw PreconditionError("observation point lies outside the '" + benchmark.name + "' domain");
  }
  if (!(sigma_n >= 0.0)) throw PreconditionError("observation noise must be nonnegative");
  const double f = benchmark.eval(x);
  if (sigma_n == 0.0) return f;
  return f + sigma_n * rng.Normal();
}

double EstimateLipschitz(const Benchmark& benchmark, int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  const Domain& dom = benchmark.domain;
  const Vector h = 1e-6 * dom.width();
  double best = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Vector x = rng.UniformIn(dom);
    Vector g(benchmark.dim);
    for (int i = 0; i < benchmark.dim; ++i) {
      Vector xp = x;
      Vector xm = x;
      xp[i] = std::min(x[i] + h[i], dom.upper()[i]);
      xm[i] = std::max(x[i] - h[i], dom.lower()[i]);
      g[i] = (benchmark.eval(xp) - benchmark.eval(xm)) / (xp[i] - xm[i]);
    }
    best = std::max(best, g.norm());
  }
  return best;
}

}  // namespace acqregret
