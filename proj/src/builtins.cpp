#include "hgf/builtins.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <sstream>

#include "hgf/errors.hpp"

namespace hgf {

namespace {

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("potential dimension must be 1, 2 or 3");
}

// log cosh without overflow for large |x|.
double log_cosh_stable(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

PotentialFn paraboloid(int dim, double scale) {
  require_dim(dim);
  PotentialFn phi(
      dim, [scale](const Vec& x) { return 0.5 * scale * x.norm_sq(); },
      [scale](const Vec& x) { return scale * x; },
      [scale, dim](const Vec&) { return scale * Mat::identity(dim); }, "paraboloid");
  return phi;
}

PotentialFn neg_cos(int dim, double amplitude, double offset) {
  require_dim(dim);
  PotentialFn phi(
      dim,
      [=](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += -amplitude * std::cos(x[i]) + offset * x[i];
        return s;
      },
      [=](const Vec& x) {
        Vec g(dim);
        for (int i = 0; i < dim; ++i) g[i] = amplitude * std::sin(x[i]) + offset;
        return g;
      },
      [=](const Vec& x) {
        Mat h(dim);
        for (int i = 0; i < dim; ++i) h(i, i) = amplitude * std::cos(x[i]);
        return h;
      },
      "neg_cos");
  phi.slope_bound = std::abs(amplitude) + std::abs(offset);
  return phi;
}

PotentialFn log_cosh(int dim, double scale, double width) {
  require_dim(dim);
  if (!(width > 0.0)) throw InvalidInput("log_cosh width must be positive");
  PotentialFn phi(
      dim,
      [=](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += scale * width * log_cosh_stable(x[i] / width);
        return s;
      },
      [=](const Vec& x) {
        Vec g(dim);
        for (int i = 0; i < dim; ++i) g[i] = scale * std::tanh(x[i] / width);
        return g;
      },
      [=](const Vec& x) {
        Mat h(dim);
        for (int i = 0; i < dim; ++i) {
          const double c = std::cosh(x[i] / width);
          h(i, i) = scale / (width * c * c);
        }
        return h;
      },
      "log_cosh");
  phi.slope_bound = std::abs(scale);
  return phi;
}

PotentialFn bump(double amplitude, double width) {
  if (!(width > 0.0)) throw InvalidInput("bump width must be positive");
  const double w = width, a = amplitude;
  auto primitive = [=](double x) {
    const double r = x / w;
    return a * w * (r - 2.0 * r * r * r / 3.0 + r * r * r * r * r / 5.0);
  };
  const double base = primitive(-w);
  PotentialFn phi(
      1, [=](const Vec& x) { return primitive(std::clamp(x[0], -w, w)) - base; },
      [=](const Vec& x) {
        const double r = x[0] / w;
        if (std::abs(r) >= 1.0) return Vec{0.0};
        const double q = 1.0 - r * r;
        return Vec{a * q * q};
      },
      [=](const Vec& x) {
        const double r = x[0] / w;
        Mat h(1);
        if (std::abs(r) < 1.0) h(0, 0) = -4.0 * a * r * (1.0 - r * r) / w;
        return h;
      },
      "bump");
  phi.slope_bound = std::abs(a);
  phi.support_radius = w;
  phi.slope_mass = 16.0 / 15.0 * std::abs(a) * w;
  return phi;
}

PotentialFn polynomial(int dim, std::vector<Monomial> terms) {
  require_dim(dim);
  for (const auto& m : terms) {
    if (static_cast<int>(m.exponents.size()) != dim) throw InvalidInput("monomial exponent count must equal dimension");
    for (int e : m.exponents)
      if (e < 0) throw InvalidInput("monomial exponents must be non-negative");
  }
  auto power = [](double x, int e) { return e == 0 ? 1.0 : std::pow(x, e); };
  // Derivative of x^e of order k, evaluated at x.
  auto dpow = [power](double x, int e, int k) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c *= static_cast<double>(e - j);
    return e < k ? 0.0 : c * power(x, e - k);
  };
  auto eval = [=](const Vec& x, const std::array<int, kMaxDim>& order) {
    double s = 0.0;
    for (const auto& m : terms) {
      double p = m.coefficient;
      for (int i = 0; i < dim; ++i) p *= dpow(x[i], m.exponents[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
      s += p;
    }
    return s;
  };
  PotentialFn phi(
      dim, [=](const Vec& x) { return eval(x, {0, 0, 0}); },
      [=](const Vec& x) {
        Vec g(dim);
        for (int i = 0; i < dim; ++i) {
          std::array<int, kMaxDim> o{};
          o[static_cast<std::size_t>(i)] = 1;
          g[i] = eval(x, o);
        }
        return g;
      },
      [=](const Vec& x) {
        Mat h(dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            std::array<int, kMaxDim> o{};
            ++o[static_cast<std::size_t>(i)];
            ++o[static_cast<std::size_t>(j)];
            h(i, j) = eval(x, o);
          }
        return h;
      },
      "custom-polynomial");
  bool linear = true;
  double bound = 0.0;
  for (const auto& m : terms) {
    int deg = 0;
    for (int e : m.exponents) deg += e;
    if (deg > 1) linear = false;
    if (deg == 1) bound += std::abs(m.coefficient);
  }
  if (linear) phi.slope_bound = bound;
  return phi;
}

std::vector<Monomial> parse_monomials(const std::string& text, int dim) {
  std::vector<Monomial> out;
  std::stringstream terms(text);
  std::string term;
  while (std::getline(terms, term, ';')) {
    if (term.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw InvalidInput("monomial '" + term + "' needs the form c:e1,e2,...");
    Monomial m;
    try {
      std::size_t used = 0;
      const std::string c = term.substr(0, colon);
      m.coefficient = std::stod(c, &used);
      if (c.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(c);
      std::stringstream exps(term.substr(colon + 1));
      std::string e;
      while (std::getline(exps, e, ',')) {
        const int v = std::stoi(e, &used);
        if (e.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(e);
        m.exponents.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("cannot parse monomial '" + term + "'");
    }
    if (static_cast<int>(m.exponents.size()) != dim)
      throw InvalidInput("monomial '" + term + "' needs " + std::to_string(dim) + " exponents");
    if (!std::isfinite(m.coefficient)) throw InvalidInput("monomial coefficient must be finite");
    out.push_back(std::move(m));
  }
  if (out.empty()) throw InvalidInput("polynomial needs at least one term");
  return out;
}

std::vector<BuiltinInfo> builtin_catalogue() {
  return {
      {"paraboloid", "Phi = scale |x|^2 / 2; strictly convex, slope scale x"},
      {"neg_cos", "Phi = sum(-amplitude cos x_i + offset x_i); slope amplitude sin x + offset, blow-up at t = 1/amplitude"},
      {"log_cosh", "Phi = scale width sum log cosh(x_i / width); convex, bounded slope"},
      {"bump", "1-D slope amplitude (1 - (x/width)^2)^2 supported on |x| < width"},
      {"custom-polynomial", "Phi = sum of monomials, potential.terms = \"c:e1,e2;...\""},
  };
}

}  // namespace hgf
