#include "ncwaring/unipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ncwaring/error.hpp"

namespace ncw {

template <class T>
UniPoly<T>::UniPoly(std::vector<T> ascending) : coeffs_(std::move(ascending)) {
  strip();
}

template <class T>
UniPoly<T> UniPoly<T>::monomial(std::size_t degree, const T& c) {
  std::vector<T> v(degree + 1, FieldTraits<T>::zero());
  v[degree] = c;
  return UniPoly(std::move(v));
}

template <class T>
UniPoly<T> UniPoly<T>::from_roots(std::span<const T> roots) {
  UniPoly p = constant(FieldTraits<T>::one());
  for (const T& r : roots) p = p * UniPoly({-r, FieldTraits<T>::one()});
  return p;
}

template <class T>
void UniPoly<T>::strip() {
  // Exact zeros only: approximate callers decide their own cut-offs.
  while (!coeffs_.empty() && coeffs_.back() == FieldTraits<T>::zero()) coeffs_.pop_back();
}

template <class T>
T UniPoly<T>::operator()(const T& x) const {
  T acc = FieldTraits<T>::zero();
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class T>
UniPoly<T>& UniPoly<T>::operator+=(const UniPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), FieldTraits<T>::zero());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  strip();
  return *this;
}

template <class T>
UniPoly<T>& UniPoly<T>::operator-=(const UniPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), FieldTraits<T>::zero());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  strip();
  return *this;
}

template <class T>
UniPoly<T>& UniPoly<T>::operator*=(const T& c) {
  for (auto& a : coeffs_) a *= c;
  strip();
  return *this;
}

template <class T>
UniPoly<T> UniPoly<T>::multiply(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, FieldTraits<T>::zero());
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UniPoly(std::move(out));
}

template <class T>
double UniPoly<T>::norm() const {
  double m = 0.0;
  for (const auto& a : coeffs_) m = std::max(m, FieldTraits<T>::magnitude(a));
  return m;
}

namespace {

std::string coeff_text(const Rational& q) { return to_string(q); }
std::string coeff_text(const Complex& z) { return "(" + to_string(z) + ")"; }

}  // namespace

template <class T>
std::string UniPoly<T>::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (coeffs_[k] == FieldTraits<T>::zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << coeff_text(coeffs_[k]);
    if (k >= 1) os << "*" << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

template <class T>
PolyDivision<T> divide(const UniPoly<T>& f, const UniPoly<T>& g) {
  if (g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
  std::vector<T> rem = f.coefficients();
  const int dg = g.degree();
  if (f.degree() < dg) return {UniPoly<T>(), f};
  std::vector<T> quot(static_cast<std::size_t>(f.degree() - dg + 1), FieldTraits<T>::zero());
  const T lead = g.leading();
  const double scale = std::max(f.norm(), 1.0);
  for (int k = f.degree(); k >= dg; --k) {
    T c = rem[static_cast<std::size_t>(k)] / lead;
    quot[static_cast<std::size_t>(k - dg)] = c;
    for (int j = 0; j <= dg; ++j) rem[static_cast<std::size_t>(k - dg + j)] -= c * g.coeff(static_cast<std::size_t>(j));
    rem[static_cast<std::size_t>(k)] = FieldTraits<T>::zero();
  }
  // In the float backend cancelled coefficients are rounding noise.
  rem.resize(static_cast<std::size_t>(dg));
  if constexpr (!FieldTraits<T>::exact) {
    for (auto& a : rem) {
      if (FieldTraits<T>::is_zero(a, scale)) a = FieldTraits<T>::zero();
    }
  }
  return {UniPoly<T>(std::move(quot)), UniPoly<T>(std::move(rem))};
}

template <class T>
UniPoly<T> poly_derivative(const UniPoly<T>& f) {
  if (f.degree() < 1) return {};
  std::vector<T> out;
  out.reserve(f.coefficients().size() - 1);
  for (std::size_t k = 1; k < f.coefficients().size(); ++k) {
    out.push_back(f.coefficients()[k] * T(static_cast<long>(k)));
  }
  return UniPoly<T>(std::move(out));
}

template <class T>
UniPoly<T> make_monic(const UniPoly<T>& f) {
  if (f.is_zero()) return f;
  return f * (FieldTraits<T>::one() / f.leading());
}

template <class T>
UniPoly<T> poly_gcd(const UniPoly<T>& f, const UniPoly<T>& g) {
  UniPoly<T> a = f;
  UniPoly<T> b = g;
  while (!b.is_zero()) {
    UniPoly<T> r = divide(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

template <class T>
UniPoly<T> poly_lcm(const UniPoly<T>& f, const UniPoly<T>& g) {
  if (f.is_zero() || g.is_zero()) return {};
  return make_monic(divide(f * g, poly_gcd(f, g)).quotient);
}

namespace {

template <class T>
T power(T base, long e) {
  T out = FieldTraits<T>::one();
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

}  // namespace

template <class T>
T resultant(const UniPoly<T>& f, const UniPoly<T>& g) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "resultant of the zero polynomial");
  T sign_and_scale = FieldTraits<T>::one();
  UniPoly<T> a = f;
  UniPoly<T> b = g;
  // Euclidean recursion: res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} res(b, r).
  while (true) {
    const long m = a.degree();
    const long n = b.degree();
    if (n == 0) return sign_and_scale * power(b.leading(), m);
    if (m == 0) return sign_and_scale * power(a.leading(), n);
    UniPoly<T> r = divide(a, b).remainder;
    if (r.is_zero()) return FieldTraits<T>::zero();
    const long k = r.degree();
    if ((m * n) % 2 == 1) sign_and_scale = -sign_and_scale;
    sign_and_scale *= power(b.leading(), m - k);
    a = std::move(b);
    b = std::move(r);
  }
}

template <class T>
T discriminant(const UniPoly<T>& f) {
  if (f.degree() < 1) throw Error(ErrorCode::DegreeZero, "discriminant needs degree >= 1");
  const long n = f.degree();
  T d = resultant(f, poly_derivative(f)) / f.leading();
  if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
  return d;
}

template <class T>
bool is_squarefree(const UniPoly<T>& f) {
  if (f.degree() < 1) throw Error(ErrorCode::DegreeZero, "squarefree test needs degree >= 1");
  if (f.degree() == 1) return true;
  return poly_gcd(f, poly_derivative(f)).degree() == 0;
}

template <class T>
UniPoly<T> squarefree_part(const UniPoly<T>& f) {
  if (f.degree() < 1) return make_monic(f);
  return make_monic(divide(f, poly_gcd(f, poly_derivative(f))).quotient);
}

template <class T>
UniPoly<T> interpolate(std::span<const T> xs, std::span<const T> ys) {
  const std::size_t n = xs.size();
  std::vector<T> dd(ys.begin(), ys.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
      if (i == level) break;
    }
  }
  // Horner in the Newton basis.
  UniPoly<T> p;
  for (std::size_t i = n; i-- > 0;) {
    p = p * UniPoly<T>({-xs[i], FieldTraits<T>::one()}) + UniPoly<T>::constant(dd[i]);
  }
  return p;
}

UniPoly<Complex> to_complex(const UniPoly<Rational>& f) {
  std::vector<Complex> c;
  c.reserve(f.coefficients().size());
  for (const auto& q : f.coefficients()) c.push_back(FieldTraits<Rational>::to_complex(q));
  return UniPoly<Complex>(std::move(c));
}

namespace {

// Backward-error scale sum |a_i| |z|^i used by the residual contract.
double eval_scale(const std::vector<Complex>& a, const Complex& z) {
  double s = 0.0;
  double zp = 1.0;
  const double az = std::abs(z);
  for (const auto& c : a) {
    s += std::abs(c) * zp;
    zp *= az;
  }
  return s;
}

std::pair<Complex, Complex> eval_with_derivative(const std::vector<Complex>& a, const Complex& z) {
  Complex p = 0.0;
  Complex dp = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

}  // namespace

std::vector<Complex> poly_roots_approx(const UniPoly<Complex>& f, int max_iterations) {
  if (f.degree() < 1) throw Error(ErrorCode::DegreeZero, "root finding needs degree >= 1");
  const UniPoly<Complex> monic = make_monic(f);
  const auto& a = monic.coefficients();
  const std::size_t n = static_cast<std::size_t>(monic.degree());
  if (n == 1) return {-a[0]};

  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[i]));
  radius = 1.0 + radius;
  // Start inside the Cauchy disc on a rotated circle to break symmetry.
  double start = 0.0;
  for (std::size_t i = 0; i < n; ++i) start = std::max(start, std::pow(std::abs(a[i]), 1.0 / static_cast<double>(n - i)));
  start = std::clamp(start, 1e-3, radius);

  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(start, theta);
  }

  bool converged = false;
  for (int it = 0; it < max_iterations && !converged; ++it) {
    converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      auto [p, dp] = eval_with_derivative(a, z[k]);
      if (p == Complex(0.0)) continue;
      const Complex ratio = p / dp;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) > 1e-14 * std::max(1.0, std::abs(z[k]))) converged = false;
    }
  }

  for (auto& root : z) {
    for (int polish = 0; polish < 3; ++polish) {
      auto [p, dp] = eval_with_derivative(a, root);
      if (dp == Complex(0.0)) break;
      const Complex next = root - p / dp;
      if (std::abs(eval_with_derivative(a, next).first) < std::abs(p)) root = next;
    }
    const double residual = std::abs(eval_with_derivative(a, root).first);
    if (residual > 1e-9 * eval_scale(a, root)) {
      throw Error(ErrorCode::RootsNotConverged, "Aberth iteration missed the residual contract");
    }
  }
  std::sort(z.begin(), z.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return z;
}

std::vector<Complex> poly_roots_approx(const UniPoly<Rational>& f, int max_iterations) {
  return poly_roots_approx(to_complex(f), max_iterations);
}

namespace {

// Integer primitive multiple of f (coefficients ascending).
std::vector<mpz_class> integer_coefficients(const UniPoly<Rational>& f) {
  mpz_class common = 1;
  for (const auto& q : f.coefficients()) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> out;
  out.reserve(f.coefficients().size());
  mpz_class content = 0;
  for (const auto& q : f.coefficients()) {
    mpz_class v = q.get_num() * (common / q.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    out.push_back(v);
  }
  if (content != 0) {
    for (auto& v : out) v /= content;
  }
  return out;
}

std::vector<mpz_class> small_divisors(mpz_class v) {
  std::vector<mpz_class> divs;
  v = abs(v);
  if (v == 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 40) return divs;
  const unsigned long long x = v.get_ui();
  for (unsigned long long d = 1; d * d <= x; ++d) {
    if (x % d == 0) {
      divs.emplace_back(static_cast<unsigned long>(d));
      if (d * d != x) divs.emplace_back(static_cast<unsigned long>(x / d));
    }
  }
  return divs;
}

bool is_root(const UniPoly<Rational>& f, const Rational& r) { return sgn(f(r)) == 0; }

}  // namespace

std::vector<Rational> rational_roots(const UniPoly<Rational>& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "rational roots of the zero polynomial");
  std::vector<Rational> roots;
  UniPoly<Rational> rest = make_monic(f);
  auto deflate = [&](const Rational& r) {
    const UniPoly<Rational> lin({-r, Rational(1)});
    while (rest.degree() >= 1 && is_root(rest, r)) {
      rest = divide(rest, lin).quotient;
      roots.push_back(r);
    }
  };
  if (rest.degree() >= 1 && sgn(rest.coeff(0)) == 0) deflate(Rational(0));

  auto try_candidate = [&](const Rational& r) {
    if (rest.degree() >= 1 && is_root(rest, r)) deflate(r);
  };

  // Numeric candidates refined by continued fractions.
  if (rest.degree() >= 1) {
    bool finite = true;
    for (const auto& q : rest.coefficients()) finite = finite && std::isfinite(q.get_d());
    if (finite) {
      std::vector<Complex> approx;
      try {
        approx = poly_roots_approx(rest);
      } catch (const Error&) {
      }
      for (const auto& z : approx) {
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
        double x = z.real();
        mpz_class h0 = 1, h1 = 0, k0 = 0, k1 = 1;
        for (int step = 0; step < 40; ++step) {
          const double fl = std::floor(x);
          if (std::abs(fl) > 1e15) break;
          const mpz_class a(fl);
          mpz_class h = a * h0 + h1;
          mpz_class k = a * k0 + k1;
          h1 = h0; h0 = h; k1 = k0; k0 = k;
          if (mpz_sizeinbase(k.get_mpz_t(), 10) > 12) break;
          Rational cand(h, k);
          cand.canonicalize();
          try_candidate(cand);
          const double frac = x - fl;
          if (frac < 1e-13) break;
          x = 1.0 / frac;
        }
      }
    }
  }

  // Rational root theorem when the end coefficients are small.
  if (rest.degree() >= 1) {
    const auto ints = integer_coefficients(rest);
    const auto num_divs = small_divisors(ints.front());
    const auto den_divs = small_divisors(ints.back());
    for (const auto& p : num_divs) {
      for (const auto& q : den_divs) {
        if (rest.degree() < 1) break;
        Rational cand(p, q);
        cand.canonicalize();
        try_candidate(cand);
        try_candidate(-cand);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

template class UniPoly<Rational>;
template class UniPoly<Complex>;

#define NCW_INSTANTIATE(T)                                                      \
  template PolyDivision<T> divide(const UniPoly<T>&, const UniPoly<T>&);        \
  template UniPoly<T> poly_derivative(const UniPoly<T>&);                       \
  template UniPoly<T> make_monic(const UniPoly<T>&);                            \
  template UniPoly<T> poly_gcd(const UniPoly<T>&, const UniPoly<T>&);           \
  template UniPoly<T> poly_lcm(const UniPoly<T>&, const UniPoly<T>&);           \
  template T resultant(const UniPoly<T>&, const UniPoly<T>&);                   \
  template T discriminant(const UniPoly<T>&);                                   \
  template bool is_squarefree(const UniPoly<T>&);                               \
  template UniPoly<T> squarefree_part(const UniPoly<T>&);                       \
  template UniPoly<T> interpolate(std::span<const T>, std::span<const T>);

NCW_INSTANTIATE(Rational)
NCW_INSTANTIATE(Complex)
#undef NCW_INSTANTIATE

}  // namespace ncw
