#include "rdode/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdode {

Params validate_params(double d, double D, double p, double a, double b, double kappa) {
  auto require = [](bool ok, const char* field, const char* rule, double value) {
    if (!ok) {
      std::ostringstream os;
      os << "must satisfy " << rule << " (got " << value << ")";
      throw ConstraintViolation(field, os.str());
    }
  };
  require(std::isfinite(d) && d >= 0.0, "d", "d >= 0", d);
  require(std::isfinite(D) && D > 0.0, "D", "D > 0", D);
  require(std::isfinite(p) && p > 1.0, "p", "p > 1", p);
  require(std::isfinite(a) && a > 0.0, "a", "a > 0", a);
  require(std::isfinite(b) && b > 0.0, "b", "b > 0", b);
  require(std::isfinite(kappa) && kappa >= 0.0, "kappa", "kappa >= 0", kappa);
  return Params{d, D, p, a, b, kappa};
}

Kinetics Kinetics::power(double q) {
  if (!(std::isfinite(q) && q >= 1.0)) {
    throw ConstraintViolation("q", "power kinetics exponent must be >= 1");
  }
  return Kinetics(PowerKinetics{q});
}

std::string Kinetics::name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityKinetics>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, PowerKinetics>) {
          return "power";
        } else {
          return "saturating";
        }
      },
      family_);
}

double Kinetics::value(double v) const noexcept {
  switch (family_.index()) {
    case 0:
      return v;
    case 1:
      return std::pow(v, std::get<PowerKinetics>(family_).q);
    default:
      return v / (1.0 + v);
  }
}

double Kinetics::derivative(double v) const noexcept {
  switch (family_.index()) {
    case 0:
      return 1.0;
    case 1: {
      const double q = std::get<PowerKinetics>(family_).q;
      return q == 1.0 ? 1.0 : q * std::pow(v, q - 1.0);
    }
    default: {
      const double s = 1.0 + v;
      return 1.0 / (s * s);
    }
  }
}

namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw DomainError(std::string(what) + " requires a nonnegative argument");
  }
}

void require_positive(double r, const char* what) {
  if (!(r > 0.0)) {
    throw DomainError(std::string(what) + " requires a positive argument");
  }
}

}  // namespace

double f_eval(const Kinetics& k, double v) {
  require_nonneg(v, "f_eval");
  return k.value(v);
}

double f_prime(const Kinetics& k, double v) {
  require_nonneg(v, "f_prime");
  return k.derivative(v);
}

double f_inf_above(const Kinetics& k, double R) {
  require_positive(R, "f_inf_above");
  return k.value(R);
}

double f_sup_below(const Kinetics& k, double R1) {
  require_positive(R1, "f_sup_below");
  return k.value(R1);
}

Grid1D::Grid1D(double half_length, std::size_t ncells)
    : half_length_(half_length), ncells_(ncells) {
  if (!(std::isfinite(half_length) && half_length > 0.0)) {
    throw ConstraintViolation("L", "half length must be positive");
  }
  if (ncells == 0 || ncells % 2 != 0) {
    throw ConstraintViolation("ncells", "must be a positive even integer");
  }
  h_ = 2.0 * half_length / static_cast<double>(ncells);
  x_.resize(ncells + 1);
  const auto mid = static_cast<long>(ncells / 2);
  // Integer offsets from the origin keep x exactly antisymmetric.
  for (std::size_t i = 0; i <= ncells; ++i) {
    x_[i] = static_cast<double>(static_cast<long>(i) - mid) * h_;
  }
}

double Field::max() const {
  if (values.empty()) throw SizeMismatch("max of an empty field");
  return *std::max_element(values.begin(), values.end());
}

double Field::min() const {
  if (values.empty()) throw SizeMismatch("min of an empty field");
  return *std::min_element(values.begin(), values.end());
}

std::size_t Field::argmax() const {
  if (values.empty()) throw SizeMismatch("argmax of an empty field");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

void check_sizes(const State& s, const Grid1D& grid) {
  if (s.u.size() != grid.size() || s.v.size() != grid.size()) {
    throw SizeMismatch("state size does not match grid (" + std::to_string(grid.size()) +
                       " nodes)");
  }
}

}  // namespace rdode
