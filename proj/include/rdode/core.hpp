#pragma once

// Parameters, nonlinearity family, grid and state for
//   u_t = d u_xx - a u + u^p f(v),
//   v_t = D v_xx - b v - u^p f(v) + kappa,
// with homogeneous Neumann conditions on (-L, L).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rdode {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter falls outside its admissible set; `field()` names it.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeTime : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Params

struct Params {
  double d = 0.0;      // diffusion of u, >= 0
  double D = 1.0;      // diffusion of v, > 0
  double p = 2.0;      // reaction exponent, > 1
  double a = 1.0;      // decay of u, > 0
  double b = 1.0;      // decay of v, > 0
  double kappa = 0.0;  // source of v, >= 0

  bool operator==(const Params&) const = default;
};

/// Returns the parameters unchanged iff every sign constraint holds;
/// otherwise throws ConstraintViolation naming the first offending field.
Params validate_params(double d, double D, double p, double a, double b, double kappa);

// ---------------------------------------------------------------------------
// Kinetics: f(v) from a closed family of nondecreasing C^1 functions with
// f(0) = 0 and f > 0 on (0, inf).

struct IdentityKinetics {
  bool operator==(const IdentityKinetics&) const = default;
};
struct PowerKinetics {
  double q = 1.0;  // >= 1
  bool operator==(const PowerKinetics&) const = default;
};
struct SaturatingKinetics {
  bool operator==(const SaturatingKinetics&) const = default;
};

class Kinetics {
 public:
  using Family = std::variant<IdentityKinetics, PowerKinetics, SaturatingKinetics>;

  Kinetics() = default;
  static Kinetics identity() { return Kinetics(IdentityKinetics{}); }
  static Kinetics power(double q);
  static Kinetics saturating() { return Kinetics(SaturatingKinetics{}); }

  const Family& family() const noexcept { return family_; }
  std::string name() const;

  // Unchecked evaluation for hot loops; v must be >= 0.
  double value(double v) const noexcept;
  double derivative(double v) const noexcept;

  bool operator==(const Kinetics&) const = default;

 private:
  explicit Kinetics(Family f) : family_(f) {}
  Family family_{IdentityKinetics{}};
};

double f_eval(const Kinetics& k, double v);
double f_prime(const Kinetics& k, double v);
/// inf_{v >= R} f(v); every family member is nondecreasing, so this is f(R).
double f_inf_above(const Kinetics& k, double R);
/// sup_{0 <= v <= R1} f(v) = f(R1).
double f_sup_below(const Kinetics& k, double R1);

// ---------------------------------------------------------------------------
// Grid1D: vertex-centered uniform grid on [-L, L] with an even number of
// intervals, so node ncells/2 sits exactly at x = 0. Neumann conditions are
// imposed through mirrored ghost nodes; the matching quadrature is the
// trapezoid rule.

class Grid1D {
 public:
  Grid1D(double half_length, std::size_t ncells);

  double half_length() const noexcept { return half_length_; }
  std::size_t ncells() const noexcept { return ncells_; }
  std::size_t size() const noexcept { return ncells_ + 1; }
  double spacing() const noexcept { return h_; }
  std::size_t origin_index() const noexcept { return ncells_ / 2; }

  double x(std::size_t i) const noexcept { return x_[i]; }
  std::span<const double> nodes() const noexcept { return x_; }
  /// Trapezoid weight of node i (h inside, h/2 at the two ends).
  double weight(std::size_t i) const noexcept {
    return (i == 0 || i == ncells_) ? 0.5 * h_ : h_;
  }
  double measure() const noexcept { return 2.0 * half_length_; }

  bool operator==(const Grid1D& o) const {
    return half_length_ == o.half_length_ && ncells_ == o.ncells_;
  }

 private:
  double half_length_;
  std::size_t ncells_;
  double h_;
  std::vector<double> x_;
};

// ---------------------------------------------------------------------------
// Field and State

struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit Field(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  std::span<double> span() noexcept { return values; }
  std::span<const double> span() const noexcept { return values; }

  double max() const;
  double min() const;
  std::size_t argmax() const;
  bool all_finite() const;

  bool operator==(const Field&) const = default;
};

struct State {
  Field u;
  Field v;
  double t = 0.0;
};

/// Throws SizeMismatch unless both components match the grid.
void check_sizes(const State& s, const Grid1D& grid);

}  // namespace rdode
