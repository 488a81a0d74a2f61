#include "dickman/mixing.hpp"

#include <cmath>
#include <sstream>

#include "dickman/errors.hpp"

namespace dickman {

MixingLaw MixingLaw::point_mass_one() {
  MixingLaw m;
  m.kind_ = Kind::point_mass_one;
  m.mean_ = 1.0;
  return m;
}

MixingLaw MixingLaw::finite_discrete(std::vector<double> atoms,
                                     std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw domain_error("finite_discrete: atoms/weights size mismatch");
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(std::isfinite(atoms[i]) && atoms[i] >= 0.0))
      throw domain_error("finite_discrete: atoms must be finite and >= 0");
    if (!(std::isfinite(weights[i]) && weights[i] >= 0.0))
      throw domain_error("finite_discrete: weights must be finite and >= 0");
    wsum += weights[i];
    mean += weights[i] * atoms[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw domain_error("finite_discrete: weights must sum to 1 within 1e-12");
  if (mean > 1.0 + 1e-12)
    throw domain_error("finite_discrete: E[X] must be <= 1");
  MixingLaw m;
  m.kind_ = Kind::finite_discrete;
  m.atoms_ = std::move(atoms);
  m.weights_ = std::move(weights);
  m.mean_ = mean;
  m.cum_.resize(m.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m.weights_.size(); ++i) {
    acc += m.weights_[i];
    m.cum_[i] = acc;
  }
  m.cum_.back() = 1.0;  // guard the search against round-off
  return m;
}

MixingLaw MixingLaw::scheme_uniform(double width) {
  if (!(std::isfinite(width) && width > 0.0 && width <= 2.0))
    throw domain_error("scheme_uniform: width must be in (0, 2]");
  MixingLaw m;
  m.kind_ = Kind::scheme_uniform;
  m.width_ = width;
  m.mean_ = width / 2.0;
  return m;
}

double MixingLaw::moment(unsigned m) const {
  switch (kind_) {
    case Kind::point_mass_one:
      return 1.0;
    case Kind::finite_discrete: {
      double acc = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        acc += weights_[i] * std::pow(atoms_[i], static_cast<double>(m));
      return acc;
    }
    case Kind::scheme_uniform:
      return std::pow(width_, static_cast<double>(m)) / (m + 1.0);
  }
  return 0.0;
}

double MixingLaw::mgf_neg(double t) const { return 1.0 + mgf_neg_m1(t); }

double MixingLaw::mgf_neg_m1(double t) const {
  if (!(std::isfinite(t) && t >= 0.0))
    throw domain_error("mgf_neg: t must be finite and >= 0");
  switch (kind_) {
    case Kind::point_mass_one:
      return std::expm1(-t);
    case Kind::finite_discrete: {
      double acc = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        acc += weights_[i] * std::expm1(-t * atoms_[i]);
      return acc;
    }
    case Kind::scheme_uniform: {
      double tw = t * width_;
      // E exp(-tX) = (1 - e^{-tw})/(tw); subtracting 1 loses digits for
      // small tw, so switch to the series there.
      if (tw < 1e-3) {
        return tw * (-0.5 + tw * (1.0 / 6.0 + tw * (-1.0 / 24.0 + tw / 120.0)));
      }
      return -std::expm1(-tw) / tw - 1.0;
    }
  }
  return 0.0;
}

double MixingLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::point_mass_one:
      return 1.0;
    case Kind::finite_discrete: {
      double u = rng.u01();
      for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        if (u < cum_[i]) return atoms_[i];
      return atoms_.back();
    }
    case Kind::scheme_uniform:
      return width_ * rng.u01();
  }
  return 0.0;
}

std::string MixingLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::point_mass_one:
      os << "X = 1";
      break;
    case Kind::finite_discrete:
      os << "X discrete on " << atoms_.size() << " atoms, mean " << mean_;
      break;
    case Kind::scheme_uniform:
      os << "X uniform on [0, " << width_ << "]";
      break;
  }
  return os.str();
}

}  // namespace dickman
