#include "seqmeas/gaussian_pointer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace seqmeas {

Pointer::Pointer(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    std::ostringstream os;
    os << "pointer width must be finite and > 0, got " << sigma;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

double log_amplitude(const Pointer& p, double x, double a) {
  const double s2 = p.variance();
  const double d = x - a;
  return -0.25 * std::log(2.0 * std::numbers::pi * s2) - d * d / (4.0 * s2);
}

double amplitude(const Pointer& p, double x, double a) { return std::exp(log_amplitude(p, x, a)); }

double overlap(const Pointer& p, double a, double aprime) {
  const double d = a - aprime;
  return std::exp(-d * d / (8.0 * p.variance()));
}

double pair_moment(const Pointer& p, double a, double aprime, int n) {
  const double d = overlap(p, a, aprime);
  const double mu = 0.5 * (a + aprime);
  switch (n) {
    case 0: return d;
    case 1: return d * mu;
    case 2: return d * (mu * mu + p.variance());
    default: {
      std::ostringstream os;
      os << "pair_moment supports n in {0,1,2}, got " << n;
      throw Error(ErrorKind::InvalidOrder, os.str());
    }
  }
}

GaussianPairSum::GaussianPairSum(std::vector<GaussianPairTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) Pointer{t.sigma};
}

void GaussianPairSum::add(const GaussianPairTerm& term) {
  Pointer{term.sigma};
  terms_.push_back(term);
}

void GaussianPairSum::add(Complex coeff, double a, double b, double sigma) {
  add(GaussianPairTerm{coeff, a, b, sigma});
}

double GaussianPairSum::evaluate(double x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    const Pointer p{t.sigma};
    acc += t.coeff.real() * std::exp(log_amplitude(p, x, t.center_a) + log_amplitude(p, x, t.center_b));
  }
  return acc;
}

bool GaussianPairSum::uniform_sigma() const {
  for (const auto& t : terms_)
    if (t.sigma != terms_.front().sigma) return false;
  return true;
}

namespace {

constexpr double kImagResidueTol = 1e-8;

Complex complex_moment(const GaussianPairSum& s, int n, double& mass) {
  Complex acc = 0.0;
  mass = 0.0;
  for (const auto& t : s.terms()) {
    const Complex v = t.coeff * pair_moment(Pointer{t.sigma}, t.center_a, t.center_b, n);
    acc += v;
    mass += std::abs(v);
  }
  return acc;
}

void check_real(Complex value, double mass, int n) {
  if (std::abs(value.imag()) > kImagResidueTol * std::max(mass, 1e-300)) {
    std::ostringstream os;
    os << "moment " << n << " has imaginary residue " << value.imag() << " (term mass " << mass << ")";
    throw Error(ErrorKind::NonHermitianSum, os.str());
  }
}

}  // namespace

double sum_moment(const GaussianPairSum& s, int n) {
  if (n < 0 || n > 2) pair_moment(Pointer{1.0}, 0.0, 0.0, n);
  double mass = 0.0;
  const Complex v = complex_moment(s, n, mass);
  check_real(v, mass, n);
  return v.real();
}

PairSumMoments sum_moments(const GaussianPairSum& s) {
  PairSumMoments out;
  out.m0 = sum_moment(s, 0);
  out.m1 = sum_moment(s, 1);
  out.m2 = sum_moment(s, 2);
  if (!(out.m0 > 0.0)) return out;

  // Two-pass centered second moment of the term centers, weighted by the
  // (real part of the) zeroth moment of each term.
  const double mean = out.m1 / out.m0;
  double acc = 0.0;
  for (const auto& t : s.terms()) {
    const Pointer p{t.sigma};
    const double w = (t.coeff * overlap(p, t.center_a, t.center_b)).real();
    const double dc = 0.5 * (t.center_a + t.center_b) - mean;
    acc += w * dc * dc;
  }
  out.center_variance = acc / out.m0;
  return out;
}

}  // namespace seqmeas
