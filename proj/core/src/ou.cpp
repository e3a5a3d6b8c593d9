#include "memfilter/ou.hpp"

#include <cmath>
#include <stdexcept>

namespace memfilter {
namespace {

double unit_stddev(double rate, double dt) {
  if (!(rate > 0.0)) throw std::invalid_argument("ou_exact_step: rate must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("ou_exact_step: dt must be positive");
  // -expm1(-2 rate dt) keeps precision when rate * dt is tiny.
  return std::sqrt(-std::expm1(-2.0 * rate * dt) / (2.0 * rate));
}

}  // namespace

double ou_step_stddev(double rate, double vol, double dt) {
  return std::abs(vol) * unit_stddev(rate, dt);
}

double ou_exact_step(double x, double rate, double vol, double dt, double z) {
  return std::exp(-rate * dt) * x + vol * unit_stddev(rate, dt) * z;
}

}  // namespace memfilter
