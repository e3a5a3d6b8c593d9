#pragma once

namespace memfilter {

/// Standard deviation of the exact OU transition over dt for
/// d xi = -rate * xi dt + vol dW.
double ou_step_stddev(double rate, double vol, double dt);

/// Exact transition of d xi = -rate * xi dt + vol dW over dt:
/// e^{-rate dt} x + vol * sqrt((1 - e^{-2 rate dt}) / (2 rate)) * z.
/// Throws std::invalid_argument unless rate > 0 and dt > 0.
double ou_exact_step(double x, double rate, double vol, double dt, double z);

}  // namespace memfilter
