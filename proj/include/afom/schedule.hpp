#pragma once

#include <functional>

namespace afom {

/// Step-size schedule: gamma_t with partial sums Gamma_t = sum_{k<=t} gamma_k
/// and the combination weight tau_t = gamma_{t+1} / Gamma_{t+1}.
///
/// Any sequence with gamma_0 in (0,1], gamma_t >= 0 and gamma_t^2 <= Gamma_t
/// is admissible; the shipped schedule is gamma_t = (t+1)/2, for which
/// Gamma_t = (t+1)(t+2)/4 and tau_t = 2/(t+3) hold exactly.
struct GammaSchedule {
  std::function<double(int)> gamma;
  std::function<double(int)> partial_sum;

  double tau(int t) const { return gamma(t + 1) / partial_sum(t + 1); }

  static GammaSchedule nesterov() {
    GammaSchedule s;
    s.gamma = [](int t) { return 0.5 * (t + 1); };
    s.partial_sum = [](int t) { return 0.25 * (t + 1) * (t + 2); };
    return s;
  }
};

}  // namespace afom
