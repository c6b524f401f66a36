#pragma once

#include <cmath>

#include "hspan/metrics/no_reference.hpp"
#include "hspan/metrics/reference.hpp"

namespace hspan {

struct RrScores {
  double ergas = 0.0;
  double sam_deg = 0.0;
  double scc = 0.0;
  double q_avg = 0.0;

  void validate() const {
    detail::require(std::isfinite(ergas) && std::isfinite(sam_deg) && std::isfinite(scc) &&
                        std::isfinite(q_avg),
                    "rr scores: non-finite value");
  }
};

/// Full-resolution scores; qnr always equals the product identity.
class FrScores {
 public:
  FrScores(double d_lambda, double d_s, double alpha = 1.0, double beta = 1.0)
      : d_lambda_(d_lambda), d_s_(d_s), alpha_(alpha), beta_(beta),
        qnr_(hspan::qnr(d_lambda, d_s, alpha, beta)) {}

  /// Rebuilds scores from stored values, rejecting an inconsistent qnr.
  static FrScores checked(double d_lambda, double d_s, double qnr_value, double alpha = 1.0,
                          double beta = 1.0) {
    FrScores s(d_lambda, d_s, alpha, beta);
    detail::require(std::abs(s.qnr() - qnr_value) <= 1e-9,
                    "fr scores: qnr != (1-d_lambda)^alpha * (1-d_s)^beta");
    return s;
  }

  double d_lambda() const { return d_lambda_; }
  double d_s() const { return d_s_; }
  double qnr() const { return qnr_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double d_lambda_;
  double d_s_;
  double alpha_;
  double beta_;
  double qnr_;
};

inline RrScores score_rr(const HyperCube& fused, const HyperCube& reference,
                         double h_over_l = 1.0 / 6.0) {
  detail::require_same_geometry(fused, reference, "score_rr");
  RrScores s{ergas(fused, reference, h_over_l), sam(fused, reference), scc(fused, reference),
             q_avg(fused, reference)};
  s.validate();
  return s;
}

inline FrScores score_fr(const HyperCube& fused, const PanImage& pan, const HyperCube& hs_input,
                         const MtfSpec& spec, double alpha = 1.0, double beta = 1.0) {
  return FrScores(d_lambda(fused, hs_input, spec), d_s(fused, pan), alpha, beta);
}

}  // namespace hspan
