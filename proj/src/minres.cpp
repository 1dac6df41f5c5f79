// Copyright 2026 The eigengrad Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eigengrad/minres.hpp"

#include <cmath>
#include <limits>

namespace eigengrad {

// Paige & Saunders recurrence.
MinresResult minres(const std::function<Vector(const Vector&)>& op,
                    const Vector& b, const Vector& x0, double rtol,
                    int maxiter) {
  MinresResult out;
  out.x = x0;
  const double bnorm = b.norm();
  Vector r1 = b - op(x0);
  double beta1 = r1.norm();
  out.residual_estimate = beta1;
  if (beta1 == 0.0 || beta1 <= rtol * bnorm) {
    out.converged = true;
    return out;
  }

  const Index n = b.size();
  const double eps = std::numeric_limits<double>::epsilon();
  Vector y = r1;
  Vector r2 = r1;
  Vector w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;

  for (int itn = 1; itn <= maxiter; ++itn) {
    const Vector v = y / beta;
    y = op(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = r2.norm();

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;
    out.iterations = itn;
    out.residual_estimate = phibar;

    if (phibar <= rtol * bnorm || beta <= eps * beta1) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace eigengrad
