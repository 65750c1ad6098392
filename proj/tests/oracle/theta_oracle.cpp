// Copyright 2026 The ellr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// 50-digit reference values for the theta kernel, computed independently of
// the library: plain symmetric series with M = 200 terms per side and a
// 200-factor eta product, in Boost.Multiprecision. Prints the values that
// tests/theta_test.cpp freezes.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <iomanip>
#include <iostream>

namespace mp = boost::multiprecision;
using real50 = mp::cpp_bin_float_50;
using cplx50 = mp::cpp_complex_50;

namespace {

const real50 kPi = boost::math::constants::pi<real50>();
const cplx50 kI(0, 1);

// d-th z-derivative of θ[a;b](z, τ).
cplx50 theta(const real50& a, const real50& b, const cplx50& z, const cplx50& tau, int d = 0) {
  cplx50 s = 0;
  for (int m = -200; m <= 200; ++m) {
    const real50 x = real50(m) + a;
    cplx50 t = exp(kI * kPi * x * x * tau + 2 * kPi * kI * x * (z + b));
    for (int k = 0; k < d; ++k) t *= 2 * kPi * kI * x;
    s += t;
  }
  return s;
}

cplx50 eta(const cplx50& tau) {
  cplx50 p = exp(kPi * kI * tau / 12);
  for (int m = 1; m <= 200; ++m) p *= 1 - exp(2 * kPi * kI * real50(m) * tau);
  return p;
}

void print(const char* name, const cplx50& v) {
  std::cout << std::setprecision(20) << name << " = (" << v.real() << ", " << v.imag() << ")\n";
}

}  // namespace

int main() {
  const real50 half("0.5");
  const cplx50 tau_a(real50("0.2"), real50(1));
  print("theta1(0.3, i)", theta(half, half, cplx50(real50("0.3"), 0), cplx50(0, 1)));
  print("theta[0;0](0.2, 1.1i)", theta(0, 0, cplx50(real50("0.2"), 0), cplx50(0, real50("1.1"))));
  print("eta(i)", eta(cplx50(0, 1)));
  print("theta1(0.31+0.07i, 0.2+i)", theta(half, half, cplx50(real50("0.31"), real50("0.07")), tau_a));
  print("theta[1/6;3/2](0.1-0.2i, 0.6+3i)",
        theta(real50(1) / 6, real50(3) / 2, cplx50(real50("0.1"), real50("-0.2")), 3 * tau_a));
  print("theta1'(0, 0.2+i)", theta(half, half, cplx50(0), tau_a, 1));
  print("eta(0.2+i)", eta(tau_a));
  print("theta1(2.7-0.35i, 0.2+i)", theta(half, half, cplx50(real50("2.7"), real50("-0.35")), tau_a));
  return 0;
}
