// SPDX-License-Identifier: Apache-2.0
// Straight-line benchmark generators and the embedded small suite.
#pragma once

#include <string>
#include <vector>

#include "fperr/interval.hpp"

namespace fperr::bench {

struct LorenzParams {
  int steps = 20;
  Interval x{1.1, 1.3};
  Interval y{1.2, 1.4};
  Interval z{1.5, 1.7};
  double a = 10.0;
  double b = 8.0 / 3.0;
  double r = 28.0;
  double dt = 0.005;
};

/// Outputs x, y, z after `steps` explicit Euler steps.
std::string gen_lorenz(const LorenzParams& p);

struct Heat1dParams {
  int grid = 13;  // total points, both Dirichlet ends included
  int steps = 10;
  double alpha = 0.1;
  Interval init{0.0, 1.0};
};

/// Output u: the centre point after `steps` updates.
std::string gen_heat1d(const Heat1dParams& p);

struct Heat2dParams {
  int grid = 8;  // per side, boundary included
  int steps = 4;
  double alpha = 0.1;
  Interval init{0.0, 1.0};
};

std::string gen_heat2d(const Heat2dParams& p);

struct Fdtd1dParams {
  int steps = 10;
  int grid = 104;
  double c1 = 0.5;
  double c2 = 0.5;
  Interval init{0.0, 1.0};
};

/// Output e: the centre E field after `steps` leapfrog steps.
std::string gen_fdtd1d(const Fdtd1dParams& p);

struct FftParams {
  int points = 64;
  Interval range{0.0, 1.0};
  bool real_inputs = false;  // imaginary parts fixed at 0
};

struct FftPrograms {
  std::string real;  // output re
  std::string imag;  // output im
  int bin = 0;
};

/// Radix-2 decimation-in-time FFT of x, for the bin with the largest
/// datapath. Both programs carry the whole transform.
FftPrograms gen_fft(const FftParams& p);

struct ScanParams {
  int points = 1024;
  Interval range{-1.0, 1.0};
};

/// Blelloch upsweep/downsweep inclusive scan; output y is the last prefix.
std::string gen_scan(const ScanParams& p);

/// Names in the embedded catalog, in a fixed order.
const std::vector<std::string>& fixed_names();
/// Throws std::invalid_argument for an unknown name.
std::string fixed_suite(const std::string& name);

}  // namespace fperr::bench
