#pragma once

#include <optional>
#include <vector>

namespace tocs::geometry {

// State of the discrete integrator chain, x_1..x_m.
using StateVector = std::vector<double>;

struct SystemParams {
  int m = 2;       // chain order, >= 2
  double h = 1.0;  // control step, > 0
  double r = 1.0;  // control bound, > 0; +infinity selects the linear law
};

// Throws ConfigError when m, h or r violate the type invariants.
void validate(const SystemParams& p);

enum class PointKind { a, b };
enum class Branch { plus, minus };

// Extremal initial states: kind a reaches the origin in k steps under a
// constant-sign control, kind b spends one opposite-sign step first.
struct ExtremalPointSpec {
  PointKind kind = PointKind::a;
  Branch branch = Branch::minus;
  int k = 1;  // k >= 1 for a, k >= 2 for b
};

enum class PlaneFamily { N, Nbar, M, Mbar, Mbeta };

struct PlaneSpec {
  PlaneFamily family = PlaneFamily::N;
  int k = 0;
  double beta = 0.0;  // Mbeta only, in [0, 1]
  int s = 1;          // -1, 0, +1
};

struct SwitchValues {
  double y = 0.0;
  int s = 0;
  std::optional<double> z;  // populated when a step index k was supplied
  double ybar = 0.0;
};

struct Polyline {
  std::vector<double> controls;
  std::vector<StateVector> states;  // states.size() == controls.size() + 1
};

// Stored switching sign of an extremal point: (-1)^(m-1) for {a-, b+},
// (-1)^m for {a+, b-}. Kept with the point so sign(0) ambiguity at
// k <= m-1 never matters.
int point_sign(const SystemParams& p, const ExtremalPointSpec& spec);

// k-step transition matrix of the chain; entry (i,j) = C(k, j-i) h^(j-i).
std::vector<std::vector<double>> matrix_power(const SystemParams& p, int k);

// Closed-form inverse; entry (i,j) = (-1)^(j-i) C(k+j-i-1, j-i) h^(j-i).
std::vector<std::vector<double>> matrix_power_inverse(const SystemParams& p, int k);

StateVector extremal_point(const SystemParams& p, const ExtremalPointSpec& spec);

// y, s = sign(y), optional z(k) (needs k >= m-1) and ybar for a state.
SwitchValues switch_values(const SystemParams& p, const StateVector& x,
                           std::optional<int> k = std::nullopt);

// Left side minus right side of the plane's defining equation; 0 iff x lies
// on the plane.
double plane_residual(const SystemParams& p, const StateVector& x,
                      const PlaneSpec& plane);

// z_{m-mu}(m-mu-1): the nested switching function of the sub-chain starting
// at level mu+1. Zero on the nested hyperplane family of the linear region.
double nested_plane_residual(const SystemParams& p, const StateVector& x, int mu);

// One forward Euler step of the chain under control u. Enforces |u| <= r
// when r is finite.
StateVector propagate(const SystemParams& p, const StateVector& x, double u);

// The control sequence and state sequence that carry an extremal point to
// the origin in exactly k steps.
Polyline reach_origin_polyline(const SystemParams& p, const ExtremalPointSpec& spec);

}  // namespace tocs::geometry
