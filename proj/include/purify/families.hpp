#pragma once
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "purify/density.hpp"
#include "purify/matrix.hpp"

namespace purify::families {

using Ket4 = std::array<C64, 4>;

// Bell kets in the (|00>, |01>, |10>, |11>) basis.
Ket4 ket_phi_plus();
Ket4 ket_phi_minus();
Ket4 ket_psi_plus();
Ket4 ket_psi_minus();
// (|psi+> + i |phi->) / sqrt(2)
Ket4 ket_upsilon();

Mat4 projector(const Ket4& k);

// x |psi-><psi-| + (1-x)/3 on each of the other three Bell projectors.
Density4 werner(double x);

// (1/6) [[1+2x,0,0,1-4x],[0,2-2x,0,0],[0,0,2-2x,0],[1-4x,0,0,1+2x]];
// equals local_b_transform(werner(x)).
Density4 rotated_werner(double x);

// [[x/2,0,0,-x/2],[0,0,0,0],[0,0,1-x,0],[-x/2,0,0,x/2]]
//   = x |phi-><phi-| + (1-x) |10><10|.
Density4 one_step(double x);

// x |phi+><phi+| + (1-x) |phi-><phi-|.
Density4 phi_mix(double x);

// x |psi-><psi-| + (1-x) |upsilon><upsilon|.
Density4 maz(double x);

// Two-parameter family on the unit disk x^2 + y^2 <= 1:
// (1/4) [[1-x,  iy,  -iy, x-1],
//        [-iy,  1+x, -1-x, iy],
//        [ iy, -1-x,  1+x,-iy],
//        [x-1, -iy,   iy, 1-x]],  concurrence sqrt(x^2 + y^2).
Density4 qr(double x, double y);

// ((1+c)/2) |psi-><psi-| + ((1-c)/2) |phi-><phi-|.
Density4 singlet_phi_minus_mix(double c);

// Conjugation by b^dagger (x) b with b = (I2 + i sigma_x)/sqrt(2); maps
// werner(x) to rotated_werner(x) and maz(x) to one_step(x).
Density4 local_b_transform(const Density4& rho);

// State-dependent local rotation for the two-parameter family, first
// quadrant: u = cos(t) I2 - i sin(t) sigma_x with
// cos(t) = sqrt(1/2 + sqrt((x + c) / (8c))), c = sqrt(x^2 + y^2).
// w = u^dagger (x) u maps qr(x, y) onto singlet_phi_minus_mix(c).
struct StateDepTransform {
  Mat2 u;
  Mat4 w;
  Density4 output;
  double c = 0.0;
};
StateDepTransform state_dep_transform(double x, double y);

// Closed-form results of the CNOT-based recurrence step, per family.
// p_per_iteration holds one success probability per completed round.
struct CnotOracle {
  double c_out = 0.0;
  std::vector<double> p_per_iteration;
};
CnotOracle cnot_oracle(const std::string& family,
                       const std::vector<double>& params, int iterations);

// Disk-averaged infidelity 1 - <C'> of an SU(2)-dressed CNOT step on the
// two-parameter family. The dressing rotates the output concurrence surface
// from 2|x|/(1+x^2) to 2|y|/(1+y^2); both average the same over the disk.
// Closed form, ~0.37244.
double dressed_cnot_disk_cost();
// Same but picking the better of the two dressings per point (a per-state
// gate choice, not one fixed gate); numeric integral, ~0.1777.
double dressed_cnot_disk_cost_best_choice();

enum class PdfKind {
  Uniform1D,        // constant on (a, b]
  Linear2x,         // 2x on (0, 1]
  Linear2OneMinusX, // 2(1-x) on [0, 1)
  Quadratic6x1mx,   // 6x(1-x) on (0, 1)
  UniformDisk,      // 1/pi on the unit disk
};

struct PdfSpec {
  PdfKind kind = PdfKind::Uniform1D;
  double a = 0.0, b = 1.0;  // Uniform1D support bounds

  int dim() const { return kind == PdfKind::UniformDisk ? 2 : 1; }
  double density(double x, double y = 0.0) const;
  // Maps unit-square uniforms (u, and v for 2-d) through the inverse CDF;
  // writes dim() coordinates.
  void sample(double u, double v, double* out) const;
};

// Identifiers: "uniform(a,b]" with numeric bounds, "2x", "2(1-x)",
// "6x(1-x)", "disk".
PdfSpec pdf_from_string(const std::string& id);
std::string to_string(const PdfSpec& pdf);

enum class Domain { UnitInterval, UnitDisk };

struct StateFamily {
  std::string name;
  int arity = 1;
  Domain domain = Domain::UnitInterval;
  std::function<Density4(const double*)> build;
  // null when no closed form is implemented
  std::function<double(const double*)> known_concurrence;
  PdfSpec default_pdf;
};

const std::vector<StateFamily>& all_families();
// Identifiers: werner, rotated-werner, one-step, phi-mix, maz, qr; aliases
// example1 = rotated-werner, example2 = one-step, example3 = phi-mix.
const StateFamily& family_from_string(const std::string& id);

}  // namespace purify::families
