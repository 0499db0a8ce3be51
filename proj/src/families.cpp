#include "purify/families.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "purify/errors.hpp"
#include "purify/quadrature.hpp"
#include "purify/sun.hpp"

namespace purify::families {

namespace {

constexpr double kRt2Inv = 0.70710678118654752440;

double clamped01(double x, const char* family) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    std::ostringstream s;
    s << family << " parameter x = " << x << " outside [0, 1]";
    throw ConfigError(s.str());
  }
  return std::min(1.0, std::max(0.0, x));
}

Mat4 hermitized(const Mat4& m) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = 0.5 * (m(r, c) + conj(m(c, r)));
  return out;
}

Mat4 scaled_proj(const Ket4& k, double w) {
  Mat4 m = projector(k);
  for (auto& z : m.a) z = w * z;
  return m;
}

}  // namespace

Ket4 ket_phi_plus() { return {C64{kRt2Inv, 0}, C64{0, 0}, C64{0, 0}, C64{kRt2Inv, 0}}; }
Ket4 ket_phi_minus() { return {C64{kRt2Inv, 0}, C64{0, 0}, C64{0, 0}, C64{-kRt2Inv, 0}}; }
Ket4 ket_psi_plus() { return {C64{0, 0}, C64{kRt2Inv, 0}, C64{kRt2Inv, 0}, C64{0, 0}}; }
Ket4 ket_psi_minus() { return {C64{0, 0}, C64{kRt2Inv, 0}, C64{-kRt2Inv, 0}, C64{0, 0}}; }

Ket4 ket_upsilon() {
  return {C64{0, 0.5}, C64{0.5, 0}, C64{0.5, 0}, C64{0, -0.5}};
}

Mat4 projector(const Ket4& k) {
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = k[r] * conj(k[c]);
  return m;
}

Density4 werner(double x) {
  x = clamped01(x, "werner");
  const double w = (1.0 - x) / 3.0;
  Mat4 m = scaled_proj(ket_psi_minus(), x) + scaled_proj(ket_psi_plus(), w) +
           scaled_proj(ket_phi_plus(), w) + scaled_proj(ket_phi_minus(), w);
  return Density4{m};
}

Density4 rotated_werner(double x) {
  x = clamped01(x, "rotated-werner");
  Mat4 m;
  m(0, 0) = m(3, 3) = C64{(1.0 + 2.0 * x) / 6.0, 0};
  m(0, 3) = m(3, 0) = C64{(1.0 - 4.0 * x) / 6.0, 0};
  m(1, 1) = m(2, 2) = C64{(2.0 - 2.0 * x) / 6.0, 0};
  return Density4{m};
}

Density4 one_step(double x) {
  x = clamped01(x, "one-step");
  Mat4 m;
  m(0, 0) = m(3, 3) = C64{0.5 * x, 0};
  m(0, 3) = m(3, 0) = C64{-0.5 * x, 0};
  m(2, 2) = C64{1.0 - x, 0};
  return Density4{m};
}

Density4 phi_mix(double x) {
  x = clamped01(x, "phi-mix");
  Mat4 m = scaled_proj(ket_phi_plus(), x) + scaled_proj(ket_phi_minus(), 1.0 - x);
  return Density4{m};
}

Density4 maz(double x) {
  x = clamped01(x, "maz");
  Mat4 m = scaled_proj(ket_psi_minus(), x) + scaled_proj(ket_upsilon(), 1.0 - x);
  return Density4{m};
}

Density4 qr(double x, double y) {
  if (!(x * x + y * y <= 1.0 + 1e-12)) {
    std::ostringstream s;
    s << "qr parameters (" << x << ", " << y << ") outside the unit disk";
    throw ConfigError(s.str());
  }
  Mat4 m;
  const double d = 0.25;
  m(0, 0) = m(3, 3) = C64{(1.0 - x) * d, 0};
  m(1, 1) = m(2, 2) = C64{(1.0 + x) * d, 0};
  m(0, 3) = m(3, 0) = C64{(x - 1.0) * d, 0};
  m(1, 2) = m(2, 1) = C64{-(1.0 + x) * d, 0};
  m(0, 1) = m(3, 2) = C64{0, y * d};
  m(1, 0) = m(2, 3) = C64{0, -y * d};
  m(0, 2) = m(3, 1) = C64{0, -y * d};
  m(2, 0) = m(1, 3) = C64{0, y * d};
  return Density4{m};
}

Density4 singlet_phi_minus_mix(double c) {
  c = clamped01(c, "singlet-phi-minus-mix");
  Mat4 m = scaled_proj(ket_psi_minus(), 0.5 * (1.0 + c)) +
           scaled_proj(ket_phi_minus(), 0.5 * (1.0 - c));
  return Density4{m};
}

Density4 local_b_transform(const Density4& rho) {
  const Mat2 b = b_gate();
  const Mat4 w = kron(dagger(b), b);
  return Density4{hermitized(w * rho.m * dagger(w))};
}

StateDepTransform state_dep_transform(double x, double y) {
  if (x < 0.0 || y < 0.0) {
    std::ostringstream s;
    s << "state-dependent transform is defined for x, y >= 0; got (" << x
      << ", " << y << ")";
    throw ConfigError(s.str());
  }
  const Density4 in = qr(x, y);  // also checks the disk constraint
  const double c = std::hypot(x, y);
  double theta = 0.0;
  if (c > 0.0) {
    double ct = std::sqrt(0.5 + std::sqrt((x + c) / (8.0 * c)));
    if (ct > 1.0) ct = 1.0;
    theta = std::acos(ct);
  }
  StateDepTransform out;
  out.c = c;
  out.u(0, 0) = out.u(1, 1) = C64{std::cos(theta), 0};
  out.u(0, 1) = out.u(1, 0) = C64{0, -std::sin(theta)};
  out.w = kron(dagger(out.u), out.u);
  out.output = Density4{hermitized(out.w * in.m * dagger(out.w))};
  return out;
}

CnotOracle cnot_oracle(const std::string& family,
                       const std::vector<double>& params, int iterations) {
  const StateFamily& fam = family_from_string(family);
  if (static_cast<int>(params.size()) != fam.arity) {
    std::ostringstream s;
    s << "family " << fam.name << " takes " << fam.arity << " parameter(s), got "
      << params.size();
    throw ConfigError(s.str());
  }
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  const int max_n = fam.name == "qr" ? 2 : 1;
  if (iterations > max_n) {
    std::ostringstream s;
    s << "no closed-form CNOT result for family " << fam.name << " at N = "
      << iterations;
    throw ConfigError(s.str());
  }

  CnotOracle r;
  if (fam.name == "rotated-werner") {
    const double x = params[0];
    const double den = 5.0 - 4.0 * x + 8.0 * x * x;
    r.c_out = x > 0.5 ? 3.0 * (4.0 * x * x - 1.0) / den : 0.0;
    r.p_per_iteration = {den / 9.0};
  } else if (fam.name == "one-step") {
    const double x = params[0];
    r.c_out = x > 0.0 ? 1.0 : 0.0;
    r.p_per_iteration = {0.5 * x * x};
  } else if (fam.name == "phi-mix") {
    const double x = params[0];
    r.c_out = (1.0 - 2.0 * x) * (1.0 - 2.0 * x);
    r.p_per_iteration = {1.0};
  } else if (fam.name == "maz") {
    const double x = params[0];
    r.c_out = x > 0.5 ? 2.0 * x * (2.0 * x - 1.0) / (1.0 + x * x) : 0.0;
    r.p_per_iteration = {0.5 * (1.0 + x * x)};
  } else if (fam.name == "qr") {
    const double x = params[0];
    const double x2 = x * x;
    const double c1 = 2.0 * std::fabs(x) / (1.0 + x2);
    const double p1 = 0.5 * (1.0 + x2);
    if (iterations == 1) {
      r.c_out = c1;
      r.p_per_iteration = {p1};
    } else {
      const double den = 1.0 + 6.0 * x2 + x2 * x2;
      r.c_out = 4.0 * std::fabs(x) * (1.0 + x2) / den;
      r.p_per_iteration = {p1, den / (2.0 * (1.0 + x2) * (1.0 + x2))};
    }
  } else {
    throw ConfigError("no closed-form CNOT oracle for family " + fam.name);
  }
  return r;
}

double dressed_cnot_disk_cost() {
  const double pi = std::acos(-1.0);
  // (1/pi) * iint 2|x|/(1+x^2) dx dy = 8 (sqrt(2) asinh(1) - 1) / pi
  return 1.0 - 8.0 * (std::sqrt(2.0) * std::asinh(1.0) - 1.0) / pi;
}

double dressed_cnot_disk_cost_best_choice() {
  return 1.0 - quad::disk_average(
                   [](double x, double y) {
                     auto a = [](double t) {
                       return 2.0 * std::fabs(t) / (1.0 + t * t);
                     };
                     return std::max(a(x), a(y));
                   },
                   1e-9);
}

double PdfSpec::density(double x, double y) const {
  switch (kind) {
    case PdfKind::Uniform1D:
      return (x > a && x <= b) ? 1.0 / (b - a) : 0.0;
    case PdfKind::Linear2x:
      return (x >= 0.0 && x <= 1.0) ? 2.0 * x : 0.0;
    case PdfKind::Linear2OneMinusX:
      return (x >= 0.0 && x <= 1.0) ? 2.0 * (1.0 - x) : 0.0;
    case PdfKind::Quadratic6x1mx:
      return (x >= 0.0 && x <= 1.0) ? 6.0 * x * (1.0 - x) : 0.0;
    case PdfKind::UniformDisk:
      return (x * x + y * y <= 1.0) ? 1.0 / std::acos(-1.0) : 0.0;
  }
  return 0.0;
}

void PdfSpec::sample(double u, double v, double* out) const {
  switch (kind) {
    case PdfKind::Uniform1D:
      out[0] = a + (b - a) * u;
      return;
    case PdfKind::Linear2x:
      out[0] = std::sqrt(u);
      return;
    case PdfKind::Linear2OneMinusX:
      out[0] = 1.0 - std::sqrt(1.0 - u);
      return;
    case PdfKind::Quadratic6x1mx: {
      // inverse of F(x) = 3x^2 - 2x^3 via the trigonometric cubic root
      const double pi = std::acos(-1.0);
      const double t = (std::acos(1.0 - 2.0 * u) + 4.0 * pi) / 3.0;
      out[0] = std::min(1.0, std::max(0.0, 0.5 * (1.0 + 2.0 * std::cos(t))));
      return;
    }
    case PdfKind::UniformDisk: {
      const double r = std::sqrt(u);
      const double phi = 2.0 * std::acos(-1.0) * v;
      out[0] = r * std::cos(phi);
      out[1] = r * std::sin(phi);
      return;
    }
  }
}

PdfSpec pdf_from_string(const std::string& id) {
  PdfSpec p;
  if (id == "2x") {
    p.kind = PdfKind::Linear2x;
    return p;
  }
  if (id == "2(1-x)") {
    p.kind = PdfKind::Linear2OneMinusX;
    return p;
  }
  if (id == "6x(1-x)") {
    p.kind = PdfKind::Quadratic6x1mx;
    return p;
  }
  if (id == "disk") {
    p.kind = PdfKind::UniformDisk;
    return p;
  }
  double a = 0.0, b = 0.0;
  int consumed = 0;
  if (std::sscanf(id.c_str(), "uniform(%lf,%lf]%n", &a, &b, &consumed) == 2 &&
      consumed == static_cast<int>(id.size())) {
    if (!(b > a)) throw ConfigError("uniform pdf needs b > a in " + id);
    p.kind = PdfKind::Uniform1D;
    p.a = a;
    p.b = b;
    return p;
  }
  throw ConfigError(
      "unknown pdf " + id +
      "; expected one of uniform(a,b], 2x, 2(1-x), 6x(1-x), disk");
}

std::string to_string(const PdfSpec& pdf) {
  switch (pdf.kind) {
    case PdfKind::Uniform1D: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "uniform(%g,%g]", pdf.a, pdf.b);
      return buf;
    }
    case PdfKind::Linear2x:
      return "2x";
    case PdfKind::Linear2OneMinusX:
      return "2(1-x)";
    case PdfKind::Quadratic6x1mx:
      return "6x(1-x)";
    case PdfKind::UniformDisk:
      return "disk";
  }
  return "";
}

const std::vector<StateFamily>& all_families() {
  static const std::vector<StateFamily> fams = [] {
    auto uni = [](double a, double b) {
      PdfSpec p;
      p.kind = PdfKind::Uniform1D;
      p.a = a;
      p.b = b;
      return p;
    };
    PdfSpec disk;
    disk.kind = PdfKind::UniformDisk;

    std::vector<StateFamily> v;
    v.push_back({"werner", 1, Domain::UnitInterval,
                 [](const double* p) { return werner(p[0]); },
                 [](const double* p) { return std::max(0.0, 2.0 * p[0] - 1.0); },
                 uni(0.5, 1.0)});
    v.push_back({"rotated-werner", 1, Domain::UnitInterval,
                 [](const double* p) { return rotated_werner(p[0]); },
                 [](const double* p) { return std::max(0.0, 2.0 * p[0] - 1.0); },
                 uni(0.5, 1.0)});
    v.push_back({"one-step", 1, Domain::UnitInterval,
                 [](const double* p) { return one_step(p[0]); },
                 [](const double* p) { return p[0]; }, uni(0.0, 1.0)});
    v.push_back({"phi-mix", 1, Domain::UnitInterval,
                 [](const double* p) { return phi_mix(p[0]); },
                 [](const double* p) { return std::fabs(1.0 - 2.0 * p[0]); },
                 uni(0.0, 1.0)});
    v.push_back({"maz", 1, Domain::UnitInterval,
                 [](const double* p) { return maz(p[0]); },
                 [](const double* p) { return p[0]; }, uni(0.0, 1.0)});
    v.push_back({"qr", 2, Domain::UnitDisk,
                 [](const double* p) { return qr(p[0], p[1]); },
                 [](const double* p) { return std::hypot(p[0], p[1]); }, disk});
    return v;
  }();
  return fams;
}

const StateFamily& family_from_string(const std::string& id) {
  std::string key = id;
  if (key == "example1") key = "rotated-werner";
  if (key == "example2") key = "one-step";
  if (key == "example3") key = "phi-mix";
  for (const auto& f : all_families())
    if (f.name == key) return f;
  throw ConfigError("unknown family " + id +
                    "; expected one of werner, rotated-werner, one-step, "
                    "phi-mix, maz, qr (aliases example1, example2, example3)");
}

}  // namespace purify::families
