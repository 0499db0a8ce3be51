#include "purify/sampling.hpp"

#include <random>

#include "purify/errors.hpp"

namespace purify::sampling {

double radical_inverse(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

namespace {

// strictly inside (0, 1): 53 uniform bits centered in their bucket
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

}  // namespace

SampleSet sample(const families::PdfSpec& pdf, int m, std::uint64_t seed,
                 SequenceKind kind) {
  if (m < 1) throw ConfigError("sample count must be >= 1");
  SampleSet set;
  set.dim = pdf.dim();
  set.seed = seed;
  set.kind = kind;
  set.pdf = pdf;
  set.points.resize(static_cast<std::size_t>(m));

  if (kind == SequenceKind::LowDiscrepancy) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t index = seed + static_cast<std::uint64_t>(j) + 1;
      const double u = radical_inverse(index, 2);
      const double v = radical_inverse(index, 3);
      double out[2] = {0, 0};
      pdf.sample(u, v, out);
      set.points[j] = {out[0], out[1]};
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int j = 0; j < m; ++j) {
      const double u = unit_open(rng);
      const double v = set.dim == 2 ? unit_open(rng) : 0.5;
      double out[2] = {0, 0};
      pdf.sample(u, v, out);
      set.points[j] = {out[0], out[1]};
    }
  }
  return set;
}

const char* to_string(SequenceKind k) {
  return k == SequenceKind::LowDiscrepancy ? "low-discrepancy" : "pseudo-random";
}

SequenceKind sequence_kind_from_string(const std::string& s) {
  if (s == "low-discrepancy") return SequenceKind::LowDiscrepancy;
  if (s == "pseudo-random") return SequenceKind::PseudoRandom;
  throw ConfigError("unknown sequence kind " + s +
                    "; expected low-discrepancy or pseudo-random");
}

}  // namespace purify::sampling
