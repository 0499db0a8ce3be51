#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "purify/families.hpp"

namespace purify::sampling {

enum class SequenceKind { LowDiscrepancy, PseudoRandom };

struct SampleSet {
  std::vector<std::array<double, 2>> points;  // first dim() coords are used
  int dim = 1;
  std::uint64_t seed = 0;
  SequenceKind kind = SequenceKind::LowDiscrepancy;
  families::PdfSpec pdf;

  int m() const { return static_cast<int>(points.size()); }
};

// Radical-inverse (van der Corput) value of index in the given base; index
// starts at 1 so the sequence never emits 0. Bases 2 and 3 drive the
// two-dimensional low-discrepancy stream.
double radical_inverse(std::uint64_t index, int base);

// Draws m points from the pdf through its exact inverse CDF. LowDiscrepancy
// feeds radical-inverse pairs (bases 2, 3) starting at index seed + 1;
// PseudoRandom feeds mt19937_64 uniforms on (0, 1). Regeneration from the
// same (pdf, m, seed, kind) is bit-identical.
SampleSet sample(const families::PdfSpec& pdf, int m, std::uint64_t seed,
                 SequenceKind kind);

const char* to_string(SequenceKind k);
SequenceKind sequence_kind_from_string(const std::string& s);

}  // namespace purify::sampling
