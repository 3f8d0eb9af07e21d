#pragma once

#include "zwitter/core.hpp"

#include <filesystem>
#include <string>
#include <vector>

// ZWIT binary snapshots (layout: docs/conventions.md), CSV tables, and
// atomic file writes (temp + rename).

namespace zwitter::io {

/// Representation tags stored in a ZWIT header.
enum class SnapshotKind : char {
  RealZP = 'P',
  ComplexZR = 'R',
  ComplexKP = 'K',
  WaveFunctionX = 'X',
  DensityMatrix = 'D',
};

struct Snapshot {
  SnapshotKind kind;
  GridSpec grid;
  Array real_values;     // RealZP
  CArray complex_values; // everything else (X stored as n_z x 1)
};

void write_zwit(const std::filesystem::path& path, const Snapshot& s);
Snapshot read_zwit(const std::filesystem::path& path);

Snapshot snapshot_of(const RealPhaseField& f);
Snapshot snapshot_of(const ComplexPhaseField& f);
Snapshot wavefunction_snapshot(const GridSpec& g, const CVector& psi);
Snapshot density_matrix_snapshot(const GridSpec& g, const CMatrix& rho);

/// Write a CSV table: header row, then rows of doubles (full precision).
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<Real>>& rows);

/// Atomically replace `path` with `content` (write temp file, then rename).
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace zwitter::io
