#pragma once

#include <iosfwd>

#include "gfl/sim.hpp"

namespace gfl {

/// Writes the record as locale-independent CSV: a header row naming every
/// column with units, then one row per logged instant. Values are printed
/// with shortest round-trip precision.
void write_csv(std::ostream& os, const TimeSeriesRecord& rec);

/// Parses a CSV produced by write_csv. Throws ConfigError on a header or
/// shape mismatch.
TimeSeriesRecord read_csv(std::istream& is);

const char* csv_header();

}  // namespace gfl
