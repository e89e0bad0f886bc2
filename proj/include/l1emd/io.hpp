#pragma once

#include <iosfwd>
#include <string>

#include "l1emd/embedding.hpp"
#include "l1emd/measures.hpp"
#include "l1emd/transport.hpp"

namespace l1emd {

// Measure text formats. Both start with the header `n <n> <grid|torus>`.
//   sparse: one atom per line, `<a> <b> <mass>`; unlisted cells are 0.
//   dense:  n lines of n whitespace-separated masses (line a holds mass(a, 0..n-1)).
// Blank lines and lines starting with '#' are ignored.

enum class MeasureFormat { Auto, Sparse, Dense };

/// Auto picks dense when there are exactly n data lines of n tokens each, except
/// that for n == 3 (where both layouts have three columns) the file is read as
/// sparse unless some line is not a valid in-range atom.
SignedMeasure read_measure(std::istream& in, MeasureFormat format = MeasureFormat::Auto);
SignedMeasure read_measure_file(const std::string& path, MeasureFormat format = MeasureFormat::Auto);

void write_sparse(std::ostream& out, const SignedMeasure& x);
void write_dense(std::ostream& out, const SignedMeasure& x);

/// One line per entry `<ax> <ay> <bx> <by> <mass>`, then `cost <value>`.
void write_plan(std::ostream& out, const TransportPlan& plan);

/// Header `n <n> embedded`, then partA row-major and partB row-major, one value per line.
void write_embedded(std::ostream& out, const EmbeddedVector& v);

/// Shortest decimal that round-trips the double.
std::string format_double(double x);

} // namespace l1emd
