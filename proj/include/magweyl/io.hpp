#pragma once

#include <string>

#include "magweyl/quantize.hpp"

namespace magweyl {

// Binary container for grid data (little-endian):
//   magic "MGWL", u32 version = 1, 8-byte kind tag ("SYMBOL\0\0" or
//   "OPMAT\0\0\0"), u32 d, u32 n, f64 x_extent, f64 eps, u32 n_out,
//   u32 n_in, then complex values as interleaved f64 pairs.
// Symbol ordering: x-index outermost, then xi-index, then row, then col.
// Operator ordering: matrix rows outermost, then columns.
// Round trips are bit-exact.

void write_symbol(const std::string& path, const Symbol& f);
Symbol read_symbol(const std::string& path);

void write_operator(const std::string& path, const OperatorMatrix& M);
OperatorMatrix read_operator(const std::string& path);

/// CSV export with a header row; value rows mirror the container order.
void write_symbol_csv(const std::string& path, const Symbol& f);

}  // namespace magweyl
