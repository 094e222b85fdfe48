#pragma once

#include <string>
#include <vector>

#include "rt/corona/memory.hpp"

namespace rt::corona {

/// Binary P5, 16-bit big-endian, values round(clamp(x, 0, 1) * 65535).
/// `square` squares pixel values first (display convention).
void write_pgm(const std::string& path, const RealField& image, std::size_t M, std::size_t N,
               bool square = false);
RealField read_pgm(const std::string& path, std::size_t& M, std::size_t& N);

/// One image row per line, full precision.
void write_csv(const std::string& path, const RealField& image, std::size_t M, std::size_t N);
RealField read_csv(const std::string& path, std::size_t& M, std::size_t& N);

}  // namespace rt::corona
