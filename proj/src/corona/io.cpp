#include "rt/corona/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rt/errors.hpp"

namespace rt::corona {

void write_pgm(const std::string& path, const RealField& image, std::size_t M, std::size_t N,
               bool square) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  // PGM rows are image rows m, left to right along n.
  out << "P5\n" << N << " " << M << "\n65535\n";
  std::vector<unsigned char> row(2 * N);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      double v = image[m + n * M];
      if (square) v *= v;
      const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
      row[2 * n] = static_cast<unsigned char>(q >> 8);
      row[2 * n + 1] = static_cast<unsigned char>(q & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

RealField read_pgm(const std::string& path, std::size_t& M, std::size_t& N) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::string magic;
  std::size_t maxval = 0;
  in >> magic >> N >> M >> maxval;
  if (magic != "P5" || maxval == 0 || maxval > 65535) throw Error(path + " is not a binary PGM");
  in.get();
  const std::size_t bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(M * N * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw Error(path + " is truncated");
  RealField image(M * N);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n) {
      const std::size_t k = (m * N + n) * bytes;
      const unsigned q = bytes == 2 ? (raw[k] << 8) | raw[k + 1] : raw[k];
      image[m + n * M] = static_cast<double>(q) / static_cast<double>(maxval);
    }
  return image;
}

void write_csv(const std::string& path, const RealField& image, std::size_t M, std::size_t N) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  char buf[32];
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", image[m + n * M]);
      out << (n ? "," : "") << buf;
    }
    out << "\n";
  }
}

RealField read_csv(const std::string& path, std::size_t& M, std::size_t& N) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows[0].size()) throw Error(path + " has ragged rows");
    rows.push_back(std::move(row));
  }
  M = rows.size();
  N = M ? rows[0].size() : 0;
  RealField image(M * N);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n) image[m + n * M] = rows[m][n];
  return image;
}

}  // namespace rt::corona
