// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "sscl/common.hpp"

namespace sscl::io {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError("serialize: unexpected end of stream");
  return v;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw DataError("serialize: unexpected end of stream");
  return s;
}

inline void write_mat(std::ostream& out, const Mat& m) {
  write_pod<std::int64_t>(out, m.rows());
  write_pod<std::int64_t>(out, m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) write_pod<double>(out, m(i, j));
}

inline Mat read_mat(std::istream& in) {
  const auto r = read_pod<std::int64_t>(in);
  const auto c = read_pod<std::int64_t>(in);
  if (r < 0 || c < 0) throw DataError("serialize: negative matrix shape");
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = read_pod<double>(in);
  return m;
}

inline void write_vec(std::ostream& out, const Vec& v) {
  write_pod<std::int64_t>(out, v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) write_pod<double>(out, v(i));
}

inline Vec read_vec(std::istream& in) {
  const auto n = read_pod<std::int64_t>(in);
  if (n < 0) throw DataError("serialize: negative vector size");
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = read_pod<double>(in);
  return v;
}

}  // namespace sscl::io
