#pragma once

#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "scalar.hpp"

namespace daha {

using xcd = boost::multiprecision::cpp_complex_50;

template <>
struct scalar_traits<xcd> {
  static constexpr const char* name = "extended";
  static constexpr int digits10 = 50;
};

}  // namespace daha
