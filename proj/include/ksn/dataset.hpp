#pragma once

#include <cstdint>
#include <string>

#include "ksn/representer.hpp"

namespace ksn {

enum class TargetKind { Step, Checker, Random };

// Uniform lattice dataset over the unit cube with endpoints included:
// grid^d points, last coordinate fastest. Targets:
//   step       : 1 iff x_1 >= 1/2, else 0
//   checker(m) : parity of sum_j floor(m * x_j)
//   random     : mix64(seed, point index) / 2^64
struct GenSpec {
  TargetKind kind = TargetKind::Step;
  int d = 2;
  int grid = 2;
  int m = 2;               // checker frequency
  std::uint64_t seed = 1;  // random stream
};

// CSV text with header "x1,...,xd,f"; byte-deterministic in the spec.
std::string generate_dataset_csv(const GenSpec& spec);

template <ScalarField T>
SampleSet<T> parse_dataset_csv(const std::string& text);

template <ScalarField T>
SampleSet<T> read_dataset(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

extern template SampleSet<double> parse_dataset_csv<double>(const std::string&);
extern template SampleSet<Rational> parse_dataset_csv<Rational>(const std::string&);
extern template SampleSet<double> read_dataset<double>(const std::string&);
extern template SampleSet<Rational> read_dataset<Rational>(const std::string&);

}  // namespace ksn
