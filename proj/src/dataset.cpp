#include "ksn/dataset.hpp"

#include <fstream>
#include <sstream>

#include "ksn/errors.hpp"

namespace ksn {

std::string generate_dataset_csv(const GenSpec& spec) {
  if (spec.d < 2) throw ArgumentError("dimension d must be greater than 1");
  if (spec.grid < 2) throw ArgumentError("grid must be at least 2");
  if (spec.kind == TargetKind::Checker && spec.m < 1)
    throw ArgumentError("checker frequency m must be positive");

  std::string out;
  for (int j = 1; j <= spec.d; ++j) {
    out += "x" + std::to_string(j);
    out += ',';
  }
  out += "f\n";

  const int g = spec.grid;
  std::vector<int> idx(spec.d, 0);
  std::uint64_t linear = 0;
  while (true) {
    // coordinates i/(g-1), exact parity arithmetic for the checker target
    long parity_sum = 0;
    for (int j = 0; j < spec.d; ++j) {
      const double c = static_cast<double>(idx[j]) / static_cast<double>(g - 1);
      out += format_shortest(c);
      out += ',';
      if (spec.kind == TargetKind::Checker)
        parity_sum += (static_cast<long>(spec.m) * idx[j]) / (g - 1);
    }
    switch (spec.kind) {
      case TargetKind::Step:
        out += (2 * idx[0] >= g - 1) ? '1' : '0';
        break;
      case TargetKind::Checker:
        out += (parity_sum % 2 != 0) ? '1' : '0';
        break;
      case TargetKind::Random:
        out += format_shortest(mix64_unit_double(spec.seed, linear));
        break;
    }
    out += '\n';
    ++linear;
    int j = spec.d - 1;
    while (j >= 0 && idx[j] == g - 1) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  return out;
}

template <ScalarField T>
SampleSet<T> parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dataset: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  // header "x1,...,xd,f"
  std::vector<std::string> headers;
  {
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) headers.push_back(field);
  }
  if (headers.size() < 2 || headers.back() != "f")
    throw FormatError("dataset header: expected \"x1,...,xd,f\", got \"" + line + "\"");
  const int d = static_cast<int>(headers.size()) - 1;
  for (int j = 0; j < d; ++j)
    if (headers[j] != "x" + std::to_string(j + 1))
      throw FormatError("dataset header: column " + std::to_string(j + 1) +
                        " should be \"x" + std::to_string(j + 1) + "\"");

  SampleSet<T> sample;
  sample.d = d;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != d + 1)
      throw FormatError("dataset line " + std::to_string(line_no) + ": expected " +
                        std::to_string(d + 1) + " fields, got " +
                        std::to_string(fields.size()));
    std::vector<T> point(d);
    for (int j = 0; j < d; ++j) {
      try {
        point[j] = parse_number<T>(fields[j]);
      } catch (const FormatError& e) {
        throw FormatError("dataset line " + std::to_string(line_no) + ", column " +
                          std::to_string(j + 1) + ": " + e.what());
      }
      if (point[j] < T(0) || point[j] > T(1))
        throw FormatError("dataset line " + std::to_string(line_no) + ": coordinate " +
                          fields[j] + " outside [0, 1]");
    }
    T value;
    try {
      value = parse_number<T>(fields[d]);
    } catch (const FormatError& e) {
      throw FormatError("dataset line " + std::to_string(line_no) + ", value column: " +
                        e.what());
    }
    sample.points.push_back(std::move(point));
    sample.values.push_back(std::move(value));
  }
  return sample;
}

template <ScalarField T>
SampleSet<T> read_dataset(const std::string& path) {
  return parse_dataset_csv<T>(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return buf.str();
}

template SampleSet<double> parse_dataset_csv<double>(const std::string&);
template SampleSet<Rational> parse_dataset_csv<Rational>(const std::string&);
template SampleSet<double> read_dataset<double>(const std::string&);
template SampleSet<Rational> read_dataset<Rational>(const std::string&);

}  // namespace ksn
