// ksn: build, check, fit and evaluate Kolmogorov-type three-layer lookup
// networks on finite samples.
//
// Exit codes: 0 success, 1 I/O or file format failure, 2 sample not
// representable (a closed path was found), 3 grouping ambiguity, 4 bad
// arguments.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "ksn/dataset.hpp"
#include "ksn/errors.hpp"
#include "ksn/network.hpp"

namespace {

using ksn::Rational;
using ksn::ScalarField;

struct StackOptions {
  bool rational = false;
  std::optional<std::string> lambda;
  std::optional<std::string> epsilon;
  std::string phi_kind = "hashed";
  std::uint64_t seed = ksn::kDefaultPhiSeed;
  int segments = ksn::kDefaultPhiSegments;
};

template <ScalarField T>
ksn::TransferStack<T> make_stack(int d, const StackOptions& opt) {
  if (d < 2) throw ksn::ArgumentError("dimension d must be greater than 1");
  const int r = 2 * d;
  T lambda = opt.lambda ? ksn::parse_number<T>(*opt.lambda) : T(T(1) / T(2));
  T epsilon = opt.epsilon ? ksn::parse_number<T>(*opt.epsilon) : T(T(1) / T(4 * d));
  std::vector<ksn::Interval<T>> intervals;
  for (int k = 0; k <= r; ++k) intervals.push_back({T(3 * k), T(3 * k + 1)});
  T domain_hi = epsilon > T(0) ? T(T(1) + T(r) * epsilon) : T(1);
  ksn::InnerFunctionSpec<T> phi = [&] {
    if (opt.phi_kind == "hashed")
      return ksn::InnerFunctionSpec<T>::hashed_piecewise_linear(opt.seed, opt.segments,
                                                                domain_hi);
    if (opt.phi_kind == "power") return ksn::InnerFunctionSpec<T>::transcendental_power(domain_hi);
    throw ksn::ArgumentError("unknown phi kind '" + opt.phi_kind + "' (hashed, power)");
  }();
  return ksn::TransferStack<T>(d, std::move(lambda), std::move(epsilon), std::move(phi),
                               std::move(intervals));
}

std::string format_value(double v, int precision) { return ksn::format_sig(v, precision); }
std::string format_value(const Rational& v, int /*precision*/) { return ksn::format_number(v); }

template <ScalarField T>
std::string witness_text(const std::vector<T>& coeffs, int precision) {
  std::string out = "(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ", ";
    out += format_value(coeffs[i], precision);
  }
  out += ")";
  return out;
}

std::string index_list_text(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(idx[i]);
  }
  return out;
}

struct FitArgs {
  std::string data_path;
  std::string out_path;
  StackOptions stack;
  std::optional<std::string> tolerance;
  std::string timestamp = "1970-01-01T00:00:00Z";
  int precision = 17;
};

template <ScalarField T>
int run_fit_typed(const FitArgs& args) {
  ksn::SampleSet<T> sample = ksn::read_dataset<T>(args.data_path);
  if (sample.size() == 0) throw ksn::FormatError("dataset has no data rows");
  ksn::TransferStack<T> stack = make_stack<T>(sample.d, args.stack);
  T tolerance = args.tolerance ? ksn::parse_number<T>(*args.tolerance)
                               : ksn::default_grouping_tolerance(stack);

  ksn::FitResult<T> result = ksn::fit(stack, sample, tolerance);
  if (std::holds_alternative<ksn::ClosedPathWitness<T>>(result)) {
    const auto& witness = std::get<ksn::ClosedPathWitness<T>>(result);
    std::cout << "fit: unrepresentable\n";
    std::cout << "closed path points: " << index_list_text(witness.support) << "\n";
    std::cout << "witness = " << witness_text(witness.coeffs, args.precision) << "\n";
    return 2;
  }
  auto& success = std::get<ksn::FitSuccess<T>>(result);
  ksn::ResidualReport<T> report = ksn::residual_report(stack, success.tables, sample);

  ksn::KolmogorovNetwork<T> net{std::move(stack), std::move(success.tables), {}};
  net.provenance.n_fitted = static_cast<std::int64_t>(sample.size());
  net.provenance.fit_timestamp = args.timestamp;
  net.provenance.residual = report.max_abs_residual;
  ksn::save_network(net, args.out_path);

  std::cout << "fit: ok\n";
  std::cout << "n: " << sample.size() << "\n";
  std::cout << "rank: " << success.rank << "\n";
  std::cout << "max_abs_residual: " << format_value(report.max_abs_residual, args.precision)
            << "\n";
  std::cout << "network: " << args.out_path << "\n";
  return 0;
}

struct CheckZArgs {
  std::string data_path;
  StackOptions stack;
  std::optional<std::string> tolerance;
  int precision = 17;
};

template <ScalarField T>
int run_check_z_typed(const CheckZArgs& args) {
  ksn::SampleSet<T> sample = ksn::read_dataset<T>(args.data_path);
  if (sample.size() == 0) throw ksn::FormatError("dataset has no data rows");
  ksn::TransferStack<T> stack = make_stack<T>(sample.d, args.stack);
  T tolerance = args.tolerance ? ksn::parse_number<T>(*args.tolerance)
                               : ksn::default_grouping_tolerance(stack);
  std::vector<T> wtab = stack.w_table(sample.points);
  ksn::IncidenceSystem sys = ksn::build_incidence<T>(
      wtab, static_cast<int>(sample.size()), stack.num_blocks(), tolerance);
  ksn::ZReport<T> report = ksn::check_z<T>(sys);

  std::cout << "n: " << report.n << "\n";
  std::cout << "blocks: " << sys.num_blocks << "\n";
  std::cout << "s_k: " << index_list_text(sys.s_k()) << "\n";
  std::cout << "rank: " << report.rank << "\n";
  std::cout << "nullspace_dim: " << report.nullspace_dim << "\n";
  std::cout << "solvable_for_all_F: " << (report.solvable_for_all_F ? "true" : "false") << "\n";
  if (report.rank_warning) std::cout << "warning: numerical rank near cutoff\n";
  if (report.z_satisfied) {
    std::cout << "Z: satisfied, rank = " << report.rank << "\n";
  } else {
    std::cout << "Z: violated, rank = " << report.rank << "\n";
    std::cout << "witness = " << witness_text(*report.witness, args.precision) << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string net_path;
  std::vector<std::string> inline_points;
  std::optional<std::string> points_path;
  std::string key_tolerance = "0";
  int precision = 17;
};

template <ScalarField T>
std::vector<T> parse_inline_point(const std::string& text, int d) {
  std::vector<T> point;
  std::istringstream is(text);
  std::string field;
  while (std::getline(is, field, ',')) point.push_back(ksn::parse_number<T>(field));
  if (static_cast<int>(point.size()) != d)
    throw ksn::ArgumentError("point '" + text + "' has " + std::to_string(point.size()) +
                             " coordinates, expected " + std::to_string(d));
  return point;
}

// Accepts "x1,...,xd" or full dataset files "x1,...,xd,f" (f ignored).
template <ScalarField T>
std::vector<std::vector<T>> parse_points_csv(const std::string& text, int d) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ksn::FormatError("points file: empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_value = line == [&] {
    std::string h;
    for (int j = 1; j <= d; ++j) h += "x" + std::to_string(j) + ",";
    return h + "f";
  }();
  if (!with_value) {
    std::string h;
    for (int j = 1; j <= d; ++j) {
      if (j > 1) h += ",";
      h += "x" + std::to_string(j);
    }
    if (line != h)
      throw ksn::FormatError("points header: expected \"" + h + "\" or a dataset header");
  }
  std::vector<std::vector<T>> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    const int expected = d + (with_value ? 1 : 0);
    if (static_cast<int>(fields.size()) != expected)
      throw ksn::FormatError("points line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected) + " fields");
    std::vector<T> point(d);
    for (int j = 0; j < d; ++j) point[j] = ksn::parse_number<T>(fields[j]);
    points.push_back(std::move(point));
  }
  return points;
}

template <ScalarField T>
int run_eval_typed(const ksn::KolmogorovNetwork<T>& net, const EvalArgs& args) {
  const int d = net.stack.d();
  std::vector<std::vector<T>> points;
  for (const auto& text : args.inline_points) points.push_back(parse_inline_point<T>(text, d));
  if (args.points_path) {
    auto more = parse_points_csv<T>(ksn::read_text_file(*args.points_path), d);
    points.insert(points.end(), more.begin(), more.end());
  }
  if (points.empty()) throw ksn::ArgumentError("no points given (--point or --points)");
  T key_tolerance = ksn::parse_number<T>(args.key_tolerance);
  for (const auto& p : points)
    std::cout << format_value(net.eval(p, key_tolerance), args.precision) << "\n";
  return 0;
}

struct ReportArgs {
  std::string net_path;
  std::string data_path;
  int precision = 17;
};

template <ScalarField T>
int run_report_typed(const ksn::KolmogorovNetwork<T>& net, const ReportArgs& args) {
  ksn::SampleSet<T> sample = ksn::read_dataset<T>(args.data_path);
  ksn::ResidualReport<T> report = ksn::residual_report(net.stack, net.tables, sample);
  std::cout << "max_abs_residual: " << format_value(report.max_abs_residual, args.precision)
            << "\n";
  std::cout << "table_sizes: " << index_list_text(report.table_sizes) << "\n";
  std::cout << "distinct_keys: " << report.distinct_keys << "\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Kolmogorov-type three-layer lookup networks: exact representation of "
               "arbitrary (including discontinuous) functions on finite samples"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a lattice dataset CSV");
  ksn::GenSpec gen_spec;
  std::string gen_kind = "step";
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "target kind: step, checker, random")
      ->check(CLI::IsMember({"step", "checker", "random"}));
  gen->add_option("--d", gen_spec.d, "input dimension (> 1)")->required();
  gen->add_option("--grid", gen_spec.grid, "lattice points per axis (>= 2)")->required();
  gen->add_option("--m", gen_spec.m, "checker frequency (checker kind)");
  gen->add_option("--seed", gen_spec.seed, "random stream seed (random kind)");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // fit
  auto* fitc = app.add_subcommand("fit", "fit lookup tables to a dataset");
  FitArgs fit_args;
  fitc->add_option("data", fit_args.data_path, "dataset CSV path")->required();
  fitc->add_option("--out", fit_args.out_path, "output network path")->required();
  fitc->add_flag("--rational", fit_args.stack.rational, "exact rational arithmetic");
  fitc->add_option("--lambda", fit_args.stack.lambda, "transfer weight (default 1/2)");
  fitc->add_option("--epsilon", fit_args.stack.epsilon, "transfer shift (default 1/(4d))");
  fitc->add_option("--phi", fit_args.stack.phi_kind, "inner function kind: hashed, power");
  fitc->add_option("--seed", fit_args.stack.seed, "hashed phi seed");
  fitc->add_option("--segments", fit_args.stack.segments, "hashed phi segments");
  fitc->add_option("--tolerance", fit_args.tolerance,
                   "float grouping tolerance (default 1e-12 * interval scale)");
  fitc->add_option("--timestamp", fit_args.timestamp, "provenance timestamp text");
  fitc->add_option("--precision", fit_args.precision, "significant digits for float output");

  // check-z
  auto* checkz = app.add_subcommand("check-z", "analyze Condition (Z) on a dataset");
  CheckZArgs cz_args;
  checkz->add_option("data", cz_args.data_path, "dataset CSV path")->required();
  checkz->add_flag("--rational", cz_args.stack.rational, "exact rational arithmetic");
  checkz->add_option("--lambda", cz_args.stack.lambda, "transfer weight (default 1/2)");
  checkz->add_option("--epsilon", cz_args.stack.epsilon, "transfer shift (default 1/(4d))");
  checkz->add_option("--phi", cz_args.stack.phi_kind, "inner function kind: hashed, power");
  checkz->add_option("--seed", cz_args.stack.seed, "hashed phi seed");
  checkz->add_option("--segments", cz_args.stack.segments, "hashed phi segments");
  checkz->add_option("--tolerance", cz_args.tolerance, "float grouping tolerance");
  checkz->add_option("--precision", cz_args.precision, "significant digits for float output");

  // eval
  auto* evalc = app.add_subcommand("eval", "evaluate a fitted network at points");
  EvalArgs eval_args;
  evalc->add_option("network", eval_args.net_path, "network file path")->required();
  evalc->add_option("--point", eval_args.inline_points,
                    "inline point \"c1,c2,...\" (repeatable)");
  evalc->add_option("--points", eval_args.points_path, "CSV of points");
  evalc->add_option("--key-tolerance", eval_args.key_tolerance,
                    "nearest-key lookup tolerance (default exact)");
  evalc->add_option("--precision", eval_args.precision, "significant digits for float output");

  // report
  auto* reportc = app.add_subcommand("report", "residual report of a network on a dataset");
  ReportArgs report_args;
  reportc->add_option("network", report_args.net_path, "network file path")->required();
  reportc->add_option("data", report_args.data_path, "dataset CSV path")->required();
  reportc->add_option("--precision", report_args.precision,
                      "significant digits for float output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  if (gen->parsed()) {
    if (gen_kind == "step") gen_spec.kind = ksn::TargetKind::Step;
    if (gen_kind == "checker") gen_spec.kind = ksn::TargetKind::Checker;
    if (gen_kind == "random") gen_spec.kind = ksn::TargetKind::Random;
    std::string csv = ksn::generate_dataset_csv(gen_spec);
    ksn::write_text_file(gen_out, csv);
    std::cout << "wrote " << gen_out << "\n";
    return 0;
  }
  if (fitc->parsed())
    return fit_args.stack.rational ? run_fit_typed<Rational>(fit_args)
                                   : run_fit_typed<double>(fit_args);
  if (checkz->parsed())
    return cz_args.stack.rational ? run_check_z_typed<Rational>(cz_args)
                                  : run_check_z_typed<double>(cz_args);
  if (evalc->parsed()) {
    ksn::AnyNetwork net = ksn::load_network(eval_args.net_path);
    return std::visit([&](const auto& typed) { return run_eval_typed(typed, eval_args); }, net);
  }
  if (reportc->parsed()) {
    ksn::AnyNetwork net = ksn::load_network(report_args.net_path);
    return std::visit([&](const auto& typed) { return run_report_typed(typed, report_args); },
                      net);
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ksn::GroupingAmbiguity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ksn::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ksn::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ksn::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ksn::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
