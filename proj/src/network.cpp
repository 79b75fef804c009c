#include "ksn/network.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ksn/errors.hpp"

namespace ksn {

using json = nlohmann::ordered_json;

template <ScalarField T>
void KolmogorovNetwork<T>::validate() const {
  if (static_cast<int>(tables.size()) != stack.num_blocks())
    throw FormatError("tables: expected " + std::to_string(stack.num_blocks()) +
                      " lookup tables, got " + std::to_string(tables.size()));
  for (int k = 0; k < stack.num_blocks(); ++k) {
    const auto& table = tables[k];
    if (table.k != k)
      throw FormatError("tables[" + std::to_string(k) + "]: block index " +
                        std::to_string(table.k) + " out of order");
    const auto& iv = stack.intervals()[k];
    const T* prev = nullptr;
    for (std::size_t e = 0; e < table.entries.size(); ++e) {
      const T& key = table.entries[e].first;
      if (!(key > iv.lo) || !(key < iv.hi))
        throw FormatError("tables[" + std::to_string(k) + "].entries[" + std::to_string(e) +
                          "]: key " + format_number(key) + " outside block interval");
      if (prev && !(*prev < key))
        throw FormatError("tables[" + std::to_string(k) + "].entries[" + std::to_string(e) +
                          "]: keys not strictly increasing");
      prev = &key;
    }
  }
}

template <ScalarField T>
T KolmogorovNetwork<T>::eval(std::span<const T> x, const T& key_tolerance) const {
  T out(0);
  for (int k = 0; k < stack.num_blocks(); ++k)
    out += tables[k].value_or_default(stack.w_eval(x, k), key_tolerance);
  return out;
}

namespace {

template <ScalarField T>
json interval_json(const Interval<T>& iv) {
  return json::array({format_number(iv.lo), format_number(iv.hi)});
}

template <ScalarField T>
json phi_json(const InnerFunctionSpec<T>& phi) {
  json j = json::object();
  j["kind"] = inner_phi_kind_name(phi.kind());
  if (phi.kind() == InnerPhiKind::HashedPiecewiseLinear) {
    j["seed"] = std::to_string(phi.seed());
    j["segments"] = phi.segments();
  }
  j["domain"] = json::array({format_number(phi.domain_lo()), format_number(phi.domain_hi())});
  return j;
}

}  // namespace

template <ScalarField T>
std::string serialize_network(const KolmogorovNetwork<T>& net) {
  net.validate();
  json j = json::object();
  j["version"] = "1";
  j["numeric_mode"] = numeric_mode_name(numeric_mode_v<T>);
  json stack = json::object();
  stack["d"] = net.stack.d();
  stack["r"] = net.stack.r();
  stack["lambda"] = format_number(net.stack.lambda());
  stack["epsilon"] = format_number(net.stack.epsilon());
  json intervals = json::array();
  for (const auto& iv : net.stack.intervals()) intervals.push_back(interval_json(iv));
  stack["intervals"] = std::move(intervals);
  stack["phi"] = phi_json(net.stack.phi());
  j["stack"] = std::move(stack);
  json tables = json::array();
  for (const auto& table : net.tables) {
    json t = json::object();
    t["k"] = table.k;
    t["default"] = format_number(table.default_value);
    json entries = json::array();
    for (const auto& [key, value] : table.entries)
      entries.push_back(json::array({format_number(key), format_number(value)}));
    t["entries"] = std::move(entries);
    tables.push_back(std::move(t));
  }
  j["tables"] = std::move(tables);
  json prov = json::object();
  prov["n_fitted"] = net.provenance.n_fitted;
  prov["fit_timestamp"] = net.provenance.fit_timestamp;
  prov["residual"] = format_number(net.provenance.residual);
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

template <ScalarField T>
void save_network(const KolmogorovNetwork<T>& net, const std::string& path) {
  std::string text = serialize_network(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

const json& require_field(const json& j, const char* name, const std::string& where) {
  auto it = j.find(name);
  if (it == j.end()) throw FormatError(where + ": missing field '" + name + "'");
  return *it;
}

std::string require_string(const json& j, const char* name, const std::string& where) {
  const json& f = require_field(j, name, where);
  if (!f.is_string()) throw FormatError(where + "." + name + ": expected a string");
  return f.get<std::string>();
}

std::int64_t require_int(const json& j, const char* name, const std::string& where) {
  const json& f = require_field(j, name, where);
  if (!f.is_number_integer()) throw FormatError(where + "." + name + ": expected an integer");
  return f.get<std::int64_t>();
}

template <ScalarField T>
T require_number(const json& j, const char* name, const std::string& where) {
  std::string text = require_string(j, name, where);
  try {
    return parse_number<T>(text);
  } catch (const FormatError& e) {
    throw FormatError(where + "." + name + ": " + e.what());
  }
}

template <ScalarField T>
Interval<T> parse_interval(const json& f, const std::string& where) {
  if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_string())
    throw FormatError(where + ": expected [\"lo\", \"hi\"]");
  return Interval<T>{parse_number<T>(f[0].get<std::string>()),
                     parse_number<T>(f[1].get<std::string>())};
}

template <ScalarField T>
KolmogorovNetwork<T> parse_typed(const json& j) {
  const json& jstack = require_field(j, "stack", "network");
  const int d = static_cast<int>(require_int(jstack, "d", "stack"));
  const int r = static_cast<int>(require_int(jstack, "r", "stack"));
  if (r != 2 * d) throw FormatError("stack.r: expected 2*d");
  T lambda = require_number<T>(jstack, "lambda", "stack");
  T epsilon = require_number<T>(jstack, "epsilon", "stack");

  const json& jintervals = require_field(jstack, "intervals", "stack");
  if (!jintervals.is_array())
    throw FormatError("stack.intervals: expected an array");
  std::vector<Interval<T>> intervals;
  for (std::size_t i = 0; i < jintervals.size(); ++i)
    intervals.push_back(
        parse_interval<T>(jintervals[i], "stack.intervals[" + std::to_string(i) + "]"));

  const json& jphi = require_field(jstack, "phi", "stack");
  std::string kind = require_string(jphi, "kind", "stack.phi");
  const json& jdomain = require_field(jphi, "domain", "stack.phi");
  if (!jdomain.is_array() || jdomain.size() != 2)
    throw FormatError("stack.phi.domain: expected [\"lo\", \"hi\"]");
  T domain_hi = parse_number<T>(jdomain[1].get<std::string>());
  InnerFunctionSpec<T> phi = [&] {
    if (kind == "hashed_piecewise_linear") {
      std::string seed_text = require_string(jphi, "seed", "stack.phi");
      std::uint64_t seed = 0;
      try {
        std::size_t pos = 0;
        seed = std::stoull(seed_text, &pos);
        if (pos != seed_text.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw FormatError("stack.phi.seed: malformed unsigned integer");
      }
      const int segments = static_cast<int>(require_int(jphi, "segments", "stack.phi"));
      return InnerFunctionSpec<T>::hashed_piecewise_linear(seed, segments, domain_hi);
    }
    if (kind == "transcendental_power")
      return InnerFunctionSpec<T>::transcendental_power(domain_hi);
    throw FormatError("stack.phi.kind: unknown kind '" + kind + "'");
  }();

  KolmogorovNetwork<T> net{
      TransferStack<T>(d, std::move(lambda), std::move(epsilon), std::move(phi),
                       std::move(intervals)),
      {},
      {}};

  const json& jtables = require_field(j, "tables", "network");
  if (!jtables.is_array()) throw FormatError("tables: expected an array");
  for (std::size_t i = 0; i < jtables.size(); ++i) {
    const std::string where = "tables[" + std::to_string(i) + "]";
    const json& jt = jtables[i];
    LookupTable<T> table;
    table.k = static_cast<int>(require_int(jt, "k", where));
    table.default_value = require_number<T>(jt, "default", where);
    const json& jentries = require_field(jt, "entries", where);
    if (!jentries.is_array()) throw FormatError(where + ".entries: expected an array");
    for (std::size_t e = 0; e < jentries.size(); ++e) {
      const json& je = jentries[e];
      if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string())
        throw FormatError(where + ".entries[" + std::to_string(e) +
                          "]: expected [\"key\", \"value\"]");
      table.entries.emplace_back(parse_number<T>(je[0].get<std::string>()),
                                 parse_number<T>(je[1].get<std::string>()));
    }
    net.tables.push_back(std::move(table));
  }

  const json& jprov = require_field(j, "provenance", "network");
  net.provenance.n_fitted = require_int(jprov, "n_fitted", "provenance");
  net.provenance.fit_timestamp = require_string(jprov, "fit_timestamp", "provenance");
  net.provenance.residual = require_number<T>(jprov, "residual", "provenance");

  net.validate();
  return net;
}

}  // namespace

AnyNetwork parse_network(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("network: expected a JSON object");
  const std::string version = require_string(j, "version", "network");
  if (version != "1") throw FormatError("version: unknown version '" + version + "'");
  const std::string mode = require_string(j, "numeric_mode", "network");
  if (mode == "float64") return parse_typed<double>(j);
  if (mode == "exact_rational") return parse_typed<Rational>(j);
  throw FormatError("numeric_mode: unknown mode '" + mode + "'");
}

AnyNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return parse_network(buf.str());
}

template struct KolmogorovNetwork<double>;
template struct KolmogorovNetwork<Rational>;
template std::string serialize_network<double>(const KolmogorovNetwork<double>&);
template std::string serialize_network<Rational>(const KolmogorovNetwork<Rational>&);
template void save_network<double>(const KolmogorovNetwork<double>&, const std::string&);
template void save_network<Rational>(const KolmogorovNetwork<Rational>&, const std::string&);

}  // namespace ksn
