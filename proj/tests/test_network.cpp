#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ksn/dataset.hpp"
#include "ksn/errors.hpp"
#include "ksn/network.hpp"

using ksn::KolmogorovNetwork;
using ksn::Rational;

namespace {

template <class T>
KolmogorovNetwork<T> fit_network(const ksn::SampleSet<T>& sample) {
  auto stack = ksn::default_stack<T>(sample.d);
  auto result = ksn::fit(stack, sample);
  REQUIRE(std::holds_alternative<ksn::FitSuccess<T>>(result));
  auto& success = std::get<ksn::FitSuccess<T>>(result);
  KolmogorovNetwork<T> net{std::move(stack), std::move(success.tables), {}};
  net.provenance.n_fitted = static_cast<std::int64_t>(sample.size());
  net.provenance.fit_timestamp = "1970-01-01T00:00:00Z";
  net.provenance.residual = ksn::residual_report(net.stack, net.tables, sample).max_abs_residual;
  return net;
}

ksn::SampleSet<Rational> step_lattice_sample() {
  ksn::GenSpec spec;
  spec.kind = ksn::TargetKind::Step;
  spec.d = 2;
  spec.grid = 5;
  return ksn::parse_dataset_csv<Rational>(ksn::generate_dataset_csv(spec));
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("ksn_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("network reproduces a step function sample exactly") {
  auto sample = step_lattice_sample();
  auto net = fit_network(sample);
  for (std::size_t i = 0; i < sample.size(); ++i)
    CHECK(net.eval(sample.points[i]) == sample.values[i]);
  CHECK(net.provenance.residual == Rational(0));
}

TEST_CASE("unkeyed points evaluate to the extension default") {
  auto sample = step_lattice_sample();
  auto net = fit_network(sample);
  // off-lattice point: every block misses its key set
  std::vector<Rational> fresh{Rational(1, 3), Rational(2, 3)};
  bool any_hit = false;
  for (int k = 0; k < net.stack.num_blocks(); ++k)
    if (net.tables[k].lookup(net.stack.w_eval(fresh, k))) any_hit = true;
  REQUIRE(!any_hit);
  CHECK(net.eval(fresh) == Rational(0));
}

TEST_CASE("eval rejects points outside the unit cube") {
  auto net = fit_network(step_lattice_sample());
  std::vector<Rational> bad{Rational(3, 2), Rational(0)};
  CHECK_THROWS_AS(net.eval(bad), ksn::DomainError);
}

TEST_CASE("save / load round trip evaluates identically") {
  SUBCASE("rational") {
    auto net = fit_network(step_lattice_sample());
    TempFile f("roundtrip_q.ksn");
    ksn::save_network(net, f.path);
    auto loaded_any = ksn::load_network(f.path);
    REQUIRE(std::holds_alternative<KolmogorovNetwork<Rational>>(loaded_any));
    const auto& loaded = std::get<KolmogorovNetwork<Rational>>(loaded_any);
    CHECK(loaded.stack.lambda() == net.stack.lambda());
    CHECK(loaded.stack.epsilon() == net.stack.epsilon());
    CHECK(loaded.provenance.n_fitted == net.provenance.n_fitted);
    for (int i = 0; i < 100; ++i) {
      auto x = ksn::test::random_point<Rational>(2, 7, i);
      CHECK(loaded.eval(x) == net.eval(x));
    }
  }
  SUBCASE("float") {
    auto sample = ksn::test::random_sample<double>(2, 20, 3);
    auto net = fit_network(sample);
    TempFile f("roundtrip_d.ksn");
    ksn::save_network(net, f.path);
    auto loaded_any = ksn::load_network(f.path);
    REQUIRE(std::holds_alternative<KolmogorovNetwork<double>>(loaded_any));
    const auto& loaded = std::get<KolmogorovNetwork<double>>(loaded_any);
    for (int i = 0; i < 100; ++i) {
      auto x = ksn::test::random_point<double>(2, 8, i);
      CHECK(loaded.eval(x) == net.eval(x));  // bitwise
    }
  }
}

TEST_CASE("serialization is canonical and preserves fraction strings") {
  auto net = fit_network(step_lattice_sample());
  const std::string a = ksn::serialize_network(net);
  const std::string b = ksn::serialize_network(net);
  CHECK(a == b);
  CHECK(a.find("\"lambda\": \"1/2\"") != std::string::npos);
  CHECK(a.find("\"epsilon\": \"1/8\"") != std::string::npos);
  CHECK(a.back() == '\n');
  // load(serialize) -> serialize is the identity on bytes
  auto reloaded = ksn::parse_network(a);
  const auto& typed = std::get<KolmogorovNetwork<Rational>>(reloaded);
  CHECK(ksn::serialize_network(typed) == a);
}

TEST_CASE("malformed network files raise FormatError with diagnostics") {
  auto net = fit_network(step_lattice_sample());
  const std::string good = ksn::serialize_network(net);

  CHECK_THROWS_AS(ksn::parse_network("{not json"), ksn::FormatError);
  CHECK_THROWS_AS(ksn::parse_network("[]"), ksn::FormatError);

  {
    std::string bad = good;
    const auto pos = bad.find("\"version\": \"1\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 14, "\"version\": \"2\"");
    CHECK_THROWS_WITH_AS(ksn::parse_network(bad), doctest::Contains("version"),
                         ksn::FormatError);
  }
  {
    // drop one lookup table: the block count no longer matches r + 1
    auto any = ksn::parse_network(good);
    auto& typed = std::get<KolmogorovNetwork<Rational>>(any);
    typed.tables.pop_back();
    CHECK_THROWS_WITH_AS(ksn::serialize_network(typed), doctest::Contains("tables"),
                         ksn::FormatError);
  }
  {
    std::string bad = good;
    const auto pos = bad.find("\"numeric_mode\": \"exact_rational\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 32, "\"numeric_mode\": \"decimal\"\x20\x20\x20\x20\x20\x20\x20");
    CHECK_THROWS_AS(ksn::parse_network(bad), ksn::FormatError);
  }
  CHECK_THROWS_AS(ksn::load_network("no_such_file.ksn"), ksn::IoError);
}

TEST_CASE("loading rejects out-of-interval keys") {
  auto net = fit_network(step_lattice_sample());
  std::string text = ksn::serialize_network(net);
  auto any = ksn::parse_network(text);
  auto& typed = std::get<KolmogorovNetwork<Rational>>(any);
  typed.tables[0].entries[0].first = Rational(5);  // outside (0, 1)
  CHECK_THROWS_WITH_AS(ksn::serialize_network(typed), doctest::Contains("interval"),
                       ksn::FormatError);
}

TEST_CASE("float networks store shortest round-trip decimals") {
  auto sample = ksn::test::random_sample<double>(2, 5, 99);
  auto net = fit_network(sample);
  TempFile f("floatnet.ksn");
  ksn::save_network(net, f.path);
  auto loaded = std::get<KolmogorovNetwork<double>>(ksn::load_network(f.path));
  for (int k = 0; k < net.stack.num_blocks(); ++k) {
    REQUIRE(loaded.tables[k].entries.size() == net.tables[k].entries.size());
    for (std::size_t e = 0; e < net.tables[k].entries.size(); ++e) {
      CHECK(loaded.tables[k].entries[e].first == net.tables[k].entries[e].first);
      CHECK(loaded.tables[k].entries[e].second == net.tables[k].entries[e].second);
    }
  }
}
