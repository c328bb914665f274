#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aadb/assoc.hpp"
#include "aadb/error.hpp"
#include "aadb/semiring.hpp"
#include "testutil.hpp"

using aadb::AssociativeArray;
using aadb::Error;
using aadb::ErrorKind;
using aadb::KeyRange;
using aadb::MultiDimRecord;
using aadb::Semiring;
using aadb::TripleRecord;
using aadb::Value;

namespace {

AssociativeArray fromList(std::initializer_list<TripleRecord> triples,
                          const Semiring& s = Semiring::plusTimes()) {
  return AssociativeArray::fromTriples(std::vector<TripleRecord>(triples), s);
}

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected an Error");
}

}  // namespace

TEST_CASE("value tagging and normalization") {
  Value n{2.5};
  CHECK(n.isNumeric());
  CHECK(n.asNumeric() == 2.5);
  CHECK_THROWS_AS((void)n.asText(), Error);

  auto t = Value::text("hi");
  CHECK(t.isText());
  CHECK(t.asText() == "hi");
  CHECK_THROWS_AS((void)t.asNumeric(), Error);

  CHECK(Value{-0.0} == Value{0.0});
  CHECK(kindOf([] { Value v{std::nan("")}; (void)v; }) == ErrorKind::InvalidValue);
  CHECK(kindOf([] { auto v = Value::text("a\tb"); (void)v; }) == ErrorKind::InvalidValue);
  CHECK(kindOf([] { auto v = Value::text("a\nb"); (void)v; }) == ErrorKind::InvalidValue);

  CHECK(Value{3.0} == Value{3.0});
  CHECK(Value{3.0} != Value::text("3"));
}

TEST_CASE("semiring registry and identities") {
  const Semiring& pt = Semiring::byName("plus-times");
  const Semiring& mp = Semiring::byName("max-plus");
  const Semiring& np = Semiring::byName("min-plus");
  CHECK(&pt == &Semiring::plusTimes());
  CHECK(&mp == &Semiring::maxPlus());
  CHECK(&np == &Semiring::minPlus());
  CHECK(kindOf([] { Semiring::byName("boolean"); }) == ErrorKind::BadSpec);

  CHECK(pt.zero() == Value{0.0});
  CHECK(pt.one() == Value{1.0});
  CHECK(mp.zero() == Value{-std::numeric_limits<double>::infinity()});
  CHECK(mp.one() == Value{0.0});
  CHECK(np.zero() == Value{std::numeric_limits<double>::infinity()});
  CHECK(np.one() == Value{0.0});

  CHECK(pt.plus(Value{2}, Value{3}) == Value{5});
  CHECK(pt.times(Value{2}, Value{3}) == Value{6});
  CHECK(mp.plus(Value{2}, Value{3}) == Value{3});
  CHECK(mp.times(Value{2}, Value{3}) == Value{5});
  CHECK(np.plus(Value{2}, Value{3}) == Value{2});
  CHECK(np.times(Value{2}, Value{3}) == Value{5});
}

TEST_CASE("text collides by lexicographic max in every semiring") {
  for (const auto* name : {"plus-times", "max-plus", "min-plus"}) {
    const Semiring& s = Semiring::byName(name);
    CHECK(s.plus(Value::text("apple"), Value::text("pear")) == Value::text("pear"));
    CHECK(s.plus(Value::text("pear"), Value::text("apple")) == Value::text("pear"));
    CHECK(kindOf([&] { s.plus(Value::text("a"), Value{1}); }) == ErrorKind::TypeMismatch);
    CHECK(kindOf([&] { s.times(Value::text("a"), Value::text("b")); }) ==
          ErrorKind::TypeMismatch);
    CHECK(kindOf([&] { s.times(Value::text("a"), Value{1}); }) == ErrorKind::TypeMismatch);
  }
}

TEST_CASE("semiring laws hold on random numeric values") {
  std::mt19937_64 rng(7);
  for (const auto* name : {"plus-times", "max-plus", "min-plus"}) {
    const Semiring& s = Semiring::byName(name);
    for (int i = 0; i < 200; ++i) {
      Value a{testutil::randomIntValue(rng)};
      Value b{testutil::randomIntValue(rng)};
      Value c{testutil::randomIntValue(rng)};
      CHECK(s.plus(a, b) == s.plus(b, a));
      CHECK(s.plus(s.plus(a, b), c) == s.plus(a, s.plus(b, c)));
      CHECK(s.times(s.times(a, b), c) == s.times(a, s.times(b, c)));
      CHECK(s.plus(a, s.zero()) == a);
      CHECK(s.times(a, s.one()) == a);
      CHECK(s.times(s.one(), a) == a);
      // distributivity: a*(b+c) == a*b + a*c
      CHECK(s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c)));
      CHECK(s.times(s.plus(a, b), c) == s.plus(s.times(a, c), s.times(b, c)));
    }
  }
}

TEST_CASE("key validation") {
  CHECK(aadb::isValidKey("a"));
  CHECK(aadb::isValidKey("with space"));
  CHECK_FALSE(aadb::isValidKey(""));
  CHECK_FALSE(aadb::isValidKey("a\tb"));
  CHECK_FALSE(aadb::isValidKey("a\nb"));
  CHECK(kindOf([] { aadb::requireValidKey(""); }) == ErrorKind::InvalidKey);
  CHECK(kindOf([] { TripleRecord t("ok", "bad\tcol", Value{1}); (void)t; }) ==
        ErrorKind::InvalidKey);
}

TEST_CASE("numericKey pads so byte order matches numeric order") {
  CHECK(aadb::numericKey(0) == "00000000000000000000");
  CHECK(aadb::numericKey(42) == "00000000000000000042");
  CHECK(aadb::numericKey(2) < aadb::numericKey(10));
  CHECK(aadb::numericKey(999) < aadb::numericKey(1000));
  CHECK(aadb::numericKey(std::numeric_limits<std::uint64_t>::max()) ==
        "18446744073709551615");

  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t a = rng() >> (rng() % 64);
    std::uint64_t b = rng() >> (rng() % 64);
    CHECK((a < b) == (aadb::numericKey(a) < aadb::numericKey(b)));
  }
}

TEST_CASE("key ranges") {
  auto r = KeyRange::closed("b", "d");
  CHECK(r.contains("b"));
  CHECK(r.contains("c"));
  CHECK(r.contains("d"));
  CHECK_FALSE(r.contains("a"));
  CHECK_FALSE(r.contains("e"));
  CHECK_FALSE(r.isAll());

  CHECK(KeyRange::all().isAll());
  CHECK(KeyRange::all().contains(""));
  CHECK(KeyRange::atLeast("m").contains("z"));
  CHECK_FALSE(KeyRange::atLeast("m").contains("a"));
  CHECK(KeyRange::atMost("m").contains("a"));
  CHECK_FALSE(KeyRange::atMost("m").contains("z"));
  CHECK(KeyRange::single("x").contains("x"));
  CHECK_FALSE(KeyRange::single("x").contains("x "));

  CHECK(kindOf([] { KeyRange::closed("d", "a"); }) == ErrorKind::InvalidRange);

  CHECK(KeyRange::parse(":").isAll());
  CHECK(KeyRange::parse("").isAll());
  auto parsed = KeyRange::parse("a:d");
  CHECK(parsed.start() == "a");
  CHECK(parsed.end() == "d");
  CHECK(KeyRange::parse("a:").end() == std::nullopt);
  CHECK(KeyRange::parse(":d").start() == std::nullopt);
  CHECK(KeyRange::parse("x").start() == "x");
  CHECK(KeyRange::parse("x").end() == "x");
  CHECK(kindOf([] { KeyRange::parse("d:a"); }) == ErrorKind::InvalidRange);
}

TEST_CASE("construction folds duplicates and prunes zeros") {
  auto a = fromList({{"r1", "c1", Value{2}},
                     {"r1", "c1", Value{3}},
                     {"r2", "c2", Value{5}},
                     {"r3", "c3", Value{4}},
                     {"r3", "c3", Value{-4}},
                     {"r4", "c4", Value{0}}});
  CHECK(a.nnz() == 2);
  CHECK(a.at("r1", "c1") == Value{5});
  CHECK(a.at("r2", "c2") == Value{5});
  // absent cells are absent, not stored zeros
  CHECK(a.at("r3", "c3") == std::nullopt);
  CHECK(a.at("nope", "c1") == std::nullopt);

  // no empty rows or columns: pruned keys vanish from the key lists
  CHECK(a.rowKeys() == std::vector<std::string>{"r1", "r2"});
  CHECK(a.colKeys() == std::vector<std::string>{"c1", "c2"});

  // triples come back sorted by (row, col)
  auto unsorted = fromList({{"z", "b", Value{1}}, {"a", "b", Value{2}}, {"z", "a", Value{3}}});
  auto triples = unsorted.toTriples();
  REQUIRE(triples.size() == 3);
  CHECK(triples[0].row == "a");
  CHECK(triples[1].row == "z");
  CHECK(triples[1].col == "a");
  CHECK(triples[2].col == "b");
}

TEST_CASE("construction folds under the array's own semiring") {
  auto mp = fromList({{"r", "c", Value{2}}, {"r", "c", Value{7}}, {"r", "c", Value{3}}},
                     Semiring::maxPlus());
  CHECK(mp.at("r", "c") == Value{7});

  // under max-plus, -inf is the zero and gets pruned; 0.0 is an honest value
  auto z = fromList({{"r", "c", Value{0}},
                     {"r", "d", Value{-std::numeric_limits<double>::infinity()}}},
                    Semiring::maxPlus());
  CHECK(z.nnz() == 1);
  CHECK(z.at("r", "c") == Value{0});

  auto text = fromList({{"r", "c", Value::text("apple")}, {"r", "c", Value::text("pear")}});
  CHECK(text.at("r", "c") == Value::text("pear"));
}

TEST_CASE("add combines entry-wise with semiring plus") {
  auto a = fromList({{"r1", "c1", Value{1}}, {"r1", "c2", Value{2}}, {"r2", "c1", Value{3}}});
  auto b = fromList({{"r1", "c2", Value{10}}, {"r2", "c2", Value{4}}});
  auto sum = a.add(b);
  CHECK(sum.nnz() == 4);
  CHECK(sum.at("r1", "c1") == Value{1});
  CHECK(sum.at("r1", "c2") == Value{12});
  CHECK(sum.at("r2", "c1") == Value{3});
  CHECK(sum.at("r2", "c2") == Value{4});

  // annihilating entries disappear entirely
  auto neg = fromList({{"r1", "c1", Value{-1}}});
  auto cancelled = a.add(neg);
  CHECK(cancelled.nnz() == 2);
  CHECK(cancelled.rowKeys() == std::vector<std::string>{"r1", "r2"});

  auto mp = fromList({{"r", "c", Value{5}}}, Semiring::maxPlus());
  CHECK(kindOf([&] { a.add(mp); }) == ErrorKind::SemiringMismatch);
}

TEST_CASE("elementwiseMultiply keeps only the shared support") {
  auto a = fromList({{"r1", "c1", Value{2}}, {"r1", "c2", Value{3}}, {"r2", "c1", Value{4}}});
  auto b = fromList({{"r1", "c1", Value{5}}, {"r2", "c2", Value{6}}});
  auto prod = a.elementwiseMultiply(b);
  CHECK(prod.nnz() == 1);
  CHECK(prod.at("r1", "c1") == Value{10});

  // operand order is preserved even when the implementation iterates the
  // smaller side: max-plus times is commutative addition, so check with text
  auto textA = fromList({{"r", "c", Value::text("x")}});
  CHECK(kindOf([&] { textA.elementwiseMultiply(textA); }) == ErrorKind::TypeMismatch);
}

TEST_CASE("matmul on a hand example") {
  // A: 2x2, B: 2x2 over plus-times
  auto a = fromList({{"r1", "k1", Value{1}}, {"r1", "k2", Value{2}}, {"r2", "k2", Value{3}}});
  auto b = fromList({{"k1", "c1", Value{4}}, {"k2", "c1", Value{5}}, {"k2", "c2", Value{6}}});
  auto prod = a.matmul(b);
  CHECK(prod.at("r1", "c1") == Value{14});  // 1*4 + 2*5
  CHECK(prod.at("r1", "c2") == Value{12});  // 2*6
  CHECK(prod.at("r2", "c1") == Value{15});  // 3*5
  CHECK(prod.at("r2", "c2") == Value{18});  // 3*6
  CHECK(prod.nnz() == 4);

  // min-plus matmul is shortest-path relaxation
  auto d = fromList({{"a", "b", Value{3}}, {"a", "c", Value{8}}, {"b", "c", Value{2}}},
                    Semiring::minPlus());
  auto two = d.matmul(d);
  CHECK(two.at("a", "c") == Value{5});  // a->b->c beats nothing via 8 (only path of length 2)

  auto text = fromList({{"r", "c", Value::text("x")}});
  auto num = fromList({{"c", "z", Value{1}}});
  CHECK(kindOf([&] { text.matmul(num); }) == ErrorKind::TypeMismatch);

  auto mp = fromList({{"c", "z", Value{1}}}, Semiring::maxPlus());
  CHECK(kindOf([&] { a.matmul(mp); }) == ErrorKind::SemiringMismatch);
}

TEST_CASE("matmul zero cancellation prunes the output cell") {
  auto a = fromList({{"r", "k1", Value{2}}, {"r", "k2", Value{-2}}});
  auto b = fromList({{"k1", "c", Value{3}}, {"k2", "c", Value{3}}, {"k2", "d", Value{1}}});
  auto prod = a.matmul(b);
  CHECK(prod.at("r", "c") == std::nullopt);
  CHECK(prod.nnz() == 1);
  CHECK(prod.at("r", "d") == Value{-2});
}

TEST_CASE("transpose swaps axes and is an involution") {
  auto a = fromList({{"r1", "c1", Value{1}}, {"r2", "c1", Value{2}}, {"r1", "c2", Value{3}}});
  auto t = a.transpose();
  CHECK(t.at("c1", "r1") == Value{1});
  CHECK(t.at("c1", "r2") == Value{2});
  CHECK(t.rowKeys() == a.colKeys());
  CHECK(t.colKeys() == a.rowKeys());
  CHECK(t.transpose() == a);
}

TEST_CASE("select slices closed ranges on both axes") {
  auto a = fromList({{"a", "x", Value{1}},
                     {"b", "x", Value{2}},
                     {"c", "y", Value{3}},
                     {"d", "z", Value{4}},
                     {"e", "z", Value{5}}});
  auto mid = a.select(KeyRange::closed("b", "d"), KeyRange::all());
  CHECK(mid.nnz() == 3);
  CHECK(mid.rowKeys() == std::vector<std::string>{"b", "c", "d"});

  auto cols = a.select(KeyRange::all(), KeyRange::closed("y", "z"));
  CHECK(cols.nnz() == 3);
  CHECK(cols.colKeys() == std::vector<std::string>{"y", "z"});

  CHECK(a.select(KeyRange::all(), KeyRange::all()) == a);
  CHECK(a.select(KeyRange::closed("p", "q"), KeyRange::all()).nnz() == 0);

  // boundary keys are inclusive on both ends
  auto one = a.select(KeyRange::closed("c", "c"), KeyRange::single("y"));
  CHECK(one.nnz() == 1);
  CHECK(one.at("c", "y") == Value{3});
}

TEST_CASE("rowDegrees counts stored entries per row") {
  auto a = fromList({{"r1", "c1", Value{5}},
                     {"r1", "c2", Value::text("t")},
                     {"r1", "c3", Value{-1}},
                     {"r2", "c1", Value{9}}});
  auto deg = a.rowDegrees();
  CHECK(deg.at("r1", "deg") == Value{3});
  CHECK(deg.at("r2", "deg") == Value{1});
  CHECK(deg.colKeys() == std::vector<std::string>{"deg"});
  CHECK(deg.nnz() == 2);
}

TEST_CASE("equality covers cells and semiring") {
  auto a = fromList({{"r", "c", Value{1}}});
  auto b = fromList({{"r", "c", Value{1}}});
  auto c = fromList({{"r", "c", Value{1}}}, Semiring::maxPlus());
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a != fromList({{"r", "c", Value{2}}}));
  CHECK(fromList({}) == fromList({}));
}

TEST_CASE("project flattens multi-dimensional records") {
  using R = MultiDimRecord;
  std::vector<R> pairs = {R({"p1", "d1"}, Value{1}), R({"p2", "d1"}, Value{1}),
                          R({"p1", "d2"}, Value{1})};
  auto byFirst = aadb::project(pairs, 1, Semiring::plusTimes());
  CHECK(byFirst.at("p1", "d1") == Value{1});
  CHECK(byFirst.at("p1", "d2") == Value{1});
  CHECK(byFirst.rowKeys() == std::vector<std::string>{"p1", "p2"});

  auto bySecond = aadb::project(pairs, 2, Semiring::plusTimes());
  CHECK(bySecond.at("d1", "p1") == Value{1});
  CHECK(bySecond.rowKeys() == std::vector<std::string>{"d1", "d2"});

  // three dims: the non-target axes land in dimension-tagged columns
  std::vector<R> trips = {R({"a", "b", "c"}, Value{2}), R({"a", "b2", "c"}, Value{3})};
  auto byFirst3 = aadb::project(trips, 1, Semiring::plusTimes());
  CHECK(byFirst3.at("a", "2|b") == Value{2});
  CHECK(byFirst3.at("a", "3|c") == Value{5});  // both records share dim-3 key c, fold 2+3
  auto byThird3 = aadb::project(trips, 3, Semiring::plusTimes());
  CHECK(byThird3.at("c", "1|a") == Value{5});

  // separator bytes inside keys are escaped in the flattened column
  std::vector<R> tricky = {R({"r", "x|y", "z"}, Value{1})};
  auto flat = aadb::project(tricky, 1, Semiring::plusTimes());
  CHECK(flat.at("r", "2|x\\|y") == Value{1});

  std::vector<R> single = {R({"only"}, Value{1})};
  CHECK(kindOf([&] { aadb::project(single, 1, Semiring::plusTimes()); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kindOf([&] { aadb::project(pairs, 0, Semiring::plusTimes()); }) ==
        ErrorKind::IndexOutOfRange);
  CHECK(kindOf([&] { aadb::project(pairs, 3, Semiring::plusTimes()); }) ==
        ErrorKind::IndexOutOfRange);

  std::vector<R> hollow = {R{{}, Value{1}}};
  CHECK(kindOf([&] { aadb::project(hollow, 1, Semiring::plusTimes()); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("random arrays match the dense oracle") {
  std::mt19937_64 rng(42);
  auto rows = testutil::keyPool("r", 12);
  auto mids = testutil::keyPool("k", 10);
  auto cols = testutil::keyPool("c", 12);

  for (const auto* name : {"plus-times", "max-plus", "min-plus"}) {
    const Semiring& s = Semiring::byName(name);
    for (int iter = 0; iter < 60; ++iter) {
      auto a = testutil::randomArray(rng, rows, mids, s, 0.35);
      auto b = testutil::randomArray(rng, rows, mids, s, 0.35);
      auto c = testutil::randomArray(rng, mids, cols, s, 0.35);

      auto da = testutil::DenseOracle::fromArray(a, rows, mids);
      auto db = testutil::DenseOracle::fromArray(b, rows, mids);
      auto dc = testutil::DenseOracle::fromArray(c, mids, cols);

      CHECK(a.add(b) == da.addWith(db).toArray());
      CHECK(a.elementwiseMultiply(b) == da.hadamardWith(db).toArray());
      CHECK(a.matmul(c) == da.matmulWith(dc).toArray());
    }
  }
}

TEST_CASE("algebraic identities on random arrays") {
  std::mt19937_64 rng(99);
  auto rows = testutil::keyPool("r", 10);
  auto cols = testutil::keyPool("c", 10);
  auto empty = fromList({});

  for (int iter = 0; iter < 40; ++iter) {
    auto a = testutil::randomArray(rng, rows, cols, Semiring::plusTimes(), 0.3);
    auto b = testutil::randomArray(rng, rows, cols, Semiring::plusTimes(), 0.3);
    auto c = testutil::randomArray(rng, rows, cols, Semiring::plusTimes(), 0.3);

    CHECK(a.add(b) == b.add(a));
    CHECK(a.add(b).add(c) == a.add(b.add(c)));
    CHECK(a.elementwiseMultiply(b) == b.elementwiseMultiply(a));
    CHECK(a.add(empty) == a);
    CHECK(a.transpose().transpose() == a);
    CHECK(a.matmul(b).transpose() == b.transpose().matmul(a.transpose()));

    // select is a restriction: re-selecting the same window is idempotent
    auto window = a.select(KeyRange::closed("r2", "r7"), KeyRange::closed("c1", "c8"));
    CHECK(window.select(KeyRange::closed("r2", "r7"), KeyRange::closed("c1", "c8")) == window);
  }
}
