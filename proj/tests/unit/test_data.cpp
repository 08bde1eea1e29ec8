#include "doctest.h"
#include "oracles.hpp"
#include "tmpdir.hpp"

#include "nysreg/data.hpp"
#include "nysreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

using namespace nysreg;

TEST_CASE("load_csv basics") {
  const std::string path = testutil::scratch("two.csv");
  testutil::write_text(path, "0.5,1\n1.5,-1\n");
  const Dataset d = load_csv(path, {});
  CHECK(d.n() == 2);
  CHECK(d.m() == 2);
  CHECK(d.x(1, 0) == 1.5);
  CHECK(d.y(1, 0) == -1.0);

  CsvOptions none;
  none.labeled_count = 0;
  try {
    load_csv(path, none);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("no labeled data") != std::string::npos);
  }
}

TEST_CASE("load_csv options") {
  const std::string path = testutil::scratch("hdr.csv");
  testutil::write_text(path, "lab,a,b\n1,0.1,0.2\n-1,0.3,0.4\n1,0.5,0.6\n");
  CsvOptions opts;
  opts.has_header = true;
  opts.label_column = 0;
  opts.labeled_count = 2;
  const Dataset d = load_csv(path, opts);
  CHECK(d.n() == 3);
  CHECK(d.m() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.x(2, 1) == 0.6);
  opts.max_rows = 1;
  CHECK_THROWS_AS(load_csv(path, opts), DataError);
  opts.labeled_count = 1;
  CHECK(load_csv(path, opts).n() == 1);
}

TEST_CASE("load_csv parse errors name the location") {
  const std::string path = testutil::scratch("bad.csv");
  testutil::write_text(path, "1,2,1\n3,oops,-1\n");
  try {
    load_csv(path, {});
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string what = e.what();
    CHECK(what.find("2") != std::string::npos);
    CHECK(what.find("oops") != std::string::npos);
  }
  testutil::write_text(path, "1,2,1\n3,-1\n");
  CHECK_THROWS_AS(load_csv(path, {}), DataError);
  CHECK_THROWS_AS(load_csv(testutil::scratch("does-not-exist.csv"), {}), DataError);
}

TEST_CASE("write_dataset_csv round trip") {
  std::mt19937_64 rng(1);
  Dataset d;
  d.x = oracle::random_points(rng, 5, 3);
  d.y = oracle::random_matrix(rng, 3, 1);
  const std::string path = testutil::scratch("rt.csv");
  {
    std::ostringstream os;
    write_dataset_csv(os, d);
    testutil::write_text(path, os.str());
  }
  CsvOptions opts;
  opts.labeled_count = 3;
  const Dataset back = load_csv(path, opts);
  CHECK(back.x == d.x);
  CHECK(back.y == d.y);
}

namespace {

std::vector<std::string> nsl_row(const std::string& protocol, const std::string& service,
                                 const std::string& flag, double duration, double bytes,
                                 const std::string& label) {
  std::vector<std::string> row(41, "0");
  row[0] = std::to_string(duration);
  row[1] = protocol;
  row[2] = service;
  row[3] = flag;
  row[4] = std::to_string(bytes);
  row[40] = "0.5";
  row.push_back(label);
  row.push_back("20");
  return row;
}

}  // namespace

TEST_CASE("preprocess_nslkdd") {
  const RawTable rows{nsl_row("tcp", "http", "SF", 0, 100, "normal"),
                      nsl_row("udp", "private", "REJ", 2, 300, "neptune"),
                      nsl_row("icmp", "ecr_i", "SF", 4, 200, "smurf")};
  const NslKddData out = preprocess_nslkdd(rows);
  // columns kept: duration, protocol, service, flag, src_bytes, last
  CHECK(out.encoding.kept_columns == std::vector<std::size_t>{0, 1, 2, 3, 4, 40});
  CHECK(out.encoded(1, 1) == 1.0);
  CHECK(out.encoded(2, 1) == 2.0);
  CHECK(out.encoding.services == std::vector<std::string>{"ecr_i", "http", "private"});
  CHECK(out.encoded(0, 2) == 1.0);
  CHECK(out.labels(0) == -1.0);
  CHECK(out.labels(1) == 1.0);
  for (Eigen::Index c = 0; c < out.dataset.x.cols(); ++c) {
    const auto col = out.dataset.x.col(c);
    if (out.encoded.col(c).maxCoeff() > out.encoded.col(c).minCoeff()) {
      CHECK(col.minCoeff() == 0.0);
      CHECK(col.maxCoeff() == 1.0);
    } else {
      CHECK(col.isZero(0.0));
    }
  }
  RawTable bad = rows;
  bad[0][1] = "sctp";
  CHECK_THROWS_AS(preprocess_nslkdd(bad), DataError);
  CHECK_THROWS_AS(preprocess_nslkdd(RawTable{}), DataError);
}

TEST_CASE("NSL-KDD head has 39 attributes") {
  std::string path;
  if (const char* env = std::getenv("NYSREG_NSLKDD")) path = env;
  else if (const char* dir = std::getenv("NYSREG_DATA_DIR")) path = std::string(dir) + "/KDDTrain+_20Percent.txt";
  if (path.empty() || !std::filesystem::exists(path)) {
    MESSAGE("NSL-KDD file not present, skipped");
    return;
  }
  const NslKddData out = preprocess_nslkdd(read_csv_table(path, false, 25000));
  CHECK(out.dataset.n() == 25000);
  CHECK(out.dataset.dim() == 39);
}

TEST_CASE("min-max scaler uses training statistics") {
  PointSet train(3, 2);
  train << 0, 5, 2, 5, 4, 5;
  const MinMaxScaler s = MinMaxScaler::fit(train);
  const PointSet t = s.transform(train);
  CHECK(t(1, 0) == 0.5);
  CHECK(t.col(1).isZero(0.0));
  PointSet test(1, 2);
  test << 8, 6;
  CHECK(s.transform(test)(0, 0) == 2.0);
  CHECK_THROWS_AS(s.transform(PointSet(1, 3)), InvalidArgument);
}

TEST_CASE("kfold_split") {
  const auto seq = kfold_split(10, 5, FoldScheme::paper_sequential);
  REQUIRE(seq.size() == 5);
  CHECK(seq[0].test == IndexList{0, 1});
  CHECK(seq[1].test == IndexList{2, 3});
  CHECK(seq[4].test == IndexList{8, 9});
  CHECK(seq[0].train.size() == 8);

  const auto big = kfold_split(25000, 10, FoldScheme::paper_sequential);
  for (const auto& f : big) CHECK(f.test.size() == 2500);

  const auto odd = kfold_split(11, 3, FoldScheme::shuffled, 9);
  std::set<std::size_t> seen;
  std::size_t count = 0;
  for (const auto& f : odd) {
    CHECK(f.train.size() + f.test.size() == 11);
    for (auto i : f.test) seen.insert(i);
    count += f.test.size();
  }
  CHECK(count == 11);
  CHECK(seen.size() == 11);
  CHECK(odd[2].test.size() == 5);

  const auto again = kfold_split(11, 3, FoldScheme::shuffled, 9);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again[i].test == odd[i].test);

  CHECK_THROWS_AS(kfold_split(10, 1, FoldScheme::paper_sequential), InvalidArgument);
  CHECK_THROWS_AS(kfold_split(3, 4, FoldScheme::paper_sequential), InvalidArgument);
}

TEST_CASE("paper_protocol_splits") {
  const auto splits = paper_protocol_splits(100, 10);
  REQUIRE(splits.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(splits[i].train.size() == 10);
    CHECK(splits[i].train.front() == 10 * i);
    CHECK(splits[i].test.front() == 90);
    CHECK(splits[i].test.size() == 10);
  }
}

TEST_CASE("gen_synthetic") {
  SyntheticTarget target{(PointSet(2, 2) << 0.2, 0.3, 0.7, 0.6).finished(),
                         (Vector(2) << 1.0, -0.5).finished(), KernelSpec::gaussian(3.0), 0.0};
  const SyntheticSample clean = gen_synthetic(target, 20, 30, 4);
  CHECK(clean.data.n() == 30);
  CHECK(clean.data.m() == 20);
  CHECK(clean.data.y.col(0) == clean.truth.head(20));
  CHECK(clean.truth == target.evaluate(clean.data.x));
  CHECK(clean.data.x.minCoeff() >= 0.0);
  CHECK(clean.data.x.maxCoeff() <= 1.0);

  target.noise_sigma = 0.3;
  const SyntheticSample a = gen_synthetic(target, 100000, 100000, 5);
  const SyntheticSample b = gen_synthetic(target, 100000, 100000, 5);
  CHECK(a.data.x == b.data.x);
  CHECK(a.data.y == b.data.y);
  const double mean = (a.data.y.col(0) - a.truth).mean();
  CHECK(std::abs(mean) <= 3.0 * 0.3 / std::sqrt(1e5));
  const double sd = std::sqrt((a.data.y.col(0) - a.truth).squaredNorm() / 1e5);
  CHECK(sd == doctest::Approx(0.3).epsilon(0.02));

  CHECK_THROWS_AS(gen_synthetic(target, 5, 4, 1), InvalidArgument);
}
