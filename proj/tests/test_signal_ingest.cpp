/*
 * Copyright 2026 The tsauc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tsauc/errors.hpp"
#include "tsauc/random.hpp"
#include "tsauc/signal_ingest.hpp"

using namespace tsauc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tsauc_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p;
  }
};

RawRecording make_recording(const Eigen::VectorXd& t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
  return RawRecording{"test", t, x, y};
}

Eigen::VectorXd irregular_times(Rng& rng, int n, double duration) {
  Eigen::VectorXd t(n);
  t[0] = 0.0;
  for (int i = 1; i < n; ++i) t[i] = t[i - 1] + 0.5 + rng.uniform01();
  t *= duration / t[n - 1];
  return t;
}

}  // namespace

TEST_SUITE("signal_ingest") {

TEST_CASE("reads a minimal well-formed file") {
  TempDir dir;
  const fs::path p = dir.file("subj7.csv", "t,x,y\n0.0,1.0,2.0\n0.04,1.1,2.1\n");
  const RawRecording rec = read_recording(p);
  CHECK(rec.subject_id == "subj7");
  CHECK(rec.t.size() == 2);
  CHECK(rec.x[1] == 1.1);
  CHECK(rec.y[0] == 2.0);
}

TEST_CASE("subject_id comment overrides the file stem") {
  TempDir dir;
  const fs::path p = dir.file(
      "anything.csv", "# subject_id: patient42\nt,x,y\n0,0,0\n0.1,1,1\n");
  CHECK(read_recording(p).subject_id == "patient42");
}

TEST_CASE("non-increasing timestamps are rejected") {
  TempDir dir;
  const fs::path p = dir.file("a.csv", "t,x,y\n0.0,1,1\n0.0,2,2\n");
  CHECK_THROWS_WITH_AS(read_recording(p),
                       doctest::Contains("non-increasing timestamps"),
                       ValidationError);
}

TEST_CASE("NaN values are rejected with the offending location") {
  TempDir dir;
  const fs::path p = dir.file("b.csv", "t,x,y\n0.0,1,1\n0.1,NaN,2\n");
  CHECK_THROWS_WITH_AS(read_recording(p), doctest::Contains(":3"),
                       ValidationError);
}

TEST_CASE("malformed rows name the line") {
  TempDir dir;
  CHECK_THROWS_WITH_AS(read_recording(dir.file("c.csv", "t,x,y\n0.0,oops,1\n")),
                       doctest::Contains(":2"), ParseError);
  CHECK_THROWS_WITH_AS(read_recording(dir.file("d.csv", "t,x,y\n0.0,1\n")),
                       doctest::Contains("3 comma-separated"), ParseError);
  CHECK_THROWS_AS(read_recording(dir.file("e.csv", "time,x,y\n0,1,1\n")),
                  ParseError);
  CHECK_THROWS_AS(read_recording(dir.file("f.csv", "t,x,y\n0.0,1,1\n")),
                  ValidationError);  // single sample
}

TEST_CASE("resampling a uniform grid at its own rate is the identity") {
  const int n = 251;
  Eigen::VectorXd t(n), x(n), y(n);
  Rng rng(3);
  for (int i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) / 25.0;
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  const Statokinesigram s = resample(make_recording(t, x, y), 25.0, 0.04);
  REQUIRE(s.x.size() == n);
  CHECK((s.x - x).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((s.y - y).cwiseAbs().maxCoeff() < 1e-9);

  // Same at the default window of 2/rate.
  const Statokinesigram s2 = resample(make_recording(t, x, y), 25.0);
  CHECK((s2.x - x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("constant signals stay constant under resampling") {
  Rng rng(4);
  const Eigen::VectorXd t = irregular_times(rng, 100, 4.0);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(100, 3.0);
  const Statokinesigram s = resample(make_recording(t, c, c), 25.0);
  CHECK((s.x.array() - 3.0).abs().maxCoeff() < 1e-12);
  CHECK((s.y.array() - 3.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("linear ramp lands within half a window of the grid value") {
  Rng rng(5);
  const int n = 120;  // max gap ~ 0.017 s < window/2, so no window is empty
  Eigen::VectorXd t = irregular_times(rng, n, 1.0);
  const Statokinesigram s = resample(make_recording(t, t, t), 25.0);
  const double window = 2.0 / 25.0;
  for (Eigen::Index k = 0; k < s.x.size(); ++k) {
    const double tk = static_cast<double>(k) / 25.0;
    CHECK(std::abs(s.x[k] - tk) <= window / 2.0 + 1e-12);
  }
}

TEST_CASE("resample is idempotent on its own output") {
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 40 + rng.uniform_int(0, 60);
    const Eigen::VectorXd t = irregular_times(rng, n, 3.0 + rng.uniform01());
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const Statokinesigram first = resample(make_recording(t, x, y), 25.0);
    Eigen::VectorXd grid(first.x.size());
    for (Eigen::Index k = 0; k < grid.size(); ++k)
      grid[k] = t[0] + static_cast<double>(k) / 25.0;
    const Statokinesigram second =
        resample(make_recording(grid, first.x, first.y), 25.0);
    REQUIRE(second.x.size() == first.x.size());
    CHECK((second.x - first.x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((second.y - first.y).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("output length is floor(duration * rate) + 1") {
  Eigen::VectorXd t(2), v(2);
  v << 0.0, 1.0;
  t << 0.0, 1.0;
  CHECK(resample(make_recording(t, v, v), 25.0).x.size() == 26);
  t << 0.0, 0.999;
  CHECK(resample(make_recording(t, v, v), 25.0).x.size() == 25);
  t << 0.0, 1.0401;
  CHECK(resample(make_recording(t, v, v), 25.0).x.size() == 27);
}

TEST_CASE("outputs stay within the input range") {
  Rng rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 30 + rng.uniform_int(0, 100);
    const Eigen::VectorXd t = irregular_times(rng, n, 2.0 + 2.0 * rng.uniform01());
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal() * 5.0;
      y[i] = rng.normal();
    }
    const Statokinesigram s = resample(make_recording(t, x, y), 25.0);
    CHECK(s.x.minCoeff() >= x.minCoeff() - 1e-12);
    CHECK(s.x.maxCoeff() <= x.maxCoeff() + 1e-12);
    CHECK(s.y.minCoeff() >= y.minCoeff() - 1e-12);
    CHECK(s.y.maxCoeff() <= y.maxCoeff() + 1e-12);
  }
}

TEST_CASE("too-short recordings are rejected") {
  Eigen::VectorXd t(2), v(2);
  t << 0.0, 0.01;
  v << 1.0, 2.0;
  CHECK_THROWS_WITH_AS(resample(make_recording(t, v, v), 25.0),
                       doctest::Contains("too short"), ValidationError);
}

TEST_CASE("gap filling interpolates between filled neighbours") {
  // Two dense clusters separated by a 1-second hole; the hole is linearly
  // interpolated between the nearest filled grid values.
  Eigen::VectorXd t(8), x(8);
  t << 0.0, 0.02, 0.04, 0.06, 1.06, 1.08, 1.10, 1.12;
  x << 0.0, 0.0, 0.0, 0.0, 10.0, 10.0, 10.0, 10.0;
  const Statokinesigram s = resample(make_recording(t, x, x), 25.0);
  for (Eigen::Index k = 1; k < s.x.size(); ++k)
    CHECK(s.x[k] >= s.x[k - 1] - 1e-12);  // monotone across the gap
  CHECK(s.x[0] == doctest::Approx(0.0));
  CHECK(s.x[s.x.size() - 1] == doctest::Approx(10.0));
}

}  // TEST_SUITE
