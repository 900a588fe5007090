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
#include "tsauc/signal_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "tsauc/errors.hpp"

namespace tsauc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line_no) {
  const std::string f = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc{} || ptr != f.data() + f.size())
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": malformed number '" + f + "'");
  return value;
}

}  // namespace

void validate(const RawRecording& rec) {
  const Eigen::Index n = rec.t.size();
  if (n != rec.x.size() || n != rec.y.size())
    throw ValidationError("recording '" + rec.subject_id + "': t/x/y length mismatch");
  if (n < 2)
    throw ValidationError("recording '" + rec.subject_id + "': fewer than 2 samples");
  if (!rec.t.allFinite() || !rec.x.allFinite() || !rec.y.allFinite())
    throw ValidationError("recording '" + rec.subject_id + "': non-finite value");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(rec.t[i] > rec.t[i - 1]))
      throw ValidationError("recording '" + rec.subject_id +
                            "': non-increasing timestamps at sample " +
                            std::to_string(i));
}

void validate(const Statokinesigram& s) {
  if (s.x.size() != s.y.size())
    throw ValidationError("statokinesigram '" + s.subject_id + "': x/y length mismatch");
  if (s.x.size() < 2)
    throw ValidationError("statokinesigram '" + s.subject_id + "': fewer than 2 samples");
  if (!(s.rate_hz > 0.0))
    throw ValidationError("statokinesigram '" + s.subject_id + "': rate must be positive");
  if (!s.x.allFinite() || !s.y.allFinite())
    throw ValidationError("statokinesigram '" + s.subject_id + "': non-finite value");
}

RawRecording read_recording(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file: " + path.string());

  RawRecording rec;
  rec.subject_id = path.stem().string();

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> tv, xv, yv;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (!header_seen && stripped.front() == '#') {
      // `# subject_id: NAME` overrides the file-stem id.
      const auto colon = stripped.find(':');
      if (colon != std::string::npos) {
        const std::string key = trim(stripped.substr(1, colon - 1));
        if (key == "subject_id") rec.subject_id = trim(stripped.substr(colon + 1));
      }
      continue;
    }
    if (!header_seen) {
      std::string compact;
      for (char c : stripped)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != "t,x,y")
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": expected header 't,x,y', got '" + stripped + "'");
      header_seen = true;
      continue;
    }

    const auto c1 = stripped.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : stripped.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        stripped.find(',', c2 + 1) != std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 3 comma-separated fields");
    const double t = parse_double(std::string_view(stripped).substr(0, c1), path, line_no);
    const double x = parse_double(std::string_view(stripped).substr(c1 + 1, c2 - c1 - 1), path, line_no);
    const double y = parse_double(std::string_view(stripped).substr(c2 + 1), path, line_no);
    if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y))
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": non-finite value");
    tv.push_back(t);
    xv.push_back(x);
    yv.push_back(y);
  }
  if (!header_seen)
    throw ParseError(path.string() + ": missing 't,x,y' header");

  rec.t = Eigen::Map<Eigen::VectorXd>(tv.data(), static_cast<Eigen::Index>(tv.size()));
  rec.x = Eigen::Map<Eigen::VectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size()));
  rec.y = Eigen::Map<Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
  validate(rec);
  return rec;
}

Statokinesigram resample(const RawRecording& rec, double rate_hz, double window_s) {
  validate(rec);
  if (!(rate_hz > 0.0)) throw ValidationError("resample: rate must be positive");
  if (window_s <= 0.0) window_s = 2.0 / rate_hz;

  const Eigen::Index n = rec.t.size();
  const double t0 = rec.t[0];
  const double duration = rec.t[n - 1] - t0;
  if (duration < 1.0 / rate_hz)
    throw ValidationError("recording '" + rec.subject_id + "' too short: " +
                          std::to_string(duration) + " s at " +
                          std::to_string(rate_hz) + " Hz");

  const Eigen::Index n_out =
      static_cast<Eigen::Index>(std::floor(duration * rate_hz + 1e-9)) + 1;

  // Each input sample represents half the gap to each of its neighbours.
  Eigen::VectorXd weight(n);
  weight[0] = (rec.t[1] - rec.t[0]) / 2.0;
  weight[n - 1] = (rec.t[n - 1] - rec.t[n - 2]) / 2.0;
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    weight[i] = (rec.t[i + 1] - rec.t[i - 1]) / 2.0;

  // The window is open and fractionally shrunk so that a grid-aligned input
  // maps to itself: with the default window of 2/rate, the neighbours of a
  // uniform sample sit exactly on the boundary and must stay outside.
  const double half = window_s / 2.0 * (1.0 - 1e-9);

  Statokinesigram out;
  out.subject_id = rec.subject_id;
  out.rate_hz = rate_hz;
  out.x.resize(n_out);
  out.y.resize(n_out);
  std::vector<bool> filled(static_cast<std::size_t>(n_out), false);

  const double* tb = rec.t.data();
  for (Eigen::Index k = 0; k < n_out; ++k) {
    const double tk = t0 + static_cast<double>(k) / rate_hz;
    const auto lo = std::lower_bound(tb, tb + n, tk - half) - tb;
    const auto hi = std::upper_bound(tb, tb + n, tk + half) - tb;
    double wsum = 0.0, xs = 0.0, ys = 0.0;
    for (Eigen::Index i = lo; i < hi; ++i) {
      if (std::abs(rec.t[i] - tk) >= half) continue;
      wsum += weight[i];
      xs += weight[i] * rec.x[i];
      ys += weight[i] * rec.y[i];
    }
    if (wsum > 0.0) {
      out.x[k] = xs / wsum;
      out.y[k] = ys / wsum;
      filled[static_cast<std::size_t>(k)] = true;
    }
  }

  // Fill empty windows by linear interpolation between the nearest filled
  // neighbours; edge gaps copy the nearest filled value. Grid point 0 always
  // contains t_0, so at least one position is filled.
  Eigen::Index prev = -1;
  for (Eigen::Index k = 0; k < n_out; ++k) {
    if (filled[static_cast<std::size_t>(k)]) {
      if (prev >= 0 && k - prev > 1) {
        for (Eigen::Index g = prev + 1; g < k; ++g) {
          const double f = static_cast<double>(g - prev) / static_cast<double>(k - prev);
          out.x[g] = out.x[prev] + f * (out.x[k] - out.x[prev]);
          out.y[g] = out.y[prev] + f * (out.y[k] - out.y[prev]);
        }
      } else if (prev < 0) {
        for (Eigen::Index g = 0; g < k; ++g) {
          out.x[g] = out.x[k];
          out.y[g] = out.y[k];
        }
      }
      prev = k;
    }
  }
  if (prev < 0)
    throw ValidationError("resample: no window captured any sample");
  for (Eigen::Index g = prev + 1; g < n_out; ++g) {
    out.x[g] = out.x[prev];
    out.y[g] = out.y[prev];
  }

  validate(out);
  return out;
}

}  // namespace tsauc
