// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "oodkit/data.hpp"

namespace fs = std::filesystem;
using oodkit::ImageBatch;
using oodkit::Matrix;

namespace
{

std::string bytes(std::initializer_list<int> v)
{
  std::string s;
  for (int b : v) s.push_back(static_cast<char>(b));
  return s;
}

fs::path scratch_dir(const std::string & name)
{
  const auto p = fs::temp_directory_path() / ("oodkit_test_data_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(auto && fn)
{
  try {
    fn();
  } catch (const std::exception & e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("idx images and labels", "[data][idx]")
{
  const auto img = bytes({0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 1, 2, 3, 4, 5, 6, 7, 8});
  const auto parsed = oodkit::parse_idx(img);
  const auto & b = std::get<ImageBatch>(parsed);
  CHECK(b.count == 2);
  CHECK(b.channels == 1);
  CHECK(b.height == 2);
  CHECK(b.width == 2);
  CHECK(b.pixels == std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(oodkit::serialize_idx(parsed) == img);

  const auto lab = bytes({0, 0, 8, 1, 0, 0, 0, 5, 0, 1, 2, 3, 4});
  const auto lp = oodkit::parse_idx(lab);
  CHECK(std::get<std::vector<std::uint8_t>>(lp).size() == 5);
  CHECK(oodkit::serialize_idx(lp) == lab);

  const auto trunc = img.substr(0, 20);
  const auto msg = error_of([&] { oodkit::parse_idx(trunc); });
  CHECK(msg.find("byte offset 20") != std::string::npos);
  CHECK(msg.find("expected 24") != std::string::npos);

  CHECK(error_of([&] { oodkit::parse_idx(bytes({0, 0, 8, 2, 0, 0, 0, 1, 0})); }).find("offset 0") != std::string::npos);
  CHECK_THROWS_AS(oodkit::parse_idx(bytes({0, 0, 8})), oodkit::DataError);
  CHECK_THROWS_AS(oodkit::parse_idx(img + "x"), oodkit::DataError);
  CHECK_THROWS_AS(
    oodkit::parse_idx(bytes({0, 0, 8, 3, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255})),
    oodkit::DataError);
}

TEST_CASE("idx file round trip", "[data][idx]")
{
  const auto dir = scratch_dir("idx");
  ImageBatch b{3, 1, 4, 5, {}};
  std::mt19937_64 rng(61);
  for (std::size_t i = 0; i < 60; ++i) b.pixels.push_back(static_cast<std::uint8_t>(rng() & 0xff));
  oodkit::write_file_atomic(dir / "img.idx", oodkit::serialize_idx(b));
  CHECK(oodkit::load_idx_images(dir / "img.idx") == b);
  CHECK(oodkit::load_features(dir / "img.idx").rows() == 3);
  CHECK_THROWS_AS(oodkit::load_idx_labels(dir / "img.idx"), oodkit::DataError);
  CHECK_THROWS_AS(oodkit::load_features(dir / "missing.idx"), oodkit::DataError);
}

TEST_CASE("csv features", "[data][csv]")
{
  CHECK(oodkit::parse_csv_features("1,2\n3,4") == Matrix{{1, 2}, {3, 4}});
  CHECK(oodkit::parse_csv_features("a,b\n1,2\n3,4\n") == Matrix{{1, 2}, {3, 4}});
  CHECK(oodkit::parse_csv_features("# note\n1, 2.5\r\n\n-3,4e-1\n") == Matrix{{1, 2.5}, {-3, 0.4}});
  CHECK(error_of([] { oodkit::parse_csv_features("1,2\n3"); }).find("line 2") != std::string::npos);
  CHECK(error_of([] { oodkit::parse_csv_features("1,2\n3,x\n"); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(oodkit::parse_csv_features("a,b\n"), oodkit::DataError);

  const Matrix m{{0.1, 1.0 / 3.0}, {-2e-300, 5}};
  const std::vector<std::string> c{"seed=1"};
  const auto text = oodkit::format_csv_features(m, c);
  CHECK(text.rfind("# seed=1\n", 0) == 0);
  CHECK(oodkit::parse_csv_features(text) == m);
}

TEST_CASE("pixel features", "[data]")
{
  ImageBatch white{1, 1, 2, 2, std::vector<std::uint8_t>(4, 255)};
  ImageBatch black{1, 1, 2, 2, std::vector<std::uint8_t>(4, 0)};
  const auto fw = oodkit::to_features(white);
  const auto fb = oodkit::to_features(black);
  for (double v : fw.data()) CHECK(v == 1.0);
  for (double v : fb.data()) CHECK(v == 0.0);

  ImageBatch mixed{2, 3, 1, 2, {0, 1, 2, 3, 4, 5, 250, 251, 252, 253, 254, 255}};
  CHECK(oodkit::from_features(oodkit::to_features(mixed), 3, 1, 2) == mixed);
  CHECK_THROWS_AS(oodkit::from_features(Matrix(1, 5), 3, 1, 2), oodkit::DimensionError);
}

TEST_CASE("reformat", "[data]")
{
  ImageBatch flat{2, 1, 5, 7, std::vector<std::uint8_t>(70, 137)};
  for (auto [c, h, w] : {std::tuple{1, 3, 3}, {3, 11, 4}, {1, 1, 1}, {3, 5, 7}}) {
    const auto r = oodkit::reformat(flat, c, h, w);
    CHECK(r.count == 2);
    CHECK(r.pixels.size() == 2u * c * h * w);
    for (auto p : r.pixels) CHECK(p == 137);
  }

  ImageBatch rgb{1, 3, 1, 1, {255, 255, 255}};
  CHECK(oodkit::reformat(rgb, 1, 1, 1).pixels == std::vector<std::uint8_t>{255});
  ImageBatch red{1, 3, 1, 1, {255, 0, 0}};
  CHECK(oodkit::reformat(red, 1, 1, 1).pixels == std::vector<std::uint8_t>{76});
  ImageBatch gray{1, 1, 1, 2, {9, 200}};
  CHECK(oodkit::reformat(gray, 3, 1, 2).pixels == std::vector<std::uint8_t>{9, 200, 9, 200, 9, 200});

  ImageBatch ramp{1, 1, 1, 3, {0, 100, 200}};
  CHECK(oodkit::reformat(ramp, 1, 1, 5).pixels == std::vector<std::uint8_t>{0, 50, 100, 150, 200});

  ImageBatch cifar{4, 3, 32, 32, std::vector<std::uint8_t>(4 * 3 * 32 * 32, 10)};
  const auto f = oodkit::to_features(oodkit::reformat(cifar, 1, 28, 28));
  CHECK(f.rows() == 4);
  CHECK(f.cols() == 784);

  CHECK_THROWS_AS(oodkit::reformat(flat, 2, 3, 3), oodkit::ParameterError);
  CHECK_THROWS_AS(oodkit::reformat(flat, 1, 0, 3), oodkit::ParameterError);
}

TEST_CASE("gaussian mixture", "[data][synth]")
{
  const auto layout = oodkit::random_mixture_layout(4, 3, 50, 0.05, 7);
  CHECK(oodkit::synth_gaussian_mixture(layout, 1) == oodkit::synth_gaussian_mixture(layout, 1));
  CHECK_FALSE(oodkit::synth_gaussian_mixture(layout, 1) == oodkit::synth_gaussian_mixture(layout, 2));
  CHECK(oodkit::synth_gaussian_mixture(layout, 1).rows() == 150);

  const std::vector<oodkit::MixtureComponent> zero{{{0.3, -1.0}, {0.0, 0.0}, 10}};
  const auto z = oodkit::synth_gaussian_mixture(zero, 3);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    CHECK(std::abs(z(r, 0) - 0.3) <= 1e-9);
    CHECK(std::abs(z(r, 1) + 1.0) <= 1e-9);
  }

  const std::vector<oodkit::MixtureComponent> one{{{0.5, 0.2}, {0.1, 0.3}, 4000}};
  const auto m = oodkit::synth_gaussian_mixture(one, 9);
  const auto mean = oodkit::mean_vector(m);
  CHECK(std::abs(mean[0] - 0.5) <= 5 * 0.1 / std::sqrt(4000.0));
  CHECK(std::abs(mean[1] - 0.2) <= 5 * 0.3 / std::sqrt(4000.0));

  std::vector<oodkit::MixtureComponent> bad{{{0.0}, {1.0}, 0}};
  CHECK_THROWS_AS(oodkit::synth_gaussian_mixture(bad, 1), oodkit::ParameterError);
  bad[0].count = 1;
  bad[0].deviation = {-1.0};
  CHECK_THROWS_AS(oodkit::synth_gaussian_mixture(bad, 1), oodkit::ParameterError);
}

TEST_CASE("synthetic outliers", "[data][synth]")
{
  oodkit::OutlierSpec spec{oodkit::OutlierKind::uniform_noise, 200, 4, {}};
  const auto a = oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(6));
  CHECK(a == oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(6)));
  CHECK(a.rows() == 200);
  for (double v : a.data()) CHECK((v >= 0.0 && v <= 1.0));

  spec.kind = oodkit::OutlierKind::gaussian_noise;
  const auto g = oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(6));
  for (double v : g.data()) CHECK((v >= 0.0 && v <= 1.0));

  spec.count = 0;
  CHECK_THROWS_AS(oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(6)), oodkit::ParameterError);

  spec = {oodkit::OutlierKind::external_dataset, 3, 1, {}};
  CHECK_THROWS_AS(oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(6)), oodkit::ParameterError);
  CHECK(oodkit::parse_outlier_kind("external_dataset") == oodkit::OutlierKind::external_dataset);
  CHECK_THROWS_AS(oodkit::parse_outlier_kind("salt"), oodkit::ParameterError);
}

TEST_CASE("external outliers from idx and csv", "[data][synth]")
{
  const auto dir = scratch_dir("external");
  ImageBatch mnist{5, 1, 28, 28, std::vector<std::uint8_t>(5 * 784)};
  for (std::size_t i = 0; i < mnist.pixels.size(); ++i) mnist.pixels[i] = static_cast<std::uint8_t>(i % 251);
  oodkit::write_file_atomic(dir / "mnist.idx", oodkit::serialize_idx(mnist));

  oodkit::OutlierSpec spec{oodkit::OutlierKind::external_dataset, 4, 2, dir / "mnist.idx"};
  const auto x = oodkit::synth_outliers(spec, {3, 32, 32});
  CHECK(x.rows() == 4);
  CHECK(x.cols() == 3072);
  CHECK(x == oodkit::synth_outliers(spec, {3, 32, 32}));

  spec.count = 6;
  CHECK_THROWS_AS(oodkit::synth_outliers(spec, {3, 32, 32}), oodkit::ParameterError);

  oodkit::write_file_atomic(dir / "f.csv", "1,2,3\n4,5,6\n");
  spec = {oodkit::OutlierKind::external_dataset, 2, 0, dir / "f.csv"};
  CHECK(oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(3)).rows() == 2);
  CHECK_THROWS_AS(oodkit::synth_outliers(spec, oodkit::OutlierShape::flat(4)), oodkit::DimensionError);
}

TEST_CASE("pnm images and folders", "[data][pnm]")
{
  const auto dir = scratch_dir("pnm");
  ImageBatch rgb{1, 3, 2, 3, {1, 2, 3, 4, 5, 6, 10, 20, 30, 40, 50, 60, 100, 110, 120, 130, 140, 150}};
  const auto enc = oodkit::serialize_pnm(rgb);
  CHECK(enc.rfind("P6\n3 2\n255\n", 0) == 0);
  CHECK(oodkit::parse_pnm(enc) == rgb);
  CHECK(oodkit::parse_pnm("P5\n# comment\n2 1\n255\n\x07\x09") == ImageBatch{1, 1, 1, 2, {7, 9}});
  CHECK_THROWS_AS(oodkit::parse_pnm("P5\n2 2\n255\n\x01"), oodkit::DataError);
  CHECK_THROWS_AS(oodkit::parse_pnm("P3\n1 1\n255\n0"), oodkit::DataError);

  auto second = rgb;
  for (auto & p : second.pixels) p = static_cast<std::uint8_t>(255 - p);
  oodkit::write_file_atomic(dir / "b.ppm", oodkit::serialize_pnm(second));
  oodkit::write_file_atomic(dir / "a.ppm", enc);
  oodkit::write_file_atomic(dir / "notes.txt", "ignored");
  const auto folder = oodkit::load_image_folder(dir);
  CHECK(folder.count == 2);
  CHECK(std::vector<std::uint8_t>(folder.pixels.begin(), folder.pixels.begin() + 18) == rgb.pixels);
  CHECK(oodkit::load_features(dir).rows() == 2);

  oodkit::write_file_atomic(dir / "c.pgm", "P5\n3 2\n255\n123456");
  CHECK(error_of([&] { oodkit::load_image_folder(dir); }).find("folder expects 3x2x3") != std::string::npos);
}
