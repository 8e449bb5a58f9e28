// Copyright (c) the svs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "doctest.h"
#include "svs/image.hpp"
#include "svs/ingest.hpp"
#include "test_support.hpp"

using namespace svs;

TEST_CASE("2x2 grayscale file round-trips to the exact buffer") {
  test::TempDir tmp("img");
  ImageBuffer img(2, 2, 1);
  img.samples = {0, 255, 128, 64};
  save_image(img, tmp.path() / "g.png");
  const ImageBuffer back = load_image(tmp.path() / "g.png");
  CHECK(back.width == 2);
  CHECK(back.height == 2);
  CHECK(back.channels == 1);
  CHECK(back.samples == std::vector<std::uint8_t>{0, 255, 128, 64});
}

TEST_CASE("save/load is an exact inverse on random buffers") {
  test::TempDir tmp("img");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 12; ++i) {
    const int w = 1 + static_cast<int>(rng() % 24);
    const int h = 1 + static_cast<int>(rng() % 24);
    const int c = (rng() & 1) ? 3 : 1;
    const ImageBuffer img = test::random_image(rng, w, h, c);
    const auto path = tmp.path() / ("r" + std::to_string(i) + ".png");
    save_image(img, path);
    const ImageBuffer back = load_image(path);
    REQUIRE(back.same_shape(img));
    REQUIRE(back.samples == img.samples);
  }
}

TEST_CASE("constant image compresses far below raw size") {
  test::TempDir tmp("img");
  const ImageBuffer img(64, 64, 1, 77);
  const auto bytes = save_image(img, tmp.path() / "c.png");
  CHECK(bytes < 64 * 64);
}

TEST_CASE("unsupported sources are rejected, not converted") {
  CHECK_THROWS_WITH_AS(load_image(test::data_dir() / "depth16.png"),
                       doctest::Contains("unsupported bit depth"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(load_image(test::data_dir() / "rgba.png"),
                       doctest::Contains("unsupported channel"),
                       std::runtime_error);
  CHECK_THROWS(load_image(test::data_dir() / "corrupt.png"));
  CHECK_THROWS(load_image("no/such/file.png"));
}

TEST_CASE("saving to an empty path fails") {
  const ImageBuffer img(2, 2, 1, 0);
  CHECK_THROWS(save_image(img, ""));
}

TEST_CASE("buffer invariants are enforced") {
  ImageBuffer img(2, 2, 1, 0);
  img.samples.pop_back();
  CHECK_THROWS_AS(img.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ImageBuffer(0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(ImageBuffer(2, 2, 2), std::invalid_argument);
}

TEST_CASE("ingest walks recursively in path order and skips bad files") {
  test::TempDir tmp("ingest");
  std::mt19937_64 rng(5);
  std::filesystem::create_directories(tmp.path() / "sub");
  save_image(test::random_image(rng, 10, 8, 3), tmp.path() / "b.png");
  save_image(test::random_image(rng, 4, 4, 1), tmp.path() / "a.png");
  save_image(test::random_image(rng, 6, 6, 1), tmp.path() / "sub/c.png");

  const DatasetManifest m = ingest_directory(tmp.path());
  REQUIRE(m.entries.size() == 3);
  CHECK(m.entries[0].path == "a.png");
  CHECK(m.entries[1].path == "b.png");
  CHECK(m.entries[2].path == "sub/c.png");
  CHECK(m.entries[1].width == 10);
  CHECK(m.entries[1].height == 8);
  CHECK(m.units.size() == 3);

  SUBCASE("corrupt file is recorded and skipped") {
    std::filesystem::copy_file(test::data_dir() / "corrupt.png",
                               tmp.path() / "bad.png");
    const DatasetManifest m2 = ingest_directory(tmp.path());
    CHECK(m2.entries.size() == 3);
    REQUIRE(m2.skipped.size() == 1);
    CHECK(m2.skipped[0].path == "bad.png");
  }

  SUBCASE("two runs produce identical manifests") {
    const DatasetManifest m2 = ingest_directory(tmp.path());
    CHECK(m.to_json() == m2.to_json());
  }

  SUBCASE("JSON round-trip") {
    const DatasetManifest back = DatasetManifest::from_json(m.to_json());
    CHECK(back.to_json() == m.to_json());
  }
}

TEST_CASE("ingesting an empty directory yields an empty manifest") {
  test::TempDir tmp("ingest");
  const DatasetManifest m = ingest_directory(tmp.path());
  CHECK(m.entries.empty());
  CHECK(m.units.empty());
}

TEST_CASE("ingest rejects a missing directory") {
  CHECK_THROWS(ingest_directory("no/such/dir"));
}

TEST_CASE("tiling splits a 100x100 image at tile=64 into four edge-clipped units") {
  const auto units = tile_windows(0, 100, 100, 64);
  REQUIRE(units.size() == 4);
  CHECK((units[0].width == 64 && units[0].height == 64));
  CHECK((units[1].x0 == 64 && units[1].width == 36 && units[1].height == 64));
  CHECK((units[2].y0 == 64 && units[2].width == 64 && units[2].height == 36));
  CHECK((units[3].width == 36 && units[3].height == 36));
}

TEST_CASE("tiling covers every pixel exactly once") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const int w = 1 + static_cast<int>(rng() % 300);
    const int h = 1 + static_cast<int>(rng() % 300);
    const int tile = 1 + static_cast<int>(rng() % 80);
    std::uint64_t area = 0;
    for (const auto& u : tile_windows(0, w, h, tile)) {
      CHECK(u.x0 + u.width <= w);
      CHECK(u.y0 + u.height <= h);
      area += static_cast<std::uint64_t>(u.width) * u.height;
    }
    CHECK(area == static_cast<std::uint64_t>(w) * h);
  }
}

TEST_CASE("crop extracts the expected window") {
  std::mt19937_64 rng(3);
  const ImageBuffer img = test::random_image(rng, 9, 7, 3);
  const ImageBuffer c = crop(img, 2, 1, 4, 5);
  REQUIRE(c.width == 4);
  REQUIRE(c.height == 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 4; ++x)
      for (int ch = 0; ch < 3; ++ch)
        CHECK(c.at(x, y, ch) == img.at(x + 2, y + 1, ch));
  CHECK_THROWS(crop(img, 6, 0, 4, 4));
}
