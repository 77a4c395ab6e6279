// Copyright 2026 The objseq Authors.
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

// Shared fixtures for the unit tests and the acceptance binary.

#ifndef OBJSEQ_TESTS_TEST_UTIL_H_
#define OBJSEQ_TESTS_TEST_UTIL_H_

#include <Eigen/Core>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "objseq/scene.h"

namespace objseq::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("objseq_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteAll(const std::filesystem::path& p, const std::string& s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

inline std::filesystem::path GoldenPath(const std::string& name) {
  return std::filesystem::path(OBJSEQ_GOLDEN_DIR) / name;
}

// One proposal per entry of `objects`, each a list of points; no views.
inline Scene PointScene(const std::vector<std::vector<Eigen::Vector3d>>& objects, std::string id = "toy") {
  Scene s;
  s.scene_id = std::move(id);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    ObjectProposal p;
    p.index = static_cast<int>(i);
    for (const auto& pt : objects[i]) {
      p.point_indices.push_back(static_cast<std::uint32_t>(s.points.size()));
      s.points.push_back(pt);
    }
    s.proposals.push_back(std::move(p));
  }
  return s;
}

// One single-point object per centroid.
inline Scene CentroidScene(const std::vector<Eigen::Vector3d>& centroids, std::string id = "toy") {
  std::vector<std::vector<Eigen::Vector3d>> objects;
  for (const auto& c : centroids) objects.push_back({c});
  return PointScene(objects, std::move(id));
}

// Unit-focal camera at the origin looking down +z.
inline CameraView PinholeView(int w, int h, double f, std::string id = "v0") {
  CameraView v;
  v.view_id = std::move(id);
  v.width = w;
  v.height = h;
  v.intrinsics = {f, f, w / 2.0, h / 2.0};
  return v;
}

inline double RelErr(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Infinity-norm relative error of a against reference b; exact zero vectors compare equal.
inline double MaxRelErr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return 1e300;
  const double diff = (a - b).lpNorm<Eigen::Infinity>();
  if (diff == 0.0) return 0.0;
  return diff / std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
}

}  // namespace objseq::testing

#endif  // OBJSEQ_TESTS_TEST_UTIL_H_
