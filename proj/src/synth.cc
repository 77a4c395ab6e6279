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

#include "objseq/synth.h"

#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "objseq/error.h"
#include "objseq/json_io.h"
#include "objseq/random.h"
#include "objseq/scene_io.h"

namespace objseq::synth {
using nlohmann::json;

namespace {

struct Box {
  Eigen::Vector3d center;
  Eigen::Vector3d half;
};

// Rounds to the nearest float. GCC 11 at -O3 drops a plain cast pair here,
// so the value goes through memory.
double F(double x) {
  volatile float f = static_cast<float>(x);
  return static_cast<double>(f);
}

// Uniform point on the surface of `box`, faces picked by area.
Eigen::Vector3d SampleSurface(const Box& box, Rng& rng) {
  const Eigen::Vector3d& h = box.half;
  const std::array<double, 3> face_area = {h.y() * h.z(), h.x() * h.z(), h.x() * h.y()};
  const double total = face_area[0] + face_area[1] + face_area[2];
  double pick = rng.Unit() * total;
  int axis = 2;
  for (int a = 0; a < 3; ++a) {
    if (pick < face_area[static_cast<std::size_t>(a)]) {
      axis = a;
      break;
    }
    pick -= face_area[static_cast<std::size_t>(a)];
  }
  Eigen::Vector3d p;
  for (int a = 0; a < 3; ++a) p[a] = rng.Uniform(-h[a], h[a]);
  p[axis] = rng.Unit() < 0.5 ? -h[axis] : h[axis];
  p += box.center;
  return Eigen::Vector3d(F(p.x()), F(p.y()), F(p.z()));
}

CameraView MakeView(const std::string& id, const Eigen::Vector3d& eye, const Eigen::Vector3d& target, int width,
                    int height) {
  const Eigen::Vector3d forward = (target - eye).normalized();
  const Eigen::Vector3d right = forward.cross(Eigen::Vector3d::UnitZ()).normalized();
  const Eigen::Vector3d down = forward.cross(right);
  CameraView v;
  v.view_id = id;
  v.width = width;
  v.height = height;
  v.intrinsics = {0.9 * width, 0.9 * width, 0.5 * width, 0.5 * height};
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<1, 3>(0, 0) = right.transpose();
  m.block<1, 3>(1, 0) = down.transpose();
  m.block<1, 3>(2, 0) = forward.transpose();
  m.block<3, 1>(0, 3) = -(m.topLeftCorner<3, 3>() * eye);
  v.world_to_camera = m;
  return v;
}

struct Pixel {
  int x;
  int y;
  double z;
};

// Own pinhole model: explicit 4x4 row products, pixel-area convention.
std::optional<Pixel> ToPixel(const Eigen::Vector3d& p, const CameraView& view) {
  double cam[3];
  for (int r = 0; r < 3; ++r) {
    cam[r] = view.world_to_camera(r, 0) * p.x() + view.world_to_camera(r, 1) * p.y() +
             view.world_to_camera(r, 2) * p.z() + view.world_to_camera(r, 3);
  }
  if (!(cam[2] > 0.0)) return std::nullopt;
  const double u = view.intrinsics.fx * cam[0] / cam[2] + view.intrinsics.cx;
  const double v = view.intrinsics.fy * cam[1] / cam[2] + view.intrinsics.cy;
  if (!(u >= 0.0 && u < view.width && v >= 0.0 && v < view.height)) return std::nullopt;
  return Pixel{std::min(static_cast<int>(std::floor(u)), view.width - 1),
               std::min(static_cast<int>(std::floor(v)), view.height - 1), cam[2]};
}

json Vec3Json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

void SynthSpec::Validate() const {
  if (min_objects < 1 || min_objects > max_objects) throw ArgumentError("synth: bad object count range");
  if (min_points < 1 || min_points > max_points) throw ArgumentError("synth: bad points-per-object range");
  for (double e : room_extent) {
    if (!(e >= 1.2)) throw ArgumentError("synth: room extent must be at least 1.2 m per axis");
  }
  if (num_views < 0) throw ArgumentError("synth: negative view count");
  if (width <= 0 || height <= 0 || width % kDefaultPatchSize != 0 || height % kDefaultPatchSize != 0) {
    throw ArgumentError("synth: image dims must be positive multiples of 16");
  }
  if (feature_dim < 1) throw ArgumentError("synth: feature_dim must be >= 1");
  if (!(occluder_probability >= 0.0 && occluder_probability <= 1.0)) {
    throw ArgumentError("synth: occluder probability outside [0,1]");
  }
  if (occluder_probability > 0.0 && num_views == 0) {
    throw ArgumentError("synth: occluders are placed against views; need num_views >= 1");
  }
  if (occluder_points < 1) throw ArgumentError("synth: occluder_points must be >= 1");
  if (!(epsilon > 0.0)) throw ArgumentError("synth: epsilon must be positive");
}

json SynthSpec::ToJson() const {
  return {{"seed", seed},
          {"min_objects", min_objects},
          {"max_objects", max_objects},
          {"min_points", min_points},
          {"max_points", max_points},
          {"room_extent", room_extent},
          {"num_views", num_views},
          {"width", width},
          {"height", height},
          {"feature_dim", feature_dim},
          {"occluder_probability", occluder_probability},
          {"occluder_points", occluder_points},
          {"epsilon", epsilon}};
}

SynthSpec SynthSpec::FromJson(const json& j) {
  SynthSpec s;
  try {
    s.seed = j.value("seed", s.seed);
    s.min_objects = j.value("min_objects", s.min_objects);
    s.max_objects = j.value("max_objects", s.max_objects);
    s.min_points = j.value("min_points", s.min_points);
    s.max_points = j.value("max_points", s.max_points);
    s.room_extent = j.value("room_extent", s.room_extent);
    s.num_views = j.value("num_views", s.num_views);
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.feature_dim = j.value("feature_dim", s.feature_dim);
    s.occluder_probability = j.value("occluder_probability", s.occluder_probability);
    s.occluder_points = j.value("occluder_points", s.occluder_points);
    s.epsilon = j.value("epsilon", s.epsilon);
  } catch (const json::exception& e) {
    throw ValidationError("synth spec", e.what());
  }
  s.Validate();
  return s;
}

std::vector<float> PatchFeature(const std::string& view_id, std::size_t patch, int dim) {
  const std::uint64_t base = Fnv1a(view_id);
  std::vector<float> out(static_cast<std::size_t>(dim));
  for (std::size_t d = 0; d < out.size(); ++d) {
    const std::uint64_t h = SplitMix64(base ^ SplitMix64(patch * static_cast<std::uint64_t>(dim) + d));
    out[d] = static_cast<float>(static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0);
  }
  return out;
}

FeatureTable RenderDepth(const Scene& scene, const CameraView& view) {
  FeatureTable depth(static_cast<std::size_t>(view.height), static_cast<std::size_t>(view.width));
  for (const Eigen::Vector3d& p : scene.points) {
    const auto px = ToPixel(p, view);
    if (!px) continue;
    float& d = depth.at(static_cast<std::size_t>(px->y), static_cast<std::size_t>(px->x));
    const auto z = static_cast<float>(px->z);
    if (d == 0.0f || z < d) d = z;
  }
  return depth;
}

std::vector<std::uint32_t> ZBufferVisible(const Scene& scene, int index, const CameraView& view, double epsilon) {
  const FeatureTable zbuf = RenderDepth(scene, view);
  std::vector<std::uint32_t> out;
  for (std::uint32_t pi : scene.proposals.at(static_cast<std::size_t>(index)).point_indices) {
    const auto px = ToPixel(scene.points[pi], view);
    if (!px) continue;
    const float nearest = zbuf.at(static_cast<std::size_t>(px->y), static_cast<std::size_t>(px->x));
    if (std::abs(px->z - static_cast<double>(nearest)) <= epsilon) out.push_back(pi);
  }
  return out;
}

SynthScene GenScene(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  SynthScene out;
  Scene& scene = out.scene;
  scene.scene_id = "synth_" + std::to_string(spec.seed);
  const Eigen::Vector3d extent(spec.room_extent[0], spec.room_extent[1], spec.room_extent[2]);

  const int n_objects = static_cast<int>(rng.Between(spec.min_objects, spec.max_objects));
  std::vector<Box> boxes;
  for (int i = 0; i < n_objects; ++i) {
    Box b;
    for (int a = 0; a < 3; ++a) b.half[a] = rng.Uniform(0.1, 0.35);
    b.center.x() = rng.Uniform(0.5, extent.x() - 0.5);
    b.center.y() = rng.Uniform(0.5, extent.y() - 0.5);
    b.center.z() = rng.Uniform(b.half.z(), std::max(b.half.z(), extent.z() * 0.5));
    const int n_points = static_cast<int>(rng.Between(spec.min_points, spec.max_points));
    ObjectProposal prop;
    prop.index = i;
    for (int k = 0; k < n_points; ++k) {
      prop.point_indices.push_back(static_cast<std::uint32_t>(scene.points.size()));
      scene.points.push_back(SampleSurface(b, rng));
    }
    boxes.push_back(b);
    scene.proposals.push_back(std::move(prop));
  }

  const Eigen::Vector3d room_center = extent / 2.0;
  const double radius = 0.5 * std::max(extent.x(), extent.y()) + 1.5;
  for (int k = 0; k < spec.num_views; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / spec.num_views + rng.Uniform(-0.3, 0.3);
    const Eigen::Vector3d eye(room_center.x() + radius * std::cos(angle),
                              room_center.y() + radius * std::sin(angle), rng.Uniform(1.2, 2.0));
    const Eigen::Vector3d target =
        room_center + Eigen::Vector3d(rng.Uniform(-0.5, 0.5), rng.Uniform(-0.5, 0.5), rng.Uniform(-0.3, 0.3));
    char id[16];
    std::snprintf(id, sizeof(id), "view_%02d", k);
    scene.views.push_back(MakeView(id, eye, target, spec.width, spec.height));
  }

  // Thin slabs between a camera and an object, shifted sideways so they
  // hide part of it. Slab points belong to no proposal.
  json occluders = json::array();
  for (int i = 0; i < n_objects; ++i) {
    if (!(rng.Unit() < spec.occluder_probability)) continue;
    const std::size_t vi = rng.Below(static_cast<std::uint64_t>(spec.num_views));
    const CameraView& view = scene.views[vi];
    const Eigen::Matrix3d rot = view.world_to_camera.topLeftCorner<3, 3>();
    const Eigen::Vector3d eye = -rot.transpose() * view.world_to_camera.topRightCorner<3, 1>();
    const Box& target = boxes[static_cast<std::size_t>(i)];
    const Eigen::Vector3d dir = target.center - eye;
    Box slab;
    slab.center = eye + rng.Uniform(0.4, 0.7) * dir;
    int thin_axis = 0;
    dir.cwiseAbs().maxCoeff(&thin_axis);
    for (int a = 0; a < 3; ++a) {
      slab.half[a] = a == thin_axis ? 0.01 : rng.Uniform(0.1, 0.25);
      if (a != thin_axis) slab.center[a] += rng.Uniform(-1.0, 1.0) * slab.half[a];
    }
    const auto begin = scene.points.size();
    for (int k = 0; k < spec.occluder_points; ++k) scene.points.push_back(SampleSurface(slab, rng));
    occluders.push_back({{"object", i},
                         {"view_id", view.view_id},
                         {"box_min", Vec3Json(slab.center - slab.half)},
                         {"box_max", Vec3Json(slab.center + slab.half)},
                         {"points", json::array({begin, scene.points.size()})}});
  }

  for (CameraView& view : scene.views) {
    view.depth = RenderDepth(scene, view);
    const int gw = spec.width / kDefaultPatchSize;
    const int gh = spec.height / kDefaultPatchSize;
    FeatureTable feats(static_cast<std::size_t>(gw * gh), static_cast<std::size_t>(spec.feature_dim));
    for (std::size_t p = 0; p < feats.rows(); ++p) {
      const std::vector<float> f = PatchFeature(view.view_id, p, spec.feature_dim);
      for (std::size_t d = 0; d < f.size(); ++d) feats.at(p, d) = f[d];
    }
    view.patch_features = std::move(feats);
  }

  json objects = json::array();
  out.visible.resize(static_cast<std::size_t>(n_objects));
  for (int i = 0; i < n_objects; ++i) {
    const Box& b = boxes[static_cast<std::size_t>(i)];
    json vis = json::object();
    for (const CameraView& view : scene.views) {
      auto pts = ZBufferVisible(scene, i, view, spec.epsilon);
      vis[view.view_id] = pts;
      out.visible[static_cast<std::size_t>(i)][view.view_id] = std::move(pts);
    }
    objects.push_back({{"index", i},
                       {"box_min", Vec3Json(b.center - b.half)},
                       {"box_max", Vec3Json(b.center + b.half)},
                       {"visible_points", vis}});
  }
  out.sidecar = {{"scene_id", scene.scene_id},
                 {"spec", spec.ToJson()},
                 {"feature_rule",
                  "f[d] = unit(splitmix64(fnv1a(view_id) ^ splitmix64(patch * dim + d))) * 2 - 1"},
                 {"epsilon", spec.epsilon},
                 {"objects", objects},
                 {"occluders", occluders}};
  return out;
}

void WriteSynthScene(const std::filesystem::path& dir, const SynthScene& s) {
  WriteScene(dir, s.scene);
  WriteJsonFile(dir / "sidecar.json", s.sidecar);
}

Eigen::VectorXd Oracle2dFeature(const Scene& scene, int index, const AggregationConfig& config) {
  const ObjectProposal& prop = scene.proposals.at(static_cast<std::size_t>(index));
  std::vector<const CameraView*> views;
  for (const CameraView& v : scene.views) views.push_back(&v);
  std::sort(views.begin(), views.end(), [](const CameraView* a, const CameraView* b) { return a->view_id < b->view_id; });

  std::size_t dim = config.feature_dim;
  for (const CameraView& v : scene.views) {
    if (dim == 0 && v.patch_features) dim = v.patch_features->dim();
  }
  std::vector<double> numerator(dim, 0.0);
  double denominator = 0.0;
  const int patch = config.patch_size;
  for (const CameraView* view : views) {
    if (!view->patch_features) continue;
    if (config.occlusion.require_depth && !view->depth) throw ArgumentError("oracle: view lacks depth");
    const int grid_w = view->width / patch;
    std::map<int, long> hits;
    for (std::uint32_t pi : prop.point_indices) {
      const auto px = ToPixel(scene.points[pi], *view);
      if (!px) continue;
      if (view->depth) {
        const float d = view->depth->at(static_cast<std::size_t>(px->y), static_cast<std::size_t>(px->x));
        if (d == 0.0f || std::abs(px->z - static_cast<double>(d)) > config.occlusion.epsilon) continue;
      }
      ++hits[(px->y / patch) * grid_w + px->x / patch];
    }
    std::vector<double> mean(dim, 0.0);
    long covered = 0;
    long covered_hits = 0;
    for (const auto& [patch_index, count] : hits) {
      if (count < config.min_hits) continue;
      ++covered;
      covered_hits += count;
      for (std::size_t d = 0; d < dim; ++d) mean[d] += view->patch_features->at(static_cast<std::size_t>(patch_index), d);
    }
    if (covered == 0) continue;
    const double weight = config.mask_size == MaskSizeMode::kPatchCount ? static_cast<double>(covered)
                                                                          : static_cast<double>(covered_hits);
    for (std::size_t d = 0; d < dim; ++d) numerator[d] += mean[d] / static_cast<double>(covered) * weight;
    denominator += weight;
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  if (denominator == 0.0) return out;
  for (std::size_t d = 0; d < dim; ++d) out[static_cast<Eigen::Index>(d)] = numerator[d] / denominator;
  return out;
}

}  // namespace objseq::synth
