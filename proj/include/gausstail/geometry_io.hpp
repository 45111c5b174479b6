// Copyright 2026 The gausstail Authors
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

// Geometry documents: {"dimension":2,"components":[...]} for planar sets and
// {"dimension":3,"boxes":[...]} or an explicit polytope summary for solids.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gausstail/geometry2d.hpp"
#include "gausstail/geometry3d.hpp"

namespace gausstail {

struct GeometryDocument {
  int dimension = 2;
  SetDescription planar;
  // 3D only: boxes when given as a box union (empty for an explicit summary).
  std::vector<Box> boxes;
  PolytopeSummary polytope;
};

// Throws GeometryError on malformed JSON or geometry.
GeometryDocument parse_geometry(std::string_view text);
GeometryDocument load_geometry(const std::filesystem::path& path);

}  // namespace gausstail
