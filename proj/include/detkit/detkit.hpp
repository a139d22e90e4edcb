// Copyright 2026 The detkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "detkit/annotations.hpp"
#include "detkit/audio.hpp"
#include "detkit/charts.hpp"
#include "detkit/dataset.hpp"
#include "detkit/detfiles.hpp"
#include "detkit/errors.hpp"
#include "detkit/geometry.hpp"
#include "detkit/image_io.hpp"
#include "detkit/io.hpp"
#include "detkit/labelmap.hpp"
#include "detkit/matching.hpp"
#include "detkit/metrics.hpp"
#include "detkit/raster.hpp"
#include "detkit/records.hpp"
#include "detkit/report_io.hpp"
#include "detkit/rng.hpp"
