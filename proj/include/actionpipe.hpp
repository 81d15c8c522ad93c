/* Copyright 2026 The ActionPipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Umbrella header.

#ifndef ACTIONPIPE_ACTIONPIPE_HPP_
#define ACTIONPIPE_ACTIONPIPE_HPP_

#include "actionpipe/baseline.hpp"
#include "actionpipe/config.hpp"
#include "actionpipe/extractor.hpp"
#include "actionpipe/features.hpp"
#include "actionpipe/flow.hpp"
#include "actionpipe/geometry.hpp"
#include "actionpipe/grid_search.hpp"
#include "actionpipe/manifest.hpp"
#include "actionpipe/metrics.hpp"
#include "actionpipe/pca.hpp"
#include "actionpipe/pipeline.hpp"
#include "actionpipe/svm.hpp"
#include "actionpipe/synthetic.hpp"
#include "actionpipe/temporal.hpp"
#include "actionpipe/video.hpp"
#include "actionpipe/video_io.hpp"

#endif  // ACTIONPIPE_ACTIONPIPE_HPP_
