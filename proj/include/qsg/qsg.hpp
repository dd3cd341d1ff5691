/*
 * Copyright 2026 The qsg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "qsg/rational.hpp"
#include "qsg/errors.hpp"
#include "qsg/arena.hpp"
#include "qsg/graph.hpp"
#include "qsg/lp.hpp"
#include "qsg/geometry.hpp"
#include "qsg/zerosum.hpp"
#include "qsg/asv_mp.hpp"
#include "qsg/ds_stackelberg.hpp"
#include "qsg/reductions.hpp"
