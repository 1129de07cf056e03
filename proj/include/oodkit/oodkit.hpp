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

#ifndef OODKIT__OODKIT_HPP_
#define OODKIT__OODKIT_HPP_

#include "oodkit/autoencoder.hpp"
#include "oodkit/binary_io.hpp"
#include "oodkit/data.hpp"
#include "oodkit/error.hpp"
#include "oodkit/eval.hpp"
#include "oodkit/linalg.hpp"
#include "oodkit/neighbors.hpp"
#include "oodkit/scorers.hpp"

#endif  // OODKIT__OODKIT_HPP_
