// Copyright 2026 The Oddball Authors.
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


// Umbrella header.

#ifndef ODDBALL_ODDBALL_HPP_
#define ODDBALL_ODDBALL_HPP_

#include "oddball/align.hpp"
#include "oddball/core.hpp"
#include "oddball/dump.hpp"
#include "oddball/error.hpp"
#include "oddball/eval.hpp"
#include "oddball/report.hpp"
#include "oddball/scoring.hpp"

#endif  // ODDBALL_ODDBALL_HPP_
