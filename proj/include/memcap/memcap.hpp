// Copyright 2026 The memcap Authors
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

#pragma once

#include "memcap/blackwell.hpp"
#include "memcap/channel_model.hpp"
#include "memcap/entropy.hpp"
#include "memcap/errors.hpp"
#include "memcap/estimate.hpp"
#include "memcap/exact_oracle.hpp"
#include "memcap/filter_system.hpp"
#include "memcap/monte_carlo.hpp"
#include "memcap/sweep.hpp"
