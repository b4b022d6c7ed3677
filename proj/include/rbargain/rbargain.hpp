// Copyright 2026 The rbargain Authors. All rights reserved.
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


#ifndef RBARGAIN_RBARGAIN_HPP_
#define RBARGAIN_RBARGAIN_HPP_

#include "rbargain/adoption.hpp"
#include "rbargain/error.hpp"
#include "rbargain/law.hpp"
#include "rbargain/limiteq.hpp"
#include "rbargain/params.hpp"
#include "rbargain/serialize.hpp"
#include "rbargain/sim.hpp"
#include "rbargain/statics.hpp"
#include "rbargain/verify.hpp"
#include "rbargain/woa.hpp"

#endif  // RBARGAIN_RBARGAIN_HPP_
