// SPDX-License-Identifier: Apache-2.0
//
// psoamsim - plane spiral OAM mode-group MIMO link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "psoam/capacity.hpp"
#include "psoam/channel.hpp"
#include "psoam/config.hpp"
#include "psoam/crc32.hpp"
#include "psoam/csv.hpp"
#include "psoam/geometry.hpp"
#include "psoam/link.hpp"
#include "psoam/modegroup.hpp"
#include "psoam/ofdm.hpp"
#include "psoam/pasr.hpp"
#include "psoam/qam.hpp"
#include "psoam/rng.hpp"
#include "psoam/runner.hpp"
