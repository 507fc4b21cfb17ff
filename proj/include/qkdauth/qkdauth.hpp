// Copyright 2026 The qkdauth Authors.
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

#ifndef QKDAUTH_QKDAUTH_HPP
#define QKDAUTH_QKDAUTH_HPP

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"
#include "qkdauth/hashfam.hpp"
#include "qkdauth/keypool.hpp"
#include "qkdauth/oracle.hpp"
#include "qkdauth/qkdsim.hpp"
#include "qkdauth/sha256.hpp"
#include "qkdauth/toeplitz.hpp"
#include "qkdauth/twostep.hpp"
#include "qkdauth/wcauth.hpp"

#endif // QKDAUTH_QKDAUTH_HPP
