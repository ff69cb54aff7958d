// Copyright 2026 The SLE Authors
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

#ifndef SLE_LOG_H_
#define SLE_LOG_H_

namespace sle {

// Routes spdlog's default logger to standard error. The level comes from
// SLE_LOG (error, warn, info or debug) and defaults to warn.
void InitLogging();

}  // namespace sle

#endif  // SLE_LOG_H_
