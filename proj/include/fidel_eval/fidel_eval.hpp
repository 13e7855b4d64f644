// Copyright (c) 2026 The fidel-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FIDEL_EVAL_FIDEL_EVAL_HPP_
#define FIDEL_EVAL_FIDEL_EVAL_HPP_

#include "fidel_eval/corpus.hpp"
#include "fidel_eval/diagnostics.hpp"
#include "fidel_eval/error.hpp"
#include "fidel_eval/ethiopic.hpp"
#include "fidel_eval/evaluator.hpp"
#include "fidel_eval/metrics.hpp"
#include "fidel_eval/report.hpp"
#include "fidel_eval/unicode.hpp"

#endif  // FIDEL_EVAL_FIDEL_EVAL_HPP_
