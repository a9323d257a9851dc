// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace acav {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ACAV_DEFINE_ERROR(Name)              \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

// nn
ACAV_DEFINE_ERROR(ShapeError);
ACAV_DEFINE_ERROR(ProbeError);
ACAV_DEFINE_ERROR(NumericError);
ACAV_DEFINE_ERROR(ConfigError);
ACAV_DEFINE_ERROR(FormatError);
ACAV_DEFINE_ERROR(VersionError);
ACAV_DEFINE_ERROR(IoError);

// imaging
ACAV_DEFINE_ERROR(PlacementError);
ACAV_DEFINE_ERROR(ScaleError);

// synth
ACAV_DEFINE_ERROR(GenerationError);

// probe
ACAV_DEFINE_ERROR(DimensionError);
ACAV_DEFINE_ERROR(UndefinedAngleError);
ACAV_DEFINE_ERROR(EmptyReferenceError);
ACAV_DEFINE_ERROR(NoDecisionError);
ACAV_DEFINE_ERROR(NormalizationError);

// cli
ACAV_DEFINE_ERROR(MergeError);

#undef ACAV_DEFINE_ERROR

/// Training loss became non-finite. Carries the epoch it happened in.
class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(std::size_t epoch, const std::string& detail)
      : Error("training diverged in epoch " + std::to_string(epoch) + ": " + detail),
        epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Not enough room to place the requested anchors.
class PlacementInfeasibleError : public Error {
 public:
  PlacementInfeasibleError(std::size_t requested, std::size_t achievable)
      : Error("placement infeasible: requested " + std::to_string(requested) +
              " anchors, achievable " + std::to_string(achievable)),
        requested_(requested),
        achievable_(achievable) {}
  std::size_t requested() const noexcept { return requested_; }
  std::size_t achievable() const noexcept { return achievable_; }

 private:
  std::size_t requested_;
  std::size_t achievable_;
};

}  // namespace acav
