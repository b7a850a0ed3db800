#pragma once

#include "tccm/synthetic.hpp"

#include <optional>
#include <string_view>

namespace tccm {

// Published per-dataset epoch counts, looked up by name (case-insensitive),
// e.g. "breastw" -> 1, "wine" -> 20.
std::optional<int> published_epochs(std::string_view dataset);

// Training used by the two-dimensional illustrations.
StudyTraining figure1_training();

// Training for the GMM-to-GMM robustness study: squared row loss, 100 epochs.
StudyTraining robustness_training();

}  // namespace tccm
