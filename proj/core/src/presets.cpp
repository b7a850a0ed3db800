#include "tccm/presets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <utility>

namespace tccm {

namespace {

constexpr std::array<std::pair<std::string_view, int>, 47> kEpochs = {{
    {"census", 5},        {"backdoor", 200},    {"campaign", 50},       {"mnist", 500},
    {"speech", 500},      {"optdigits", 2000},  {"spambase", 5000},     {"musk", 5},
    {"internetads", 50},  {"donors", 30},       {"http", 100},          {"cover", 10},
    {"fraud", 75},        {"skin", 110},        {"celeba", 2},          {"smtp", 2},
    {"aloi", 100},        {"shuttle", 200},     {"magic.gamma", 10},    {"mammography", 20},
    {"annthyroid", 2000}, {"pendigits", 1000},  {"satellite", 10},      {"landsat", 6},
    {"satimage-2", 5},    {"pageblocks", 1800}, {"wilt", 20},           {"thyroid", 10},
    {"waveform", 580},    {"cardiotocography", 1}, {"fault", 5000},     {"cardio", 2000},
    {"letter", 50},       {"yeast", 130},       {"vowels", 20},         {"pima", 5},
    {"breastw", 1},       {"wdbc", 2},          {"ionosphere", 10},     {"stamps", 200},
    {"vertebral", 25},    {"wbc", 1},           {"glass", 200},         {"wpbc", 6},
    {"lymphography", 3},  {"wine", 20},         {"hepatitis", 1},
}};

}  // namespace

std::optional<int> published_epochs(std::string_view dataset) {
    std::string key(dataset);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& [name, epochs] : kEpochs) {
        if (name == key) return epochs;
    }
    return std::nullopt;
}

StudyTraining figure1_training() {
    StudyTraining t;
    t.epochs = 200;
    t.loss = LossKind::RowL2Squared;
    return t;
}

StudyTraining robustness_training() {
    StudyTraining t;
    t.epochs = 100;
    t.loss = LossKind::RowL2Squared;
    return t;
}

}  // namespace tccm
