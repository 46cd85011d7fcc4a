#include "semmap/labels.hpp"

#include "semmap/errors.hpp"

#include <string>

namespace semmap {

namespace {

constexpr std::array<std::string_view, kNumLabels> kNames = {
    "road",   "sidewalk", "building", "wall",  "fence",     "pole",  "traffic light",
    "traffic sign", "vegetation", "terrain", "sky", "person", "rider", "car",
    "truck",  "bus",      "train",    "motorcycle", "bicycle"};

constexpr std::array<Rgb, kNumLabels> kPalette = {{
    {128, 64, 128},   // road
    {244, 35, 232},   // sidewalk
    {70, 70, 70},     // building
    {102, 102, 156},  // wall
    {190, 153, 153},  // fence
    {153, 153, 153},  // pole
    {250, 170, 30},   // traffic light
    {220, 220, 0},    // traffic sign
    {107, 142, 35},   // vegetation
    {152, 251, 152},  // terrain
    {70, 130, 180},   // sky
    {220, 20, 60},    // person
    {255, 0, 0},      // rider
    {0, 0, 142},      // car
    {0, 0, 70},       // truck
    {0, 60, 100},     // bus
    {0, 80, 100},     // train
    {0, 0, 230},      // motorcycle
    {119, 11, 32},    // bicycle
}};

void check_label(LabelIndex label) {
  if (label >= kNumLabels)
    throw InvalidArgumentError("label index " + std::to_string(label) + " out of range");
}

}  // namespace

const std::array<std::string_view, kNumLabels>& label_names() { return kNames; }

std::string_view label_name(LabelIndex label) {
  check_label(label);
  return kNames[label];
}

std::optional<LabelIndex> label_from_name(std::string_view name) {
  for (LabelIndex i = 0; i < kNumLabels; ++i)
    if (kNames[i] == name) return i;
  return std::nullopt;
}

Rgb label_color(LabelIndex label) {
  check_label(label);
  return kPalette[label];
}

}  // namespace semmap
