#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace semmap {

/// Number of semantic classes (Cityscapes training set).
inline constexpr std::size_t kNumLabels = 19;

using LabelIndex = std::size_t;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Canonical Cityscapes train-id order: road=0 ... bicycle=18.
const std::array<std::string_view, kNumLabels>& label_names();

std::string_view label_name(LabelIndex label);

std::optional<LabelIndex> label_from_name(std::string_view name);

/// Published Cityscapes color for a train id.
Rgb label_color(LabelIndex label);

}  // namespace semmap
