#pragma once

#include <string>
#include <vector>

#include "folia/scenario.hpp"

namespace folia {

struct GalleryEntry {
  std::string name;         // including the parameter signature, e.g. "poincare-disc(K)"
  std::string description;  // what the scenario exercises
};

std::vector<GalleryEntry> gallery_list();

/// Built-in scenario by name. Parameterised entries accept "name(a,b)" and fall back to defaults
/// when called without arguments; sharpness-discs without arguments covers the four standard pairs.
/// Throws UnknownGallery.
Scenario gallery(const std::string& name);

/// Every built-in scenario with default parameters, in list order.
std::vector<Scenario> full_gallery();

}  // namespace folia
