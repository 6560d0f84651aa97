#pragma once

#include <string>
#include <string_view>

namespace resumeft {

/// Porter (1980) suffix-stripping stemmer, original rule set (no later
/// revisions such as "bli" -> "ble" or "logi" -> "log"). Expects a lowercase
/// word; words of one or two characters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace resumeft
