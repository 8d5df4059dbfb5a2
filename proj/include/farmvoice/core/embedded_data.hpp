#pragma once

#include <string_view>

namespace fv::data {

/// Contents of a bundled data file by its path relative to data/, or an
/// empty view when no such file was bundled.
std::string_view embedded_file(std::string_view name);

}  // namespace fv::data
