#pragma once

namespace buckspec {

inline constexpr const char* version_string = "buckspec 0.1.0";

}
