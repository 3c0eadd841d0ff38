#pragma once

#include <string>

#include "ndviz/machine_json.hpp"

#ifndef NDVIZ_MACHINES_DIR
#error "NDVIZ_MACHINES_DIR must point at the machines/ directory"
#endif

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(NDVIZ_MACHINES_DIR) + "/" + name; }

inline ndviz::Machine load(const std::string& name) { return ndviz::load_machine(path(name)); }

}  // namespace fixtures
