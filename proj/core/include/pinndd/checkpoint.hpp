#pragma once

#include <string>
#include <vector>

#include "pinndd/net.hpp"

namespace pinndd {

/// Flat binary checkpoint of every subdomain network: a header with the
/// network count and layer dims, then row-major f64 weights and biases per
/// layer.
void save_checkpoint(const std::vector<MlpNetwork>& networks, const std::string& path);

std::vector<MlpNetwork> load_checkpoint(const std::string& path);

}  // namespace pinndd
