#pragma once
// Internal seam between connect() and the HTTP client translation unit.

#include <memory>

#include "aadb/binding.hpp"

namespace aadb {

std::shared_ptr<BackendAdapter> makeRemoteAdapter(const ConnectionSpec& spec);

}  // namespace aadb
