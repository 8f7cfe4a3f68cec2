#pragma once

#include <memory>

#include "entroflux/systems.hpp"

namespace entroflux::detail {

std::unique_ptr<System> make_euler(const SystemParams& params);
std::unique_ptr<System> make_swmhd(const SystemParams& params);
std::unique_ptr<System> make_inc_euler(const SystemParams& params);
std::unique_ptr<System> make_inc_mhd(const SystemParams& params);
std::unique_ptr<System> make_nonhom_inc_euler(const SystemParams& params);
std::unique_ptr<System> make_nonhom_inc_mhd(const SystemParams& params);

} // namespace entroflux::detail
