#include "entroflux/errors.hpp"
#include "systems_impl.hpp"

namespace entroflux {

const std::vector<std::string>& registered_system_ids() {
    static const std::vector<std::string> ids = {
        "euler", "swmhd", "inc-euler", "inc-mhd", "nonhom-inc-euler", "nonhom-inc-mhd"};
    return ids;
}

std::unique_ptr<System> make_system(const std::string& id, const SystemParams& params) {
    if (id == "euler") {
        return detail::make_euler(params);
    }
    if (id == "swmhd") {
        return detail::make_swmhd(params);
    }
    if (id == "inc-euler") {
        return detail::make_inc_euler(params);
    }
    if (id == "inc-mhd") {
        return detail::make_inc_mhd(params);
    }
    if (id == "nonhom-inc-euler") {
        return detail::make_nonhom_inc_euler(params);
    }
    if (id == "nonhom-inc-mhd") {
        return detail::make_nonhom_inc_mhd(params);
    }
    std::string known;
    for (const auto& s : registered_system_ids()) {
        known += (known.empty() ? "" : ", ") + s;
    }
    throw ConfigError("unknown system id '" + id + "' (registered: " + known + ")");
}

} // namespace entroflux
