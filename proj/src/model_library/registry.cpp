#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim {

void register_builtin_models(ModelRegistry& registry) {
    detail::register_msd_models(registry);
    detail::register_quarter_car_models(registry);
    detail::register_signal_models(registry);
    detail::register_power_plant_models(registry);
    detail::register_vessel_models(registry);
}

ModelRegistry builtin_registry() {
    ModelRegistry registry;
    register_builtin_models(registry);
    return registry;
}

}  // namespace cosim
