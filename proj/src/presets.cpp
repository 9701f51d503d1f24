#include "lattice_chamfer/presets.hpp"

namespace lc {

const std::vector<PresetGeometry>& presets() {
    static const std::vector<PresetGeometry> p = {
        {"bcc1", "BCC", {{1, 1, 1}}},
        {"bcc2", "BCC", {{1, 1, 1}, {2, 0, 0}}},
        {"bcc3", "BCC", {{1, 1, 1}, {2, 0, 0}, {2, 2, 0}}},
        {"bcc4", "BCC", {{1, 1, 1}, {2, 0, 0}, {2, 2, 0}, {3, 1, 1}}},
        {"fcc1", "FCC", {{1, 1, 0}}},
        {"fcc2", "FCC", {{1, 1, 0}, {2, 0, 0}}},
        {"fcc3", "FCC", {{1, 1, 0}, {2, 0, 0}, {2, 1, 1}}},
        {"fcc4", "FCC", {{1, 1, 0}, {2, 0, 0}, {2, 1, 1}, {2, 2, 2}}},
        {"z2-4", "Z2", {{1, 0}}},
        {"z2-8", "Z2", {{1, 0}, {1, 1}}},
        {"z2-16", "Z2", {{1, 0}, {1, 1}, {2, 1}}},
        {"z3-6", "Z3", {{1, 0, 0}}},
        {"z3-18", "Z3", {{1, 0, 0}, {1, 1, 0}}},
        {"z3-26", "Z3", {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}},
    };
    return p;
}

const PresetGeometry& preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw Error(ErrorCode::Parse, "unknown mask preset '" + name + "'");
}

ChamferMask preset_mask(const std::string& name, const Lattice& lattice, std::vector<Int> class_weights) {
    const auto& p = preset(name);
    if (class_weights.empty()) class_weights.assign(p.representatives.size(), 1);
    return mask_from_classes(lattice, p.representatives, std::move(class_weights));
}

ChamferMask preset_mask(const std::string& name, std::vector<Int> class_weights) {
    return preset_mask(name, Lattice::by_name(preset(name).lattice), std::move(class_weights));
}

}  // namespace lc
