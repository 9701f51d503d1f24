#pragma once

#include <string>
#include <vector>

#include "lattice_chamfer/chamfer_mask.hpp"

namespace lc {

struct PresetGeometry {
    std::string name;
    std::string lattice;               // Z2, Z3, BCC, FCC
    std::vector<IVec> representatives; // one per weight class
};

// bcc1..bcc4, fcc1..fcc4, z2-4, z2-8, z2-16, z3-6, z3-18, z3-26.
const std::vector<PresetGeometry>& presets();
const PresetGeometry& preset(const std::string& name);

// Preset geometry on `lattice` (spacings taken from it); weights default to 1 per class.
ChamferMask preset_mask(const std::string& name, const Lattice& lattice, std::vector<Int> class_weights = {});
ChamferMask preset_mask(const std::string& name, std::vector<Int> class_weights = {});

}  // namespace lc
