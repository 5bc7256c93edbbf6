#pragma once

#include "hgg/types.hpp"

#include <string>

namespace hgg {

// JSON body-template format:
//   {"vertices": [[x,y,z],...],
//    "faces": [[a,b,c],...],
//    "joints": {"rest": [[x,y,z],...], "parents": [-1,0,...]},
//    "weights": [[[joint, w], ...], ...],
//    "shape_dirs": [[[dx,dy,dz] x 10], ...]}   (optional)
// Compatible with exported parametric body templates; the shipped template
// is synthetic (see synthlab).

std::string template_to_json(const BodyTemplate& t);
BodyTemplate template_from_json(const std::string& json_text);

void save_template(const BodyTemplate& t, const std::string& path);
BodyTemplate load_template(const std::string& path);

}  // namespace hgg
