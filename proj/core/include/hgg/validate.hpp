#pragma once

#include "hgg/types.hpp"

namespace hgg {

/// Check every BodyTemplate invariant and report all violations (nothing is
/// thrown). Pure: same template, same report.
ValidationReport validate_template(const BodyTemplate& tmpl);

}  // namespace hgg
