#include "hgg/validate.hpp"

#include <cmath>
#include <sstream>

namespace hgg {

namespace {

std::string fmt(const char* what, int index, double value) {
    std::ostringstream os;
    os << what << " " << index << " sums to " << value;
    return os.str();
}

}  // namespace

ValidationReport validate_template(const BodyTemplate& t) {
    ValidationReport report;
    const int n = t.n_vertices();
    const int k = t.n_joints();

    if (n == 0) report.add(Severity::Error, "template has no vertices");
    if (k == 0) report.add(Severity::Error, "template has no joints");

    for (int i = 0; i < n; ++i) {
        if (!t.rest_vertices[i].allFinite()) {
            std::ostringstream os;
            os << "vertex " << i << " is not finite";
            report.add(Severity::Error, os.str());
        }
    }

    // Faces: index range plus vertex coverage.
    std::vector<char> referenced(n, 0);
    for (size_t f = 0; f < t.faces.size(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const int v = t.faces[f][c];
            if (v < 0 || v >= n) {
                std::ostringstream os;
                os << "face " << f << " references out-of-range vertex " << v;
                report.add(Severity::Error, os.str());
            } else {
                referenced[v] = 1;
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!referenced[v]) {
            std::ostringstream os;
            os << "vertex " << v << " is not referenced by any face";
            report.add(Severity::Error, os.str());
        }
    }

    // Joint tree: root 0 has no parent, everyone else walks up to the root.
    if (k > 0) {
        if (t.joint_parents.size() != static_cast<size_t>(k)) {
            report.add(Severity::Error, "joint parent list length differs from joint count");
        } else {
            if (t.joint_parents[0] != -1) {
                report.add(Severity::Error, "joint 0 is not the root (parent must be -1)");
            }
            bool cycle = false;
            for (int j = 1; j < k && !cycle; ++j) {
                const int p = t.joint_parents[j];
                if (p < 0 || p >= k) {
                    std::ostringstream os;
                    os << "joint " << j << " has out-of-range parent " << p;
                    report.add(Severity::Error, os.str());
                    continue;
                }
                int cur = j;
                int steps = 0;
                while (cur != 0 && steps <= k) {
                    cur = t.joint_parents[cur];
                    if (cur < 0 || cur >= k) break;
                    ++steps;
                }
                if (steps > k) cycle = true;
            }
            if (cycle) report.add(Severity::Error, "joint tree has cycle");
        }
    }

    // Skin weights: one row per vertex, <= 4 nonnegative influences on valid
    // joints, each row summing to 1.
    if (t.skin_weights.size() != static_cast<size_t>(n)) {
        report.add(Severity::Error, "skin weight row count differs from vertex count");
    } else {
        for (int v = 0; v < n; ++v) {
            const SkinRow& row = t.skin_weights[v];
            if (row.size() > 4) {
                std::ostringstream os;
                os << "skin weights row " << v << " has " << row.size()
                   << " influences (max 4)";
                report.add(Severity::Error, os.str());
            }
            double sum = 0.0;
            for (const SkinInfluence& inf : row) {
                if (inf.joint < 0 || inf.joint >= k) {
                    std::ostringstream os;
                    os << "skin weights row " << v << " references joint " << inf.joint;
                    report.add(Severity::Error, os.str());
                }
                if (!(inf.weight >= 0.0)) {
                    std::ostringstream os;
                    os << "skin weights row " << v << " has negative weight";
                    report.add(Severity::Error, os.str());
                }
                sum += inf.weight;
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                report.add(Severity::Error, fmt("skin weights row", v, sum));
            }
        }
    }

    if (t.has_shape_dirs() && t.shape_dirs.size() != static_cast<size_t>(n)) {
        report.add(Severity::Error, "shape_dirs row count differs from vertex count");
    }

    return report;
}

}  // namespace hgg
