#include "forge/analytics/grading.hpp"

#include <stdexcept>
#include <string>

namespace forge::analytics {

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

}  // namespace

double unit_score(double s, double f) {
    check_unit_interval(s, "test score");
    check_unit_interval(f, "solved fraction");
    return s * f;
}

double final_score(double exam, std::span<const double> units) {
    check_unit_interval(exam, "exam score");
    if (units.size() != 2) {
        throw std::invalid_argument("final grade takes exactly two unit scores");
    }
    double total = 0.8 * exam;
    for (double u : units) {
        check_unit_interval(u, "unit score");
        total += 0.1 * u;
    }
    return total;
}

}  // namespace forge::analytics
