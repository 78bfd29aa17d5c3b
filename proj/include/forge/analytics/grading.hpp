#pragma once

#include <span>

namespace forge::analytics {

// Unit score = test score s scaled by the fraction f of mandatory
// assignments solved correctly. Both in [0,1]; throws
// std::invalid_argument outside that range.
double unit_score(double s, double f);

// Final grade: 80% exam, 10% per unit; exactly two unit scores.
double final_score(double exam, std::span<const double> units);

}  // namespace forge::analytics
