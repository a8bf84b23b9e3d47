#pragma once

#include "fractrans/field.hpp"

#include <string>

namespace fractrans {

enum class DataFamily {
    Bump,      // A e bump((x-c)/w): compact, nonnegative, peak A
    Gaussian,  // A exp(-((x-c)/w)^2)
    Ccf,       // A exp(-x^2/w^2) plateau(x/(3w)): even, positive, compact
    Mode,      // A sin(j pi x / L)
    Mixed,     // A (exp(-(x/w)^2) - 0.6 exp(-((x-2w)/w)^2) - 0.6 exp(-((x+2w)/w)^2)): even, two-signed
    Constant,  // A
};

struct InitialData {
    DataFamily family = DataFamily::Bump;
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
    int mode = 1;

    Field sample(const Grid& g) const;
};

DataFamily parse_family(const std::string& name);
std::string family_name(DataFamily f);

} // namespace fractrans
