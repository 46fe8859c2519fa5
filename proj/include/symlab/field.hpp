#pragma once

#include "symlab/geometry.hpp"

namespace symlab {

// A real scalar field on R^3. Implementations either evaluate everywhere
// (closed forms, fields with declared tails) or throw OutsideDomain.
class Field {
public:
    virtual ~Field() = default;
    virtual double value(const Vec3& x) const = 0;
};

}  // namespace symlab
