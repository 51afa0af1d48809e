#pragma once

#include <iosfwd>

#include "hedgemap/boat.hpp"

namespace hedgemap {

// Triangulated sample of the lower boundary surface (the graph of the
// boundary height function over the top slice). CSV rows are
//   v,x1,x2,x3     vertices
//   f,i,j,k        triangle indices into the vertex list (0-based)
// Deterministic for a fixed resolution.
void write_boat_mesh_csv(std::ostream& os, const BoatSet& set, int resolution);

// Closed polygonal outline of the 2D profile, one ring per patch arc. Rows:
//   u,v,patch
void write_profile_outline_csv(std::ostream& os, const BoatProfile& profile,
                               int resolution);

}  // namespace hedgemap
