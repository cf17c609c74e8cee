#pragma once

#include "capdesc/toric.hpp"

#include <string>

namespace capdesc {

// U: one fixed point, three noncompact axes, standard weights.
ToricPolytope cap_u();
// F2 x P1. Vertex ids star0, bullet0, starbar0, bulletbar0 and the same with
// suffix inf. Weight triples are (along C or Cbar, along the fiber, along P).
ToricPolytope f2_x_p1();
// Fk x P1. Vertex ids star+0, bullet+0, star-0, bullet-0 (and ...inf).
// Weight triples are (along C+ or C-, along the fiber, along P). H2 basis is
// (C-, L, P) so every edge class is effective; C+ = C- + k L.
ToricPolytope fk_x_p1(int k);
// A2 x P1 near the chain bullethat - star - bullet; the two outer surface
// directions are kept noncompact.
ToricPolytope a2_compactified();
// O(a) + O(b) -> P1: two vertices joined by one compact edge.
ToricPolytope local_curve(int a, int b);

// Parses "cap_U", "F2xP1", "FkxP1(k)", "A2_compactified", "local_curve(a,b)".
// Bare "local_curve" means local_curve(-1,-1).
ToricPolytope build_geometry(const std::string& name);

}  // namespace capdesc
