#pragma once

#include <map>
#include <string>
#include <vector>

#include "gelli/model.hpp"

namespace gelli {

// Built-in model library, one fixture per worked example.  Each fixture is
// an ordinary model file; `fixture_names` fixes the listing order.
inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "irrational-rotation", "rp4-cross",      "wedge3",
      "torus-d",             "sphere-d",       "point-like",
      "cantor-like",         "manyhk-standard", "manyhk-orbitbreak",
      "manyhk-ample"};
  return names;
}

namespace fixturedata {

// S^1 with the rotation by theta: H^0 = H^1 = Z with trivial induced
// action, Lebesgue pairing (1, theta).
inline const char* circle_space(const char* name) {
  static thread_local std::string buf;
  buf = std::string(R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": ")") + name + R"(",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "dimension_bound": 1, "spheres_product": true,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 1, "group": {"generators": 1, "relations": []}}
      ],
      "k0": {"group": {"generators": 1, "relations": []}},
      "k1": {"group": {"generators": 1, "relations": []}},
      "unit_h0": [1], "unit_k0": [1],
      "traces": [
        {"name": "lebesgue",
         "h0": [["1", "0"]], "h1": [["0", "1"]],
         "k0": [["1", "0"]], "k1": [["0", "1"]]}
      ]
    }
  ],
  "default": {"kind": "space", "name": ")" + std::string(name) + R"("}
})";
  return buf.c_str();
}

inline const char* rp4_cross = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "rp4-cross",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "dimension_bound": 7,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 2, "group": {"generators": 1, "relations": [["2"]]}},
        {"degree": 3, "group": {"generators": 1, "relations": []}},
        {"degree": 4, "group": {"generators": 1, "relations": [["2"]]}},
        {"degree": 5, "group": {"generators": 1, "relations": [["2"]]}},
        {"degree": 7, "group": {"generators": 1, "relations": [["2"]]}}
      ],
      "k0": {"group": {"generators": 2, "relations": [["0", "4"]]}},
      "k1": {"group": {"generators": 2, "relations": [["0", "4"]]}},
      "unit_h0": [1], "unit_k0": [1, 0],
      "traces": [
        {"name": "tau",
         "h0": [["1", "0"]],
         "k0": [["1", "0"], ["0", "0"]],
         "k1": [["0", "0"], ["0", "0"]]}
      ]
    }
  ],
  "default": {"kind": "space", "name": "rp4-cross"}
})";

inline const char* wedge3 = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "wedge3",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "dimension_bound": 3,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 2, "group": {"generators": 2, "relations": []},
         "alpha": [["0", "-1"], ["1", "-1"]]},
        {"degree": 3, "group": {"generators": 1, "relations": []},
         "alpha": [["-1"]]}
      ],
      "k0": {"group": {"generators": 3, "relations": []},
             "alpha": [["1", "0", "0"], ["0", "0", "-1"], ["0", "1", "-1"]]},
      "k1": {"group": {"generators": 1, "relations": []}, "alpha": [["-1"]]},
      "unit_h0": [1], "unit_k0": [1, 0, 0],
      "traces": [
        {"name": "tau",
         "h0": [["1", "0"]],
         "k0": [["1", "0"], ["0", "0"], ["0", "0"]],
         "k1": [["0", "0"]]}
      ]
    }
  ],
  "default": {"kind": "space", "name": "wedge3"}
})";

inline const char* torus_d = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "torus-d",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "dimension_bound": 2, "spheres_product": true,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 1, "group": {"generators": 2, "relations": []}},
        {"degree": 2, "group": {"generators": 1, "relations": []}}
      ],
      "k0": {"group": {"generators": 2, "relations": []}},
      "k1": {"group": {"generators": 2, "relations": []}},
      "unit_h0": [1], "unit_k0": [1, 0],
      "traces": [
        {"name": "tau",
         "h0": [["1", "0"]], "h1": [["0", "1"], ["0", "0"]],
         "k0": [["1", "0"], ["0", "0"]],
         "k1": [["0", "1"], ["0", "0"]]}
      ]
    }
  ],
  "default": {"kind": "space", "name": "torus-d"}
})";

inline const char* sphere_d = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "sphere-d",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "dimension_bound": 3, "spheres_product": true,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 3, "group": {"generators": 1, "relations": []}}
      ],
      "k0": {"group": {"generators": 1, "relations": []}},
      "k1": {"group": {"generators": 1, "relations": []}},
      "unit_h0": [1], "unit_k0": [1],
      "traces": [
        {"name": "tau",
         "h0": [["1", "0"]],
         "k0": [["1", "0"]],
         "k1": [["0", "0"]]}
      ]
    }
  ],
  "default": {"kind": "space", "name": "sphere-d"}
})";

// Point-like system: H^*(Z) = H^*(pt) with the orbit broken along a
// connected Y realizing K~0(Y) = Z/3, K^1(Y) = Z/2.
inline const char* point_like = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "point-like-system",
      "connected": true, "compact": true,
      "free_action": true, "minimal_action": true,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}}
      ],
      "k0": {"group": {"generators": 1, "relations": []}},
      "k1": {"group": {"generators": 0, "relations": []}},
      "unit_h0": [1], "unit_k0": [1],
      "traces": [
        {"name": "tau", "h0": [["1", "0"]], "k0": [["1", "0"]]}
      ]
    }
  ],
  "y_spaces": [
    {
      "name": "y-z3-z2",
      "connected": true, "dimension_bound": 3,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 2, "group": {"generators": 1, "relations": [["3"]]}},
        {"degree": 3, "group": {"generators": 1, "relations": [["2"]]}}
      ],
      "k0": {"generators": 2, "relations": [["0", "3"]]},
      "k1": {"generators": 1, "relations": [["2"]]},
      "unit_k0": [1, 0]
    }
  ],
  "orbit_breaks": [
    {"name": "point-like", "x": "point-like-system", "y": "y-z3-z2",
     "split_declared": true}
  ],
  "default": {"kind": "orbit_break", "name": "point-like"}
})";

// Cantor-like system: H^0(K~)_Z is the dimension group Z + theta*Z given
// on two generators with pairing (1, theta); Y carries G1 = Z^2 in odd
// degrees and T = 0.
inline const char* cantor_like = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "spaces": [
    {
      "name": "cantor-system",
      "connected": false, "compact": true,
      "free_action": true, "minimal_action": true,
      "cohomology": [
        {"degree": 0,
         "coinvariants": {"generators": 2, "relations": []},
         "invariants": {"generators": 1, "relations": []}}
      ],
      "k0": {"coinvariants": {"generators": 2, "relations": []},
             "invariants": {"generators": 1, "relations": []}},
      "unit_h0": [1, 0], "unit_k0": [1, 0],
      "traces": [
        {"name": "tau",
         "h0": [["1", "0"], ["0", "1"]],
         "k0": [["1", "0"], ["0", "1"]]}
      ]
    }
  ],
  "y_spaces": [
    {
      "name": "y-suspension-like",
      "connected": true, "dimension_bound": 3,
      "cohomology": [
        {"degree": 0, "group": {"generators": 1, "relations": []}},
        {"degree": 1, "group": {"generators": 2, "relations": []}}
      ],
      "k0": {"generators": 1, "relations": []},
      "k1": {"generators": 2, "relations": []},
      "unit_k0": [1]
    }
  ],
  "orbit_breaks": [
    {"name": "cantor-like", "x": "cantor-system", "y": "y-suspension-like",
     "split_declared": true}
  ],
  "default": {"kind": "orbit_break", "name": "cantor-like"}
})";

// The ample model: homology profile declared, Z^2 in degrees 0 and
// 1, with the dimension-group invariant.
inline const char* manyhk_ample = R"({
  "schema": "gelli/1",
  "theta": {"named": "golden"},
  "homologies": [
    {"name": "manyhk-ample",
     "entries": [
       {"degree": 0, "group": {"generators": 2, "relations": []}},
       {"degree": 1, "group": {"generators": 2, "relations": []}}
     ]}
  ],
  "invariants": [
    {"name": "manyhk-ample-k",
     "even": {"generators": 2, "relations": []},
     "odd": {"generators": 2, "relations": []},
     "unit": [1, 0],
     "simplex": {"dimension": 0, "unique_trace": true},
     "traces": [{"name": "tau", "values": [["1", "0"], ["0", "1"]]}]},
    {"name": "manyhk-ample-h",
     "even": {"generators": 2, "relations": []},
     "odd": {"generators": 2, "relations": []},
     "unit": [1, 0],
     "simplex": {"dimension": 0, "unique_trace": true},
     "traces": [{"name": "tau", "values": [["1", "0"], ["0", "1"]]}]}
  ],
  "default": {"kind": "homology", "name": "manyhk-ample"}
})";

}  // namespace fixturedata

inline std::string fixture_json(const std::string& name) {
  using namespace fixturedata;
  if (name == "irrational-rotation") return circle_space("irrational-rotation");
  if (name == "manyhk-standard") return circle_space("manyhk-standard");
  if (name == "rp4-cross") return rp4_cross;
  if (name == "wedge3") return wedge3;
  if (name == "torus-d") return torus_d;
  if (name == "sphere-d") return sphere_d;
  if (name == "point-like") return point_like;
  if (name == "cantor-like") return cantor_like;
  if (name == "manyhk-orbitbreak") {
    // Same groupoid data as the cantor-like construction; only the fixture
    // name differs.
    std::string s = cantor_like;
    const std::string from = "\"cantor-like\"", to = "\"manyhk-orbitbreak\"";
    for (auto pos = s.find(from); pos != std::string::npos;
         pos = s.find(from, pos + to.size()))
      s.replace(pos, from.size(), to);
    return s;
  }
  if (name == "manyhk-ample") return manyhk_ample;
  throw ParseError("unknown fixture '" + name + "'");
}

inline ModelFile load_fixture(const std::string& name) {
  return parse_model_text(fixture_json(name));
}

}  // namespace gelli
