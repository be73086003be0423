//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

namespace adrgen::frag {

// Embedded copy of data/brics_rules.json; a unit test keeps the two in
// sync byte for byte.
inline const char *builtin_brics_rules_json() {
  return R"__ADRGEN__({
  "version": 1,
  "comment": "Retrosynthetic bond-cleavage environments. Each environment is a predicate over one perceived atom; a single acyclic non-aromatic bond is cleavable when its endpoints match a compatible environment pair. The double-bond alkene cleavage (7,7) of the published table is omitted because only single bonds are cleaved here; environment 2 is the legacy sulfonamide-nitrogen entry whose chemistry is also covered by the (5,12) pair.",
  "environments": [
    {
      "env_id": 1,
      "description": "acyl carbon of carboxylic acid derivatives",
      "elements": ["C"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 3, "max_degree": 3, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["O"], "bond": "double", "aromatic": null, "in_ring": null, "carbonyl": false, "min_count": 1, "max_count": null}
      ]
    },
    {
      "env_id": 2,
      "description": "sulfonamide-type nitrogen bonded to sulfur",
      "elements": ["N"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": ["double", "triple"],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["S"], "bond": "single", "aromatic": null, "in_ring": null, "carbonyl": false, "min_count": 1, "max_count": null}
      ]
    },
    {
      "env_id": 3,
      "description": "ether or ester oxygen with two heavy neighbors",
      "elements": ["O"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": 2, "forbid_orders": ["double", "triple"],
      "neighbor_elements_only": null,
      "neighbors": []
    },
    {
      "env_id": 4,
      "description": "carbon without double bonds and at least two heavy neighbors",
      "elements": ["C"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": ["double"],
      "neighbor_elements_only": null,
      "neighbors": []
    },
    {
      "env_id": 5,
      "description": "amine nitrogen bonded only to carbon or sulfur, excluding lactam nitrogen",
      "elements": ["N"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": ["double", "triple"],
      "neighbor_elements_only": ["C", "S"],
      "neighbors": [
        {"elements": ["C"], "bond": "ring", "aromatic": null, "in_ring": true, "carbonyl": true, "min_count": 0, "max_count": 0}
      ]
    },
    {
      "env_id": 6,
      "description": "acyclic acyl carbon",
      "elements": ["C"], "aromatic": false, "in_ring": false, "charge": 0,
      "min_degree": 3, "max_degree": 3, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["O"], "bond": "double", "aromatic": null, "in_ring": null, "carbonyl": false, "min_count": 1, "max_count": null}
      ]
    },
    {
      "env_id": 7,
      "description": "alkene carbon with two or three heavy neighbors (double-bond cleavage, unused for single bonds)",
      "elements": ["C"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": 3, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["C"], "bond": "double", "aromatic": null, "in_ring": null, "carbonyl": false, "min_count": 1, "max_count": null}
      ]
    },
    {
      "env_id": 8,
      "description": "saturated acyclic carbon with only single bonds",
      "elements": ["C"], "aromatic": false, "in_ring": false, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": ["double", "triple", "aromatic"],
      "neighbor_elements_only": null,
      "neighbors": []
    },
    {
      "env_id": 9,
      "description": "aromatic ring nitrogen flanked by aromatic ring atoms",
      "elements": ["N"], "aromatic": true, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["C", "N", "O", "S"], "bond": "aromatic", "aromatic": true, "in_ring": true, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    },
    {
      "env_id": 10,
      "description": "lactam nitrogen: ring nitrogen adjacent to an in-ring carbonyl carbon",
      "elements": ["N"], "aromatic": false, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["C"], "bond": "ring", "aromatic": null, "in_ring": true, "carbonyl": true, "min_count": 1, "max_count": null}
      ]
    },
    {
      "env_id": 11,
      "description": "thioether sulfur with two heavy neighbors",
      "elements": ["S"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 2, "max_degree": 2, "forbid_orders": ["double", "triple"],
      "neighbor_elements_only": null,
      "neighbors": []
    },
    {
      "env_id": 12,
      "description": "sulfonyl sulfur bearing two double-bonded oxygens",
      "elements": ["S"], "aromatic": false, "in_ring": null, "charge": 0,
      "min_degree": 4, "max_degree": 4, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["O"], "bond": "double", "aromatic": null, "in_ring": null, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    },
    {
      "env_id": 13,
      "description": "non-aromatic ring carbon adjacent to an in-ring heteroatom",
      "elements": ["C"], "aromatic": false, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["N", "O", "S"], "bond": "ring", "aromatic": null, "in_ring": true, "carbonyl": false, "min_count": 1, "max_count": null},
        {"elements": ["C", "N", "O", "S"], "bond": "ring", "aromatic": null, "in_ring": true, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    },
    {
      "env_id": 14,
      "description": "aromatic carbon adjacent to an aromatic heteroatom",
      "elements": ["C"], "aromatic": true, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["N", "O", "S"], "bond": "aromatic", "aromatic": true, "in_ring": true, "carbonyl": false, "min_count": 1, "max_count": null},
        {"elements": ["C", "N", "O", "S"], "bond": "aromatic", "aromatic": true, "in_ring": true, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    },
    {
      "env_id": 15,
      "description": "aliphatic ring carbon flanked by two in-ring carbons",
      "elements": ["C"], "aromatic": false, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["C"], "bond": "ring", "aromatic": false, "in_ring": true, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    },
    {
      "env_id": 16,
      "description": "aromatic carbon flanked by two aromatic carbons",
      "elements": ["C"], "aromatic": true, "in_ring": true, "charge": 0,
      "min_degree": 2, "max_degree": null, "forbid_orders": [],
      "neighbor_elements_only": null,
      "neighbors": [
        {"elements": ["C"], "bond": "aromatic", "aromatic": true, "in_ring": true, "carbonyl": false, "min_count": 2, "max_count": null}
      ]
    }
  ],
  "compatible_pairs": [
    [1, 3], [1, 5], [1, 10],
    [2, 12],
    [3, 4], [3, 13], [3, 14], [3, 15], [3, 16],
    [4, 5], [4, 11],
    [5, 12], [5, 13], [5, 14], [5, 15], [5, 16],
    [6, 13], [6, 14], [6, 15], [6, 16],
    [8, 9], [8, 10], [8, 13], [8, 14], [8, 15], [8, 16],
    [9, 13], [9, 14], [9, 15], [9, 16],
    [10, 13], [10, 14], [10, 15], [10, 16],
    [11, 13], [11, 14], [11, 15], [11, 16],
    [12, 13], [12, 14], [12, 15], [12, 16],
    [13, 14], [13, 15], [13, 16],
    [14, 14], [14, 15], [14, 16],
    [15, 16],
    [16, 16]
  ]
}
)__ADRGEN__";
}

} // namespace adrgen::frag
