/** Gateway response fixtures captured from a live instance backed
 * by the demo datasets; tests assert against these wire shapes. */

import type { AskPayload, DatasetSummary } from "../src/api.js";

export const DATASETS: DatasetSummary[] = [
  {
    "dataset_id": "birds-mini",
    "language": "en",
    "name": "Birds (mini)",
    "stats": {
      "entities": 4,
      "predicates": 3,
      "triples": 8
    }
  },
  {
    "dataset_id": "filmdb-mini",
    "language": "en",
    "name": "Films (mini)",
    "stats": {
      "entities": 4,
      "predicates": 3,
      "triples": 8
    }
  }
];

export const EXACT_PAYLOAD: AskPayload = {
  "columns": [
    "what"
  ],
  "rows": [
    [
      {
        "kind": "literal",
        "text": "101"
      }
    ],
    [
      {
        "kind": "literal",
        "text": "136"
      }
    ]
  ],
  "score": -0.21072103131565256,
  "sparql": "SELECT DISTINCT ?what WHERE {\n?film <length> ?what .\n?film <starring> <Keanu_Reeves> .\n?film <type> <film> .\n}",
  "stage": "exact",
  "trace": {
    "candidates": [
      {
        "score": -0.21072103131565256,
        "sparql": "SELECT DISTINCT ?what WHERE {\n?film <length> ?what .\n?film <starring> <Keanu_Reeves> .\n?film <type> <film> .\n}",
        "verified": true
      },
      {
        "score": -0.31608154697347884,
        "sparql": "SELECT DISTINCT ?what WHERE {\n<John_Wick> <length> ?what .\n<John_Wick> <starring> <Keanu_Reeves> .\n}",
        "verified": true
      },
      {
        "score": -0.31608154697347884,
        "sparql": "SELECT DISTINCT ?what WHERE {\n<The_Matrix> <length> ?what .\n<The_Matrix> <starring> <Keanu_Reeves> .\n}",
        "verified": true
      }
    ],
    "dataset_id": "filmdb-mini",
    "graph": {
      "edges": [
        {
          "candidates": [],
          "id": "e0",
          "nodes": [
            "n0",
            "n1"
          ],
          "phrase_tokens": [
            3
          ]
        },
        {
          "candidates": [],
          "id": "e1",
          "nodes": [
            "n1",
            "n2"
          ],
          "phrase_tokens": [
            7
          ]
        }
      ],
      "nodes": [
        {
          "anchor": 0,
          "id": "n0",
          "is_target": true,
          "kind": "Variable",
          "links": [],
          "span": [
            0,
            4
          ],
          "surface": "What"
        },
        {
          "anchor": 6,
          "id": "n1",
          "is_target": false,
          "kind": "Type",
          "links": [
            {
              "iri": "film",
              "score": 1.0
            }
          ],
          "span": [
            26,
            30
          ],
          "surface": "film"
        },
        {
          "anchor": 8,
          "id": "n2",
          "is_target": false,
          "kind": "Entity",
          "links": [
            {
              "iri": "Keanu_Reeves",
              "score": 1.0
            }
          ],
          "span": [
            40,
            52
          ],
          "surface": "Keanu Reeves"
        }
      ],
      "target": "n0"
    },
    "graph_with_candidates": {
      "edges": [
        {
          "candidates": [
            {
              "predicate": "length",
              "score": 0.9
            }
          ],
          "id": "e0",
          "nodes": [
            "n0",
            "n1"
          ],
          "phrase_tokens": [
            3
          ]
        },
        {
          "candidates": [
            {
              "predicate": "starring",
              "score": 0.9
            }
          ],
          "id": "e1",
          "nodes": [
            "n1",
            "n2"
          ],
          "phrase_tokens": [
            7
          ]
        }
      ],
      "nodes": [
        {
          "anchor": 0,
          "id": "n0",
          "is_target": true,
          "kind": "Variable",
          "links": [],
          "span": [
            0,
            4
          ],
          "surface": "What"
        },
        {
          "anchor": 6,
          "id": "n1",
          "is_target": false,
          "kind": "Type",
          "links": [
            {
              "iri": "film",
              "score": 1.0
            }
          ],
          "span": [
            26,
            30
          ],
          "surface": "film"
        },
        {
          "anchor": 8,
          "id": "n2",
          "is_target": false,
          "kind": "Entity",
          "links": [
            {
              "iri": "Keanu_Reeves",
              "score": 1.0
            }
          ],
          "span": [
            40,
            52
          ],
          "surface": "Keanu Reeves"
        }
      ],
      "target": "n0"
    },
    "mentions": [
      {
        "kind": "Variable",
        "links": [],
        "span": [
          0,
          4
        ],
        "surface": "What"
      },
      {
        "kind": "Type",
        "links": [
          {
            "iri": "film",
            "score": 1.0
          }
        ],
        "span": [
          26,
          30
        ],
        "surface": "film"
      },
      {
        "kind": "Entity",
        "links": [
          {
            "iri": "Keanu_Reeves",
            "score": 1.0
          }
        ],
        "span": [
          40,
          52
        ],
        "surface": "Keanu Reeves"
      }
    ],
    "question": "What is the length of the film starring Keanu Reeves",
    "stages": [
      {
        "attempts": [
          {
            "empty": false,
            "rows": [
              [
                {
                  "kind": "literal",
                  "text": "101"
                }
              ],
              [
                {
                  "kind": "literal",
                  "text": "136"
                }
              ]
            ],
            "sparql": "SELECT DISTINCT ?what WHERE {\n?film <length> ?what .\n?film <starring> <Keanu_Reeves> .\n?film <type> <film> .\n}"
          }
        ],
        "stage": "exact"
      }
    ],
    "structure": {
      "text": "What is the length of the film starring Keanu Reeves",
      "tokens": [
        {
          "head": 1,
          "index": 0,
          "span": [
            0,
            4
          ],
          "text": "What"
        },
        {
          "head": -1,
          "index": 1,
          "span": [
            5,
            7
          ],
          "text": "is"
        },
        {
          "head": 0,
          "index": 2,
          "span": [
            8,
            11
          ],
          "text": "the"
        },
        {
          "head": 0,
          "index": 3,
          "span": [
            12,
            18
          ],
          "text": "length"
        },
        {
          "head": 3,
          "index": 4,
          "span": [
            19,
            21
          ],
          "text": "of"
        },
        {
          "head": 3,
          "index": 5,
          "span": [
            22,
            25
          ],
          "text": "the"
        },
        {
          "head": 3,
          "index": 6,
          "span": [
            26,
            30
          ],
          "text": "film"
        },
        {
          "head": 6,
          "index": 7,
          "span": [
            31,
            39
          ],
          "text": "starring"
        },
        {
          "head": 7,
          "index": 8,
          "span": [
            40,
            45
          ],
          "text": "Keanu"
        },
        {
          "head": 8,
          "index": 9,
          "span": [
            46,
            52
          ],
          "text": "Reeves"
        }
      ]
    },
    "timings": {
      "graph_ms": 0.01,
      "match_ms": 0.01,
      "ne_ms": 0.01,
      "parse_ms": 0.01,
      "re_ms": 0.01,
      "stage1_ms": 0.01,
      "total_ms": 0.01
    }
  },
  "verified": true
};

export const LLM_PAYLOAD: AskPayload = {
  "llm_text": "I do not know, but it sounds like a long film.",
  "stage": "llm",
  "trace": {
    "candidates": [
      {
        "score": 0.0,
        "sparql": "SELECT DISTINCT ?what WHERE {\n<Speed> <starring> ?what .\n}",
        "verified": false
      },
      {
        "score": 0.0,
        "sparql": "SELECT DISTINCT ?what WHERE {\n?what <starring> <Speed> .\n}",
        "verified": false
      }
    ],
    "dataset_id": "filmdb-mini",
    "graph": {
      "edges": [
        {
          "candidates": [],
          "id": "e0",
          "nodes": [
            "n0",
            "n1"
          ],
          "phrase_tokens": [
            1,
            2
          ]
        }
      ],
      "nodes": [
        {
          "anchor": 0,
          "id": "n0",
          "is_target": true,
          "kind": "Variable",
          "links": [],
          "span": [
            0,
            4
          ],
          "surface": "What"
        },
        {
          "anchor": 3,
          "id": "n1",
          "is_target": false,
          "kind": "Entity",
          "links": [
            {
              "iri": "Speed",
              "score": 1.0
            }
          ],
          "span": [
            18,
            23
          ],
          "surface": "Speed"
        }
      ],
      "target": "n0"
    },
    "graph_with_candidates": {
      "edges": [
        {
          "candidates": [
            {
              "predicate": "starring",
              "score": 1.0
            }
          ],
          "id": "e0",
          "nodes": [
            "n0",
            "n1"
          ],
          "phrase_tokens": [
            1,
            2
          ]
        }
      ],
      "nodes": [
        {
          "anchor": 0,
          "id": "n0",
          "is_target": true,
          "kind": "Variable",
          "links": [],
          "span": [
            0,
            4
          ],
          "surface": "What"
        },
        {
          "anchor": 3,
          "id": "n1",
          "is_target": false,
          "kind": "Entity",
          "links": [
            {
              "iri": "Speed",
              "score": 1.0
            }
          ],
          "span": [
            18,
            23
          ],
          "surface": "Speed"
        }
      ],
      "target": "n0"
    },
    "llm": {
      "attempted": true,
      "endpoint": "http://127.0.0.1:34069/v1",
      "prompt": "The knowledge base \"filmdb-mini\" could not answer the following question\nwith a verified query.\n\nQuestion: What starring has Speed\nRecognized mentions: What (Variable), Speed (Entity)\nQueries that were attempted and returned nothing:\nSELECT DISTINCT ?what WHERE {\n<Speed> <starring> ?what .\n}\nSELECT DISTINCT ?what WHERE {\n?what <starring> <Speed> .\n}\n\nPlease answer from general knowledge in one short paragraph. State clearly\nthat this answer comes from a language model rather than the knowledge base\nand may be unreliable."
    },
    "mentions": [
      {
        "kind": "Variable",
        "links": [],
        "span": [
          0,
          4
        ],
        "surface": "What"
      },
      {
        "kind": "Entity",
        "links": [
          {
            "iri": "Speed",
            "score": 1.0
          }
        ],
        "span": [
          18,
          23
        ],
        "surface": "Speed"
      }
    ],
    "question": "What starring has Speed",
    "stages": [
      {
        "attempts": [
          {
            "empty": true,
            "rows": [],
            "sparql": "SELECT DISTINCT ?what WHERE {\n<Speed> <starring> ?what .\n}"
          },
          {
            "empty": true,
            "rows": [],
            "sparql": "SELECT DISTINCT ?what WHERE {\n?what <starring> <Speed> .\n}"
          }
        ],
        "stage": "exact"
      },
      {
        "attempts": [
          {
            "empty": true,
            "rows": [],
            "sparql": "SELECT DISTINCT ?what WHERE {\n<Speed> <starring> ?what .\n}"
          },
          {
            "empty": true,
            "rows": [],
            "sparql": "SELECT DISTINCT ?what WHERE {\n?what <starring> <Speed> .\n}"
          }
        ],
        "stage": "approximate"
      },
      {
        "attempts": [],
        "stage": "llm"
      }
    ],
    "structure": {
      "text": "What starring has Speed",
      "tokens": [
        {
          "head": 1,
          "index": 0,
          "span": [
            0,
            4
          ],
          "text": "What"
        },
        {
          "head": -1,
          "index": 1,
          "span": [
            5,
            13
          ],
          "text": "starring"
        },
        {
          "head": 1,
          "index": 2,
          "span": [
            14,
            17
          ],
          "text": "has"
        },
        {
          "head": 2,
          "index": 3,
          "span": [
            18,
            23
          ],
          "text": "Speed"
        }
      ]
    },
    "timings": {
      "graph_ms": 0.01,
      "llm_ms": 0.01,
      "match_ms": 0.01,
      "ne_ms": 0.01,
      "parse_ms": 0.01,
      "re_ms": 0.01,
      "stage1_ms": 0.01,
      "stage2_ms": 0.01,
      "total_ms": 0.01
    }
  },
  "verified": false
};
