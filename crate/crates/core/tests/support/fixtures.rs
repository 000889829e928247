//! Worked metric examples shared by the core tests and the acceptance suite.
#![allow(dead_code)]

pub const COLUMN: &str = "0 L 0\n0 1 0\n0 S 0";

/// `(prediction, ground truth, exact match)`.
pub const EXACT_MATCH: [(&str, &str, bool); 2] = [
    (COLUMN, COLUMN, true),
    ("1 L 0\n1 1 0\n0 S 0", COLUMN, false),
];

/// `(prediction, ground truth, difference ratio)`, consistent subset.
pub const DIFF_RATIO: [(&str, &str, f64); 2] =
    [(COLUMN, COLUMN, 1.0), (COLUMN, "0 L 0\n1 1 0\n0 S 0", 0.5)];

/// `(prediction, ground truth, relative difference ratio)`, consistent subset.
pub const REL_RATIO: [(&str, &str, f64); 4] = [
    (COLUMN, COLUMN, 1.0),
    (COLUMN, "0 L 0\n1 1 1\n0 S 0", 1.0 / 3.0),
    ("0 L 0\n0.4 0.5 0.4\n0 S 0", "0 L 0\n0.8 1 0.8\n0 S 0", 0.5),
    (
        "0 L 0\n0.4 2.0 0.4\n0 S 0",
        "0 L 0\n0.8 1 0.8\n0 S 0",
        0.308,
    ),
];

/// `(completion text, valid)`.
pub const VALIDITY: [(&str, bool); 6] = [
    (COLUMN, true),
    ("0 X 0\n0 1 0\n0 S 0", false),
    ("0 L 0\n0 1 0\n0 P 0", false),
    ("0 L 0\n0 -1 0\n0 S 0", false),
    ("0 L 0\n0 2 0\n0 S 0", false),
    ("0 L 0\n0 1\n0 S 0", false),
];

/// `(grid, connected, directionally connected)`; `None` where no value is published.
pub const CONNECTIVITY: [(&str, bool, Option<bool>); 6] = [
    (COLUMN, true, Some(true)),
    ("0 L 0\n1 1 0\n0 S S", true, None),
    ("0 L L\n0 1 0\n0 S 0", true, None),
    ("0 L L\n1 0 0\n0 S 0", true, Some(false)),
    ("0 0 L\n1 0 0\n0 S 0", false, Some(false)),
    (
        "1 1 1 0 1 L\n1 0 1 0 1 0\n1 0 1 1 1 0\n1 0 0 0 0 0\nS 0 0 0 0 0",
        true,
        Some(false),
    ),
];

/// `(grid, isolated cluster count)`.
pub const ISLANDS: [(&str, usize); 4] = [
    (
        "L 0 0 0 0 0\n1 0 0 0 0 0\n1 0 1 0 0 0\n1 0 0 0 0 0\n1 0 0 0 0 0\nS 0 0 0 0 0",
        1,
    ),
    (
        "L 0 0 0 0 0\n1 0 0 0 0 0\n1 0 1 1 0 0\n1 0 0 1 0 0\n1 0 0 0 0 0\nS 0 0 0 0 0",
        1,
    ),
    (
        "L 0 0 0 0 1\n1 0 0 0 0 1\n1 0 1 1 0 1\n1 0 0 1 0 0\n1 0 0 0 0 0\nS 0 0 0 0 0",
        2,
    ),
    (
        "L 0 0 1 0 0\n1 0 0 0 0 0\n1 0 1 1 0 0\n1 0 0 1 0 1\n1 0 0 0 0 0\nS 0 0 0 0 0",
        3,
    ),
];

/// `(prediction, ground truth, fpceff)` under downward gravity, consistent subset.
pub const FPCEFF: [(&str, &str, f64); 3] = [
    (COLUMN, COLUMN, 1.0),
    ("0 L 0\n1 1 0\n0 S 0", COLUMN, 1.0),
    ("0 1 L\n1 0 0\nS 0 0", "0 0 L\n0 1 0\nS 0 0", 0.7724),
];

/// Published values this implementation deliberately does not reproduce.
pub mod divergent {
    /// Difference ratio: published 0.000, computed -1.0.
    pub const DIFF_EX2: (&str, &str, f64) = ("1 L 0\n1 1 0\n0 S 0", super::COLUMN, -1.0);
    /// Relative / penalized ratio: published -1 / -2, computed -2 / -4.
    pub const REL_EX5: (&str, &str, f64, f64) = ("0 1 0\n1 1 1\n0 S 0", super::COLUMN, -2.0, -4.0);
    /// FPCEff: published 0.8037 for both, computed 1.0 after clipping.
    pub const FPCEFF_EX3_EX4: [(&str, &str, f64); 2] = [
        ("0 L 0\n1 1 0\nS 0 0", "0 L 0\n0 1 0\nS 0 0", 1.0),
        ("0 L 0\n1 0 0\nS 0 0", "0 L 0\n0 1 0\nS 0 0", 1.0),
    ];
    /// DWCS `(input, ground truth, published, computed)`.
    pub const DWCS: [(&str, &str, f64, f64); 2] = [
        (
            "0 L 0\n0 1 0\n0 1 V\n0 1 0\n0 S 0",
            "0 L 0\n0 1 0\n0 1 0\n0 1 0\n0 S 0",
            1.0,
            2.0,
        ),
        (
            "0 L L L 0\n0 1 1 1 0\n0 1 V 1 0\n0 1 1 1 0\n0 S S S 0",
            "0 L L L 0\n0 1 1 0 0\n0 1 0 1 0\n0 1 1 0 0\n0 S S S 0",
            3.0,
            2.0,
        ),
    ];
}

/// DWCS `(input, ground truth, score)`, consistent subset.
pub const DWCS: [(&str, &str, f64); 2] = [
    ("0 L 0\n0 V 0\n0 S 0", COLUMN, 2.0),
    ("0 L 0\nV 1 0\n0 S 0", COLUMN, 3.0),
];
