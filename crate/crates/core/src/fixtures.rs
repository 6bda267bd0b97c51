//! Bundled example records, embedded at compile time.
//!
//! Every record parses and passes validation; the twisted variants are the
//! exact twists of their plain sources, frozen into JSON so the files also
//! serve as format documentation.

use crate::io::{parse_input, InputDoc};

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "sl2",
        summary: "the iterated-bracket triple system of sl2, identity map",
        text: include_str!("../fixtures/sl2.json"),
    },
    Fixture {
        name: "sl2-signed",
        summary: "sl2 with the sign flip on the nilpotent pair as automorphism",
        text: include_str!("../fixtures/sl2-signed.json"),
    },
    Fixture {
        name: "sl2-hom",
        summary: "the twisted counterpart of sl2-signed",
        text: include_str!("../fixtures/sl2-hom.json"),
    },
    Fixture {
        name: "sl2x2",
        summary: "two commuting copies of sl2",
        text: include_str!("../fixtures/sl2x2.json"),
    },
    Fixture {
        name: "sl2x2-swap",
        summary: "two commuting copies of sl2 with the factor-swapping automorphism",
        text: include_str!("../fixtures/sl2x2-swap.json"),
    },
    Fixture {
        name: "sl2x2-swap-hom",
        summary: "the twisted counterpart of sl2x2-swap",
        text: include_str!("../fixtures/sl2x2-swap-hom.json"),
    },
    Fixture {
        name: "sign2",
        summary: "a sign-graded pair with one odd generator and a nontrivial commutation factor",
        text: include_str!("../fixtures/sign2.json"),
    },
    Fixture {
        name: "sign2-hom",
        summary: "the twisted counterpart of sign2",
        text: include_str!("../fixtures/sign2-hom.json"),
    },
    Fixture {
        name: "sl2-zero",
        summary: "sl2 padded by a line that multiplies everything to zero",
        text: include_str!("../fixtures/sl2-zero.json"),
    },
    Fixture {
        name: "zero2",
        summary: "two dimensions of zero product",
        text: include_str!("../fixtures/zero2.json"),
    },
    Fixture {
        name: "zero2-hom",
        summary: "the zero product carrying the twisted flavor",
        text: include_str!("../fixtures/zero2-hom.json"),
    },
    Fixture {
        name: "sl2i",
        summary: "sl2 scaled into the fourth cyclotomic field; splits only with eigenvalue hints",
        text: include_str!("../fixtures/sl2i.json"),
    },
    Fixture {
        name: "binary-sl2",
        summary: "the binary record of sl2, raw material for reconstruction",
        text: include_str!("../fixtures/binary-sl2.json"),
    },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Parses a bundled record. Panics on unknown names; the bundle is fixed.
pub fn load(name: &str) -> InputDoc {
    let f = fixture(name).unwrap_or_else(|| panic!("no fixture named {name:?}"));
    parse_input(f.text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Names of the bundled ternary records (everything except the binary one).
pub fn ternary_names() -> Vec<&'static str> {
    FIXTURES
        .iter()
        .map(|f| f.name)
        .filter(|n| *n != "binary-sl2")
        .collect()
}
