//! Small reference instances used throughout the tests and examples.

use crate::af::Af;
use crate::io::parse_paf;
use crate::paf::Paf;
use crate::treedecomp::{parse_td, NiceTd, ParsedTd};

pub const EXAMPLE2_PAF: &str = include_str!("../../../fixtures/example2.paf");
pub const FIGURE2_PAF: &str = include_str!("../../../fixtures/figure2.paf");
pub const FIGURE3_TD: &str = include_str!("../../../fixtures/figure3.td");

/// Five arguments a–e with attacks ab, ad, ba, bc, cb, cd, dc, da, de, ed.
pub fn example1() -> Af {
    Af::new(
        ["a", "b", "c", "d", "e"],
        [
            ("a", "b"),
            ("a", "d"),
            ("b", "a"),
            ("b", "c"),
            ("c", "b"),
            ("c", "d"),
            ("d", "c"),
            ("d", "a"),
            ("d", "e"),
            ("e", "d"),
        ],
    )
    .expect("valid fixture")
}

/// [`example1`] with P(a)=0.8, P(c)=0.9, P(a,b)=0.7, P(d,e)=0.5, P(e,d)=0.3.
pub fn example2() -> Paf {
    parse_paf(EXAMPLE2_PAF).expect("valid fixture").paf
}

/// Chain-shaped instance whose forced labeling is in={a,d}, out={c}.
pub fn figure2() -> Paf {
    parse_paf(FIGURE2_PAF).expect("valid fixture").paf
}

/// The 16-node nice decomposition of [`example1`] with one join over {a,c,d}.
pub fn figure3_td(paf: &Paf) -> NiceTd {
    match parse_td(FIGURE3_TD, paf.af()).expect("valid fixture") {
        ParsedTd::Nice(td) => td,
        ParsedTd::Plain(_) => unreachable!("fixture carries node types"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example2_is_example1_with_marginals() {
        assert_eq!(example2().af(), &example1());
    }
}
