//! The two trajectory calculi, transcribed cell by cell.

use std::sync::OnceLock;

use super::{Calculus, RelationId, RelationSet};

/// Relation ids of the six-relation trajectory calculus.
pub mod tc6 {
    use crate::calculus::RelationId;

    pub const EQ: RelationId = RelationId(0);
    pub const ALT: RelationId = RelationId(1);
    pub const S: RelationId = RelationId(2);
    pub const F: RelationId = RelationId(3);
    pub const I: RelationId = RelationId(4);
    pub const DIS: RelationId = RelationId(5);

    pub const SYMBOLS: [&str; 6] = ["eq", "alt", "s", "f", "i", "dis"];
}

/// Relation ids of the ten-relation trajectory calculus.
pub mod tc10 {
    use crate::calculus::RelationId;

    pub const EQ: RelationId = RelationId(0);
    pub const REV: RelationId = RelationId(1);
    pub const ALT: RelationId = RelationId(2);
    pub const RET: RelationId = RelationId(3);
    pub const S: RelationId = RelationId(4);
    pub const F: RelationId = RelationId(5);
    pub const EX: RelationId = RelationId(6);
    pub const EXI: RelationId = RelationId(7);
    pub const I: RelationId = RelationId(8);
    pub const DIS: RelationId = RelationId(9);

    pub const SYMBOLS: [&str; 10] = ["eq", "rev", "alt", "ret", "s", "f", "ex", "exi", "i", "dis"];
}

// Rows and columns follow SYMBOLS order. "all" is the full alphabet.
const TC6_TABLE: [[&str; 6]; 6] = [
    ["eq", "alt", "s", "f", "i", "dis"],
    ["alt", "eq,alt", "s", "f", "i,dis", "i,dis"],
    ["s", "s", "eq,alt,s", "i,dis", "f,i,dis", "f,i,dis"],
    ["f", "f", "i,dis", "eq,alt,f", "s,i,dis", "s,i,dis"],
    ["i", "i,dis", "f,i,dis", "s,i,dis", "all", "alt,s,f,i,dis"],
    ["dis", "i,dis", "f,i,dis", "s,i,dis", "alt,s,f,i,dis", "all"],
];

const TC10_TABLE: [[&str; 10]; 10] = [
    ["eq", "rev", "alt", "ret", "s", "f", "ex", "exi", "i", "dis"],
    ["rev", "eq", "ret", "alt", "exi", "ex", "f", "s", "i", "dis"],
    ["alt", "ret", "eq,alt", "rev,ret", "s", "f", "ex", "exi", "i,dis", "i,dis"],
    ["ret", "alt", "rev,ret", "eq,alt", "exi", "ex", "f", "s", "i,dis", "i,dis"],
    [
        "s", "ex", "s", "ex", "eq,alt,s", "exi,i,dis", "rev,ret,ex", "f,i,dis", "f,exi,i,dis", "f,exi,i,dis",
    ],
    [
        "f", "exi", "f", "exi", "ex,i,dis", "eq,alt,f", "s,i,dis", "rev,ret,exi", "s,ex,i,dis", "s,ex,i,dis",
    ],
    [
        "ex", "s", "ex", "s", "f,i,dis", "rev,ret,ex", "exi,i,dis", "eq,alt,s", "f,exi,i,dis", "f,exi,i,dis",
    ],
    [
        "exi", "f", "exi", "f", "rev,ret,exi", "s,i,dis", "eq,alt,f", "ex,i,dis", "s,ex,i,dis", "s,ex,i,dis",
    ],
    [
        "i",
        "i",
        "i,dis",
        "i,dis",
        "f,ex,i,dis",
        "s,exi,i,dis",
        "s,exi,i,dis",
        "f,ex,i,dis",
        "all",
        "alt,ret,s,f,ex,exi,i,dis",
    ],
    [
        "dis",
        "dis",
        "i,dis",
        "i,dis",
        "f,ex,i,dis",
        "s,exi,i,dis",
        "s,exi,i,dis",
        "f,ex,i,dis",
        "alt,ret,s,f,ex,exi,i,dis",
        "all",
    ],
];

fn assemble<const N: usize>(name: &str, symbols: [&str; N], table: [[&str; N]; N], converse: [usize; N]) -> Calculus {
    let lookup = |s: &str| RelationId(symbols.iter().position(|x| *x == s).expect("known symbol") as u8);
    let cells = table
        .iter()
        .flat_map(|row| row.iter())
        .map(|cell| {
            if *cell == "all" {
                RelationSet::full(N)
            } else {
                cell.split(',').map(lookup).collect()
            }
        })
        .collect();
    Calculus::new(
        name,
        symbols.iter().map(|s| s.to_string()).collect(),
        RelationId(0),
        converse.iter().map(|&c| RelationId(c as u8)).collect(),
        cells,
    )
    .expect("built-in calculus is well-formed")
}

/// The six-relation calculus; trajectories may start and finish at the same region.
pub fn builtin_tc6() -> Calculus {
    static CELL: OnceLock<Calculus> = OnceLock::new();
    CELL.get_or_init(|| assemble("tc6", tc6::SYMBOLS, TC6_TABLE, [0, 1, 2, 3, 4, 5])).clone()
}

/// The ten-relation calculus; trajectories must finish away from their start.
/// `ex` and `exi` are each other's converse, every other relation is its own.
pub fn builtin_tc10() -> Calculus {
    static CELL: OnceLock<Calculus> = OnceLock::new();
    CELL.get_or_init(|| assemble("tc10", tc10::SYMBOLS, TC10_TABLE, [0, 1, 2, 3, 4, 5, 7, 6, 8, 9])).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcribed_cells() {
        let c6 = builtin_tc6();
        assert_eq!(c6.format_set(c6.compose(tc6::S, tc6::S)), "{eq, alt, s}");
        let c10 = builtin_tc10();
        assert_eq!(c10.format_set(c10.compose(tc10::EX, tc10::EX)), "{exi, i, dis}");
        assert_eq!(c10.format_set(c10.compose(tc10::REV, tc10::EXI)), "{s}");
    }

    #[test]
    fn relation_order_is_fixed() {
        assert_eq!(builtin_tc6().symbols(), tc6::SYMBOLS);
        assert_eq!(builtin_tc10().symbols(), tc10::SYMBOLS);
    }

    #[test]
    fn converse_pairs() {
        let c6 = builtin_tc6();
        assert!(c6.relations().all(|r| c6.converse(r) == r));
        let c10 = builtin_tc10();
        for r in c10.relations() {
            let expected = match r {
                tc10::EX => tc10::EXI,
                tc10::EXI => tc10::EX,
                other => other,
            };
            assert_eq!(c10.converse(r), expected);
        }
    }

    #[test]
    fn cardinality_sums() {
        // 81 and 224 were counted by hand from the printed tables.
        let sum = |c: &Calculus| -> usize {
            c.relations().flat_map(|a| c.relations().map(move |b| (a, b))).map(|(a, b)| c.compose(a, b).len()).sum()
        };
        assert_eq!(sum(&builtin_tc6()), 81);
        assert_eq!(sum(&builtin_tc10()), 224);
    }
}
