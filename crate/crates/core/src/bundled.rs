//! Data files shipped with the repository, embedded at compile time.

use crate::distance::DistanceTable;
use crate::tm::{parse_tm, TmSpec};

/// `machines/anbncn.tm`: a decider for `{ a^n b^n c^n | n >= 1 }`.
pub const ANBNCN_TM: &str = include_str!("../../../machines/anbncn.tm");

/// `oracles/example_ncd.tsv`: measured distances between the worked-example
/// words, default 1.0.
pub const EXAMPLE_NCD_TSV: &str = include_str!("../../../oracles/example_ncd.tsv");

/// `inputs/example_rs.txt`: the eight input words of the worked example.
pub const EXAMPLE_INPUTS: &str = include_str!("../../../inputs/example_rs.txt");

/// `programs/player.cj`: the scheduled-predictor side player.
pub const PLAYER_CJ: &str = include_str!("../../../programs/player.cj");

pub fn anbncn() -> TmSpec {
    parse_tm(ANBNCN_TM).expect("bundled machine is valid")
}

pub fn example_table() -> DistanceTable {
    DistanceTable::parse(EXAMPLE_NCD_TSV).expect("bundled table is valid")
}

/// The seed word `a^6 b^6 c^6`.
pub fn example_seed() -> Vec<u8> {
    b"aaaaaabbbbbbcccccc".to_vec()
}

/// `r_1 .. r_8`, in order.
pub fn example_inputs() -> Vec<Vec<u8>> {
    parse_word_list(EXAMPLE_INPUTS)
}

/// One word per line, raw bytes; a trailing newline is optional and `\r\n`
/// endings are accepted.
pub fn parse_word_list(text: &str) -> Vec<Vec<u8>> {
    text.lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).as_bytes().to_vec())
        .collect()
}
