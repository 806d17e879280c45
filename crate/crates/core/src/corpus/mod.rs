//! Benchmark cases, coefficient oracles and the hard-sphere equation of state.

mod case;
mod eos;
mod oracle;

pub use case::{load_case, load_corpus, parse_case, BenchmarkCase, Expected, PaperValue, Transform};
pub use eos::{eos_equation_of_state, eos_expansion, ratio_of_x, x_of_ratio, EosRecord, CLOSE_PACKED_AMPLITUDE, RHO0};
pub use oracle::{oracle_expand, OracleSeries, ORACLE_IDS};
