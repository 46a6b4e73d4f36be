//! `descent-kit`: files in, verdicts and witnesses out.
//!
//! Subcommands: `validate`, `check`, `witness`, `oracle`, `gen`, `report`.
//! Exit codes: 0 — a verdict was computed (whatever it says); 1 — input
//! error; 2 — a work budget was exhausted before an answer; 3 — a corpus
//! report found checker/oracle disagreements.

pub mod cmd;
pub mod doc;
pub mod gen;
pub mod report;

pub use cmd::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;
