//! Exact computations for a market in supplemental information.
//!
//! A decision maker privately holds a signal about the state and may buy a
//! further signal from a broker who screens over what she already owns.
//! This crate provides:
//!
//! * [`signal`]: signals as partitions of `Ω × [0,1)`, joins, posteriors.
//! * [`decision`]: decision problems, ex-ante payoffs and value of
//!   information.
//! * [`complement`]: minimal complementary signals and a brute-force
//!   oracle.
//! * [`mechanism`]: type spaces, menus and the (IC)/(IR) audit.
//! * [`scenario`], [`report`], [`builtin`]: the scenario file format,
//!   report rendering and the bundled worked examples.
//!
//! All arithmetic is exact ([`Rational`]).

pub mod builtin;
pub mod complement;
pub mod decision;
pub mod error;
pub mod interval;
pub mod mechanism;
pub mod random;
pub mod rational;
pub mod report;
pub mod scenario;
pub mod signal;

pub use complement::{
    closed_form_triangular_split, complement_binary, complement_bruteforce,
    complement_diagonal_simple, triangular_complement, BruteForceConfig, ComplementMethod,
    ComplementResult,
};
pub use decision::{ActionChoice, Belief, DecisionProblem, ValueReport};
pub use error::Error;
pub use interval::IntervalSet;
pub use mechanism::{
    best_deviation, build_menu_binary, build_menu_diagonal, enumerate_partitions, verify_menu,
    AuditReport, Choice, Deviation, Menu, MenuItem, TypeSpace,
};
pub use rational::{parse_rational, rat, Rational};
pub use scenario::{parse_scenario, ScenarioFile};
pub use signal::{Message, Signal};
