//! Evaluation of HEX-programs: answer set programs whose rule bodies may
//! contain external atoms `&g[inputs](outputs)` backed by plugin oracles.

pub mod builtins;
pub mod external;
pub mod flp;
pub mod ground;
pub mod solver;
pub mod syntax;
