//! Grounding with bounded value invention and the external-atom guessing
//! translation.
//!
//! Grounding runs in two phases. First the set of potentially derivable atoms
//! is saturated: every rule is instantiated against the atoms found so far,
//! ignoring negation, and every positive external atom with unbound outputs is
//! expanded through its plugin's enumerator with all potentially derivable
//! input atoms set to true.
//! Output values not seen before enter the domain and count against
//! `max_invention`. Second, each rule instance over the saturated set is
//! emitted with external atoms replaced by `e_` atoms, and every distinct
//! ground external atom gets one `(e, ne)` guess pair.

mod instantiate;
mod program;
mod table;

use std::collections::BTreeSet;

use thiserror::Error;

pub use program::{ExternalInstance, GroundProgram, GroundRule, GroundWeak, InstanceInput};
pub use table::{AtomId, AtomKind, AtomTable};

use crate::external::{ExternalAtomError, PluginRegistry};
use crate::syntax::{Program, SyntaxError, Term};
use instantiate::Instantiator;

pub const DEFAULT_MAX_INVENTION: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundConfig {
    /// Maximum number of terms that may enter the domain beyond those written
    /// in the program text.
    pub max_invention: usize,
}

impl Default for GroundConfig {
    fn default() -> Self {
        Self {
            max_invention: DEFAULT_MAX_INVENTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("value invention through `{origin}` exceeded the budget of {limit} new terms")]
    InventionBudget { origin: String, limit: usize },
    #[error("external predicate `&{name}` failed during grounding: {message}")]
    Plugin { name: String, message: String },
}

impl From<ExternalAtomError> for GroundError {
    fn from(e: ExternalAtomError) -> Self {
        GroundError::Syntax(e.into())
    }
}

/// Terms available for instantiation, with the ones introduced by value
/// invention listed next to their source (`&plugin` or a head predicate).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Domain {
    pub constants: BTreeSet<Term>,
    pub invented: Vec<(Term, String)>,
}

pub fn compute_domain(
    program: &Program,
    registry: &PluginRegistry,
    max_invention: usize,
) -> Result<Domain, GroundError> {
    let config = GroundConfig { max_invention };
    let mut inst = Instantiator::new(program, registry, &config)?;
    inst.saturate()?;
    Ok(inst.domain())
}

pub fn ground_program(
    program: &Program,
    registry: &PluginRegistry,
    config: &GroundConfig,
) -> Result<GroundProgram, GroundError> {
    ground_with_domain(program, registry, config).map(|(gp, _)| gp)
}

/// Grounds `program` and also reports the domain it was grounded over.
pub fn ground_with_domain(
    program: &Program,
    registry: &PluginRegistry,
    config: &GroundConfig,
) -> Result<(GroundProgram, Domain), GroundError> {
    let mut inst = Instantiator::new(program, registry, config)?;
    inst.saturate()?;
    inst.emit()
}
